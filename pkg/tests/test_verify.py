import verify


def test_all_checks_pass(capsys):
    assert verify.run_checks()
    out = capsys.readouterr().out
    assert out.count("PASS") == len(verify.CHECKS)
