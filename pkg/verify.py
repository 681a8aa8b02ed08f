"""Oracle-equivalence checks runnable from the command line."""
import logging
from typing import Callable, List, Tuple

import numpy as np  # type: ignore

import linalg
import noise
import optics
import recovery
import weights

logger = logging.getLogger(__name__)

CheckResult = Tuple[bool, str]


def _random_specimen(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(0, 1, (n, n)) * np.exp(2j * np.pi * rng.random((n, n)))


def check_triangular_svd() -> CheckResult:
    worst = 0.0
    for n in (1, 2, 3, 8, 64, 256):
        svd = linalg.triangular_svd(n)
        rebuilt = svd.u_cols @ np.diag(svd.sigmas) @ svd.v_cols.T
        worst = max(worst, np.abs(rebuilt - linalg.ones_lower(n)).max() / n)
    golden = (1 + np.sqrt(5)) / 2
    sigmas = linalg.triangular_svd(2).sigmas
    golden_err = np.abs(sigmas - [golden, 1 / golden]).max()
    ok = worst <= 1e-10 and golden_err <= 1e-12
    return ok, f"reconstruction/n {worst:.2e}, golden ratio {golden_err:.2e}"


def check_noiseless() -> CheckResult:
    rng = np.random.default_rng(0)
    worst = 0.0
    for n in (1, 2, 4, 8, 16, 64):
        m = max(4 * n, 64)
        x = _random_specimen(rng, n)
        for method in ("dual", "block", "pinhole"):
            y = optics.diffract(optics.make_composite(x, method), m)
            x_hat = recovery.recover(y, n, method).x_hat
            worst = max(worst, np.linalg.norm(x_hat - x) / np.linalg.norm(x))
    return worst <= 1e-9, f"worst relative error {worst:.2e}"


def check_fast_naive() -> CheckResult:
    rng = np.random.default_rng(1)
    worst = 0.0
    for n in (2, 4, 6):
        for m in (4 * n - 1, 32):
            x = _random_specimen(rng, n)
            y = optics.diffract(optics.make_composite(x, "dual"), m)
            cfg = noise.PoissonConfig(1e3 * m * m, int(rng.integers(2 ** 32)))
            y_noisy = noise.corrupt(y, cfg)
            fast = recovery.recover_dual_fast(y_noisy, n).x_hat
            naive = recovery.recover_dual_naive(y_noisy, n).x_hat
            worst = max(worst, np.linalg.norm(fast - naive) / np.linalg.norm(naive))
    return worst <= 1e-8, f"worst relative gap {worst:.2e}"


def check_weight_maps() -> CheckResult:
    worst = 0.0
    for n, m in ((1, 4), (2, 8), (3, 16)):
        for kind in weights.WEIGHT_MAP_KINDS:
            closed = weights.weight_map_closed_form(n, m, kind).s
            direct = weights.weight_map_direct(n, m, kind).s
            worst = max(worst, np.abs(closed - direct).max() / direct.max())
    return worst <= 1e-10, f"worst relative gap {worst:.2e}"


CHECKS: List[Tuple[str, Callable[[], CheckResult]]] = [
    ("triangular SVD", check_triangular_svd),
    ("noiseless exactness", check_noiseless),
    ("fast vs naive dual", check_fast_naive),
    ("closed-form vs direct weight maps", check_weight_maps),
]


def run_checks() -> bool:
    all_ok = True
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as e:
            ok, detail = False, repr(e)
        all_ok &= ok
        print(f"  {'PASS' if ok else 'FAIL'}  {name}: {detail}")
        logger.info(f"verify {name}: ok={ok} {detail}")
    return all_ok
