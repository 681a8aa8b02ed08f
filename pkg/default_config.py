import argparse

VERSION = "0.3.0"

METHODS = ("dual", "block", "pinhole", "hio_a", "hio_b", "hio_c")

cfg = argparse.Namespace(
    image_paths=[
        "phantom:blobs",
        "phantom:cells",
        "phantom:vesicle",
        "phantom:colony",
        "phantom:rings",
    ],
    n=64,
    m=1024,
    # N_p = photons_per_pixel * m ** 2
    photons_per_pixel=1000.0,
    methods=["dual", "block", "pinhole"],
    n_trials=100,
    seed=0,
    output_dir="log",
    noiseless=False,
    # On adds wall-clock columns, which differ between otherwise identical runs
    timing=False,
    weight_maps=False,
    subsample=1,
    oracle_cap=8,
    hio_beta=0.9,
    hio_iters=2000,
    hio_restarts=5,
    hio_er_iters=50,
    hio_trials=5,
    hio_log_every=50,
    # Classic HIO: the reference only enlarges the support and fixes the twin
    hio_enforce_reference=False,
    j=1,
)
