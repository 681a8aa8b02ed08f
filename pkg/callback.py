from typing import List, Optional

import numpy as np  # type: ignore
from torch.utils.tensorboard import SummaryWriter


class LoggingCallback:
    """
    Callback for tracing an iterative reconstruction.

    :param writer: Where scalars are written; ``None`` keeps them in memory only.
    :param log_every: Record every ``log_every`` calls of the callback.
    :param tag: Scalar name used in the writer.
    :param verbose:
    """

    def __init__(
        self,
        writer: Optional[SummaryWriter] = None,
        log_every: int = 50,
        tag: str = "hio/residual",
        verbose: int = 0,
    ) -> None:
        self.writer = writer
        self.log_every = log_every
        self.tag = tag
        self.verbose = verbose
        self.restart = 0
        self.n_calls = 0
        self.residuals: List[float] = []
        self.best_residual = np.inf

    def new_restart(self, restart: int) -> None:
        self.restart = restart

    def __call__(self, iteration: int, residual: float) -> None:
        self.n_calls += 1
        if self.log_every <= 0 or iteration % self.log_every:
            return
        self.residuals.append(residual)
        self.best_residual = min(self.best_residual, residual)
        if self.writer is not None:
            self.writer.add_scalar(
                f"{self.tag}/restart-{self.restart}", residual, iteration
            )
        if self.verbose > 0:
            print(f"restart={self.restart} iter={iteration} residual={residual:.4g}")
