"""Numeric tolerances and parallelism settings in one place."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import pi


class NumericsError(RuntimeError):
    code = "numerics.error"

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Tolerances:
    root_residual: float = 1e-10
    cluster: float = 1e-7
    fiber: float = 1e-8
    trace: float = 1e-9
    tangency_on: float = 1e-6
    tangency_off: float = 1e-2
    max_iterations: int = 800
    theta_samples: int = 256
    min_theta_step: float = 2 * pi / 2**20
    cusp_angle: float = 2.5
    harnack_area: float = 0.05


DEFAULT = Tolerances()


def thread_count() -> int:
    try:
        n = int(os.environ.get("LOGFRONT_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def ordered_map(fn, items) -> list:
    """Map preserving input order; parallel when LOGFRONT_THREADS > 1."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
