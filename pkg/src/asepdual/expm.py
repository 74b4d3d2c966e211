"""Matrix exponential by scaling and squaring of a truncated Taylor series."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TAYLOR_ORDER = 18
SCALED_NORM = 0.5


@dataclass(frozen=True)
class ExpmInfo:
    order: int
    squarings: int
    scaled_norm: float


def expm_taylor(A: np.ndarray, order: int = TAYLOR_ORDER, theta: float = SCALED_NORM):
    """``exp(A)`` and an :class:`ExpmInfo`.

    ``A`` is divided by ``2**s`` until its 1-norm is at most ``theta``; the
    Taylor polynomial of degree ``order`` is summed by Horner's rule and then
    squared ``s`` times.  For ``theta = 0.5`` and ``order >= 12`` the
    truncation error of the scaled series is below 1e-13 relative.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expm needs a square matrix")
    if order < 12:
        raise ValueError("Taylor order must be at least 12")
    norm = float(np.abs(A).sum(axis=0).max()) if A.size else 0.0
    if not math.isfinite(norm):
        raise ArithmeticError("matrix has non-finite entries")
    s = max(0, math.ceil(math.log2(norm / theta))) if norm > theta else 0
    X = A / 2.0 ** s
    n = A.shape[0]
    E = np.eye(n)
    for k in range(order, 0, -1):
        E = np.eye(n) + (X @ E) / k
    for _ in range(s):
        E = E @ E
    if not np.all(np.isfinite(E)):
        raise ArithmeticError(f"matrix exponential overflowed after {s} squarings")
    return E, ExpmInfo(order, s, norm / 2.0 ** s)
