"""Symmetric tridiagonal eigenvalues by Sturm-sequence bisection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import NonFiniteValue
from ._backend import BACKEND

if BACKEND == "numba":
    from . import _kernels_numba as _k
else:
    from . import _kernels_numpy as _k

RTOL = 1e-12
_MAX_ITER = 2000


@dataclass(frozen=True)
class TridiagonalSystem:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diagonal, dtype=float)
        e = np.ascontiguousarray(self.off_diagonal, dtype=float)
        if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
            raise ValueError("off-diagonal must have exactly n - 1 entries")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise NonFiniteValue("tridiagonal entries must be finite")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def n(self) -> int:
        return self.diagonal.size

    def gershgorin(self) -> tuple[float, float]:
        a = np.abs(self.off_diagonal)
        radius = np.zeros(self.n)
        radius[:-1] += a
        radius[1:] += a
        return float(np.min(self.diagonal - radius)), float(np.max(self.diagonal + radius))

    def dense(self) -> np.ndarray:
        return (np.diag(self.diagonal) + np.diag(self.off_diagonal, 1)
                + np.diag(self.off_diagonal, -1))


def _prepared(sys: TridiagonalSystem):
    off2 = sys.off_diagonal**2
    scale = max(1.0, float(np.max(off2)) if off2.size else 1.0)
    pivmin = np.finfo(float).tiny * scale
    return sys.diagonal, off2, pivmin


def count_below(sys: TridiagonalSystem, x: float) -> int:
    """Number of eigenvalues strictly less than ``x``."""
    d, off2, pivmin = _prepared(sys)
    return int(_k.sturm_count(d, off2, float(x), pivmin))


def eigen_smallest(sys: TridiagonalSystem, k: int, rtol: float = RTOL,
                   guess: Optional[Sequence[float]] = None) -> np.ndarray:
    """The ``k`` smallest eigenvalues in ascending order.

    ``guess`` (optional, one value per eigenvalue) seeds a narrow starting
    bracket that is widened until the Sturm counts confirm it; it only
    affects speed.
    """
    if not 0 <= k <= sys.n:
        raise ValueError(f"k must lie in [0, {sys.n}]")
    d, off2, pivmin = _prepared(sys)
    glo, ghi = sys.gershgorin()
    span = max(ghi - glo, 1.0)
    glo -= 1e-12 * span + pivmin
    ghi += 1e-12 * span + pivmin
    atol = 4.0 * np.finfo(float).tiny
    out = np.empty(k)
    for j in range(k):
        lo, hi = glo, ghi
        if j > 0:
            lo = max(lo, out[j - 1] - 1e-12 * abs(out[j - 1]) - atol)
        if guess is not None and j < len(guess) and np.isfinite(guess[j]):
            lo, hi = _seed_bracket(d, off2, pivmin, j, float(guess[j]), lo, hi)
        val, _ = _k.bisect_eigenvalue(d, off2, j, lo, hi, rtol, atol, pivmin, _MAX_ITER)
        out[j] = val
    return out


def _seed_bracket(d, off2, pivmin, j, g, lo, hi):
    w = 1e-6 * max(abs(g), 1e-3)
    a, b = g - w, g + w
    while a > lo and _k.sturm_count(d, off2, a, pivmin) > j:
        w *= 4.0
        a = g - w
    while b < hi and _k.sturm_count(d, off2, b, pivmin) <= j:
        w *= 4.0
        b = g + w
    return max(a, lo), min(b, hi)
