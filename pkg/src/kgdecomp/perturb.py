"""Order-by-order corrections to the relativistic superpotential.

Expanding dW = sum_k lam^k dW_k and deps = sum_k lam^k deps_k turns the
relativistic Riccati equation into the linear hierarchy

    2 W dW_k - dW_k' / sqrt(2m) = source_k - deps_k,
    source_k = dV_k - sum_{i+j=k} dW_i dW_j.

Multiplying by chi^2 makes the left side -(chi^2 dW_k)'/sqrt(2m), so

    deps_k = <source_k>  (chi^2-weighted mean),
    dW_k(r) = sqrt(2m) / chi^2(r) * int_r^inf chi^2 (source_k - deps_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid, simpson

from .errors import NonNormalizableBase, Overflow
from .grid import RadialGrid
from .potentials import PowerSeriesPair
from .riccati import Superpotential, combine, rescale, wavefunction

MAX_ORDER = 3
TAIL_TOL = 1e-14
UNDERFLOW = 1e-300

CONSTANT_SHIFT_NOTE = ("constant term 2(s0 s1 - v0 v1) of S^2 - V^2 is assigned to "
                       "order 1 as a pure energy shift")


def deltaV_terms(p: PowerSeriesPair) -> list[tuple[int, float]]:
    """(power of r, coefficient) pairs whose sum is S^2 - V^2."""
    return [
        (-2, p.s0 * p.s0 - p.v0 * p.v0),
        (0, 2.0 * (p.s0 * p.s1 - p.v0 * p.v1)),
        (1, 2.0 * (p.s0 * p.s2 - p.v0 * p.v2)),
        (2, p.s1 * p.s1 - p.v1 * p.v1),
        (3, 2.0 * (p.s1 * p.s2 - p.v1 * p.v2)),
        (4, p.s2 * p.s2 - p.v2 * p.v2),
    ]


def eval_terms(terms, r):
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    for power, coef in terms:
        if coef:
            out = out + coef * r**power
    return out


def _head_integral(r: np.ndarray, f: np.ndarray, h: float) -> float:
    """Integral of f over [0, r[0]] from the quartic through the first five nodes.

    Meant for grids with r[0] of order h, where this is a short extrapolation.
    """
    npts = min(5, f.size)
    t = np.arange(npts, dtype=float)
    c = np.polynomial.polynomial.polyfit(t, f[:npts], npts - 1)
    anti = np.polynomial.polynomial.polyint(c)
    start = -r[0] / h
    return float(-np.polynomial.polynomial.polyval(start, anti) * h)


def cumulative_quad4(f: np.ndarray, h: float) -> np.ndarray:
    """Running integral from the first node, fourth order.

    Every interval uses the cubic through its four nearest nodes, so unlike
    cumulative Simpson there is no odd/even alternation in the error.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    if n < 4:
        return cumulative_trapezoid(f, dx=h, initial=0.0)
    seg = np.empty(n - 1)
    seg[1:-1] = (-f[:-3] + 13.0 * f[1:-2] + 13.0 * f[2:-1] - f[3:]) / 24.0
    seg[0] = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0
    seg[-1] = (f[-4] - 5.0 * f[-3] + 19.0 * f[-2] + 9.0 * f[-1]) / 24.0
    out = np.empty(n)
    out[0] = 0.0
    np.cumsum(seg * h, out=out[1:])
    return out


def _integral(r: np.ndarray, f: np.ndarray, h: float) -> float:
    return _head_integral(r, f, h) + float(simpson(f, dx=h))


@dataclass
class OrderDiagnostics:
    solvability: float
    residual: float
    trimmed: np.ndarray = field(repr=False)


def order_correction(chi2: np.ndarray, W: Optional[Superpotential], source: np.ndarray,
                     m: float, grid: RadialGrid, diagnostics: Optional[list] = None):
    """Energy and superpotential correction for one order.

    Returns ``(deps_k, dW_k)``. Nodes where chi^2 underflows (< 1e-300) are
    trimmed: dW_k is NaN there. If ``diagnostics`` is a list, an
    :class:`OrderDiagnostics` is appended.
    """
    chi2 = np.asarray(chi2, dtype=float)
    source = np.asarray(source, dtype=float)
    r, h = grid.nodes, grid.h
    if chi2.shape != r.shape or source.shape != r.shape:
        raise ValueError("chi2 and source must be sampled on the grid")
    if np.any(chi2 < 0):
        raise ValueError("chi2 must be non-negative")
    if not np.all(np.isfinite(source)):
        raise ValueError("source must be finite")
    norm = _integral(r, chi2, h)
    if not (np.isfinite(norm) and norm > 0):
        raise NonNormalizableBase(f"integral of chi^2 is {norm!r}")
    tail = chi2[-1] * max(float(np.max(np.abs(source))), 1.0)
    if tail >= TAIL_TOL * norm:
        raise NonNormalizableBase(
            f"chi^2 (r_max) * max|source| = {tail:.3g} exceeds {TAIL_TOL:g} * norm; "
            "extend r_max"
        )
    weighted = chi2 * source
    deps = _integral(r, weighted, h) / norm

    q = chi2 * (source - deps)
    left = _head_integral(r, q, h) + cumulative_quad4(q, h)
    right = cumulative_quad4(q[::-1], h)[::-1]
    peak = int(np.argmax(chi2))
    flux = np.where(np.arange(r.size) < peak, -left, right)
    trimmed = chi2 < UNDERFLOW
    with np.errstate(divide="ignore", invalid="ignore"):
        dW = np.where(trimmed, np.nan, math.sqrt(2.0 * m) * flux / chi2)

    if diagnostics is not None:
        solv = abs(_integral(r, q, h)) / norm
        res = math.nan
        if W is not None:
            res = _order_residual(W, dW, source, deps, m, grid, chi2)
        diagnostics.append(OrderDiagnostics(solv, res, trimmed))
    return deps, dW


def _order_residual(W, dW, source, deps, m, grid, chi2) -> float:
    """sup |2 W dW - dW'/sqrt(2m) - (source - deps)| where chi^2 > 1e-12 max chi^2."""
    w, _ = W.on_grid(grid)
    d = np.full_like(dW, np.nan)
    d[2:-2] = (dW[:-4] - 8.0 * dW[1:-3] + 8.0 * dW[3:-1] - dW[4:]) / (12.0 * grid.h)
    res = 2.0 * w * dW - d / math.sqrt(2.0 * m) - (source - deps)
    keep = chi2 > 1e-12 * np.max(chi2)
    keep &= np.isfinite(res)
    return float(np.max(np.abs(res[keep]))) if np.any(keep) else math.nan


@dataclass(frozen=True)
class PerturbationOrder:
    k: int
    deps: float
    dW: np.ndarray = field(repr=False)
    solvability: float = math.nan
    residual: float = math.nan


@dataclass
class PerturbationSeries:
    chi: np.ndarray = field(repr=False)
    W: Optional[Superpotential]
    grid: RadialGrid
    orders: list
    lam: float = 1.0
    warnings: list = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.orders)

    def deps(self, lam: Optional[float] = None, K: Optional[int] = None) -> float:
        """Partial sum sum_{k <= K} lam^k deps_k."""
        lam = self.lam if lam is None else lam
        K = self.K if K is None else K
        return sum(lam**o.k * o.deps for o in self.orders[:K])

    def dW(self, lam: Optional[float] = None, K: Optional[int] = None) -> np.ndarray:
        lam = self.lam if lam is None else lam
        K = self.K if K is None else K
        total = np.zeros(self.grid.n_nodes)
        for o in self.orders[:K]:
            total = total + lam**o.k * o.dW
        return total


BaseChi = Union[np.ndarray, Callable[[np.ndarray], np.ndarray], None]


def _chi_samples(base_chi: BaseChi, W: Optional[Superpotential], m: float,
                 grid: RadialGrid) -> Optional[np.ndarray]:
    """Base wavefunction rescaled to max 1. A callable is read as log chi."""
    if base_chi is None:
        if W is None:
            raise ValueError("need base_chi or W")
        return wavefunction(W, m, grid)
    if callable(base_chi):
        lg = np.asarray(base_chi(grid.nodes), dtype=float)
        return np.exp(lg - lg.max())
    chi = np.asarray(base_chi, dtype=float)
    if chi.shape != (grid.n_nodes,):
        raise ValueError("base_chi samples must match the grid")
    return rescale(chi)[0]


def run_series(base_chi: BaseChi, W: Optional[Superpotential], p: Optional[PowerSeriesPair],
               K: int, m: float, grid: RadialGrid, lam: float = 1.0,
               split: Optional[Sequence] = None, max_doublings: int = 4) -> PerturbationSeries:
    """Chain :func:`order_correction` for k = 1..K.

    The perturbation is S^2 - V^2 of ``p``, placed entirely at order 1, unless
    ``split`` gives dV_1..dV_K explicitly (callables of r or arrays). When the
    base wavefunction has not decayed at r_max, r_max is doubled (up to
    ``max_doublings`` times); this needs ``base_chi`` callable or None.
    """
    if not 1 <= K <= MAX_ORDER:
        raise ValueError(f"K must be in 1..{MAX_ORDER}")
    warnings = []
    if split is None:
        if p is None:
            raise ValueError("need p or an explicit split")
        terms = deltaV_terms(p)
        parts = [lambda r, t=terms: eval_terms(t, r)] + [None] * (K - 1)
        if terms[1][1] != 0:
            warnings.append(CONSTANT_SHIFT_NOTE)
    else:
        parts = list(split) + [None] * (K - len(split))
        parts = parts[:K]

    for attempt in range(max_doublings + 1):
        chi = _chi_samples(base_chi, W, m, grid)
        try:
            orders = _chain(chi, W, parts, K, m, grid)
            break
        except NonNormalizableBase:
            resamplable = base_chi is None or callable(base_chi)
            if attempt == max_doublings or not resamplable:
                raise
            grid = grid.extended(2.0 * grid.r_max)
            warnings.append(f"r_max doubled to {grid.r_max:g} for tail decay")
    return PerturbationSeries(chi, W, grid, orders, lam, warnings)


def _sample_part(part, grid):
    if part is None:
        return np.zeros(grid.n_nodes)
    if callable(part):
        return np.asarray(part(grid.nodes), dtype=float) * np.ones(grid.n_nodes)
    arr = np.asarray(part, dtype=float)
    if arr.shape != (grid.n_nodes,):
        raise ValueError("split samples must match the grid")
    return arr


def _chain(chi, W, parts, K, m, grid):
    chi2 = chi * chi
    dWs = []
    orders = []
    for k in range(1, K + 1):
        source = _sample_part(parts[k - 1], grid)
        for i in range(1, k):
            source = source - np.nan_to_num(dWs[i - 1] * dWs[k - i - 1])
        diag = []
        deps, dW = order_correction(chi2, W, source, m, grid, diag)
        dWs.append(dW)
        orders.append(PerturbationOrder(k, deps, dW, diag[0].solvability, diag[0].residual))
    return orders


def _fill_trimmed(dW: np.ndarray) -> np.ndarray:
    """Hold the last finite value across trimmed (NaN) nodes."""
    out = np.array(dW, dtype=float)
    bad = ~np.isfinite(out)
    if not bad.any():
        return out
    if bad.all():
        return np.zeros_like(out)
    idx = np.where(~bad, np.arange(out.size), 0)
    np.maximum.accumulate(idx, out=idx)
    first = int(np.argmax(~bad))
    idx[:first] = first
    return out[idx]


def corrected_wavefunction(series: PerturbationSeries, m: float,
                           grid: Optional[RadialGrid] = None,
                           lam: Optional[float] = None) -> tuple[np.ndarray, np.ndarray]:
    """(phi, psi): phi = exp(-sqrt(2m) int sum_k lam^k dW_k), psi = chi phi, both max-abs 1."""
    grid = grid or series.grid
    if grid != series.grid:
        raise ValueError("series was computed on a different grid")
    if series.K == 0:
        phi = np.ones(grid.n_nodes)
        return phi, combine(series.chi, phi)
    dW = _fill_trimmed(series.dW(lam))
    expo = -math.sqrt(2.0 * m) * cumulative_trapezoid(dW, dx=grid.h, initial=0.0)
    top = expo.max()
    if not np.isfinite(top) or top > np.log(np.finfo(float).max):
        raise Overflow("relativistic correction factor is not normalizable on this grid")
    phi = np.exp(expo - top)
    return phi, combine(series.chi, phi)
