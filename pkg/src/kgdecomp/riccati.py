"""Superpotentials, Riccati residuals and wavefunction reconstruction.

A superpotential W relates to a wavefunction through W = -chi'/(sqrt(2m) chi).
The non-relativistic factor obeys W^2 - W'/sqrt(2m) = U - eps, and the
relativistic factor obeys dW^2 - dW'/sqrt(2m) + 2 W dW = dU - deps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import warnings

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import LengthMismatch, NonFiniteValue, Overflow
from .grid import RadialGrid

__all__ = [
    "Superpotential",
    "ResidualReport",
    "RadialGrid",
    "residual_nonrel",
    "residual_rel",
    "wavefunction",
    "wavefunction_exponent",
    "combine",
    "rescale",
]

_LOG_MAX = np.log(np.finfo(float).max)


@dataclass(frozen=True)
class Superpotential:
    """W(r) with an optional analytic derivative.

    ``value`` and ``derivative`` take an array of radii. When ``derivative``
    is None the superpotential is "numeric" and W' is obtained by central
    differences on whatever grid it is evaluated on.
    """

    value: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = ""

    @property
    def numeric(self) -> bool:
        return self.derivative is None

    def __call__(self, r):
        return np.asarray(self.value(np.asarray(r, dtype=float)), dtype=float)

    def on_grid(self, grid: RadialGrid, dtype=float) -> tuple[np.ndarray, np.ndarray]:
        r = grid.nodes.astype(dtype)
        w = np.asarray(self.value(r), dtype=dtype) * np.ones_like(r)
        if self.derivative is None:
            dw = np.gradient(w, dtype(grid.h), edge_order=2)
        else:
            dw = np.asarray(self.derivative(r), dtype=dtype) * np.ones_like(r)
        return w, dw

    @classmethod
    def constant(cls, kappa: float, label: str = "constant") -> "Superpotential":
        return cls(
            lambda r: np.full_like(np.asarray(r, dtype=float), kappa),
            lambda r: np.zeros_like(np.asarray(r, dtype=float)),
            label,
        )

    @classmethod
    def from_samples(cls, grid: RadialGrid, w: np.ndarray, label: str = "sampled") -> "Superpotential":
        nodes = grid.nodes
        w = np.asarray(w, dtype=float)
        if w.shape != nodes.shape:
            raise LengthMismatch("samples must match the grid")
        return cls(lambda r: np.interp(np.asarray(r, dtype=float), nodes, w), None, label)

    def __add__(self, other: "Superpotential") -> "Superpotential":
        if self.numeric or other.numeric:
            deriv = None
        else:
            deriv = lambda r: self.derivative(r) + other.derivative(r)  # noqa: E731
        return Superpotential(
            lambda r: self.value(r) + other.value(r), deriv, f"{self.label}+{other.label}"
        )


@dataclass(frozen=True)
class ResidualReport:
    sup_norm: float
    argmax_r: float
    per_node: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_residual(cls, r: np.ndarray, res: np.ndarray, keep: bool = True) -> "ResidualReport":
        if not np.all(np.isfinite(res)):
            bad = r[~np.isfinite(res)][0]
            raise NonFiniteValue(f"residual is not finite at r = {bad!r}")
        i = int(np.argmax(np.abs(res)))
        return cls(float(abs(res[i])), float(r[i]), res if keep else None)


# Residuals cancel terms of size 1/(2m r^2) near r_min, so they are formed in
# extended precision and reported in float64.
_WIDE = np.longdouble


def _sample(f, r):
    return np.asarray(f(r), dtype=r.dtype) * np.ones_like(r)


def residual_nonrel(W: Superpotential, U, eps: float, m: float, grid: RadialGrid,
                    keep_nodes: bool = True) -> ResidualReport:
    """Pointwise defect of W^2 - W'/sqrt(2m) = U - eps."""
    r = grid.nodes.astype(_WIDE)
    w, dw = W.on_grid(grid, _WIDE)
    res = w * w - dw / np.sqrt(_WIDE(2.0) * _WIDE(m)) - (_sample(U, r) - _WIDE(eps))
    return ResidualReport.from_residual(grid.nodes, res.astype(float), keep_nodes)


def residual_rel(W: Superpotential, dW: Superpotential, dU, deps: float, m: float,
                 grid: RadialGrid, keep_nodes: bool = True) -> ResidualReport:
    """Pointwise defect of dW^2 - dW'/sqrt(2m) + 2 W dW = dU - deps."""
    r = grid.nodes.astype(_WIDE)
    w, _ = W.on_grid(grid, _WIDE)
    d, dd = dW.on_grid(grid, _WIDE)
    res = (d * d - dd / np.sqrt(_WIDE(2.0) * _WIDE(m)) + 2.0 * w * d
           - (_sample(dU, r) - _WIDE(deps)))
    return ResidualReport.from_residual(grid.nodes, res.astype(float), keep_nodes)


def wavefunction_exponent(W: Superpotential, m: float, grid: RadialGrid) -> np.ndarray:
    """-sqrt(2m) times the cumulative trapezoid integral of W from r_min."""
    w, _ = W.on_grid(grid)
    if not np.all(np.isfinite(w)):
        raise NonFiniteValue(f"superpotential {W.label!r} is not finite on the grid")
    return -np.sqrt(2.0 * m) * cumulative_trapezoid(w, dx=grid.h, initial=0.0)


def wavefunction(W: Superpotential, m: float, grid: RadialGrid) -> np.ndarray:
    """Unnormalized exp(-sqrt(2m) int W), rescaled so that max |samples| = 1."""
    expo = wavefunction_exponent(W, m, grid)
    top = expo.max()
    if top > _LOG_MAX:
        raise Overflow(
            f"exponent reaches {top:.3g}; superpotential {W.label!r} is not normalizable here"
        )
    return np.exp(expo - top)


def rescale(samples: np.ndarray) -> tuple[np.ndarray, bool]:
    """Scale to max-abs 1. Returns (samples, degenerate) where degenerate means all zero."""
    peak = np.max(np.abs(samples)) if samples.size else 0.0
    if peak == 0.0:
        return samples.copy(), True
    return samples / peak, False


class DegenerateWavefunction(UserWarning):
    """The product wavefunction vanishes identically; no rescaling was applied."""


def combine(chi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """psi = chi * phi, rescaled to max-abs 1 (left as zeros if chi*phi vanishes)."""
    chi = np.asarray(chi, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if chi.shape != phi.shape:
        raise LengthMismatch(f"chi has {chi.size} samples, phi has {phi.size}")
    psi, degenerate = rescale(chi * phi)
    if degenerate:
        warnings.warn("chi * phi vanishes on the whole grid", DegenerateWavefunction, stacklevel=2)
    return psi
