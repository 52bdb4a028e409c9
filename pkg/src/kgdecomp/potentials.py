"""Scalar/vector coupling specifications and the two effective strengths.

All quantities are in natural units (hbar = c = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import NonFiniteValue, NonPositiveRadius, OutOfGridRange


@dataclass(frozen=True)
class PhysParams:
    m: float

    def __post_init__(self):
        if not (self.m > 0 and np.isfinite(self.m)):
            raise ValueError(f"rest mass must be positive and finite, got {self.m}")


@dataclass(frozen=True)
class HulthenPair:
    """S(r) = -s0/(exp(alpha r) - 1), V(r) = -v0/(exp(alpha r) - 1)."""

    s0: float
    v0: float
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class PowerSeriesPair:
    """S(r) = s0/r + s1 r + s2 r^2 and likewise for V."""

    s0: float = 0.0
    s1: float = 0.0
    s2: float = 0.0
    v0: float = 0.0
    v1: float = 0.0
    v2: float = 0.0

    @property
    def scalar(self) -> tuple[float, float, float]:
        return (self.s0, self.s1, self.s2)

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.v0, self.v1, self.v2)


@dataclass(frozen=True)
class Sampled:
    """S and V tabulated on a node array; linear interpolation in between."""

    r: np.ndarray
    s: np.ndarray
    v: np.ndarray = field(default=None)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        s = np.asarray(self.s, dtype=float)
        v = np.zeros_like(s) if self.v is None else np.asarray(self.v, dtype=float)
        if not (r.shape == s.shape == v.shape) or r.ndim != 1:
            raise ValueError("sampled r, S and V must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(v)) and np.all(np.isfinite(r))):
            raise NonFiniteValue("sampled potential contains non-finite values")
        if np.any(np.diff(r) <= 0):
            raise ValueError("sample radii must be strictly increasing")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "v", v)


PotentialSpec = Union[HulthenPair, PowerSeriesPair, Sampled]


def hulthen_shape(alpha: float, r) -> np.ndarray:
    """1/(exp(alpha r) - 1), evaluated through expm1 to stay accurate as r -> 0.

    Keeps the floating dtype of ``r`` (so extended precision passes through).
    """
    r = np.asarray(r)
    if not np.issubdtype(r.dtype, np.floating):
        r = r.astype(float)
    return 1.0 / np.expm1(alpha * r)


def _check_radius(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise NonPositiveRadius("radius must be strictly positive")
    return r


def evaluate(spec: PotentialSpec, r):
    """Return ``(S(r), V(r))``; ``r`` may be a scalar or an array."""
    r = _check_radius(r)
    if isinstance(spec, HulthenPair):
        y = np.where(np.isinf(r), 0.0, hulthen_shape(spec.alpha, r))
        return -spec.s0 * y, -spec.v0 * y
    if isinstance(spec, PowerSeriesPair):
        inv = 1.0 / r
        s = spec.s0 * inv + spec.s1 * r + spec.s2 * r * r
        v = spec.v0 * inv + spec.v1 * r + spec.v2 * r * r
        return s, v
    if isinstance(spec, Sampled):
        if np.any(r < spec.r[0]) or np.any(r > spec.r[-1]):
            raise OutOfGridRange(
                f"radius outside sampled range [{spec.r[0]}, {spec.r[-1]}]"
            )
        return np.interp(r, spec.r, spec.s), np.interp(r, spec.r, spec.v)
    raise TypeError(f"unsupported potential spec {type(spec).__name__}")


def nonrel_strength(spec: PotentialSpec, params: PhysParams, E: float, r):
    """U(r) = 2 (m S(r) + E V(r)), the potential felt by the non-relativistic factor."""
    s, v = evaluate(spec, r)
    return 2.0 * (params.m * s + E * v)


def rel_strength(spec: PotentialSpec, r):
    """S(r)^2 - V(r)^2, the source of the relativistic correction."""
    s, v = evaluate(spec, r)
    return s * s - v * v
