from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RadialGrid:
    """Uniform mesh on [r_min, r_max] with r_min > 0."""

    r_min: float
    r_max: float
    n_nodes: int

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError("r_min must be > 0 (Coulomb and Hulthen terms are singular at 0)")
        if not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.n_nodes < 3:
            raise ValueError("need at least 3 nodes")

    @classmethod
    def from_spacing(cls, r_min: float, r_max: float, h: float) -> "RadialGrid":
        """Grid with spacing as close to ``h`` as the interval allows (r_max is kept)."""
        n = int(round((r_max - r_min) / h)) + 1
        return cls(r_min, r_max, max(n, 3))

    @classmethod
    def origin_anchored(cls, r_max: float, h: float) -> "RadialGrid":
        """Grid starting at r_min = h, spacing exactly h; r_max is rounded to a node."""
        n = max(int(round(r_max / h)), 3)
        return cls(h, n * h, n)

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_nodes - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_nodes)

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(self.r_min, self.r_max, (self.n_nodes - 1) * factor + 1)

    def extended(self, r_max: float) -> "RadialGrid":
        """Same spacing, longer interval."""
        return RadialGrid.from_spacing(self.r_min, r_max, self.h)


def grid_scale() -> float:
    """Density multiplier from ``KGDECOMP_GRID_SCALE`` (default 1)."""
    raw = os.environ.get("KGDECOMP_GRID_SCALE", "")
    if not raw:
        return 1.0
    scale = float(raw)
    if not (scale > 0 and np.isfinite(scale)):
        raise ValueError(f"KGDECOMP_GRID_SCALE must be a positive number, got {raw!r}")
    return scale


def default_grid(r_min: float = 1e-3, r_max: float = 40.0, h: float = 1e-3) -> RadialGrid:
    """Verification grid, density scaled by ``KGDECOMP_GRID_SCALE``."""
    return RadialGrid.from_spacing(r_min, r_max, h / grid_scale())
