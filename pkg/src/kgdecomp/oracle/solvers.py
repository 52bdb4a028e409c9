"""Finite-difference eigenvalue oracles.

The radial operator -d^2/dr^2 + U is discretised with second-order central
differences at every node of the grid. Dirichlet walls sit one spacing
outside the node range, at r_min - h and r_max + h, so a grid that starts at
r_min = h places the inner wall exactly at the origin (psi(0) = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ComplexEnergy, NoConvergence, NonFinitePotential
from ..grid import RadialGrid
from ..potentials import PotentialSpec, evaluate
from .tridiagonal import TridiagonalSystem, eigen_smallest


@dataclass
class OracleResult:
    eigenvalues: np.ndarray
    iterations: int
    grid_used: RadialGrid
    converged: bool
    binding: Optional[np.ndarray] = None
    history: list = field(default_factory=list, repr=False)


def fd_system(potential_values: np.ndarray, h: float) -> TridiagonalSystem:
    """Matrix of -psi'' + U psi on the nodes, walls one step outside."""
    u = np.asarray(potential_values, dtype=float)
    if not np.all(np.isfinite(u)):
        raise NonFinitePotential("potential is not finite on the grid")
    inv_h2 = 1.0 / (h * h)
    return TridiagonalSystem(2.0 * inv_h2 + u, np.full(u.size - 1, -inv_h2))


def schrodinger_fd(U: Callable, grid: RadialGrid, k: int = 1, rtol: float = 1e-12) -> OracleResult:
    """Lowest ``k`` eigenvalues of -chi'' + U chi = eps chi."""
    r = grid.nodes
    u = np.asarray(U(r), dtype=float) * np.ones_like(r)
    vals = eigen_smallest(fd_system(u, grid.h), k, rtol=rtol)
    return OracleResult(vals, 1, grid, True)


def kleingordon_fd(spec: PotentialSpec, m: float, grid: RadialGrid, k: int = 1,
                   damping: float = 0.5, tol: float = 1e-10, max_iter: int = 500,
                   E0: Optional[float] = None) -> OracleResult:
    """Bound-state energies of -psi'' + (m + S)^2 psi = (E - V)^2 psi.

    Rewritten as -psi'' + [2mS + S^2 - V^2 + 2EV] psi = (E^2 - m^2) psi and
    solved per state by the damped iteration E <- E + damping (sqrt(m^2 + lam(E)) - E),
    lam(E) being the linear eigenvalue with the 2EV term frozen.
    """
    r = grid.nodes
    s, v = evaluate(spec, r)
    s = np.asarray(s, dtype=float) * np.ones_like(r)
    v = np.asarray(v, dtype=float) * np.ones_like(r)
    with np.errstate(over="ignore", invalid="ignore"):
        static = 2.0 * m * s + s * s - v * v
    if not (np.all(np.isfinite(static)) and np.all(np.isfinite(v))):
        raise NonFinitePotential("potential is not finite on the grid")
    linear = not np.any(v)

    energies = np.empty(k)
    total_iter = 0
    history = []
    for j in range(k):
        E = m * (1.0 - 1e-3) if E0 is None else float(E0)
        lam_prev = None
        converged = False
        for it in range(1, max_iter + 1):
            guess = None if lam_prev is None else [np.nan] * j + [lam_prev]
            lam = eigen_smallest(fd_system(static + 2.0 * E * v, grid.h), j + 1, guess=guess)[j]
            lam_prev = lam
            if m * m + lam < 0:
                raise ComplexEnergy(
                    f"state {j}: m^2 + lambda = {m * m + lam:.6g} < 0 at E = {E:.6g}"
                )
            target = math.sqrt(m * m + lam)
            history.append((j, E, lam))
            if linear:
                E, converged = target, True
                total_iter += it
                break
            step = damping * (target - E)
            E += step
            if abs(step) < tol:
                converged = True
                total_iter += it
                break
        if not converged:
            raise NoConvergence(f"state {j}: fixed point not reached in {max_iter} iterations")
        energies[j] = E
    order = np.argsort(energies)
    energies = energies[order]
    return OracleResult(energies, total_iter, grid, True, energies**2 - m * m, history)


def default_box(m: float, E_est: Optional[float] = None) -> float:
    """r_max = 40/kappa with kappa = sqrt(m^2 - E^2), or 40 without an estimate."""
    if E_est is None or not (0 <= abs(E_est) < m):
        return 40.0
    return 40.0 / math.sqrt(m * m - E_est * E_est)
