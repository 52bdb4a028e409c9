"""Mixed Coulomb + linear + oscillator couplings in the non-relativistic limit.

For S = s0/r + s1 r + s2 r^2 (and V likewise) the non-relativistic strength
is U = 2 (mS + EV). With the composite strengths

    a = -2 (m s0 + E v0),  b = 2 (m s1 + E v1),  c = 2 (m s2 + E v2)

the ground-state superpotential is W = sqrt(m/2) a - 1/(sqrt(2m) r) + sqrt(c) r,
valid when m s1 + E v1 = -(m s0 + E v0) sqrt(4 m (m s2 + E v2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._roots import refine_root, sign_changes
from .errors import ConstraintViolated, NegativeOscillator, NoBoundState, NoConvergence
from .grid import RadialGrid, default_grid
from .potentials import PowerSeriesPair
from .riccati import Superpotential, residual_nonrel

CONSTRAINT_TOL = 1e-8
ROOT_CONSTRAINT_TOL = 1e-10


def _oscillator(m: float, E: float, p: PowerSeriesPair) -> float:
    k = m * p.s2 + E * p.v2
    if k < 0:
        raise NegativeOscillator(f"m s2 + E v2 = {k:.6g} < 0 at E = {E:.6g}")
    return k


def strengths(m: float, E: float, p: PowerSeriesPair) -> tuple[float, float, float]:
    """(a, b, c) at energy E."""
    return (-2.0 * (m * p.s0 + E * p.v0),
            2.0 * (m * p.s1 + E * p.v1),
            2.0 * (m * p.s2 + E * p.v2))


def constraint_residual(m: float, E: float, p: PowerSeriesPair) -> float:
    """LHS - RHS of m s1 + E v1 = -(m s0 + E v0) sqrt(4 m (m s2 + E v2))."""
    k = _oscillator(m, E, p)
    return (m * p.s1 + E * p.v1) + (m * p.s0 + E * p.v0) * math.sqrt(4.0 * m * k)


def _symmetry(p: PowerSeriesPair) -> Optional[str]:
    if p.vector == p.scalar:
        return "S=V"
    if p.vector == tuple(-x for x in p.scalar):
        return "S=-V"
    return None


def with_derived_linear(m: float, E: float, p: PowerSeriesPair) -> PowerSeriesPair:
    """Replace (s1, v1) so that the closed-form constraint holds exactly at E.

    S = V and S = -V pairs keep their symmetry, a pair without vector part
    keeps v1 = 0; otherwise v1 is held and s1 absorbs the constraint.
    """
    k = _oscillator(m, E, p)
    target = -(m * p.s0 + E * p.v0) * math.sqrt(4.0 * m * k)
    if p.v0 == p.v1 == p.v2 == 0:
        return replace(p, s1=target / m)
    sym = _symmetry(replace(p, s1=0.0, v1=0.0))
    if sym == "S=V":
        s1 = target / (m + E)
        return replace(p, s1=s1, v1=s1)
    if sym == "S=-V" and m != E:
        s1 = target / (m - E)
        return replace(p, s1=s1, v1=-s1)
    return replace(p, s1=(target - E * p.v1) / m)


def _checked(m: float, E: float, p: PowerSeriesPair) -> tuple[float, float, float]:
    a, b, c = strengths(m, E, p)
    if not c > 0:
        raise NegativeOscillator(f"oscillator strength c = {c:.6g} must be positive")
    res = constraint_residual(m, E, p)
    if abs(res) > CONSTRAINT_TOL:
        raise ConstraintViolated(f"constraint residual {res:.3g} at E = {E:.6g}")
    return a, b, c


def ground_superpotential(m: float, E: float, p: PowerSeriesPair) -> Superpotential:
    a, _, c = _checked(m, E, p)
    wide = np.longdouble
    lin = np.sqrt(wide(m) / 2) * a
    q = 1 / np.sqrt(2 * wide(m))
    sc = np.sqrt(wide(c))
    return Superpotential(
        lambda r: lin - q / r + sc * r,
        lambda r: q / (r * r) + sc,
        "W_coulombic",
    )


def ground_chi_log(m: float, E: float, p: PowerSeriesPair):
    """log chi for the ground state: log r - m a r - sqrt(2 m c) r^2 / 2 (unnormalized)."""
    a, _, c = _checked(m, E, p)
    quad = 0.5 * math.sqrt(2.0 * m * c)
    return lambda r: np.log(r) - m * a * r - quad * np.asarray(r) ** 2


def nonrel_potential(m: float, E: float, p: PowerSeriesPair):
    """U(r) = 2 (m S + E V) = -a/r + b r + c r^2."""
    a, b, c = strengths(m, E, p)
    return lambda r: -a / r + b * r + c * r * r


def nonrel_energy(n: int, m: float, E: float, p: PowerSeriesPair) -> float:
    """eps_n = -b^2/(4c) + sqrt(c) (2n + 3)/sqrt(2m)."""
    if n < 0:
        raise ValueError("state index must be >= 0")
    _, b, c = _checked(m, E, p)
    return -b * b / (4.0 * c) + math.sqrt(c) * (2 * n + 3) / math.sqrt(2.0 * m)


def nonrel_energy_expanded(n: int, m: float, E: float, p: PowerSeriesPair) -> float:
    """Same energy written as -2m (m s0 + E v0)^2 + (2n+3) sqrt(s2 + E v2/m)."""
    _oscillator(m, E, p)
    return (-2.0 * m * (m * p.s0 + E * p.v0) ** 2
            + (2 * n + 3) * math.sqrt(p.s2 + E * p.v2 / m))


@dataclass
class OscCoulombSolution:
    n: int
    m: float
    pair: PowerSeriesPair
    E: float
    a: float
    b: float
    c: float
    eps: float
    constraint_residual: float
    residual_nr: Optional[float] = None
    iterations: int = 0
    method: str = ""
    warnings: list = field(default_factory=list)

    @property
    def W(self) -> Superpotential:
        return ground_superpotential(self.m, self.E, self.pair)

    @property
    def U(self):
        return nonrel_potential(self.m, self.E, self.pair)

    def chi_log(self):
        return ground_chi_log(self.m, self.E, self.pair)


def solve_selfconsistent(n: int, m: float, p: PowerSeriesPair, derive_linear: bool = False,
                         grid: Optional[RadialGrid] = None, verify: bool = True,
                         damping: float = 0.5, tol: float = 1e-12,
                         max_iter: int = 200) -> OscCoulombSolution:
    """Energy E > 0 with E^2 - m^2 = eps_n(E).

    ``derive_linear`` recomputes (s1, v1) from the constraint at every iterate;
    otherwise the caller's values are used and the constraint is checked at the
    converged energy only.
    """
    if not m > 0:
        raise ValueError("m must be positive")

    def pair_at(E):
        return with_derived_linear(m, E, p) if derive_linear else p

    def eps_at(E):
        q = pair_at(E)
        _, b, c = strengths(m, E, q)
        if not c > 0:
            raise NegativeOscillator(f"c = {c:.6g} at E = {E:.6g}")
        return -b * b / (4.0 * c) + math.sqrt(c) * (2 * n + 3) / math.sqrt(2.0 * m)

    def g(E):
        try:
            return E * E - m * m - eps_at(E)
        except NegativeOscillator:
            return math.nan

    sym = _symmetry(replace(p, s1=0.0, v1=0.0) if derive_linear else p)
    energy_free = p.v0 == p.v1 == p.v2 == 0
    warnings = []
    E = None
    iterations = 0
    method = ""
    if energy_free:
        e0 = eps_at(m)
        if m * m + e0 <= 0:
            raise NoBoundState(f"m^2 + eps = {m * m + e0:.6g} <= 0")
        E, iterations, method = math.sqrt(m * m + e0), 1, "direct"
    else:
        E, iterations = _damped(g, eps_at, m, damping, tol, max_iter)
        method = "fixed-point"
        if E is None:
            E = _bisect_fallback(g, m, sym)
            method = "bisection"
    if sym == "S=-V" and abs(E - m) <= 1e-8 * m:
        raise NoBoundState("free-particle degenerate case (S = -V): binding vanishes as E -> m")
    if not E > 0:
        raise NoBoundState(f"self-consistent energy {E:.6g} is not positive")

    q = pair_at(E)
    res = constraint_residual(m, E, q)
    if abs(res) > ROOT_CONSTRAINT_TOL:
        raise ConstraintViolated(f"constraint residual {res:.3g} at the converged E = {E:.12g}")
    a, b, c = strengths(m, E, q)
    eps = nonrel_energy(n, m, E, q)
    if n > 0:
        warnings.append("unverified for n > 0: the superpotential is the ground-state one")
    sol = OscCoulombSolution(n, m, q, E, a, b, c, eps, res, iterations=iterations,
                             method=method, warnings=warnings)
    if verify and n == 0:
        sol.residual_nr = residual_nonrel(sol.W, sol.U, eps, m, grid or default_grid(),
                                          keep_nodes=False).sup_norm
    return sol


def _damped(g, eps_at, m, damping, tol, max_iter):
    E = m
    for it in range(1, max_iter + 1):
        try:
            val = m * m + eps_at(E)
        except NegativeOscillator:
            return None, it
        if val <= 0:
            return None, it
        E = E + damping * (math.sqrt(val) - E)
        gv = g(E)
        if math.isnan(gv):
            return None, it
        if abs(gv) < tol:
            return E, it
    return None, max_iter


def _bisect_fallback(g, m, sym):
    hi = 2.0 * m
    for _ in range(12):
        if g(hi) > 0:
            break
        hi *= 2.0
    lo = 1e-12 * m
    brackets, _, _ = sign_changes(g, lo, hi, 256)
    roots = []
    for a, b in brackets:
        if math.isnan(g(a)) or math.isnan(g(b)):
            continue
        roots.append(refine_root(g, a, b, ftol=1e-12))
    if sym == "S=-V":
        genuine = [E for E in roots if abs(E - m) > 1e-8 * m]
        if not genuine:
            raise NoBoundState("free-particle degenerate case (S = -V): binding vanishes as E -> m")
        roots = genuine
    if not roots:
        raise NoConvergence("no self-consistent energy found by fixed point or bisection")
    return max(roots)
