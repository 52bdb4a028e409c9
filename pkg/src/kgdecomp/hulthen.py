"""Closed-form ground state for the Hulthen scalar/vector pair.

With y(r) = 1/(exp(alpha r) - 1) the couplings are S = -s0 y, V = -v0 y.
The non-relativistic factor has superpotential W = -(alpha/sqrt(2m)) y + A
and the relativistic one dW = -delta (alpha/sqrt(2m)) y + B. Because the
strength U0 = 2 (m s0 + E v0) depends on the energy, the full energy is a
root of an implicit equation which :func:`solve_ground` locates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._roots import refine_root, sign_changes
from .errors import NoBoundState, NoConvergence, VectorDominates
from .grid import RadialGrid, default_grid
from .potentials import HulthenPair, hulthen_shape
from .riccati import ResidualReport, Superpotential, residual_nonrel, residual_rel


def chi_decay(m: float, alpha: float, U0: float) -> float:
    """Constant k in W = k - (alpha/sqrt(2m)) y; chi decays as exp(-sqrt(2m) k r)."""
    return math.sqrt(m / 2.0) / alpha * (U0 - alpha**2 / (2.0 * m))


def delta(m: float, alpha: float, s0: float, v0: float) -> float:
    """Exponent of the relativistic factor, the non-negative root of
    delta (delta + 1) alpha^2 / 2m = s0^2 - v0^2."""
    gap = s0 * s0 - v0 * v0
    if gap < 0:
        raise VectorDominates(f"s0^2 - v0^2 = {gap:.6g} < 0; delta would be complex")
    if gap == 0:
        return 0.0
    x = 2.0 * m * gap / alpha**2
    # delta = sqrt(x + 1/4) - 1/2 rewritten to avoid cancellation for small x
    return x / (math.sqrt(x + 0.25) + 0.5)


def _delta_wide(m: float, alpha: float, s0: float, v0: float):
    """delta in extended precision, for superpotentials fed to residual checks."""
    w = np.longdouble
    gap = w(s0) * w(s0) - w(v0) * w(v0)
    if gap <= 0:
        return w(0.0)
    x = 2 * w(m) * gap / (w(alpha) * w(alpha))
    return x / (np.sqrt(x + w(0.25)) + w(0.5))


def phi_decay(m: float, alpha: float, U0: float, delta: float) -> float:
    """Constant of the correction superpotential; never positive, so phi grows at large r."""
    # + 0.0 turns the delta = 0 result into +0.0
    return -math.sqrt(m / 2.0) * delta * U0 / (alpha * (delta + 1.0)) + 0.0


@dataclass(frozen=True)
class ClosedForm:
    """(1 - exp(-alpha r))^power * exp(-rate r), unnormalized."""

    power: float
    rate: float
    alpha: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(self.log(r))

    def log(self, r):
        r = np.asarray(r, dtype=float)
        if self.power == 0.0:
            return -self.rate * r
        return self.power * np.log(-np.expm1(-self.alpha * r)) - self.rate * r

    def samples(self, r) -> np.ndarray:
        """Values rescaled to max-abs 1."""
        lg = self.log(r)
        return np.exp(lg - lg.max())


def nonrel_ground(m: float, alpha: float, U0: float) -> tuple[float, ClosedForm]:
    """Non-relativistic ground state: eps = -k^2 and chi = (1 - e^{-alpha r}) e^{-sqrt(2m) k r},
    k being :func:`chi_decay`."""
    A = chi_decay(m, alpha, U0)
    if not A > 0:
        raise NoBoundState(
            f"chi decay constant {A:.6g} <= 0 (U0 = {U0:.6g} <= alpha^2/2m = {alpha**2 / (2 * m):.6g})"
        )
    return -A * A, ClosedForm(1.0, math.sqrt(2.0 * m) * A, alpha)


def rel_correction(m: float, alpha: float, U0: float, delta: float) -> tuple[float, ClosedForm]:
    """deps = -q (q + 2k) and phi = (1 - e^{-alpha r})^delta e^{-sqrt(2m) q r}, with
    k = :func:`chi_decay` and q = :func:`phi_decay`."""
    A = chi_decay(m, alpha, U0)
    B = phi_decay(m, alpha, U0, delta)
    deps = -B * (B + 2.0 * A)
    return deps, ClosedForm(delta, math.sqrt(2.0 * m) * B, alpha)


def rel_correction_expanded(m: float, alpha: float, U0: float, delta: float) -> float:
    """The same correction written directly in U0 and delta."""
    return (delta * U0 / (2.0 * alpha**2 * (delta + 1.0) ** 2)
            * (m * U0 * (delta + 2.0) - alpha**2 * (delta + 1.0)))


def total_binding(m: float, alpha: float, U0: float, delta: float) -> float:
    """E^2 - m^2 = -(2 m U0/(delta+1) - alpha^2)^2 / (8 m alpha^2)."""
    return -((2.0 * m * U0 / (delta + 1.0) - alpha**2) ** 2) / (8.0 * m * alpha**2)


def strength(m: float, E: float, pair: HulthenPair) -> float:
    """U0 = 2 (m s0 + E v0)."""
    return 2.0 * (m * pair.s0 + E * pair.v0)


def superpotential_W(m: float, alpha: float, A: float, scale: float = 1.0,
                     label: str = "W") -> Superpotential:
    """-scale (alpha/sqrt(2m)) y(r) + A with its analytic derivative."""
    k = np.longdouble(scale) * alpha / np.sqrt(np.longdouble(2.0) * m)

    def value(r):
        return -k * hulthen_shape(alpha, r) + A

    def derivative(r):
        y = hulthen_shape(alpha, r)
        return k * alpha * (y + y * y)

    return Superpotential(value, derivative, label)


def nonrel_potential(U0: float, alpha: float):
    """U(r) = -U0 y(r)."""
    return lambda r: -U0 * hulthen_shape(alpha, r)


def rel_potential(s0: float, v0: float, alpha: float):
    """S^2 - V^2 = (s0^2 - v0^2) y(r)^2."""
    w = np.longdouble
    gap = w(s0) * w(s0) - w(v0) * w(v0)
    return lambda r: gap * hulthen_shape(alpha, r) ** 2


def psi_exponent_candidates(m: float, alpha: float, U0: float, delta: float) -> dict[str, float]:
    """Decay rates of psi under both signs of the alpha/2 term.

    Composing chi and phi gives rate sqrt(2m) (chi_decay + phi_decay) = m U0/(alpha (delta+1)) - alpha/2;
    the '+' candidate is the alternative sign. Which one is correct is decided by
    :func:`resolve_psi_sign` from the combined Riccati residual.
    """
    base = m * U0 / (alpha * (delta + 1.0))
    return {"-": base - alpha / 2.0, "+": base + alpha / 2.0}


def resolve_psi_sign(m: float, pair: HulthenPair, E: float, grid: RadialGrid) -> tuple[str, dict]:
    """Return the sign whose closed-form psi satisfies the combined Riccati equation.

    The full superpotential W_tot = -(delta+1)(alpha/sqrt(2m)) y + rate/sqrt(2m)
    must solve W_tot^2 - W_tot'/sqrt(2m) = U + (S^2 - V^2) - (E^2 - m^2).
    """
    U0 = strength(m, E, pair)
    d = delta(m, pair.alpha, pair.s0, pair.v0)
    U = nonrel_potential(U0, pair.alpha)
    dU = rel_potential(pair.s0, pair.v0, pair.alpha)
    target = total_binding(m, pair.alpha, U0, d)
    norms = {}
    dw = _delta_wide(m, pair.alpha, pair.s0, pair.v0)
    for sign, rate in psi_exponent_candidates(m, pair.alpha, U0, d).items():
        Wt = superpotential_W(m, pair.alpha, rate / math.sqrt(2.0 * m), scale=dw + 1)
        rep = residual_nonrel(Wt, lambda r: U(r) + dU(r), target, m, grid, keep_nodes=False)
        norms[sign] = rep.sup_norm
    best = min(norms, key=norms.get)
    return best, norms


@dataclass
class HulthenSolution:
    m: float
    pair: HulthenPair
    E: float
    U0: float
    chi_decay: float
    phi_decay: float
    delta: float
    eps: float
    deps: float
    residual_nr: Optional[float] = None
    residual_rel: Optional[float] = None
    roots: list = field(default_factory=list)
    bracket: tuple = (math.nan, math.nan)
    f_bracket: tuple = (math.nan, math.nan)
    psi_sign: Optional[str] = None
    psi_sign_residuals: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def binding(self) -> float:
        return self.eps + self.deps

    @property
    def chi(self) -> ClosedForm:
        return ClosedForm(1.0, math.sqrt(2.0 * self.m) * self.chi_decay, self.pair.alpha)

    @property
    def phi(self) -> ClosedForm:
        return ClosedForm(self.delta, math.sqrt(2.0 * self.m) * self.phi_decay, self.pair.alpha)

    @property
    def psi(self) -> ClosedForm:
        rate = math.sqrt(2.0 * self.m) * (self.chi_decay + self.phi_decay)
        return ClosedForm(self.delta + 1.0, rate, self.pair.alpha)

    @property
    def W(self) -> Superpotential:
        return superpotential_W(self.m, self.pair.alpha, self.chi_decay, label="W")

    @property
    def dW(self) -> Superpotential:
        d = _delta_wide(self.m, self.pair.alpha, self.pair.s0, self.pair.v0)
        w = np.longdouble
        B = -np.sqrt(w(self.m) / 2) * d * w(self.U0) / (w(self.pair.alpha) * (d + 1))
        return superpotential_W(self.m, self.pair.alpha, B, scale=d, label="dW")


def energy_equation(m: float, pair: HulthenPair, d: float):
    """f(E) = E^2 - m^2 - total_binding(U0(E)); its roots are candidate energies."""
    def f(E):
        return E * E - m * m - total_binding(m, pair.alpha, strength(m, E, pair), d)
    return f


def _decays(m: float, pair: HulthenPair, d: float, E: float) -> bool:
    U0 = strength(m, E, pair)
    return chi_decay(m, pair.alpha, U0) + phi_decay(m, pair.alpha, U0, d) > 0


def solution_at(m: float, pair: HulthenPair, E: float) -> HulthenSolution:
    """All closed-form quantities at a given energy, without root finding."""
    d = delta(m, pair.alpha, pair.s0, pair.v0)
    U0 = strength(m, E, pair)
    A = chi_decay(m, pair.alpha, U0)
    B = phi_decay(m, pair.alpha, U0, d)
    return HulthenSolution(m, pair, E, U0, A, B, d, -A * A, -B * (B + 2.0 * A) + 0.0)


def solve_ground(m: float, pair: HulthenPair, grid: Optional[RadialGrid] = None,
                 verify: bool = True, panels: int = 64) -> HulthenSolution:
    """Self-consistent ground state energy E in (0, m).

    The interval is scanned in ``panels`` equal pieces for sign changes of the
    energy equation; each bracket is refined by safeguarded secant. Roots where
    the total wavefunction does not decay (chi_decay + phi_decay <= 0) are spurious, coming from
    the square in the closed form, and are dropped. If several admissible roots
    remain the largest E is returned and all are listed in ``roots``.

    With ``verify`` the Riccati residuals are evaluated on ``grid``
    (default: [1e-3, 40], h = 1e-3).
    """
    if not m > 0:
        raise ValueError("m must be positive")
    d = delta(m, pair.alpha, pair.s0, pair.v0)
    f = energy_equation(m, pair, d)
    brackets, f_lo, f_hi = sign_changes(f, 0.0, m, panels)
    roots = []
    for a, b in brackets:
        E = refine_root(f, a, b)
        if 0.0 < E < m and _decays(m, pair, d, E):
            roots.append(E)
    if not roots:
        raise NoBoundState(
            f"no admissible root of the energy equation in (0, {m}) "
            f"(f(0) = {f_lo:.6g}, f(m) = {f_hi:.6g}, {len(brackets)} sign change(s))"
        )
    roots = sorted(set(roots))
    sol = solution_at(m, pair, roots[-1])
    sol.roots = roots
    sol.bracket = (0.0, m)
    sol.f_bracket = (f_lo, f_hi)
    if len(roots) > 1:
        sol.warnings.append(f"{len(roots)} admissible roots in (0, m); returned the largest E")
    if verify:
        attach_residuals(sol, grid or default_grid())
    return sol


def attach_residuals(sol: HulthenSolution, grid: RadialGrid) -> HulthenSolution:
    alpha = sol.pair.alpha
    U = nonrel_potential(sol.U0, alpha)
    dU = rel_potential(sol.pair.s0, sol.pair.v0, alpha)
    sol.residual_nr = residual_nonrel(sol.W, U, sol.eps, sol.m, grid, keep_nodes=False).sup_norm
    sol.residual_rel = residual_rel(sol.W, sol.dW, dU, sol.deps, sol.m, grid,
                                    keep_nodes=False).sup_norm
    sol.psi_sign, sol.psi_sign_residuals = resolve_psi_sign(sol.m, sol.pair, sol.E, grid)
    return sol
