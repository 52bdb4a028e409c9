"""Cross-validation suite behind ``kgdecomp verify``.

Each check compares a closed form or perturbative result against an
independent route (algebra, Riccati residuals, finite-difference oracle).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import coulombic, hulthen, perturb
from .errors import KGError, NoBoundState
from .grid import RadialGrid, default_grid
from .oracle import TridiagonalSystem, default_box, eigen_smallest, kleingordon_fd, schrodinger_fd
from .potentials import HulthenPair, PowerSeriesPair


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    seconds: float = 0.0
    detail: str = ""


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def random_hulthen(rng, count, max_tries=None):
    """Admissible (m, pair, solution) draws with m in [0.25, 2], alpha in [0.2, 3],
    s0 in [0, 3], |v0| <= s0; draws without a bound state are skipped."""
    out = []
    tries = 0
    while len(out) < count and (max_tries is None or tries < max_tries):
        tries += 1
        m = rng.uniform(0.25, 2.0)
        pair = HulthenPair(rng.uniform(0.0, 3.0), 0.0, rng.uniform(0.2, 3.0))
        pair = HulthenPair(pair.s0, rng.uniform(-pair.s0, pair.s0), pair.alpha)
        try:
            sol = hulthen.solve_ground(m, pair, verify=False)
        except NoBoundState:
            continue
        out.append((m, pair, sol))
    return out


def check_hulthen_identities(quick=False):
    rng = np.random.default_rng(20061)
    worst = 0.0
    for m, pair, sol in random_hulthen(rng, 200 if quick else 1000):
        a = pair.alpha
        gap = pair.s0**2 - pair.v0**2
        errs = [
            _rel(sol.eps, -sol.chi_decay**2),
            _rel(sol.deps, -sol.phi_decay * (sol.phi_decay + 2 * sol.chi_decay)) if sol.deps else 0.0,
            abs(sol.deps - hulthen.rel_correction_expanded(m, a, sol.U0, sol.delta))
            / max(abs(sol.deps), 1e-300) if sol.deps else 0.0,
            # the sum cancels heavily near threshold, so measure against its terms
            abs(sol.eps + sol.deps - hulthen.total_binding(m, a, sol.U0, sol.delta))
            / max(abs(sol.eps), abs(sol.deps)),
            _rel(sol.delta * (sol.delta + 1) * a * a / (2 * m), gap) if gap else sol.delta,
        ]
        worst = max(worst, *errs)
    return worst, 1e-12


def check_riccati_residuals(quick=False):
    rng = np.random.default_rng(5)
    grid = default_grid() if not quick else RadialGrid.from_spacing(1e-3, 40.0, 2e-3)
    worst = 0.0
    for m, pair, sol in random_hulthen(rng, 20 if quick else 100):
        hulthen.attach_residuals(sol, grid)
        worst = max(worst, sol.residual_nr, sol.residual_rel)
    return worst, 1e-8


def check_exact_reductions(quick=False):
    s1 = hulthen.solve_ground(1.0, HulthenPair(1.25, 0.75, 1.0), verify=False)
    s2 = hulthen.solve_ground(1.0, HulthenPair(0.75, 0.75, 1.0), verify=False)
    err = max(abs(s1.E - 23 / 41), abs(s2.E - (-12 + math.sqrt(416)) / 34), abs(s2.deps))
    return err, 1e-12


def check_kg_oracle(quick=False):
    pair = HulthenPair(1.25, 0.75, 1.0)
    sol = hulthen.solve_ground(0.5, pair, verify=False)
    h = 1e-3
    res = kleingordon_fd(pair, 0.5, RadialGrid.origin_anchored(40.0, h))
    return abs(sol.E - res.eigenvalues[0]), 2e-4


def check_kg_refinement(quick=False):
    """Gap ratio under h -> h/2 in the default box r_max = 40/kappa."""
    pair = HulthenPair(1.25, 0.75, 1.0)
    sol = hulthen.solve_ground(0.5, pair, verify=False)
    box = default_box(0.5, sol.E)
    h = 2e-3 if quick else 1e-3
    gaps = []
    for hh in (h, h / 2):
        res = kleingordon_fd(pair, 0.5, RadialGrid.origin_anchored(box, hh), E0=sol.E)
        gaps.append(abs(sol.E - res.eigenvalues[0]))
    ratio = gaps[0] / gaps[1]
    return abs(ratio - 4.0), 0.4


def check_coulombic(quick=False):
    m = 0.5
    p = PowerSeriesPair(s0=-1.0, s1=math.sqrt(2.0), s2=2.0)
    eps = coulombic.nonrel_energy(0, m, 0.0, p)
    grid = RadialGrid.origin_anchored(14.0, 1e-3)
    fd = schrodinger_fd(coulombic.nonrel_potential(m, 0.0, p), grid).eigenvalues[0]
    W = coulombic.ground_superpotential(m, 0.0, p)
    from .riccati import residual_nonrel
    res = residual_nonrel(W, coulombic.nonrel_potential(m, 0.0, p), eps, m, default_grid(),
                          keep_nodes=False).sup_norm
    osc = PowerSeriesPair(s2=1.0)
    fd_osc = schrodinger_fd(coulombic.nonrel_potential(m, 0.0, osc), grid).eigenvalues[0]
    score = max(abs(fd - eps) / 5e-4, res / 1e-10, abs(fd_osc - 3.0) / 2e-4,
                abs(eps - (-0.25 + 3 * math.sqrt(2))) / 1e-12)
    return score, 1.0


def check_perturbation_exactness(quick=False):
    from .riccati import Superpotential
    grid = RadialGrid.from_spacing(1e-3, 10.0, 1e-3)
    W = Superpotential(lambda r: r - 1 / r, lambda r: 1 + 1 / r**2, "oscillator")
    ser = perturb.run_series(lambda r: np.log(r) - r * r / 2, W, None, 3, 0.5, grid,
                             split=[lambda r: r * r])
    r = grid.nodes
    band = (r >= 0.1) & (r <= 6.0)
    err = max(abs(ser.orders[0].deps - 1.5), abs(ser.orders[1].deps + 0.375),
              abs(ser.orders[2].deps - 0.1875),
              float(np.max(np.abs(ser.orders[0].dW[band] - r[band] / 2))))
    return err, 1e-6


SCALING_PAIR = PowerSeriesPair(s0=-0.5, s1=0.55, s2=0.55, v0=-0.5, v1=0.45, v2=0.45)
SCALING_M, SCALING_E = 0.5, 0.5
SCALING_LAMBDAS = (0.02, 0.04, 0.08, 0.16)


def scaling_slopes(quick=False):
    """log-log slopes of |oracle shift - K-th partial sum| against lambda, K = 1, 2, 3."""
    m, E, p = SCALING_M, SCALING_E, SCALING_PAIR
    grid = RadialGrid.from_spacing(1e-3, 12.0, 1e-3)
    ser = perturb.run_series(coulombic.ground_chi_log(m, E, p),
                             coulombic.ground_superpotential(m, E, p), p, 3, m, grid)
    U = coulombic.nonrel_potential(m, E, p)
    terms = perturb.deltaV_terms(p)
    hs = (2e-3, 1e-3) if quick else (1e-3, 5e-4)

    def level(lam):
        vals = [schrodinger_fd(lambda r: U(r) + lam * perturb.eval_terms(terms, r),
                               RadialGrid.origin_anchored(12.0, h), rtol=1e-16).eigenvalues[0]
                for h in hs]
        return (4 * vals[1] - vals[0]) / 3

    base = level(0.0)
    shifts = np.array([level(lam) - base for lam in SCALING_LAMBDAS])
    slopes = []
    for K in (1, 2, 3):
        errs = np.abs(shifts - np.array([ser.deps(lam, K) for lam in SCALING_LAMBDAS]))
        slopes.append(float(np.polyfit(np.log(SCALING_LAMBDAS), np.log(errs), 1)[0]))
    return slopes


def check_order_scaling(quick=False):
    slopes = scaling_slopes(quick)
    margin = min(s - (K + 0.7) for K, s in zip((1, 2, 3), slopes))
    return -margin, 0.0


def check_degeneracy(quick=False):
    failures = []
    sol = hulthen.solve_ground(1.0, HulthenPair(0.75, 0.75, 1.0), verify=False)
    r = default_grid().nodes
    if sol.deps != 0.0 or sol.delta != 0.0 or np.ptp(sol.phi(r)) != 0.0:
        failures.append("hulthen S=V")
    p = PowerSeriesPair(s0=-0.5, s1=0.7, s2=0.6, v0=-0.5, v1=0.7, v2=0.6)
    grid = RadialGrid.from_spacing(1e-3, 12.0, 1e-3)
    ser = perturb.run_series(lambda rr: np.log(rr) - rr - rr * rr, None, p, 3, 0.5, grid)
    phi, _ = perturb.corrected_wavefunction(ser, 0.5)
    if any(o.deps != 0.0 for o in ser.orders) or np.ptp(phi) != 0.0:
        failures.append("perturb S=V")
    if hulthen.delta(1.0, 1.0, 0.6, -0.6) != 0.0:
        failures.append("delta at s0^2 = v0^2")
    try:
        hulthen.nonrel_ground(0.5, 1.0, 1.0)
        failures.append("U0 = alpha^2/2m accepted")
    except NoBoundState:
        pass
    return float(len(failures)), 0.0


def check_box(quick=False):
    # walls sit one spacing outside the nodes, so the effective length is L + 2h
    L, h = 1.0, 1e-3
    g = RadialGrid.from_spacing(h, L - h, h)
    got = schrodinger_fd(lambda r: np.zeros_like(r), g).eigenvalues[0]
    return _rel(got, (math.pi / (g.r_max - g.r_min + 2 * h)) ** 2), 1e-5


def check_oracle_selftest(quick=False):
    worst = 0.0
    lap = TridiagonalSystem(np.full(1000, 2.0), np.full(999, -1.0))
    # absolute: the eigenvalue is ~1e-5 against a norm of 4, so relative 1e-12 is below float64 conditioning
    worst = max(worst, abs(eigen_smallest(lap, 1)[0] - 4 * math.sin(math.pi / 2002) ** 2) / 1e-12)
    tri = eigen_smallest(TridiagonalSystem([2.0, 2.0, 2.0], [-1.0, -1.0]), 1)[0]
    worst = max(worst, abs(tri - (2 - math.sqrt(2))) / 1e-12)
    osc = schrodinger_fd(lambda r: r * r, RadialGrid.origin_anchored(14.0, 1e-3), 2).eigenvalues
    worst = max(worst, abs(osc[0] - 3) / 2e-4, abs(osc[1] - 7) / 2e-4)
    coul = schrodinger_fd(lambda r: -1 / r, RadialGrid.origin_anchored(120.0, 1e-3)).eigenvalues
    worst = max(worst, abs(coul[0] + 0.25) / 5e-4, check_box()[0] / 1e-5)
    errs = []
    for h in (2e-3, 1e-3):
        g = RadialGrid.origin_anchored(14.0, h)
        errs.append(abs(schrodinger_fd(lambda r: r * r, g).eigenvalues[0] - 3))
    ratio = errs[0] / errs[1]
    if not 3.6 <= ratio <= 4.4:
        worst = max(worst, 2.0)
    return worst, 1.0


CHECKS: list[tuple[str, Callable]] = [
    ("hulthen algebraic identities", check_hulthen_identities),
    ("riccati residuals", check_riccati_residuals),
    ("hulthen exact reductions", check_exact_reductions),
    ("klein-gordon oracle gap", check_kg_oracle),
    ("klein-gordon O(h^2) gap ratio", check_kg_refinement),
    ("coulombic ground state", check_coulombic),
    ("perturbation exactness", check_perturbation_exactness),
    ("order scaling slopes", check_order_scaling),
    ("degeneracy sentinels", check_degeneracy),
    ("oracle self-validation", check_oracle_selftest),
]


def run_all(quick: bool = False) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            value, tol = fn(quick)
            passed = bool(value <= tol)
            detail = ""
        except KGError as exc:
            value, tol, passed, detail = math.nan, math.nan, False, f"{exc.name}: {exc}"
        results.append(CheckResult(name, passed, float(value), float(tol),
                                   time.perf_counter() - t0, detail))
    return results


def format_table(results: list[CheckResult]) -> str:
    """Fixed-width table; timings are left out so reruns print identical bytes."""
    lines = [f"{'check':<34} {'status':<6} {'value':>12} {'tol':>10}"]
    for c in results:
        lines.append(f"{c.name:<34} {'PASS' if c.passed else 'FAIL':<6} "
                     f"{c.value:>12.3e} {c.tolerance:>10.1e}"
                     + (f"  {c.detail}" if c.detail else ""))
    return "\n".join(lines)
