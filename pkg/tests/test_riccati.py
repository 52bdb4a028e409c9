import math
import warnings

import numpy as np
import pytest

from kgdecomp import hulthen
from kgdecomp.errors import LengthMismatch, NonFiniteValue, Overflow
from kgdecomp.grid import RadialGrid
from kgdecomp.potentials import HulthenPair
from kgdecomp.riccati import (
    DegenerateWavefunction, Superpotential, combine, rescale, residual_nonrel, residual_rel,
    wavefunction,
)

OSC_W = Superpotential(lambda r: r - 1 / r, lambda r: 1 + 1 / r**2, "oscillator")


def test_oscillator_superpotential_is_exact():
    # m = 1/2: W^2 - W' = r^2 - 3
    g = RadialGrid.from_spacing(1e-3, 10.0, 1e-3)
    rep = residual_nonrel(OSC_W, lambda r: r * r, 3.0, 0.5, g)
    assert rep.sup_norm < 1e-12
    assert rep.per_node.shape == (g.n_nodes,)


def test_constant_superpotential():
    g = RadialGrid.from_spacing(0.1, 5.0, 0.1)
    W = Superpotential.constant(0.7)
    assert residual_nonrel(W, lambda r: 0 * r, -0.49, 2.0, g).sup_norm < 1e-15


def test_numeric_superpotential_is_second_order():
    errs = []
    for h in (2e-3, 1e-3):
        g = RadialGrid.from_spacing(0.5, 5.0, h)
        W = Superpotential.from_samples(g, g.nodes - 1 / g.nodes)
        errs.append(residual_nonrel(W, lambda r: r * r, 3.0, 0.5, g).sup_norm)
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_residual_reports_location():
    g = RadialGrid.from_spacing(1.0, 3.0, 0.5)
    rep = residual_nonrel(OSC_W, lambda r: r * r + (r == 2.0), 3.0, 0.5, g)
    assert rep.sup_norm == pytest.approx(1.0) and rep.argmax_r == 2.0


def test_nonfinite_residual_raises():
    g = RadialGrid.from_spacing(0.5, 2.0, 0.5)
    with pytest.raises(NonFiniteValue):
        residual_nonrel(OSC_W, lambda r: np.where(r > 1, np.nan, r * r), 3.0, 0.5, g)


def test_hulthen_pair_residuals(fine_grid):
    sol = hulthen.solve_ground(1.0, HulthenPair(1.25, 0.75, 1.0), verify=False)
    nr = residual_nonrel(sol.W, hulthen.nonrel_potential(sol.U0, 1.0), sol.eps, 1.0, fine_grid)
    rel = residual_rel(sol.W, sol.dW, hulthen.rel_potential(1.25, 0.75, 1.0), sol.deps, 1.0,
                       fine_grid)
    assert nr.sup_norm < 1e-12 and rel.sup_norm < 1e-12


def test_wavefunction_matches_closed_form_to_second_order():
    # trapezoid error of the 1/r part of W near r_min becomes a constant log
    # offset further out; normalise at r = 3 and compare on [0.5, 40]
    sol = hulthen.solve_ground(1.0, HulthenPair(1.25, 0.75, 1.0), verify=False)
    errs = []
    for h in (1e-3, 5e-4):
        g = RadialGrid.from_spacing(1e-3, 40.0, h)
        r = g.nodes
        q = wavefunction(sol.W, 1.0, g) / sol.chi.samples(r)
        q /= q[np.searchsorted(r, 3.0)]
        errs.append(np.max(np.abs(q[r >= 0.5] - 1)))
    assert errs[0] < 5e-7
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_wavefunction_positive_and_unit_peak():
    g = RadialGrid.from_spacing(1e-3, 8.0, 1e-3)
    chi = wavefunction(OSC_W, 0.5, g)
    assert np.all(chi > 0) and chi.max() == 1.0
    assert g.nodes[np.argmax(chi)] == pytest.approx(1.0, abs=2e-3)


def test_wavefunction_overflow():
    g = RadialGrid.from_spacing(0.1, 40.0, 0.1)
    with pytest.raises(Overflow):
        wavefunction(Superpotential.constant(-100.0), 0.5, g)


def test_combine_and_rescale():
    chi = np.array([0.0, 2.0, 4.0])
    phi = np.array([1.0, -3.0, 0.5])
    assert np.array_equal(combine(chi, phi), np.array([0.0, -1.0, 1 / 3]))
    out, degenerate = rescale(np.zeros(3))
    assert degenerate and np.all(out == 0)
    with pytest.raises(LengthMismatch):
        combine(chi, phi[:2])
    with pytest.warns(DegenerateWavefunction):
        combine(chi, np.zeros(3))


def test_superpotential_sum():
    s = OSC_W + Superpotential.constant(1.0)
    assert s(2.0) == pytest.approx(2.5)
    assert not s.numeric
    assert (OSC_W + Superpotential(lambda r: r)).numeric
