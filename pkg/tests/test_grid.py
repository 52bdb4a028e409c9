import pytest

from kgdecomp.grid import RadialGrid, default_grid, grid_scale


def test_from_spacing_keeps_endpoints():
    g = RadialGrid.from_spacing(1e-3, 40.0, 1e-3)
    assert g.n_nodes == 40000
    assert g.nodes[0] == 1e-3 and g.nodes[-1] == 40.0
    assert g.h == pytest.approx(1e-3, rel=1e-12)


def test_origin_anchored_spacing_is_exact():
    g = RadialGrid.origin_anchored(12.0, 5e-4)
    assert g.r_min == 5e-4 and g.h == pytest.approx(5e-4, rel=1e-13)
    assert g.r_max == pytest.approx(12.0)


def test_refined_and_extended():
    g = RadialGrid.from_spacing(0.1, 1.0, 0.1)
    assert g.refined().h == pytest.approx(0.05)
    e = g.extended(2.0)
    assert e.r_max == 2.0 and e.h == pytest.approx(0.1)


@pytest.mark.parametrize("args", [(0.0, 1.0, 10), (1.0, 1.0, 10), (0.1, 1.0, 2)])
def test_invalid_grids(args):
    with pytest.raises(ValueError):
        RadialGrid(*args)


def test_grid_scale_env(monkeypatch):
    monkeypatch.setenv("KGDECOMP_GRID_SCALE", "0.5")
    assert grid_scale() == 0.5
    assert default_grid().h == pytest.approx(2e-3, rel=1e-4)
    monkeypatch.setenv("KGDECOMP_GRID_SCALE", "-1")
    with pytest.raises(ValueError):
        grid_scale()
