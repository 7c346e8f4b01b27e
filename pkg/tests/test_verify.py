import numpy as np
import pytest

from wsupport import catalog as C
from wsupport.convexgeo import convex_hull
from wsupport.errors import BodyNotInRegion, BodyNotInvariant, ConfigError, UnknownScenario
from wsupport.gridops import Grid, sample
from wsupport.rootsys import generate_group, theta_cone
from wsupport.verify import (BumpSpec, ScenarioConfig, counterexample_demo, estimate_support, make_bump,
                             plateau, run_scenario, support_check)


def test_plateau_profile():
    t = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    np.testing.assert_allclose(plateau(t), [1.0, 1.0, 0.5, 0.0, 0.0])
    s = np.linspace(0, 1, 101)
    assert np.all(np.diff(plateau(s)) <= 0)


def _interval(lo, hi):
    return convex_hull(np.array([[lo], [hi]]))


def test_bump_support_and_region():
    spec = BumpSpec(_interval(1.0, 2.0), 0.1)
    f = make_bump(spec)
    np.testing.assert_allclose(f(np.array([[1.5], [0.85], [2.2]])), [1.0, 0.0, 0.0])
    cone = theta_cone(C.rank_one(), ())  # the open chamber x > 0
    with pytest.raises(BodyNotInRegion):
        make_bump(BumpSpec(_interval(0.05, 1.0), 0.1, cone=cone))
    make_bump(BumpSpec(_interval(0.2, 1.0), 0.1, cone=cone))


def test_bump_invariance_check():
    rs = C.rank_one()
    G = generate_group(rs)
    with pytest.raises(BodyNotInvariant):
        make_bump(BumpSpec(_interval(1.0, 2.0), 0.1, mode="symmetric"), G)
    f = make_bump(BumpSpec(_interval(1.0, 2.0), 0.1, mode="hull-only"), G)
    # weights differ, so f itself is not even
    assert f(np.array([[1.5]]))[0] != f(np.array([[-1.5]]))[0]
    g = make_bump(BumpSpec(_interval(-1.0, 1.0), 0.1), G)
    x = np.linspace(-1.2, 1.2, 25)[:, None]
    np.testing.assert_allclose(g(x), g(-x))


def test_estimate_support_threshold():
    g = Grid.centered(1.0, 21)
    F = sample(lambda x: np.where(np.abs(x[..., 0]) < 0.25, 1.0, 0.0), g)
    pts = estimate_support(F)
    assert pts.min() == pytest.approx(-0.2) and pts.max() == pytest.approx(0.2)
    with pytest.raises(ValueError):
        estimate_support(F, 1.5)


def test_support_check_xdx_interval():
    grid = Grid.centered(3.0, 601)
    rep = support_check(C.xdx(), BumpSpec(_interval(1.0, 2.0), 0.1), grid)
    assert rep.verdict and rep.locality_ok
    assert rep.budget == pytest.approx(2 * 0.01 + 0.1 + 2 * 0.01)
    lo, hi = rep.hull_Df.interval()
    assert 0.9 - 0.011 <= lo and hi <= 2.1 + 0.011
    doc = rep.to_json()
    assert doc["verdict"] == "pass" and doc["schema_version"] == 1


def test_refinement_consistency():
    grid = Grid.centered(3.0, 601)
    D = C.get("jacobi1d").build(a=2.0, b=1.0).reg
    spec = BumpSpec(_interval(1.0, 2.0), 0.1)
    a = support_check(D, spec, grid)
    b = support_check(D, spec, grid, richardson=True)
    assert a.verdict and b.verdict
    assert abs(a.hausdorff_distance - b.hausdorff_distance) <= 2 * grid.h


def test_counterexample_demo():
    rep = counterexample_demo()
    assert rep.verdict and rep.hull_differs
    lo, hi = rep.hull_Du
    assert 0.95 <= lo and hi <= 1.05
    assert rep.hull_u[0] <= 0.0 and rep.hull_u[1] >= 1.0


def test_config_parsing():
    cfg = ScenarioConfig.from_overrides({"grid": "101", "eps": "0.2", "h": "auto"})
    assert cfg.grid == 101 and cfg.eps == 0.2 and cfg.h is None
    assert cfg.make_grid(1).shape == (101,)
    assert ScenarioConfig.from_overrides({"h": 0.01}).make_grid(1).shape == (1001,)
    for bad in ({"grid": "x"}, {"fd_order": 3}, {"threshold": 2}, {"eps": -1}, {"colour": 1}):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_overrides(bad)


def test_unknown_scenario():
    with pytest.raises(UnknownScenario):
        run_scenario("nope")


def test_bessel_scenario_and_theta_scenario():
    reports = run_scenario("bessel-1d")
    assert all(r.verdict for r in reports)
    (r,) = run_scenario("theta-halfspace", {"grid": 201})
    assert r.verdict and r.extra["hull_invariant_full_group"] is False
