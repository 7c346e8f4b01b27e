"""Property-based checks of the structural invariants."""
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wsupport import expr as E
from wsupport.convexgeo import convex_hull, distance, eps_neighborhood, hausdorff, minkowski_sum, support_function
from wsupport.diffop import DiffOp
from wsupport.rootsys import build_root_system, fold_into_chamber, generate_group, reflect
from wsupport.verify import plateau

SYSTEMS = {name: build_root_system(*name) for name in [("A", 2), ("B", 2), ("B", 3), ("BC", 2), ("D", 3),
                                                        ("I2", 5), ("I2", 8), ("C", 3)]}
GROUPS = {name: generate_group(rs) for name, rs in SYSTEMS.items()}

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
system_names = st.sampled_from(sorted(SYSTEMS))


def _vec(n):
    return arrays(np.float64, n, elements=finite)


@given(system_names, st.data())
def test_reflection_is_isometric_involution_preserving_roots(name, data):
    rs = SYSTEMS[name]
    i = data.draw(st.integers(0, len(rs.roots) - 1))
    x = data.draw(_vec(rs.ambient_dim))
    y = reflect(rs, i, x)
    np.testing.assert_allclose(reflect(rs, i, y), x, atol=1e-9)
    assert np.linalg.norm(y) == pytest.approx(np.linalg.norm(x), abs=1e-9)
    assert y @ rs.roots[i] == pytest.approx(-(x @ rs.roots[i]), abs=1e-9)
    imgs = reflect(rs, i, rs.roots)
    assert all(rs.index_of(r) is not None for r in imgs)


@given(system_names)
@settings(max_examples=20)
def test_group_permutes_roots(name):
    rs, G = SYSTEMS[name], GROUPS[name]
    for m in G.matrices[:: max(1, G.order // 12)]:
        assert all(rs.index_of(m @ r) is not None for r in rs.roots)
        np.testing.assert_allclose(m @ m.T, np.eye(rs.ambient_dim), atol=1e-9)


@given(system_names, st.data())
def test_fold_lands_in_chamber_and_orbit(name, data):
    rs, G = SYSTEMS[name], GROUPS[name]
    x = data.draw(_vec(rs.ambient_dim))
    y = fold_into_chamber(rs, x)
    assert np.all(rs.simple_vectors @ y >= -1e-9)
    assert np.min(np.linalg.norm(x @ G.matrices.transpose(0, 2, 1) - y, axis=-1)) < 1e-8


points2 = arrays(np.float64, st.tuples(st.integers(1, 25), st.just(2)), elements=finite)


@given(points2, arrays(np.float64, 2, elements=finite))
def test_hull_support_is_max_over_points(pts, lam):
    body = convex_hull(pts)
    # nearly collinear sets are reduced to a line at 1e-10 of the coordinate scale
    tol = 1e-9 * (1 + np.linalg.norm(lam) * np.abs(pts).max())
    assert support_function(body, lam) == pytest.approx(float(np.max(pts @ lam)), abs=tol)
    assert all(distance(body, p) <= 1e-7 for p in pts)


@given(points2, points2, arrays(np.float64, 2, elements=finite))
def test_minkowski_support_additive(a, b, lam):
    A, B = convex_hull(a), convex_hull(b)
    s = support_function(minkowski_sum(A, B), lam)
    assert s == pytest.approx(support_function(A, lam) + support_function(B, lam), abs=1e-8)


@given(points2, points2, st.floats(0.01, 1.0))
@settings(max_examples=40)
def test_hausdorff_is_a_metric_on_samples(a, b, eps):
    A, B = convex_hull(a), convex_hull(b)
    assert hausdorff(A, B) == pytest.approx(hausdorff(B, A))
    assert hausdorff(A, B) >= 0
    assert hausdorff(A, eps_neighborhood(A, eps)) == pytest.approx(eps)


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.floats(-2, 2)), min_size=1, max_size=5),
       arrays(np.float64, 2, elements=st.floats(-1, 1)), arrays(np.float64, 2, elements=st.floats(-1, 1)))
@settings(max_examples=40, deadline=None)
def test_transpose_properties(spec, x, lam):
    # polynomial coefficients keep everything regular
    terms = {}
    for i, j, c in spec:
        terms[(i, j)] = terms.get((i, j), E.const(0.0)) + c * (1 + E.coord(0, 2) * E.coord(1, 2))
    D = DiffOp(2, terms)
    assume(D.terms)
    Dt = D.transpose()
    s = D.principal_symbol(x, lam)
    assert Dt.principal_symbol(x, lam) == pytest.approx((-1) ** D.order * s, abs=1e-9 * max(1, abs(s)))
    f = E.gaussian([0.1, -0.2], 0.7)
    pts = np.array([x, -x])
    np.testing.assert_allclose(Dt.transpose().apply_expr(f)(pts), D.apply_expr(f)(pts), atol=1e-9, rtol=1e-9)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_plateau_is_monotone_step(s, t):
    a, b = sorted((s, t))
    pa, pb = plateau(np.array([a, b]))
    assert 0.0 <= pb <= pa <= 1.0
