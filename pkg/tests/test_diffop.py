import math

import numpy as np
import pytest

from wsupport import catalog as C
from wsupport import expr as E
from wsupport.diffop import DiffOp, check_factorization, regularize
from wsupport.errors import InsufficientPower, MissingFactorization, SingularPoint
from wsupport.rootsys import build_root_system, generate_group, sum_zero_basis


def _values(D, f, x):
    return D.apply_expr(f)(x)


def test_transpose_of_xdx():
    D = C.xdx()
    Dt = D.transpose()
    x = np.linspace(-2, 2, 11)[:, None]
    np.testing.assert_allclose(Dt.terms[(1,)](x), -x[:, 0])
    np.testing.assert_allclose(Dt.terms[(0,)](x), -np.ones(11))


def test_transpose_is_an_involution():
    rs = build_root_system("A", 2)
    D = C.hyper_L(rs, 1.5)
    f = E.gaussian([2.0, 0.0, -2.0], 0.5)
    x = np.array([[2.1, 0.2, -1.9], [1.7, -0.1, -2.3]])
    np.testing.assert_allclose(_values(D.transpose().transpose(), f, x), _values(D, f, x), rtol=1e-10)


def test_symbol_of_regularized_jacobi():
    D = C.get("jacobi1d").build().reg
    assert D.principal_symbol([1.0], [1.0]) == pytest.approx(math.sinh(1) ** 2)
    assert D.principal_symbol([1.0], [2.0]) == pytest.approx(4 * math.sinh(1) ** 2)
    xs = np.array([[0.5], [1.0]])
    ls = np.array([[1.0], [3.0]])
    np.testing.assert_allclose(D.principal_symbol(xs, ls), [math.sinh(0.5) ** 2, 9 * math.sinh(1) ** 2])


def test_symbol_refuses_singular_points():
    with pytest.raises(SingularPoint):
        C.jacobi_1d(1.0, 0.0).principal_symbol([0.0], [1.0])
    assert C.jacobi_1d(1.0, 0.0).principal_symbol([0.3], [2.0]) == pytest.approx(4.0)


def test_regularize_removes_poles_or_raises():
    rs = C.rank_one()
    D = regularize(C.jacobi_1d(2.0, 1.0), 1, "delta", rs)
    assert D.is_regular()
    bad = DiffOp.multiplication(E.coord(0, 1) ** -3, 1)
    with pytest.raises(InsufficientPower):
        regularize(bad, 1, "pi", rs)
    assert regularize(bad, 2, "pi", rs).is_regular()
    with pytest.raises(ValueError):
        regularize(bad, 0, "pi", rs)


def test_regularized_operator_agrees_off_walls():
    rs = C.rank_one()
    D0 = C.bessel_1d(2.0, 1.0)
    D = C.reg_pi(D0, rs)
    f = E.gaussian([0.8], 0.4)
    x = np.linspace(0.3, 1.5, 9)[:, None]
    np.testing.assert_allclose(_values(D, f, x), x[:, 0] ** 2 * _values(D0, f, x), rtol=1e-12)


def test_missing_factorization():
    with pytest.raises(MissingFactorization):
        check_factorization(C.jacobi_1d(1.0, 0.0))


def test_factorization_detects_extra_vanishing():
    # x^3 d^2 claimed as |lam|^2 x^2: P = x tends to 0 at the wall
    x = E.coord(0, 1)
    D = DiffOp(1, {(2,): x ** 3}).with_factorization(C.euler().factorization)
    rep = check_factorization(D, n_samples=200)
    assert rep.near_wall_min <= 1e-3
    assert not check_factorization(D, n_samples=200, margin_tol=1e-3).passed


def test_w_conjugation_of_invariant_operator():
    rs = build_root_system("B", 2)
    G = generate_group(rs)
    D = C.bessel_L0(rs, 2.0)
    f = E.gaussian([1.5, 0.5], 0.6) * (1 + E.coord(0, 2))
    x = np.array([[1.3, 0.4], [2.0, 1.1]])
    for m in G.matrices:
        np.testing.assert_allclose(_values(D.w_conjugate(m), f, x), _values(D, f, x), rtol=1e-9, atol=1e-12)


def test_restriction_to_sum_zero_plane():
    U = sum_zero_basis(3)
    D = C.hyper_L(build_root_system("A", 2), 1.0)
    Dp = D.restrict(U)
    assert Dp.dim == 2
    u = np.array([[0.7, -0.4]])
    g2 = E.gaussian([0.5, -0.3], 0.7)
    # lift g2 to R^3 as a function constant along (1,1,1)
    g3 = g2.substitute_linear(U.T)
    np.testing.assert_allclose(_values(Dp, g2, u), _values(D, g3, u @ U.T), rtol=1e-10)


def test_laplacian_and_directional():
    L = DiffOp.laplacian(2)
    f = E.coord(0, 2) ** 2 + 3 * E.coord(1, 2) ** 2
    assert float(L.apply_expr(f)(np.array([[0.2, 0.1]]))[0]) == pytest.approx(8.0)
    d = DiffOp.directional([1.0, -1.0])
    assert float(d.apply_expr(f)(np.array([[1.0, 1.0]]))[0]) == pytest.approx(2.0 - 6.0)
    assert L.order == 2 and d.order == 1 and DiffOp.identity(2).order == 0


def test_json():
    doc = C.get("besselL0").build().reg.to_json()
    assert doc["order"] == 2 and doc["singular_forms"] == [] and "factorization" in doc
