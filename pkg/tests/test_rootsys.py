import itertools
import math

import numpy as np
import pytest

from wsupport import catalog as C
from wsupport.errors import GroupTooLarge
from wsupport.rootsys import (CoxeterGroup, MultiplicityFunction, RootSystem, build_root_system,
                              check_cone_lemma, check_equivariance, coroot_vector, fold_into_chamber,
                              generate_group, in_a_theta, parabolic_subgroup, reflect, reflection_matrix,
                              root_orbits, symmetrize, theta_cone, weyl_product)


@pytest.fixture(scope="module")
def a2():
    rs = build_root_system("A", 2)
    return rs, generate_group(rs)


def test_a2_roots_and_positive_system(a2):
    rs, _ = a2
    assert rs.ambient_dim == 3 and rs.rank == 2 and len(rs.roots) == 6
    pos = {tuple(rs.roots[i]) for i in rs.positive}
    assert pos == {(1, -1, 0), (1, 0, -1), (0, 1, -1)}
    assert rs.reduced and rs.crystallographic


def test_reflection_swaps_coordinates(a2):
    rs, _ = a2
    i = rs.index_of([1, -1, 0])
    np.testing.assert_allclose(reflect(rs, i, [3.0, 1.0, 0.0]), [1.0, 3.0, 0.0])


def test_coroots():
    b1 = build_root_system("B", 1)
    np.testing.assert_allclose(coroot_vector(b1, b1.positive[0]), [2.0])
    c2 = build_root_system("C", 2)
    i = c2.index_of([2.0, 0.0])
    np.testing.assert_allclose(coroot_vector(c2, i), [1.0, 0.0])
    with pytest.raises(IndexError):
        coroot_vector(b1, 5)


def test_reflection_matrix_is_orthogonal_involution(a2):
    rs, _ = a2
    for i in range(len(rs.roots)):
        r = reflection_matrix(rs, i)
        np.testing.assert_allclose(r @ r, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
        assert round(np.linalg.det(r)) == -1


def test_group_orders_against_signed_permutations():
    # oracle: W(A3) is S4 (permutation matrices), W(B3) all signed permutations
    G = generate_group(build_root_system("A", 3))
    perms = [np.eye(4)[list(p)] for p in itertools.permutations(range(4))]
    assert G.order == len(perms) == 24
    assert all(G.contains(p) for p in perms)
    G = generate_group(build_root_system("B", 3))
    signed = [np.diag(s) @ np.eye(3)[list(p)] for p in itertools.permutations(range(3))
              for s in itertools.product((1, -1), repeat=3)]
    assert G.order == len(signed) == 48
    assert all(G.contains(m) for m in signed)


def test_small_groups():
    assert generate_group(build_root_system("A", 0)).order == 1
    G = generate_group(build_root_system("B", 1))
    assert sorted(G.matrices.ravel().tolist()) == [-1.0, 1.0]
    assert generate_group(build_root_system("D", 3)).order == 24
    assert generate_group(build_root_system("BC", 2)).order == 8


def test_group_cap():
    with pytest.raises(GroupTooLarge):
        generate_group(build_root_system("I2", 17), cap=10)


def test_group_closed_and_json_roundtrip(a2):
    _, G = a2
    assert G.is_closed()
    H = CoxeterGroup.from_json(G.to_json())
    assert H.order == G.order
    np.testing.assert_allclose(H.matrices, G.matrices)


def test_root_system_json_roundtrip():
    rs = build_root_system("B", 2)
    back = RootSystem.from_json(rs.to_json())
    np.testing.assert_allclose(back.roots, rs.roots)
    assert back.positive == rs.positive and back.simple == rs.simple


def test_axioms_rejected():
    with pytest.raises(ValueError):
        RootSystem.from_roots([[1.0, 0.0], [-1.0, 0.0], [0.3, 1.0], [-0.3, -1.0]], [0, 2])


def test_flags():
    assert not build_root_system("BC", 2).reduced
    assert not build_root_system("I2", 5).crystallographic
    assert build_root_system("I2", 6).reduced


def test_theta_subsystem_and_cone(a2):
    rs, G = a2
    assert rs.theta_roots(()) == ()
    assert len(rs.theta_roots((0,))) == 2
    cone = theta_cone(rs, (0,))
    assert {tuple(rs.roots[i]) for i in cone.strict_inequalities} == {(1, 0, -1), (0, 1, -1)}
    assert in_a_theta(cone, [0.0, 1.0, -1.0])
    assert not in_a_theta(cone, [0.0, -1.0, 1.0])
    assert parabolic_subgroup(rs, G, (0,)).order == 2
    assert parabolic_subgroup(rs, G, (0, 1)) is G
    with pytest.raises(ValueError):
        theta_cone(rs, (2,))


def test_fold_sorts_a_n(a2):
    rs, _ = a2
    x = np.array([[0.3, 2.0, -1.0], [1.0, 5.0, 2.0]])
    np.testing.assert_allclose(fold_into_chamber(rs, x), -np.sort(-x, axis=1))


def test_symmetrize_gives_mean(a2):
    _, G = a2
    g = symmetrize(G, lambda x: x[..., 0])
    x = np.array([[1.0, 2.0, 6.0]])
    np.testing.assert_allclose(g(x), [3.0])


def test_weyl_products(a2):
    rs, _ = a2
    x = np.array([3.0, 2.0, 0.0])
    assert weyl_product(rs, None, "pi_full", x) == pytest.approx(6.0)
    assert weyl_product(rs, (0,), "pi", x) == pytest.approx(1.0)
    assert weyl_product(rs, (0,), "delta_complement", x) == pytest.approx(math.sinh(3) * math.sinh(2))
    assert weyl_product(rs, (), "pi", x) == 1.0


def test_orbits_and_multiplicities():
    assert len(root_orbits(build_root_system("A", 2))) == 1
    assert len(root_orbits(build_root_system("B", 2))) == 2
    bc1 = build_root_system("BC", 1)
    assert len(root_orbits(bc1)) == 2
    m = MultiplicityFunction.from_roots(bc1, {bc1.index_of([1.0]): 3.0, bc1.index_of([2.0]): 0.5})
    assert m(bc1.index_of([-1.0])) == 3.0 and m(bc1.index_of([-2.0])) == 0.5
    a2 = build_root_system("A", 2)
    with pytest.raises(ValueError):
        MultiplicityFunction.from_roots(a2, {0: 1.0, 1: 2.0})


def test_cone_lemma_single_theta():
    rs = build_root_system("B", 3)
    G = generate_group(rs)
    rep = check_cone_lemma(rs, G, (0, 2), num_samples=2000, seed=1)
    assert rep.disagreements == 0 and rep.agreement_rate == 1.0


def test_calogero_is_invariant(a2):
    _, G = a2
    D = C.calogero(2, 1.0)
    assert check_equivariance(G, D, samples=40, seed=2).passed


def test_sign_character(a2):
    rs, G = a2
    pi = lambda x: weyl_product(rs, None, "pi_full", x)
    assert check_equivariance(G, pi, "sign").passed
    assert not check_equivariance(G, pi, "trivial").passed
