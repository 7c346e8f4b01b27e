"""Named operators with their root systems and canonical regularizations.

Every constructor returns the (possibly singular) operator; the canonical
regularized form with its claimed symbol factorization comes from
:func:`canonical` or the registry entry's ``build``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import expr as E
from .diffop import DiffOp, DualPoly, Factorization, regularize, weyl_expr
from .errors import SingularPoint
from .rootsys import MultiplicityFunction, RootSystem, build_root_system, root_orbits, sum_zero_basis

ALL = None  # theta = None means the whole simple system


def rank_one() -> RootSystem:
    """Delta = {+-alpha} with alpha(x) = x on R."""
    return build_root_system("B", 1)


def _x() -> E.Expr:
    return E.coord(0, 1)


def _fac_all(rs: RootSystem, p: DualPoly, n: int = 2) -> Factorization:
    return Factorization(p, {i: n for i in rs.positive}, tuple(range(rs.rank)), rs)


# --------------------------------------------------------------------------
# rank one

def euler(a: float = 0.0, b: float = 0.0) -> DiffOp:
    """x^2 d^2 + a x d + b; already regular, symbol x^2 lam^2."""
    x = _x()
    D = DiffOp(1, {(2,): x * x, (1,): a * x, (0,): E.const(b)}, name="euler")
    return D.with_factorization(_fac_all(rank_one(), DualPoly.power(1, 2)))


def xdx() -> DiffOp:
    """x d/dx, symbol x lam."""
    D = DiffOp(1, {(1,): _x()}, name="xdx")
    return D.with_factorization(_fac_all(rank_one(), DualPoly.power(1, 1), n=1))


def jacobi_1d(a: float, b: float) -> DiffOp:
    """d^2 + (a coth x + b coth 2x) d."""
    drift = a * E.coth([1.0]) + b * E.coth([2.0])
    return DiffOp(1, {(2,): E.const(1.0), (1,): drift}, name=f"jacobi1d(a={a:g},b={b:g})")


def bessel_1d(a: float, b: float) -> DiffOp:
    """d^2 + (a/x + b/(2x)) d."""
    drift = a * E.recip(_x()) + b * E.recip(2 * _x())
    return DiffOp(1, {(2,): E.const(1.0), (1,): drift}, name=f"bessel1d(a={a:g},b={b:g})")


# --------------------------------------------------------------------------
# root-system operators

def _mult(rs: RootSystem, m) -> MultiplicityFunction:
    if isinstance(m, MultiplicityFunction):
        return m
    return MultiplicityFunction.constant(rs, float(m))


def hyper_L(rs: RootSystem, m) -> DiffOp:
    """L_a + sum_{alpha > 0} m_alpha coth(alpha(x)) d(y_alpha)."""
    m = _mult(rs, m)
    D = DiffOp.laplacian(rs.ambient_dim)
    for i in rs.positive:
        y = rs.roots[i]
        if m(i):
            D = D + DiffOp.directional(y, m(i) * E.coth(y))
    D.name = "hyperL"
    return D


def bessel_L0(rs: RootSystem, m) -> DiffOp:
    """L_a + sum_{alpha > 0} m_alpha / alpha(x) d(y_alpha)."""
    m = _mult(rs, m)
    D = DiffOp.laplacian(rs.ambient_dim)
    for i in rs.positive:
        y = rs.roots[i]
        if m(i):
            D = D + DiffOp.directional(y, m(i) * E.recip(E.linear(y)))
    D.name = "besselL0"
    return D


def _schroedinger(rs: RootSystem, potential: E.Expr, name: str) -> DiffOp:
    D = DiffOp.laplacian(rs.ambient_dim).scale(-0.5) + DiffOp.multiplication(potential, rs.ambient_dim)
    D.name = name
    return D


def calogero(n: int, g: float) -> DiffOp:
    """-(1/2) L_a + g^2 sum_{i<j} (x_i - x_j)^-2 on R^{n+1}."""
    rs = build_root_system("A", n)
    pot = E.Expr.zero()
    for i in rs.positive:
        pot = pot + g * g * E.linear(rs.roots[i]) ** -2
    return _schroedinger(rs, pot, f"calogero(n={n},g={g:g})")


OP_CASES = ("I", "II", "V")


def op_hamiltonian(rs: RootSystem, g, case: str, omega: float | None = None) -> DiffOp:
    """-(1/2) L_a + sum_{alpha > 0} g_alpha^2 v(alpha(x)) for v of type I, II or V."""
    case = str(case).upper()
    if case not in OP_CASES:
        raise ValueError(f"unsupported potential case {case!r} (expected I, II or V)")
    if case == "V" and omega is None:
        raise ValueError("case V needs omega")
    g = _mult(rs, g)
    pot = E.Expr.zero()
    for i in rs.positive:
        y = rs.roots[i]
        if case == "I":
            v = E.linear(y) ** -2
        elif case == "II":
            v = E.sinh(y) ** -2
        else:
            v = E.linear(y) ** -2 + omega ** 2 * E.linear(y) ** 2
        pot = pot + g(i) ** 2 * v
    return _schroedinger(rs, pot, f"op_{case}")


def shift_symbol(rs: RootSystem, orbit, sign: int, x, lam, c: float = 1.0) -> float:
    """c * Delta_S(x)^(+-1) * prod_{alpha in S+} lam(x_alpha) for one orbit S of roots.

    ``orbit`` is either an index into :func:`root_orbits` or a collection of
    root indices forming a full orbit.
    """
    if not rs.reduced:
        raise ValueError("shift symbols are defined for reduced systems")
    orbits = root_orbits(rs)
    S = orbits[orbit] if isinstance(orbit, (int, np.integer)) else tuple(sorted(orbit))
    if S not in orbits:
        raise ValueError("S must be a single orbit of roots")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    pos = [i for i in S if i in set(rs.positive)]
    delta = 1.0
    pair = 1.0
    for i in pos:
        y = rs.roots[i]
        delta *= np.sinh(x @ y)
        pair *= lam @ (2 * y / (y @ y))
    if sign < 0:
        if any(abs(x @ rs.roots[i]) <= 1e-12 for i in pos):
            raise SingularPoint("Delta_S vanishes at x")
        return float(c * pair / delta)
    return float(c * delta * pair)


# --------------------------------------------------------------------------
# canonical regularizations

def reg_delta(D0: DiffOp, rs: RootSystem, scale: float = 1.0) -> DiffOp:
    """delta^2 D0 with factorization p = scale <lam,lam>, n(alpha) = 2 on Sigma+."""
    D = regularize(D0, 1, "delta", rs)
    return D.with_factorization(_fac_all(rs, DualPoly.norm_squared(rs.ambient_dim, scale)),
                                name=f"delta^2*{D0.name}")


def reg_pi(D0: DiffOp, rs: RootSystem, scale: float = 1.0) -> DiffOp:
    D = regularize(D0, 1, "pi", rs)
    return D.with_factorization(_fac_all(rs, DualPoly.norm_squared(rs.ambient_dim, scale)),
                                name=f"pi^2*{D0.name}")


def calogero_pi_delta(n: int, g: float) -> DiffOp:
    """Multiply by the product of alpha(x) over *all* roots, i.e. (-1)^|Sigma+| pi^2."""
    rs = build_root_system("A", n)
    S = calogero(n, g)
    full = E.const(1.0)
    for y in rs.roots:
        full = full * E.linear(y)
    D = S.scale(full)
    sign = (-1) ** len(rs.positive)
    return D.with_factorization(_fac_all(rs, DualPoly.norm_squared(rs.ambient_dim, -0.5 * sign)),
                                name=f"pi_all*{S.name}")


def theta_factorization(D: DiffOp, rs: RootSystem, theta, scale: float = 1.0) -> DiffOp:
    """Attach the a_theta factorization: p = scale <lam,lam>, n(alpha) = 2 on <theta>+."""
    theta = tuple(sorted(theta))
    fac = Factorization(DualPoly.norm_squared(rs.ambient_dim, scale),
                        {i: 2 for i in rs.theta_positive(theta)}, theta, rs)
    return D.with_factorization(fac)


# --------------------------------------------------------------------------
# registry

@dataclass
class Built:
    op: DiffOp            # as defined (possibly singular)
    reg: DiffOp           # canonical regularization, carries the factorization
    rs: RootSystem
    variants: dict = field(default_factory=dict)


@dataclass
class CatalogEntry:
    name: str
    description: str
    params: dict
    needs_system: bool
    build_fn: Callable
    regularization: str

    def build(self, system: str | None = None, **params) -> Built:
        unknown = set(params) - set(self.params)
        if unknown:
            raise ValueError(f"unknown parameter(s) for {self.name}: {sorted(unknown)}")
        p = {**self.params, **params}
        if self.needs_system:
            return self.build_fn(parse_system(system or "A2"), **p)
        return self.build_fn(**p)

    def descriptor(self) -> dict:
        b = self.build()
        return {"name": self.name, "description": self.description, "parameters": self.params,
                "needs_system": self.needs_system, "regularization": self.regularization,
                "region_theta": "all simple roots",
                "singular_forms": [u.tolist() for u in b.op.singular_forms()]}


def parse_system(text: str) -> RootSystem:
    """'A2', 'B3', 'BC1', 'I2_5' or 'I2(5)' -> RootSystem."""
    t = text.strip().upper()
    m = re.fullmatch(r"I2[_(]?(\d+)\)?", t)
    if m:
        return build_root_system("I2", int(m.group(1)))
    m = re.fullmatch(r"(BC|A|B|C|D)(\d+)", t)
    if not m:
        raise ValueError(f"cannot parse root system {text!r}")
    return build_root_system(m.group(1), int(m.group(2)))


def _b_euler(a, b):
    D = euler(a, b)
    return Built(D, D, rank_one())


def _b_xdx():
    D = xdx()
    return Built(D, D, rank_one())


def _b_jacobi(a, b):
    rs = rank_one()
    return Built(jacobi_1d(a, b), reg_delta(jacobi_1d(a, b), rs), rs)


def _b_bessel(a, b):
    rs = rank_one()
    return Built(bessel_1d(a, b), reg_pi(bessel_1d(a, b), rs), rs)


def _b_hyper(rs, m):
    D = hyper_L(rs, m)
    return Built(D, reg_delta(D, rs), rs)


def _b_besselL0(rs, m):
    D = bessel_L0(rs, m)
    return Built(D, reg_pi(D, rs), rs)


def _b_calogero(n, g):
    n = int(n)
    rs = build_root_system("A", n)
    D = calogero(n, g)
    return Built(D, reg_pi(D, rs, -0.5), rs, {"pi_all": calogero_pi_delta(n, g)})


def _b_op(case):
    def build(rs, g, omega):
        D = op_hamiltonian(rs, g, case, omega)
        reg = reg_delta(D, rs, -0.5) if case == "II" else reg_pi(D, rs, -0.5)
        return Built(D, reg, rs)
    return build


CATALOG = {
    "euler": CatalogEntry("euler", "x^2 d^2 + a x d + b", {"a": 0.0, "b": 0.0}, False, _b_euler, "none"),
    "xdx": CatalogEntry("xdx", "x d/dx", {}, False, _b_xdx, "none"),
    "jacobi1d": CatalogEntry("jacobi1d", "d^2 + (a coth x + b coth 2x) d", {"a": 1.0, "b": 0.0}, False,
                             _b_jacobi, "sinh(x)^2"),
    "bessel1d": CatalogEntry("bessel1d", "d^2 + (a/x + b/(2x)) d", {"a": 1.0, "b": 0.0}, False,
                             _b_bessel, "x^2"),
    "hyperL": CatalogEntry("hyperL", "L_a + sum m coth(alpha) d(y_alpha)", {"m": 1.0}, True, _b_hyper,
                           "delta^2"),
    "besselL0": CatalogEntry("besselL0", "L_a + sum m/alpha d(y_alpha)", {"m": 1.0}, True, _b_besselL0,
                             "pi^2"),
    "calogero": CatalogEntry("calogero", "-(1/2) L_a + g^2 sum (x_i - x_j)^-2", {"n": 2, "g": 1.0}, False,
                             _b_calogero, "pi^2"),
    "op_I": CatalogEntry("op_I", "-(1/2) L_a + sum g^2 alpha^-2", {"g": 1.0, "omega": None}, True,
                         _b_op("I"), "pi^2"),
    "op_II": CatalogEntry("op_II", "-(1/2) L_a + sum g^2 sinh(alpha)^-2", {"g": 1.0, "omega": None}, True,
                          _b_op("II"), "delta^2"),
    "op_V": CatalogEntry("op_V", "-(1/2) L_a + sum g^2 (alpha^-2 + omega^2 alpha^2)", {"g": 1.0, "omega": 1.0},
                         True, _b_op("V"), "pi^2"),
}


def get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown operator {name!r}; choose from {sorted(CATALOG)}") from None


def plane_restriction(D: DiffOp, n_plus_1: int = 3) -> DiffOp:
    """Move an A_n operator from R^{n+1} onto the sum-zero hyperplane (Helmert coordinates)."""
    return D.restrict(sum_zero_basis(n_plus_1))


def pi_expr(rs: RootSystem) -> E.Expr:
    return weyl_expr(rs, "pi")
