"""Linear differential operators with expression coefficients.

An operator is a finite map ``multi-index -> Expr``, meaning
``D = sum_I a_I(x) d^I``.  Only symbolic manipulations live here (symbols,
transposes, changes of variables, regularization, factorization checks);
grid and weak application are in :mod:`wsupport.gridops` and
:mod:`wsupport.weak`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import expr as E
from .errors import InsufficientPower, MissingFactorization, SingularPoint
from .rootsys import RootSystem, in_a_theta, theta_cone


def _key(index) -> tuple:
    return tuple(int(i) for i in index)


def _unit_index(dim: int, j: int, k: int = 1) -> tuple:
    return tuple(k if i == j else 0 for i in range(dim))


class DualPoly:
    """Polynomial in the covector lambda: ``multi-index -> coefficient``."""

    def __init__(self, dim: int, coeffs: dict):
        self.dim = dim
        self.coeffs = {_key(k): float(v) for k, v in coeffs.items() if v != 0}

    @classmethod
    def norm_squared(cls, dim: int, scale: float = 1.0) -> "DualPoly":
        return cls(dim, {_unit_index(dim, j, 2): scale for j in range(dim)})

    @classmethod
    def power(cls, dim: int, k: int, scale: float = 1.0) -> "DualPoly":
        """``scale * lambda^k`` in one variable (dim must be 1)."""
        if dim != 1:
            raise ValueError("power() is for one variable")
        return cls(1, {(k,): scale})

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.coeffs), default=0)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape[:-1])
        for k, c in self.coeffs.items():
            out = out + c * np.prod(lam ** np.asarray(k), axis=-1)
        return out if out.ndim else float(out)

    def to_json(self) -> dict:
        return {",".join(map(str, k)): c for k, c in sorted(self.coeffs.items())}


@dataclass(frozen=True, eq=False)
class Factorization:
    """Claimed split ``sigma(D)(x, lam) = p(lam) * prod_alpha alpha(x)^n(alpha) * P(x, lam)``.

    ``exponents`` maps root indices of ``rs`` to the integer n(alpha);
    ``theta`` selects the region a_theta on which P should not vanish.
    """

    p: DualPoly
    exponents: dict
    theta: tuple
    rs: RootSystem

    def divisor(self, x, lam):
        x = np.asarray(x, dtype=float)
        d = np.asarray(self.p(lam), dtype=float)
        for i, n in self.exponents.items():
            d = d * (x @ self.rs.roots[i]) ** n
        return d

    def to_json(self) -> dict:
        return {"p": self.p.to_json(), "exponents": {str(k): v for k, v in sorted(self.exponents.items())},
                "theta": list(self.theta)}


@dataclass
class FactorizationReport:
    passed: bool
    min_abs_P: float
    max_abs_P: float
    near_wall_min: float
    near_wall_max: float
    samples_used: int
    margin_tol: float
    seed: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


class DiffOp:
    """``sum_I a_I(x) d^I`` with ``a_I`` given as :class:`~wsupport.expr.Expr`."""

    def __init__(self, dim: int, terms: dict, factorization: Factorization | None = None, name: str = ""):
        self.dim = int(dim)
        clean = {}
        for k, v in terms.items():
            k = _key(k)
            if len(k) != self.dim:
                raise ValueError(f"multi-index {k} does not match dimension {self.dim}")
            v = E.as_expr(v)
            if not v.is_zero():
                clean[k] = clean[k] + v if k in clean else v
        self.terms = {k: v for k, v in clean.items() if not v.is_zero()}
        self.factorization = factorization
        self.name = name

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, dim: int) -> "DiffOp":
        return cls(dim, {(0,) * dim: E.const(1.0)}, name="identity")

    @classmethod
    def multiplication(cls, coeff, dim: int) -> "DiffOp":
        return cls(dim, {(0,) * dim: E.as_expr(coeff)})

    @classmethod
    def partial(cls, index, coeff=1.0) -> "DiffOp":
        index = _key(index)
        return cls(len(index), {index: E.as_expr(coeff)})

    @classmethod
    def laplacian(cls, dim: int) -> "DiffOp":
        return cls(dim, {_unit_index(dim, j, 2): E.const(1.0) for j in range(dim)}, name="laplacian")

    @classmethod
    def directional(cls, y, coeff=1.0) -> "DiffOp":
        """``coeff * d(y)``, the derivative along ``y``."""
        y = np.asarray(y, dtype=float)
        coeff = E.as_expr(coeff)
        return cls(len(y), {_unit_index(len(y), j): coeff * y[j] for j in range(len(y)) if y[j] != 0})

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "DiffOp") -> "DiffOp":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return DiffOp(self.dim, t)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff) -> "DiffOp":
        """Left multiplication by a function: ``f -> coeff * D f``."""
        coeff = E.as_expr(coeff)
        return DiffOp(self.dim, {k: coeff * v for k, v in self.terms.items()})

    __rmul__ = scale

    def with_factorization(self, fac: Factorization | None, name: str | None = None) -> "DiffOp":
        return DiffOp(self.dim, self.terms, fac, self.name if name is None else name)

    # -- queries ----------------------------------------------------------
    @property
    def order(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def top_terms(self) -> dict:
        m = self.order
        return {k: v for k, v in self.terms.items() if sum(k) == m}

    def singular_forms(self, top_only: bool = False) -> list:
        out = []
        terms = self.top_terms() if top_only else self.terms
        for v in terms.values():
            for u in v.singular_forms():
                if not any(np.allclose(u, w, atol=1e-10) for w in out):
                    out.append(u)
        return out

    def is_regular(self) -> bool:
        return not self.singular_forms()

    def principal_symbol(self, x, lam):
        """``sum_{|I| = m} a_I(x) lam^I``; accepts batches along leading axes.

        Raises SingularPoint on any declared singular hyperplane of the
        operator, not only those of the top-order coefficients: D itself is
        undefined there.
        """
        x = np.asarray(x, dtype=float)
        lam = np.asarray(lam, dtype=float)
        forms = self.singular_forms()
        if forms:
            dist = np.abs(x @ np.array(forms).T)
            if np.any(dist <= 1e-12):
                raise SingularPoint("principal symbol evaluated on a singular hyperplane")
        out = 0.0
        for k, v in self.top_terms().items():
            out = out + v(x) * np.prod(lam ** np.asarray(k), axis=-1)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out

    def apply_expr(self, f) -> E.Expr:
        f = E.as_expr(f)
        out = E.Expr.zero()
        for k, v in self.terms.items():
            out = out + v * f.diff_multi(k)
        return out

    # -- transformations --------------------------------------------------
    def transpose(self) -> "DiffOp":
        """Formal transpose ``f -> sum_I (-1)^|I| d^I (a_I f)``, expanded by Leibniz."""
        out: dict = {}
        for idx, a in self.terms.items():
            sign = -1.0 if sum(idx) % 2 else 1.0
            for sub in itertools.product(*(range(i + 1) for i in idx)):
                c = 1
                for i, j in zip(idx, sub):
                    c *= comb(i, j)
                rest = tuple(i - j for i, j in zip(idx, sub))
                piece = a.diff_multi(rest) * (sign * c)
                out[sub] = out[sub] + piece if sub in out else piece
        name = f"transpose({self.name})" if self.name else ""
        return DiffOp(self.dim, out, name=name)

    def change_vars(self, coeff_map, deriv_map) -> "DiffOp":
        """General linear change of variables.

        The new operator has coefficients ``a_I(A u)`` and replaces each old
        partial d_j by ``sum_k B[k, j] d_k`` in the new variables, with
        ``A = coeff_map`` (old_dim x new_dim) and ``B = deriv_map`` (new_dim x old_dim).
        """
        A = np.asarray(coeff_map, dtype=float)
        B = np.asarray(deriv_map, dtype=float)
        new_dim = B.shape[0]
        out: dict = {}
        for idx, a in self.terms.items():
            poly = {(0,) * new_dim: 1.0}
            for j, power in enumerate(idx):
                for _ in range(power):
                    nxt: dict = {}
                    for mono, c in poly.items():
                        for k in range(new_dim):
                            if B[k, j] == 0:
                                continue
                            m2 = tuple(e + (1 if i == k else 0) for i, e in enumerate(mono))
                            nxt[m2] = nxt.get(m2, 0.0) + c * B[k, j]
                    poly = nxt
            a_new = a.substitute_linear(A)
            for mono, c in poly.items():
                if abs(c) < 1e-15:
                    continue
                piece = a_new * c
                out[mono] = out[mono] + piece if mono in out else piece
        return DiffOp(new_dim, out, name=self.name)

    def w_conjugate(self, w) -> "DiffOp":
        """``(w.D) f = w.(D(w^{-1}.f))`` with ``(w.f)(x) = f(w^{-1} x)``."""
        m = np.asarray(getattr(w, "matrix", w), dtype=float)
        return self.change_vars(m.T, m)

    def restrict(self, basis) -> "DiffOp":
        """Operator induced on functions of ``u`` with ``x = basis @ u``.

        Intended for operators whose coefficients are constant along the
        orthogonal complement of ``basis`` (the A_n models); derivatives in
        that complement are dropped because the extended function is constant there.
        """
        U = np.asarray(basis, dtype=float)
        fac = None
        if self.factorization is not None:
            f = self.factorization
            rs = f.rs.restrict(U) if f.rs.ambient_dim == U.shape[0] else f.rs
            p = _restrict_dual_poly(f.p, U)
            fac = Factorization(p, dict(f.exponents), f.theta, rs)
        return DiffOp(U.shape[1], self.change_vars(U, U.T).terms, fac, self.name)

    def to_json(self) -> dict:
        out = {
            "schema_version": 1,
            "kind": "diffop",
            "name": self.name,
            "dim": self.dim,
            "order": self.order,
            "terms": {",".join(map(str, k)): v.to_json() for k, v in sorted(self.terms.items())},
            "singular_forms": [u.tolist() for u in self.singular_forms()],
        }
        if self.factorization is not None:
            out["factorization"] = self.factorization.to_json()
        return out

    def __repr__(self):
        return f"DiffOp({self.name or 'anonymous'}, dim={self.dim}, order={self.order}, terms={len(self.terms)})"


def _restrict_dual_poly(p: DualPoly, U) -> DualPoly:
    """Pull back p(lam) along lam_new -> U @ lam_new (covectors on the subspace)."""
    U = np.asarray(U, dtype=float)
    m = U.shape[1]
    out: dict = {}
    for k, c in p.coeffs.items():
        poly = {(0,) * m: c}
        for j, power in enumerate(k):
            for _ in range(power):
                nxt: dict = {}
                for mono, cc in poly.items():
                    for a in range(m):
                        if U[j, a] == 0:
                            continue
                        m2 = tuple(e + (1 if i == a else 0) for i, e in enumerate(mono))
                        nxt[m2] = nxt.get(m2, 0.0) + cc * U[j, a]
                poly = nxt
        for mono, cc in poly.items():
            out[mono] = out.get(mono, 0.0) + cc
    return DualPoly(m, {k: v for k, v in out.items() if abs(v) > 1e-14})


def weyl_expr(rs: RootSystem, kind: str, roots=None) -> E.Expr:
    """``prod alpha(x)`` (kind ``pi``) or ``prod sinh alpha(x)`` (kind ``delta``) as an Expr."""
    idx = rs.positive if roots is None else roots
    out = E.const(1.0)
    for i in idx:
        y = rs.roots[i]
        out = out * (E.linear(y) if kind == "pi" else E.sinh(y))
    return out


def regularize(D0: DiffOp, k: int, kind: str, rs: RootSystem) -> DiffOp:
    """Multiply by ``delta^{2k}`` or ``pi^{2k}`` and check every pole cancelled.

    ``sinh`` of doubled roots is expanded first so that e.g. ``coth(2x)``
    cancels against ``sinh(x)^2``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if kind not in ("delta", "pi"):
        raise ValueError(f"unknown regularization kind {kind!r}")
    w = weyl_expr(rs, kind) ** (2 * k)
    base = [rs.roots[i] for i in rs.positive]
    terms = {idx: (w * a).expand_double_angles(base) for idx, a in D0.terms.items()}
    D = DiffOp(D0.dim, terms, name=f"{kind}^{2 * k}*{D0.name}" if D0.name else "")
    left = D.singular_forms()
    if left:
        raise InsufficientPower(f"{kind}^{2 * k} leaves poles along {[u.tolist() for u in left]}")
    return D


def check_factorization(D: DiffOp, n_samples: int = 1000, margin_tol: float = 0.0, seed: int = 0,
                        box: float = 2.0, divisor_floor: float = 1e-8) -> FactorizationReport:
    """Sample P = sigma / (p * prod alpha^n) on a_theta x unit sphere.

    Besides the random samples, points are pushed toward every wall that
    carries a positive exponent (alpha(x) = 1e-1 ... 1e-5) to make sure P stays
    bounded away from zero there as well.  Passes iff every retained value has
    |P| > margin_tol.
    """
    fac = D.factorization
    if fac is None:
        raise MissingFactorization(f"operator {D.name!r} has no claimed factorization")
    rng = np.random.default_rng(seed)
    n = D.dim
    cone = theta_cone(fac.rs, fac.theta)
    forms = D.singular_forms()

    def usable(x):
        ok = in_a_theta(cone, x)
        if forms:
            ok = ok & np.all(np.abs(x @ np.array(forms).T) > 1e-12, axis=-1)
        return ok

    xs = []
    while sum(len(a) for a in xs) < n_samples:
        cand = rng.uniform(-box, box, size=(2 * n_samples, n))
        xs.append(cand[usable(cand)])
    x = np.concatenate(xs)[:n_samples]
    lam = rng.normal(size=(n_samples, n))
    lam /= np.linalg.norm(lam, axis=1)[:, None]

    def ratio(xv, lv):
        div = fac.divisor(xv, lv)
        keep = np.abs(div) > divisor_floor
        sig = D.principal_symbol(xv[keep], lv[keep])
        return sig / div[keep]

    P = ratio(x, lam)
    walls = [i for i, e in fac.exponents.items() if e > 0]
    near = []
    for i in walls:
        y = fac.rs.roots[i]
        xa = 2 * y / (y @ y)
        for t in 10.0 ** -np.arange(1, 6):
            xt = x[:50] - ((x[:50] @ y) - t)[:, None] * xa[None, :] / 2
            keep = usable(xt)
            if keep.any():
                near.append(ratio(xt[keep], lam[:50][keep]))
    near_all = np.concatenate(near) if near else np.array([])
    allP = np.concatenate([P, near_all])
    absP = np.abs(allP)
    mn = float(absP.min()) if absP.size else float("nan")
    mx = float(absP.max()) if absP.size else float("nan")
    nmin = float(np.abs(near_all).min()) if near_all.size else mn
    nmax = float(np.abs(near_all).max()) if near_all.size else mx
    passed = bool(absP.size > 0 and np.all(np.isfinite(allP)) and mn > margin_tol)
    return FactorizationReport(passed=passed, min_abs_P=mn, max_abs_P=mx, near_wall_min=nmin,
                               near_wall_max=nmax, samples_used=int(P.size), margin_tol=margin_tol, seed=seed)


__all__ = ["DiffOp", "DualPoly", "Factorization", "FactorizationReport", "regularize",
           "check_factorization", "weyl_expr"]
