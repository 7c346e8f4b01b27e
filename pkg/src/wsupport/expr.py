"""Coefficient expressions for differential operators.

Expressions are kept in a normal form: a finite sum of ``coeff * monomial``
where a monomial is a product of powers of atoms.  The atoms are

* ``lin(v)``   the linear form ``<x, v>``, ``v`` scaled so its first nonzero
  entry is 1 (the scale lives in the coefficient),
* ``sinh(v)`` and ``cosh(v)`` of a linear form, ``v`` sign-normalized,
* ``exp(g)``   of another expression ``g`` (at most one per monomial).

Negative powers are allowed on single atoms only, so ``coth`` is stored as
``cosh * sinh**-1`` and products such as ``sinh(x)**2 * coth(x)`` cancel to
``sinh(x) * cosh(x)`` by exponent arithmetic alone.  This closed family is
enough for every coefficient we need and keeps symbolic differentiation exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

_ROUND = 12
_SINGULAR_KINDS = ("lin", "sinh")


def _clean_vec(v) -> tuple:
    return tuple(round(float(c), _ROUND) + 0.0 for c in v)


def _first_nonzero(v) -> float:
    for c in v:
        if abs(c) > 1e-14:
            return float(c)
    return 0.0


@dataclass(frozen=True)
class Atom:
    kind: str           # lin | sinh | cosh | exp
    vec: tuple = ()     # linear form, for lin/sinh/cosh
    arg: "Expr" = None  # exponent, for exp

    @property
    def key(self):
        if self.kind == "exp":
            return ("exp", self.arg.key)
        return (self.kind, self.vec)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Atom) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def evaluate(self, x):
        if self.kind == "exp":
            return np.exp(self.arg(x))
        t = x @ np.asarray(self.vec)
        if self.kind == "lin":
            return t
        if self.kind == "sinh":
            return np.sinh(t)
        return np.cosh(t)

    def derivative(self, j: int) -> "Expr":
        if self.kind == "exp":
            return Expr({((self, 1),): 1.0}) * self.arg.diff(j)
        c = self.vec[j]
        if c == 0:
            return Expr.zero()
        if self.kind == "lin":
            return Expr.const(c)
        other = "cosh" if self.kind == "sinh" else "sinh"
        return Expr({((Atom(other, self.vec), 1),): c})


def _mono_mul(a: tuple, b: tuple) -> tuple[tuple, float]:
    """Multiply two monomials; returns (monomial, scalar factor)."""
    powers: dict = {}
    exp_arg = None
    for atom, p in a + b:
        if atom.kind == "exp":
            exp_arg = atom.arg if exp_arg is None else exp_arg + atom.arg
        else:
            powers[atom] = powers.get(atom, 0) + p
    factor = 1.0
    items = [(at, p) for at, p in powers.items() if p != 0]
    if exp_arg is not None:
        c0 = exp_arg.constant_term()
        if c0:
            factor *= math.exp(c0)
            exp_arg = exp_arg - c0
        if not exp_arg.is_zero():
            items.append((Atom("exp", arg=exp_arg), 1))
    return tuple(sorted(items)), factor


class Expr:
    """Immutable normal-form expression; supports + - * ** and differentiation."""

    __slots__ = ("terms", "_key")

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            biggest = max((abs(c) for c in terms.values()), default=0.0)
            for m, c in terms.items():
                if c != 0 and abs(c) > 1e-15 * biggest:
                    clean[m] = float(c)
        self.terms = clean
        self._key = None

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero() -> "Expr":
        return Expr()

    @staticmethod
    def const(c: float) -> "Expr":
        return Expr({(): float(c)})

    @staticmethod
    def linear(v) -> "Expr":
        v = np.asarray(v, dtype=float)
        s = _first_nonzero(v)
        if s == 0:
            return Expr.zero()
        return Expr({((Atom("lin", _clean_vec(v / s)), 1),): s})

    @staticmethod
    def sinh(v) -> "Expr":
        v = np.asarray(v, dtype=float)
        s = _first_nonzero(v)
        if s == 0:
            return Expr.zero()
        sign = 1.0 if s > 0 else -1.0
        return Expr({((Atom("sinh", _clean_vec(sign * v)), 1),): sign})

    @staticmethod
    def cosh(v) -> "Expr":
        v = np.asarray(v, dtype=float)
        s = _first_nonzero(v)
        if s == 0:
            return Expr.const(1.0)
        sign = 1.0 if s > 0 else -1.0
        return Expr({((Atom("cosh", _clean_vec(sign * v)), 1),): 1.0})

    @staticmethod
    def coth(v) -> "Expr":
        return Expr.cosh(v) * Expr.sinh(v) ** -1

    @staticmethod
    def exp(arg: "Expr") -> "Expr":
        arg = as_expr(arg)
        m, f = _mono_mul(((Atom("exp", arg=arg), 1),), ())
        return Expr({m: f})

    # -- structure --------------------------------------------------------
    @property
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(((tuple((a.key, p) for a, p in m), c) for m, c in self.terms.items())))
        return self._key

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        other = as_expr(other)
        return self.key == other.key

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> float:
        return self.terms.get((), 0.0)

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def atoms(self) -> set:
        out = set()
        for m in self.terms:
            for a, _ in m:
                out.add(a)
                if a.kind == "exp":
                    out |= a.arg.atoms()
        return out

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = as_expr(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0.0) + c
        return Expr(t)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) - self

    def __mul__(self, other):
        other = as_expr(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, f = _mono_mul(m1, m2)
                t[m] = t.get(m, 0.0) + c1 * c2 * f
        return Expr(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * as_expr(other) ** -1

    def __rtruediv__(self, other):
        return as_expr(other) * self ** -1

    def __pow__(self, n: int):
        n = int(n)
        if n >= 0:
            out = Expr.const(1.0)
            for _ in range(n):
                out = out * self
            return out
        if not self.is_monomial():
            raise ValueError("negative powers are only defined for monomials")
        (m, c), = self.terms.items()
        items = []
        for a, p in m:
            if a.kind == "exp":
                items.append((Atom("exp", arg=a.arg * (p * n)), 1))
            else:
                items.append((a, p * n))
        mono, f = _mono_mul(tuple(sorted(items)), ())
        return Expr({mono: f * c ** n})

    # -- calculus ---------------------------------------------------------
    def diff(self, j: int) -> "Expr":
        out = Expr.zero()
        for m, c in self.terms.items():
            for i, (a, p) in enumerate(m):
                rest = m[:i] + ((a, p - 1),) + m[i + 1:] if a.kind != "exp" else m[:i] + m[i + 1:]
                mono, f = _mono_mul(tuple((b, q) for b, q in rest if q != 0), ())
                scale = p if a.kind != "exp" else 1
                out = out + Expr({mono: c * f * scale}) * a.derivative(j)
        return out

    def diff_multi(self, index: Iterable[int]) -> "Expr":
        out = self
        for j, k in enumerate(index):
            for _ in range(k):
                out = out.diff(j)
        return out

    def substitute_linear(self, A) -> "Expr":
        """Return the expression u -> self(A u) for an n x m matrix ``A``."""
        A = np.asarray(A, dtype=float)
        out = Expr.zero()
        for m, c in self.terms.items():
            term = Expr.const(c)
            for a, p in m:
                if a.kind == "exp":
                    base = Expr.exp(a.arg.substitute_linear(A))
                else:
                    v = A.T @ np.asarray(a.vec)
                    base = {"lin": Expr.linear, "sinh": Expr.sinh, "cosh": Expr.cosh}[a.kind](v)
                    if base.is_zero() and p < 0:
                        raise ValueError("substitution collapses a singular factor to zero")
                term = term * base ** p
            out = out + term
        return out

    def expand_double_angles(self, base_forms) -> "Expr":
        """Rewrite sinh(2 l) -> 2 sinh(l) cosh(l) when l is one of ``base_forms``.

        Lets a Weyl denominator built from ``sinh(l)`` cancel a ``coth(2 l)``
        coefficient.  Applied to all powers, negative ones included.
        """
        base = [np.asarray(b, dtype=float) for b in base_forms]
        out = Expr.zero()
        for m, c in self.terms.items():
            term = Expr.const(c)
            for a, p in m:
                piece = Expr({((a, 1),): 1.0})
                if a.kind == "sinh":
                    v = np.asarray(a.vec)
                    for b in base:
                        for s in (1.0, -1.0):
                            if np.allclose(v, 2 * s * b, atol=1e-12):
                                piece = 2 * s * Expr.sinh(s * b) * Expr.cosh(b)
                                break
                        else:
                            continue
                        break
                term = term * piece ** p
            out = out + term
        return out

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        shape = x.shape[:-1]
        cache: dict = {}
        total = np.zeros(shape)
        for m, c in self.terms.items():
            val = np.full(shape, c)
            for a, p in m:
                v = cache.get(a)
                if v is None:
                    v = cache[a] = a.evaluate(x)
                val = val * (v ** p if p != 1 else v)
            total = total + val
        return total if shape else float(total)

    def singular_forms(self) -> list:
        """Unit normals of hyperplanes where the expression may blow up."""
        out = []
        for m in self.terms:
            for a, p in m:
                if p < 0 and a.kind in _SINGULAR_KINDS:
                    v = np.asarray(a.vec)
                    u = v / np.linalg.norm(v)
                    u = u * np.sign(_first_nonzero(u))
                    if not any(np.allclose(u, w, atol=1e-10) for w in out):
                        out.append(u)
        return out

    def is_singular_at(self, x, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=float)
        return any(abs(x @ u) <= tol for u in self.singular_forms())

    def as_linear_vector(self, dim: int):
        """Coefficient vector if the expression is a homogeneous linear form, else None."""
        v = np.zeros(dim)
        for m, c in self.terms.items():
            if len(m) != 1 or m[0][1] != 1 or m[0][0].kind != "lin":
                return None
            v += c * np.asarray(m[0][0].vec)
        return v

    # -- output -----------------------------------------------------------
    def to_json(self) -> dict:
        def atom_node(a):
            if a.kind == "exp":
                return {"op": "exp", "arg": a.arg.to_json()}
            lin = {"op": "linear", "y": list(a.vec)}
            return lin if a.kind == "lin" else {"op": a.kind, "arg": lin}

        terms = []
        for mono, c in sorted(self.terms.items(), key=lambda kv: tuple((a.key, p) for a, p in kv[0])):
            factors = [atom_node(a) if p == 1 else {"op": "pow", "base": atom_node(a), "exp": p}
                       for a, p in mono]
            terms.append({"op": "product", "coeff": c, "factors": factors})
        return {"op": "sum", "terms": terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            fs = []
            for a, p in m:
                s = f"exp({a.arg!r})" if a.kind == "exp" else f"{a.kind}{list(a.vec)}"
                fs.append(s if p == 1 else f"{s}^{p}")
            parts.append("*".join([f"{c:g}"] + fs))
        return " + ".join(parts)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float, np.floating, np.integer)):
        return Expr.const(float(v))
    raise TypeError(f"cannot convert {type(v).__name__} to Expr")


# module-level shorthands
const = Expr.const
linear = Expr.linear
sinh = Expr.sinh
cosh = Expr.cosh
coth = Expr.coth
exp = Expr.exp


def coord(j: int, dim: int) -> Expr:
    v = np.zeros(dim)
    v[j] = 1.0
    return Expr.linear(v)


def recip(e: Expr) -> Expr:
    return as_expr(e) ** -1


def gaussian(center, width: float) -> Expr:
    """exp(-|x - center|^2 / (2 width^2)) as an expression."""
    center = np.asarray(center, dtype=float)
    n = len(center)
    q = Expr.zero()
    for j in range(n):
        d = coord(j, n) - center[j]
        q = q + d * d
    return Expr.exp(q * (-0.5 / width ** 2))
