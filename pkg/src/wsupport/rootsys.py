"""Root systems, finite Coxeter groups, parabolic subgroups and Θ-cones.

Roots are stored as the vectors ``y_alpha`` representing the functionals
``alpha(x) = <x, y_alpha>`` for the standard inner product.  Simple systems are
referred to by *position* (``0 .. rank-1``) in ``RootSystem.simple``; a subset
``theta`` of the simple system is a collection of such positions.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import GroupTooLarge

TOL = 1e-9
FAMILIES = ("A", "B", "C", "D", "BC", "I2")


def _unit(n, i, scale=1.0):
    v = np.zeros(n)
    v[i] = scale
    return v


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A finite root system, possibly empty or non-reduced.

    Use :func:`build_root_system`, :meth:`from_roots` or :meth:`from_simple`
    rather than the raw constructor; those compute the positive system and
    the reduced/crystallographic flags and validate the axioms.
    """

    ambient_dim: int
    roots: np.ndarray
    simple: tuple
    positive: tuple
    reduced: bool
    crystallographic: bool
    family: str = "custom"
    rank: int = 0

    # -- construction -----------------------------------------------------
    @classmethod
    def from_roots(cls, roots, simple: Sequence[int], ambient_dim: int | None = None,
                   family: str = "custom") -> "RootSystem":
        roots = np.asarray(roots, dtype=float)
        if roots.size == 0:
            if ambient_dim is None:
                raise ValueError("ambient_dim is required for an empty root system")
            roots = np.zeros((0, ambient_dim))
        n = roots.shape[1]
        simple = tuple(int(i) for i in simple)
        coords = _simple_coordinates(roots, roots[list(simple)]) if len(simple) else np.zeros((len(roots), 0))
        positive = tuple(i for i in range(len(roots)) if np.all(coords[i] >= -TOL))
        rs = cls(ambient_dim=n, roots=roots, simple=simple, positive=positive,
                 reduced=_is_reduced(roots), crystallographic=_is_crystallographic(roots),
                 family=family, rank=len(simple))
        rs.validate()
        return rs

    @classmethod
    def from_simple(cls, simple_vectors, cap: int = 1000, family: str = "custom") -> "RootSystem":
        """Generate the (reduced) root system spanned by reflecting the simple roots."""
        simple_vectors = [np.asarray(v, dtype=float) for v in simple_vectors]
        found = list(simple_vectors)
        queue = deque(found)
        while queue:
            beta = queue.popleft()
            for a in simple_vectors:
                img = beta - 2 * (beta @ a) / (a @ a) * a
                if not any(np.allclose(img, g, atol=TOL) for g in found):
                    found.append(img)
                    queue.append(img)
                    if len(found) > cap:
                        raise GroupTooLarge(f"root closure exceeded {cap} roots")
        return cls.from_roots(np.array(found), range(len(simple_vectors)), family=family)

    def validate(self) -> None:
        roots = self.roots
        if np.any(np.linalg.norm(roots, axis=1) < TOL):
            raise ValueError("roots must be nonzero")
        for i in range(len(roots)):
            imgs = reflect(self, i, roots)
            d = np.linalg.norm(imgs[:, None, :] - roots[None, :, :], axis=2).min(axis=1)
            if np.any(d > TOL):
                raise ValueError("root set is not closed under its reflections")
        pos = set(self.positive)
        for i in range(len(roots)):
            j = self.index_of(-roots[i])
            if j is None or ((i in pos) == (j in pos)):
                raise ValueError("roots do not split as positive and negative halves")
        if len(self.simple):
            s = roots[list(self.simple)]
            if np.linalg.matrix_rank(s, tol=1e-8) != len(self.simple):
                raise ValueError("simple roots are not linearly independent")

    # -- queries ----------------------------------------------------------
    def __len__(self):
        return len(self.roots)

    def index_of(self, y, tol: float = TOL):
        if len(self.roots) == 0:
            return None
        d = np.linalg.norm(self.roots - np.asarray(y, dtype=float), axis=1)
        i = int(np.argmin(d))
        return i if d[i] <= tol else None

    @property
    def simple_vectors(self) -> np.ndarray:
        return self.roots[list(self.simple)]

    @property
    def positive_vectors(self) -> np.ndarray:
        return self.roots[list(self.positive)]

    def coroot(self, i: int) -> np.ndarray:
        return coroot_vector(self, i)

    def simple_coordinates(self) -> np.ndarray:
        if not self.simple:
            return np.zeros((len(self.roots), 0))
        return _simple_coordinates(self.roots, self.simple_vectors)

    def theta_roots(self, theta: Iterable[int]) -> tuple:
        """Indices of the roots in ``<theta>``, the integral span of ``theta``."""
        theta = check_theta(self, theta)
        coords = self.simple_coordinates()
        outside = [p for p in range(self.rank) if p not in theta]
        if not outside:
            return tuple(range(len(self.roots)))
        return tuple(i for i in range(len(self.roots)) if np.all(np.abs(coords[i, outside]) < TOL))

    def theta_positive(self, theta) -> tuple:
        inside = set(self.theta_roots(theta))
        return tuple(i for i in self.positive if i in inside)

    def theta_complement(self, theta) -> tuple:
        inside = set(self.theta_roots(theta))
        return tuple(i for i in self.positive if i not in inside)

    def indivisible(self) -> tuple:
        """Indices of roots alpha with alpha/2 not a root."""
        return tuple(i for i in range(len(self.roots)) if self.index_of(self.roots[i] / 2) is None)

    def restrict(self, basis) -> "RootSystem":
        """Express the system in the coordinates of an orthonormal ``basis`` (n x m).

        The basis must span every root; this is how the A_n model in R^{n+1}
        is moved onto its n-dimensional sum-zero hyperplane.
        """
        basis = np.asarray(basis, dtype=float)
        new = self.roots @ basis
        if len(self.roots) and not np.allclose(new @ basis.T, self.roots, atol=1e-9):
            raise ValueError("basis does not span the roots")
        return RootSystem(ambient_dim=basis.shape[1], roots=new, simple=self.simple,
                          positive=self.positive, reduced=self.reduced,
                          crystallographic=self.crystallographic,
                          family=self.family, rank=self.rank)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "root_system",
            "family": self.family,
            "rank": self.rank,
            "ambient_dim": self.ambient_dim,
            "roots": self.roots.tolist(),
            "simple": list(self.simple),
            "positive": list(self.positive),
            "reduced": self.reduced,
            "crystallographic": self.crystallographic,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootSystem":
        return cls.from_roots(data["roots"], data["simple"], ambient_dim=data["ambient_dim"],
                              family=data.get("family", "custom"))


def _simple_coordinates(roots, simple_vectors):
    coeffs, *_ = np.linalg.lstsq(simple_vectors.T, roots.T, rcond=None)
    coeffs = coeffs.T
    if not np.allclose(coeffs @ simple_vectors, roots, atol=1e-8):
        raise ValueError("simple roots do not span the root system")
    return coeffs


def _is_reduced(roots) -> bool:
    for i, a in enumerate(roots):
        for j, b in enumerate(roots):
            if i == j:
                continue
            c = (a @ b) / (a @ a)
            if np.allclose(b, c * a, atol=TOL) and not math.isclose(abs(c), 1.0, abs_tol=TOL):
                return False
    return True


def _is_crystallographic(roots) -> bool:
    if len(roots) == 0:
        return True
    g = roots @ roots.T
    ratios = 2 * g / np.diag(g)[:, None]
    return bool(np.all(np.abs(ratios - np.round(ratios)) < TOL))


def build_root_system(family: str, rank_or_m: int) -> RootSystem:
    """Build one of the standard root systems.

    ``A`` uses the (n+1)-coordinate model with ``alpha_{i,j} = e_i - e_j``;
    ``A`` with rank 0 is the empty system on R^1.  ``I2`` takes the dihedral
    parameter m >= 3 and places the 2m roots at angles k*pi/m.
    """
    family = str(family).upper()
    r = int(rank_or_m)
    pos: list[np.ndarray] = []
    simple: list[np.ndarray] = []
    if family == "A":
        if r < 0:
            raise ValueError("A_n needs n >= 0")
        n = r + 1
        if r == 0:
            return RootSystem.from_roots([], [], ambient_dim=1, family="A")
        pos = [_unit(n, i) - _unit(n, j) for i in range(n) for j in range(i + 1, n)]
        simple = [_unit(n, j) - _unit(n, j + 1) for j in range(r)]
    elif family in ("B", "C", "BC"):
        if r < 1:
            raise ValueError(f"{family}_n needs n >= 1")
        n = r
        pairs = [_unit(n, i) + s * _unit(n, j) for i in range(n) for j in range(i + 1, n) for s in (-1, 1)]
        short = [_unit(n, i) for i in range(n)]
        long_ = [_unit(n, i, 2.0) for i in range(n)]
        pos = pairs + {"B": short, "C": long_, "BC": short + long_}[family]
        simple = [_unit(n, j) - _unit(n, j + 1) for j in range(n - 1)]
        simple.append(_unit(n, n - 1, 2.0) if family == "C" else _unit(n, n - 1))
    elif family == "D":
        if r < 2:
            raise ValueError("D_n needs n >= 2")
        n = r
        pos = [_unit(n, i) + s * _unit(n, j) for i in range(n) for j in range(i + 1, n) for s in (-1, 1)]
        simple = [_unit(n, j) - _unit(n, j + 1) for j in range(n - 1)]
        simple.append(_unit(n, n - 2) + _unit(n, n - 1))
    elif family == "I2":
        m = r
        if m < 3:
            raise ValueError("I2(m) needs m >= 3")
        ang = [k * math.pi / m for k in range(m)]
        pos = [np.array([math.cos(t), math.sin(t)]) for t in ang]
        simple = [pos[0], pos[m - 1]]
    else:
        raise ValueError(f"unsupported root system family {family!r}")
    roots = np.array(pos + [-p for p in pos])
    idx = []
    for s in simple:
        idx.append(int(np.argmin(np.linalg.norm(roots - s, axis=1))))
    rs = RootSystem.from_roots(roots, idx, family=family)
    object.__setattr__(rs, "rank", len(idx))
    return rs


def check_theta(rs: RootSystem, theta) -> tuple:
    if theta is None:
        return tuple(range(rs.rank))
    theta = tuple(sorted({int(t) for t in theta}))
    if any(t < 0 or t >= rs.rank for t in theta):
        raise ValueError(f"theta {theta} is not a subset of the simple system (rank {rs.rank})")
    return theta


def coroot_vector(rs: RootSystem, alpha: int) -> np.ndarray:
    """x_alpha = 2 y_alpha / <y_alpha, y_alpha>."""
    if not 0 <= alpha < len(rs.roots):
        raise IndexError(f"no root with index {alpha}")
    y = rs.roots[alpha]
    return 2 * y / (y @ y)


def reflect(rs: RootSystem, alpha: int, x) -> np.ndarray:
    """r_alpha(x) = x - alpha(x) x_alpha; ``x`` may carry leading batch axes."""
    xa = coroot_vector(rs, alpha)
    x = np.asarray(x, dtype=float)
    return x - (x @ rs.roots[alpha])[..., None] * xa


def reflection_matrix(rs: RootSystem, alpha: int) -> np.ndarray:
    return np.eye(rs.ambient_dim) - np.outer(coroot_vector(rs, alpha), rs.roots[alpha])


# --------------------------------------------------------------------------
# groups

@dataclass(frozen=True, eq=False)
class GroupElement:
    matrix: np.ndarray
    word: tuple = ()

    @property
    def det(self) -> float:
        return float(round(np.linalg.det(self.matrix)))

    @property
    def inverse_matrix(self) -> np.ndarray:
        return self.matrix.T


@dataclass(frozen=True, eq=False)
class CoxeterGroup:
    ambient_dim: int
    elements: tuple
    generator_indices: tuple
    matrices: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.matrices is None:
            mats = np.array([e.matrix for e in self.elements]).reshape(-1, self.ambient_dim, self.ambient_dim)
            object.__setattr__(self, "matrices", mats)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index_of(self, matrix, tol: float = TOL):
        d = np.abs(self.matrices - np.asarray(matrix)).reshape(len(self), -1).max(axis=1)
        i = int(np.argmin(d))
        return i if d[i] <= tol else None

    def contains(self, matrix, tol: float = TOL) -> bool:
        return self.index_of(matrix, tol) is not None

    def is_closed(self, tol: float = TOL) -> bool:
        for a in self.matrices:
            if not self.contains(a.T, tol):
                return False
            for b in self.matrices:
                if not self.contains(a @ b, tol):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "coxeter_group",
            "ambient_dim": self.ambient_dim,
            "order": self.order,
            "generator_indices": list(self.generator_indices),
            "elements": [{"matrix": e.matrix.ravel().tolist(), "word": list(e.word)} for e in self.elements],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterGroup":
        n = data["ambient_dim"]
        elems = tuple(GroupElement(np.array(e["matrix"], dtype=float).reshape(n, n), tuple(e["word"]))
                      for e in data["elements"])
        return cls(ambient_dim=n, elements=elems, generator_indices=tuple(data["generator_indices"]))


def _matrix_key(m: np.ndarray) -> bytes:
    return (np.round(m, 7) + 0.0).tobytes()


def _closure(rs: RootSystem, positions: Sequence[int], cap: int) -> CoxeterGroup:
    n = rs.ambient_dim
    gens = {p: reflection_matrix(rs, rs.simple[p]) for p in positions}
    ident = GroupElement(np.eye(n), ())
    seen = {_matrix_key(ident.matrix): ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for p, s in gens.items():
            m = g.matrix @ s
            key = _matrix_key(m)
            if key in seen:
                continue
            if len(order) >= cap:
                raise GroupTooLarge(f"group closure exceeded cap={cap} elements")
            h = GroupElement(m, g.word + (p,))
            seen[key] = h
            order.append(h)
            queue.append(h)
    return CoxeterGroup(ambient_dim=n, elements=tuple(order), generator_indices=tuple(positions))


def generate_group(rs: RootSystem, cap: int = 10_000) -> CoxeterGroup:
    """Breadth-first closure of the simple reflections."""
    if cap < 1:
        raise ValueError("cap must be positive")
    return _closure(rs, range(rs.rank), cap)


def parabolic_subgroup(rs: RootSystem, group: CoxeterGroup, theta) -> CoxeterGroup:
    theta = check_theta(rs, theta)
    if theta == tuple(range(rs.rank)):
        return group
    return _closure(rs, theta, max(group.order, 1))


# --------------------------------------------------------------------------
# multiplicities and orbits

def root_orbits(rs: RootSystem) -> list:
    """W-orbits of the roots, each a sorted tuple of indices, ordered by first index."""
    left = set(range(len(rs.roots)))
    orbits = []
    while left:
        start = min(left)
        orb = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for s in rs.simple:
                j = rs.index_of(reflect(rs, s, rs.roots[i]))
                if j is not None and j not in orb:
                    orb.add(j)
                    queue.append(j)
        orbits.append(tuple(sorted(orb)))
        left -= orb
    return orbits


@dataclass(frozen=True, eq=False)
class MultiplicityFunction:
    """A W-invariant function on the roots, stored once per orbit."""

    rs: RootSystem
    values: tuple  # one value per entry of root_orbits(rs)

    @classmethod
    def constant(cls, rs: RootSystem, value: float) -> "MultiplicityFunction":
        return cls(rs, tuple(float(value) for _ in root_orbits(rs)))

    @classmethod
    def from_roots(cls, rs: RootSystem, assignment: dict, default: float = 0.0) -> "MultiplicityFunction":
        """Assign values by representative root index; conflicting values on one orbit raise."""
        orbits = root_orbits(rs)
        vals = [None] * len(orbits)
        for idx, v in assignment.items():
            k = next(k for k, o in enumerate(orbits) if idx in o)
            if vals[k] is not None and vals[k] != v:
                raise ValueError(f"multiplicity not constant on orbit {orbits[k]}")
            vals[k] = float(v)
        return cls(rs, tuple(default if v is None else v for v in vals))

    def __call__(self, root_index: int) -> float:
        for k, o in enumerate(root_orbits(self.rs)):
            if root_index in o:
                return self.values[k]
        raise IndexError(root_index)


# --------------------------------------------------------------------------
# cones

@dataclass(frozen=True, eq=False)
class ThetaCone:
    theta: tuple
    strict_inequalities: tuple  # root indices of Sigma+ minus <theta>+
    forms: np.ndarray

    def contains(self, x) -> np.ndarray | bool:
        return in_a_theta(self, x)


def theta_cone(rs: RootSystem, theta) -> ThetaCone:
    theta = check_theta(rs, theta)
    ineq = rs.theta_complement(theta)
    forms = rs.roots[list(ineq)] if ineq else np.zeros((0, rs.ambient_dim))
    return ThetaCone(theta=theta, strict_inequalities=ineq, forms=forms)


def in_a_theta(cone: ThetaCone, x):
    x = np.asarray(x, dtype=float)
    if len(cone.forms) == 0:
        res = np.ones(x.shape[:-1], dtype=bool)
    else:
        res = np.all(x @ cone.forms.T > 0, axis=-1)
    return bool(res) if res.ndim == 0 else res


def fold_into_chamber(rs: RootSystem, x, theta=None, max_steps: int = 10_000) -> np.ndarray:
    """Apply simple reflections from ``theta`` while some alpha_i(x) < 0.

    Returns the W_theta-dominant representative of each point.  This is the
    classical sorting procedure; it terminates because each step shortens the
    group element carrying x to its dominant representative.
    """
    theta = check_theta(rs, theta)
    x = np.array(x, dtype=float, copy=True)
    flat = x.reshape(-1, rs.ambient_dim)
    for _ in range(max_steps):
        changed = False
        for p in theta:
            a = rs.simple[p]
            vals = flat @ rs.roots[a]
            neg = vals < -TOL
            if neg.any():
                flat[neg] = reflect(rs, a, flat[neg])
                changed = True
        if not changed:
            return flat.reshape(x.shape)
    raise RuntimeError("folding did not terminate")


@dataclass
class ConeLemmaReport:
    theta: tuple
    samples: int
    excluded: int
    agreements: int
    disagreements: int
    seed: int
    box: float

    @property
    def agreement_rate(self) -> float:
        used = self.samples - self.excluded
        return self.agreements / used if used else 1.0

    def to_json(self) -> dict:
        return {"theta": list(self.theta), "samples": self.samples, "excluded": self.excluded,
                "agreements": self.agreements, "disagreements": self.disagreements,
                "agreement_rate": self.agreement_rate, "seed": self.seed, "box": self.box}


def check_cone_lemma(rs: RootSystem, group: CoxeterGroup, theta, num_samples: int = 10_000,
                     seed: int = 0, box: float = 5.0, slack: float = TOL) -> ConeLemmaReport:
    """Compare W_theta(closed chamber) with the dual cone C_theta^* on random points.

    Membership on the left is decided by searching the W_theta-orbit of each
    point for an element of the closed fundamental chamber; the right-hand
    side is the list of inequalities alpha(x) >= 0 over Sigma+ minus <theta>+.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    theta = check_theta(rs, theta)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-box, box, size=(num_samples, rs.ambient_dim))
    if len(rs.roots):
        unit = rs.roots / np.linalg.norm(rs.roots, axis=1)[:, None]
        near_wall = np.any(np.abs(x @ unit.T) < slack, axis=1)
    else:
        near_wall = np.zeros(num_samples, dtype=bool)
    sub = parabolic_subgroup(rs, group, theta)
    simple = rs.simple_vectors
    lhs = np.zeros(num_samples, dtype=bool)
    for m in sub.matrices:
        y = x @ m  # rows of w^{-1} x
        lhs |= np.all(y @ simple.T >= -slack, axis=1) if len(simple) else True
    cone = theta_cone(rs, theta)
    rhs = np.all(x @ cone.forms.T >= -slack, axis=1) if len(cone.forms) else np.ones(num_samples, bool)
    keep = ~near_wall
    agree = int(np.sum((lhs == rhs) & keep))
    used = int(keep.sum())
    return ConeLemmaReport(theta=theta, samples=num_samples, excluded=num_samples - used,
                           agreements=agree, disagreements=used - agree, seed=seed, box=box)


# --------------------------------------------------------------------------
# Weyl products

WEYL_KINDS = ("pi", "delta", "delta_complement", "pi_complement", "pi_full", "delta_full")


def weyl_product(rs: RootSystem, theta, kind: str, x):
    """Products of alpha(x) or sinh(alpha(x)) over a set of positive roots.

    kind: ``pi``/``delta`` run over <theta>+, ``*_complement`` over
    Sigma+ minus <theta>+, ``*_full`` over Sigma+.  Empty products are 1.
    """
    if kind not in WEYL_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind.endswith("_full"):
        idx = rs.positive
    elif kind.endswith("_complement"):
        idx = rs.theta_complement(theta)
    else:
        idx = rs.theta_positive(theta)
    x = np.asarray(x, dtype=float)
    vals = x @ rs.roots[list(idx)].T if idx else np.zeros(x.shape[:-1] + (0,))
    if kind.startswith("delta"):
        vals = np.sinh(vals)
    out = np.prod(vals, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# invariance

def symmetrize(group: CoxeterGroup, f: Callable) -> Callable:
    """Return x -> (1/|W|) sum_w f(w^{-1} x) for a vectorized callable ``f``."""
    mats = group.matrices

    def g(x):
        x = np.asarray(x, dtype=float)
        return sum(f(x @ m) for m in mats) / len(mats)

    return g


@dataclass
class EquivarianceReport:
    passed: bool
    max_error: float
    samples: int
    character: str

    def __bool__(self):
        return self.passed


def _character(character: str, m: np.ndarray) -> float:
    if character == "trivial":
        return 1.0
    if character == "sign":
        return float(round(np.linalg.det(m)))
    raise ValueError(f"unknown character {character!r}")


def check_equivariance(group: CoxeterGroup, obj, character: str = "trivial", samples: int = 100,
                       tol: float = 1e-8, seed: int = 0, box: float = 2.0) -> EquivarianceReport:
    """Check w.obj = chi(w) obj on random samples.

    ``obj`` is either a vectorized callable or a differential operator (anything
    with ``apply_expr``).  Operators are tested on random Gaussian-times-linear
    test functions, comparing ``D(w^{-1}.g)(w^{-1}x)`` with ``chi(w) (Dg)(x)``.
    Errors are measured relative to ``max(1, |value|)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rng = np.random.default_rng(seed)
    n = group.ambient_dim
    x = rng.uniform(-box, box, size=(samples, n))
    worst = 0.0
    if hasattr(obj, "apply_expr"):
        from . import expr as E

        for k in range(3):
            c = rng.uniform(-0.5, 0.5, n)
            b = rng.normal(size=n)
            g = E.gaussian(c, 0.8) * (1 + E.linear(b))
            dg = obj.apply_expr(g)(x)
            for m in group.matrices:
                chi = _character(character, m)
                lhs = obj.apply_expr(g.substitute_linear(m))(x @ m)
                err = np.abs(lhs - chi * dg) / np.maximum(1.0, np.abs(dg))
                worst = max(worst, float(np.max(err)))
    else:
        fx = np.asarray(obj(x), dtype=float)
        for m in group.matrices:
            chi = _character(character, m)
            err = np.abs(np.asarray(obj(x @ m)) - chi * fx) / np.maximum(1.0, np.abs(fx))
            worst = max(worst, float(np.max(err)))
    return EquivarianceReport(passed=worst <= tol, max_error=worst, samples=samples, character=character)


def sum_zero_basis(n_plus_1: int) -> np.ndarray:
    """Orthonormal (Helmert) basis of the sum-zero hyperplane of R^{n+1}, as columns."""
    cols = []
    for k in range(1, n_plus_1):
        v = np.zeros(n_plus_1)
        v[:k] = 1.0
        v[k] = -k
        cols.append(v / math.sqrt(k * (k + 1)))
    return np.array(cols).T


def orbit_points(group: CoxeterGroup, points) -> np.ndarray:
    """All images w(p), deduplicated."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    imgs = np.concatenate([pts @ m.T for m in group.matrices])
    keep = []
    for p in imgs:
        if not any(np.allclose(p, q, atol=1e-9) for q in keep):
            keep.append(p)
    return np.array(keep)


__all__ = [
    "RootSystem", "CoxeterGroup", "GroupElement", "MultiplicityFunction", "ThetaCone",
    "ConeLemmaReport", "EquivarianceReport", "build_root_system", "coroot_vector", "reflect",
    "reflection_matrix", "generate_group", "parabolic_subgroup", "root_orbits", "theta_cone",
    "in_a_theta", "fold_into_chamber", "check_cone_lemma", "weyl_product", "symmetrize",
    "check_equivariance", "sum_zero_basis", "orbit_points", "check_theta", "FAMILIES",
]
