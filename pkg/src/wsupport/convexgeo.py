"""Convex bodies in vertex form, support functions and separating functionals.

A :class:`ConvexBody` is the convex hull of its vertices, optionally thickened
by a closed ball of radius ``eps`` (the Minkowski sum ``C + B_eps``).  Most
questions about bodies are answered through the support function
``h(lam) = max_v <v, lam> + eps * |lam|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls
from scipy.spatial import ConvexHull, QhullError

from .errors import (GenericityFailure, NoExteriorPoint, NotInvariant, PointInsideBody)

SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class ConvexBody:
    vertices: np.ndarray
    eps: float = 0.0
    notes: tuple = field(default=())

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if v.size == 0:
            raise ValueError("a convex body needs at least one vertex")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        object.__setattr__(self, "vertices", v)

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def support(self, lam):
        return support_function(self, lam)

    def distance(self, y) -> float:
        return max(0.0, _distance_to_hull(self.vertices, np.asarray(y, dtype=float))[0] - self.eps)

    def contains(self, y, tol: float = SLACK) -> bool:
        return self.distance(y) <= tol

    def interval(self) -> tuple:
        """(lo, hi) of a 1-D body."""
        if self.ambient_dim != 1:
            raise ValueError("interval() is for 1-D bodies")
        return float(self.vertices.min() - self.eps), float(self.vertices.max() + self.eps)

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist(), "eps": self.eps}

    @classmethod
    def from_json(cls, data: dict) -> "ConvexBody":
        return cls(np.array(data["vertices"], dtype=float), float(data.get("eps", 0.0)))


# --------------------------------------------------------------------------
# hulls

def _monotone_chain(p: np.ndarray) -> np.ndarray:
    """Counter-clockwise hull vertices (a subset of the input rows).

    Orientation is the plain sign of the cross product: any tolerance there
    can discard a far endpoint of an almost vertical chord.
    """
    pts = sorted(set(map(tuple, p)))
    if len(pts) <= 2:
        return np.array(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    for q in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return np.array(lower[:-1] + upper[:-1])


def _affine_reduce(p: np.ndarray):
    """Return (origin, basis, coords) with basis spanning the affine hull of p."""
    origin = p.mean(axis=0)
    q = p - origin
    scale = max(1.0, float(np.abs(q).max()))
    _, s, vt = np.linalg.svd(q, full_matrices=False)
    k = int(np.sum(s > 1e-10 * scale))
    basis = vt[:k].T
    return origin, basis, q @ basis


def _reduced_hull(p, origin, basis, coords) -> ConvexBody:
    """Hull of points spanning a lower-dimensional affine subspace; vertices are input points."""
    if basis.shape[1] == 0:
        return ConvexBody(p[:1])
    sub = convex_hull(coords).vertices
    keep = [int(np.argmin(np.linalg.norm(coords - v, axis=1))) for v in sub]
    return ConvexBody(p[sorted(set(keep))])


def convex_hull(points) -> ConvexBody:
    """Extreme points of a finite set (exact in dims 1-3, all points above that)."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    if p.size == 0:
        raise ValueError("convex_hull needs at least one point")
    n = p.shape[1]
    if n == 1:
        lo, hi = p.min(), p.max()
        return ConvexBody(np.array([[lo]] if lo == hi else [[lo], [hi]]))
    if n == 2:
        origin, basis, coords = _affine_reduce(p)
        if basis.shape[1] < 2:
            return _reduced_hull(p, origin, basis, coords)
        h = _monotone_chain(p)
        if len(h) == 0:
            h = p[:1]
        return ConvexBody(h)
    if n == 3:
        origin, basis, coords = _affine_reduce(p)
        if basis.shape[1] < 3:
            return _reduced_hull(p, origin, basis, coords)
        try:
            hull = ConvexHull(p)
        except QhullError:
            return ConvexBody(np.unique(p, axis=0))
        return ConvexBody(p[np.sort(hull.vertices)])
    return ConvexBody(np.unique(p, axis=0), notes=("support-function mode",))


def support_function(body: ConvexBody, lam):
    """``max_v <v, lam> + eps |lam|``; ``lam`` may be a batch of shape (..., n)."""
    lam = np.asarray(lam, dtype=float)
    val = np.max(lam @ body.vertices.T, axis=-1)
    if body.eps:
        val = val + body.eps * np.linalg.norm(lam, axis=-1)
    return float(val) if np.ndim(val) == 0 else val


def minkowski_sum(a: ConvexBody, b: ConvexBody) -> ConvexBody:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("dimension mismatch")
    pts = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.ambient_dim)
    return ConvexBody(convex_hull(pts).vertices, a.eps + b.eps)


def eps_neighborhood(body: ConvexBody, eps: float) -> ConvexBody:
    if eps <= 0:
        raise ValueError("eps must be positive")
    notes = body.notes
    if len(body.vertices) <= body.ambient_dim:
        notes = notes + ("core has empty interior",)
    return ConvexBody(body.vertices, body.eps + eps, notes)


def orbit_hull(group, points) -> ConvexBody:
    """Hull of the orbit of ``points`` under a group (a W-invariant polytope)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    imgs = np.concatenate([pts @ m.T for m in group.matrices])
    return convex_hull(imgs)


# --------------------------------------------------------------------------
# projections and separation

def _project_simplex_weights(V: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Closest point of conv(V) to y via non-negative least squares.

    The affine constraint sum(w) = 1 is enforced by a heavily weighted extra row.
    """
    scale = max(1.0, float(np.abs(V).max()), float(np.abs(y).max()))
    big = 1e4 * scale
    A = np.vstack([V.T, big * np.ones(len(V))])
    b = np.concatenate([y, [big]])
    w, _ = nnls(A, b, maxiter=50 * A.shape[1])
    w = w / w.sum()
    return w @ V


def _distance_to_hull(V: np.ndarray, y: np.ndarray):
    """Return (distance, closest point) from y to conv(V)."""
    n = V.shape[1]
    if len(V) == 1:
        return float(np.linalg.norm(y - V[0])), V[0].copy()
    if n == 1:
        lo, hi = V.min(), V.max()
        p = np.array([min(max(y[0], lo), hi)])
        return float(abs(y[0] - p[0])), p
    if n == 2:
        hull = _monotone_chain(V)
        if len(hull) >= 3:
            e = np.roll(hull, -1, axis=0) - hull
            r = y - hull
            if np.all(e[:, 0] * r[:, 1] - e[:, 1] * r[:, 0] >= -1e-15):
                return 0.0, y.copy()
        segs = [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]
        best = (math.inf, None)
        for a, b in segs:
            d = b - a
            t = 0.0 if d @ d == 0 else min(1.0, max(0.0, (y - a) @ d / (d @ d)))
            q = a + t * d
            dist = float(np.linalg.norm(y - q))
            if dist < best[0]:
                best = (dist, q)
        return best
    p = _project_simplex_weights(V, y)
    return float(np.linalg.norm(y - p)), p


def distance(body: ConvexBody, y) -> float:
    return body.distance(y)


def distances(body: ConvexBody, pts) -> np.ndarray:
    """Vectorized distance from each row of ``pts`` (shape (..., n)) to the body."""
    pts = np.asarray(pts, dtype=float)
    shape = pts.shape[:-1]
    q = pts.reshape(-1, body.ambient_dim)
    V = body.vertices
    if body.ambient_dim == 1:
        d = np.maximum(V.min() - q[:, 0], 0) + np.maximum(q[:, 0] - V.max(), 0)
    elif body.ambient_dim == 2:
        hull = _monotone_chain(V)
        if len(hull) == 1:
            d = np.linalg.norm(q - hull[0], axis=1)
        else:
            d = np.full(len(q), np.inf)
            inside = np.ones(len(q), dtype=bool) if len(hull) >= 3 else np.zeros(len(q), dtype=bool)
            for i in range(len(hull)):
                a, b = hull[i], hull[(i + 1) % len(hull)]
                e = b - a
                r = q - a
                if len(hull) >= 3:
                    inside &= e[0] * r[:, 1] - e[1] * r[:, 0] >= -1e-15
                t = np.clip(r @ e / (e @ e), 0.0, 1.0)
                d = np.minimum(d, np.linalg.norm(r - t[:, None] * e, axis=1))
            d[inside] = 0.0
    else:
        d = np.array([_distance_to_hull(V, y)[0] for y in q])
    return np.maximum(d - body.eps, 0.0).reshape(shape)


def separating_functional(y0, body: ConvexBody) -> np.ndarray:
    """Unit covector lam with ``h_C(lam) < lam(y0)`` (the projection direction)."""
    y0 = np.asarray(y0, dtype=float)
    d, p = _distance_to_hull(body.vertices, y0)
    if d - body.eps <= SLACK:
        raise PointInsideBody("point lies in the body; no separating functional")
    return (y0 - p) / d


@dataclass
class ContactPair:
    x0: np.ndarray
    lambda0: np.ndarray
    y0: np.ndarray
    certificate: dict
    perturbations: int

    def to_json(self) -> dict:
        cert = {k: (None if not math.isfinite(v) else v) for k, v in self.certificate.items()}
        return {"x0": self.x0.tolist(), "lambda0": self.lambda0.tolist(), "y0": self.y0.tolist(),
                "certificate": cert, "perturbations": self.perturbations}


def _genericity(lam, coroots, p) -> tuple:
    nl = float(np.linalg.norm(lam))
    pair = math.inf
    if len(coroots):
        pair = float(np.min(np.abs(coroots @ lam) / (np.linalg.norm(coroots, axis=1) * nl)))
    pv = math.inf
    deg = 0
    if p is not None:
        deg = getattr(p, "degree", 0)
        pv = abs(float(p(lam))) / nl ** deg
    return pair, pv


def select_contact_pair(S, body: ConvexBody, rs=None, p=None, max_perturbations: int = 100,
                        seed: int = 0, margin: float = 1e-6) -> ContactPair:
    """Pick (x0, lam0) with lam0 separating ``S`` from ``body`` and root-generic.

    y0 is the point of S farthest from the body; lam0 starts as the projection
    direction and is perturbed inside the open set of separating covectors
    until ``p(lam0)`` and every ``lam0(x_alpha)`` clear the relative margin.
    x0 maximizes lam0 over S.
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    d = np.array([body.distance(s) for s in S])
    if not np.any(d > SLACK):
        raise NoExteriorPoint("every point of S lies in the body")
    y0 = S[int(np.argmax(d))]
    lam = separating_functional(y0, body)
    coroots = np.zeros((0, S.shape[1]))
    if rs is not None and len(rs.roots):
        coroots = np.array([2 * y / (y @ y) for y in rs.roots])
    rng = np.random.default_rng(seed)
    radius = float(np.max(np.linalg.norm(body.vertices, axis=1))) + body.eps + float(np.linalg.norm(y0))
    tries = 0
    base = lam
    while True:
        pair, pv = _genericity(lam, coroots, p)
        separated = lam @ y0 - support_function(body, lam) > 0
        if separated and pair > margin and pv > margin:
            break
        if tries >= max_perturbations:
            raise GenericityFailure(f"no generic separating covector after {tries} perturbations")
        tries += 1
        slack = base @ y0 - support_function(body, base)
        g = rng.normal(size=base.shape)
        g /= np.linalg.norm(g)
        lam = base + rng.uniform(0.1, 0.5) * slack / (radius + 1e-12) * g
    lam = lam / np.linalg.norm(lam)
    vals = S @ lam
    x0 = S[int(np.argmax(vals))]
    cert = {
        "lambda0_x0": float(lam @ x0),
        "max_over_C": float(support_function(body, lam)),
        "min_root_pairing": float(np.min(np.abs(coroots @ lam))) if len(coroots) else math.inf,
        "abs_p": abs(float(p(lam))) if p is not None else math.inf,
    }
    return ContactPair(x0=x0, lambda0=lam, y0=y0, certificate=cert, perturbations=tries)


# --------------------------------------------------------------------------
# comparisons

def unit_directions(dim: int, count: int | None = None, seed: int = 0) -> np.ndarray:
    """Deterministic direction sets: +-1 in 1-D, equal angles in 2-D, Fibonacci in 3-D."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        count = 720 if count is None else count
        t = 2 * math.pi * np.arange(count) / count
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    count = 2000 if count is None else count
    if dim == 3:
        i = np.arange(count) + 0.5
        z = 1 - 2 * i / count
        r = np.sqrt(1 - z * z)
        phi = math.pi * (3 - math.sqrt(5)) * i
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    g = np.random.default_rng(seed).normal(size=(count, dim))
    return g / np.linalg.norm(g, axis=1)[:, None]


def hausdorff(a: ConvexBody, b: ConvexBody, directions: int | None = None, seed: int = 0) -> float:
    """``max |h_A - h_B|`` over sampled unit directions (exact in 1-D)."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("dimension mismatch")
    if directions is not None and directions < 20 and a.ambient_dim > 1:
        raise ValueError("need at least 20 directions")
    u = unit_directions(a.ambient_dim, directions, seed)
    return float(np.max(np.abs(support_function(a, u) - support_function(b, u))))


def is_invariant_body(body: ConvexBody, group, tol: float = 1e-9, samples: int = 200, seed: int = 0) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam = np.random.default_rng(seed).normal(size=(samples, body.ambient_dim))
    h = support_function(body, lam)
    for m in group.matrices:
        if np.any(np.abs(support_function(body, lam @ m) - h) > tol * np.maximum(1.0, np.abs(h))):
            return False
    return True


@dataclass
class TangencyReport:
    max_abs_cos: float
    points_checked: int
    vacuous: bool
    passed: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _boundary_along(body: ConvexBody, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    lo, hi = 0.0, 1.0
    while body.distance(c + hi * d) <= 0:
        hi *= 2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if body.distance(c + mid * d) > 0:
            hi = mid
        else:
            lo = mid
    return c + 0.5 * (lo + hi) * d


def tangency_check(body: ConvexBody, rs, group, wall_samples: int = 32, seed: int = 0,
                   step: float = 1e-6, tol: float = 1e-3) -> TangencyReport:
    """Check that x_alpha is tangent to the boundary at boundary points on ker alpha.

    Boundary points are found by bisection along rays from the centroid (a
    fixed point of the group) inside each wall; the outward normal is the
    central finite-difference gradient of the distance to the body's core.
    """
    if body.eps <= 0:
        raise ValueError("tangency needs a smoothed body (eps > 0)")
    if not is_invariant_body(body, group, tol=1e-7):
        raise NotInvariant("body is not invariant under the group")
    n = body.ambient_dim
    core = ConvexBody(body.vertices)
    c = body.centroid
    rng = np.random.default_rng(seed)
    worst, count = 0.0, 0
    for i in rs.positive:
        y = rs.roots[i]
        xa = 2 * y / (y @ y)
        if n == 1:
            continue
        proj = np.eye(n) - np.outer(y, y) / (y @ y)
        if n == 2:
            t = proj @ np.array([-y[1], y[0]])
            dirs = [t, -t]
        else:
            dirs = [proj @ g for g in rng.normal(size=(wall_samples, n))]
        for d in dirs:
            if np.linalg.norm(d) < 1e-12:
                continue
            d = d / np.linalg.norm(d)
            x = _boundary_along(body, c, d)
            if abs(x @ y) > 1e-6 * max(1.0, np.linalg.norm(x)):
                continue
            grad = np.array([(core.distance(x + step * e) - core.distance(x - step * e)) / (2 * step)
                             for e in np.eye(n)])
            cos = abs(grad @ xa) / (np.linalg.norm(grad) * np.linalg.norm(xa))
            worst = max(worst, float(cos))
            count += 1
    return TangencyReport(max_abs_cos=worst, points_checked=count, vacuous=count == 0,
                          passed=worst < tol)
