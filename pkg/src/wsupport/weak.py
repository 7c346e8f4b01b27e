"""Weak (distributional) application of operators to piecewise densities.

``<D u, phi>`` is computed as ``<u, D^t phi>`` by composite Gauss quadrature
over the pieces of ``u`` intersected with the support of ``phi``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from . import expr as E
from .convexgeo import ConvexBody
from .diffop import DiffOp
from .errors import QuadratureError

GAUSS_POINTS = 16


@dataclass(frozen=True)
class Box:
    lower: tuple
    upper: tuple

    @property
    def dim(self) -> int:
        return len(self.lower)


def _region_box(region) -> Box:
    if isinstance(region, Box):
        return region
    if isinstance(region, ConvexBody):
        if region.ambient_dim != 1 or region.eps:
            raise ValueError("only 1-D unsmoothed ConvexBody regions are supported; use Box otherwise")
        lo, hi = region.interval()
        return Box((lo,), (hi,))
    raise TypeError(f"unsupported region {region!r}")


class PiecewiseDensity:
    """``u = sum_k density_k * indicator(region_k)`` with bounded boxes/intervals."""

    def __init__(self, pieces):
        self.pieces = [(_region_box(r), d if callable(d) else E.as_expr(d)) for r, d in pieces]
        if not self.pieces:
            raise ValueError("a density needs at least one piece")
        dims = {b.dim for b, _ in self.pieces}
        if len(dims) != 1:
            raise ValueError("pieces have different dimensions")
        self.dim = dims.pop()

    @classmethod
    def indicator(cls, lower, upper) -> "PiecewiseDensity":
        lower = tuple(np.atleast_1d(lower).astype(float))
        upper = tuple(np.atleast_1d(upper).astype(float))
        return cls([(Box(lower, upper), E.const(1.0))])


# --------------------------------------------------------------------------
# test functions

@lru_cache(maxsize=None)
def _bump_numerators(k: int) -> tuple:
    """P_k with b^(k)(t) = P_k(t) / (1 - t^2)^(2k) * b(t) for b = exp(-1/(1-t^2))."""
    polys = [Polynomial([1.0])]
    one_minus = Polynomial([1.0, 0.0, -1.0])
    t = Polynomial([0.0, 1.0])
    for j in range(k):
        P = polys[-1]
        polys.append(P.deriv() * one_minus ** 2 + 4 * j * t * P * one_minus - 2 * t * P)
    return tuple(polys)


def bump_1d(t, derivative: int = 0) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    s = 1 - t[inside] ** 2
    b = np.exp(-1 / s)
    P = _bump_numerators(derivative)[derivative]
    out[inside] = P(t[inside]) / s ** (2 * derivative) * b
    return out


class CompactBump:
    """Product bump ``prod_j b((x_j - c_j) / r)`` supported in the cube of half-width r."""

    def __init__(self, center, radius: float):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def support_box(self) -> Box:
        return Box(tuple(self.center - self.radius), tuple(self.center + self.radius))

    def derivative(self, index, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = (x - self.center) / self.radius
        out = np.ones(x.shape[:-1])
        for j, k in enumerate(index):
            out = out * bump_1d(t[..., j], k) / self.radius ** k
        return out

    def __call__(self, x):
        return self.derivative((0,) * self.dim, x)


class ExprFunction:
    """A test function given by an Expr (e.g. a Gaussian); support box optional."""

    def __init__(self, e: E.Expr, dim: int, box: Box | None = None):
        self.expr = e
        self.dim = dim
        self.box = box

    def support_box(self):
        return self.box

    def derivative(self, index, x):
        return self.expr.diff_multi(index)(x)

    def __call__(self, x):
        return self.expr(x)


def apply_transpose(D: DiffOp, phi, x, Dt: DiffOp | None = None) -> np.ndarray:
    """Evaluate ``(D^t phi)(x)`` from the derivatives of ``phi``."""
    Dt = D.transpose() if Dt is None else Dt
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1])
    for idx, coeff in Dt.terms.items():
        out = out + coeff(x) * phi.derivative(idx, x)
    return out


# --------------------------------------------------------------------------
# quadrature

def gauss_box(box: Box, panels: int, npts: int = GAUSS_POINTS):
    """Tensor composite Gauss-Legendre nodes and weights on a box."""
    g, w = np.polynomial.legendre.leggauss(npts)
    axes, wts = [], []
    for lo, hi in zip(box.lower, box.upper):
        edges = np.linspace(lo, hi, panels + 1)
        half = np.diff(edges) / 2
        mid = (edges[:-1] + edges[1:]) / 2
        axes.append((mid[:, None] + half[:, None] * g[None, :]).ravel())
        wts.append((half[:, None] * w[None, :]).ravel())
    X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, box.dim)
    W = np.ones(1)
    for wt in wts:
        W = np.multiply.outer(W, wt).ravel()
    return X, W


def _intersect(a: Box, b: Box | None):
    if b is None:
        return a
    lo = tuple(max(x, y) for x, y in zip(a.lower, b.lower))
    hi = tuple(min(x, y) for x, y in zip(a.upper, b.upper))
    if any(h <= l for l, h in zip(lo, hi)):
        return None
    return Box(lo, hi)


def integrate(f, u: PiecewiseDensity, window: Box | None = None, panels: int = 4,
              max_panels: int = 256) -> float:
    """``int u * f`` by composite 16-point Gauss, doubling panels until two levels agree."""
    def once(p):
        total = 0.0
        for region, dens in u.pieces:
            box = _intersect(region, window)
            if box is None:
                continue
            X, W = gauss_box(box, p)
            total += float(np.sum(W * dens(X) * f(X)))
        return total

    coarse = once(panels)
    while True:
        panels *= 2
        fine = once(panels)
        if abs(coarse - fine) <= 1e-8 * max(1.0, abs(fine)):
            return fine
        if panels >= max_panels:
            raise QuadratureError(f"quadrature refinement disagrees: {coarse!r} vs {fine!r}")
        coarse = fine


def weak_apply(D: DiffOp, u: PiecewiseDensity, phi, panels: int = 4, Dt: DiffOp | None = None) -> float:
    """``<D u, phi> = <u, D^t phi>``."""
    if D.dim != u.dim:
        raise ValueError("operator and density dimensions differ")
    Dt = D.transpose() if Dt is None else Dt
    return integrate(lambda x: apply_transpose(D, phi, x, Dt), u, phi.support_box(), panels)


@dataclass
class ScanResult:
    centers: np.ndarray
    values: np.ndarray
    flagged: np.ndarray
    probe_width: float
    rel_threshold: float

    def flagged_centers(self) -> np.ndarray:
        return self.centers[self.flagged]

    def hull(self):
        """(min, max) of flagged 1-D centers, or None when nothing is flagged."""
        c = self.flagged_centers()
        if c.size == 0:
            return None
        c = c.reshape(len(c), -1)
        return c.min(axis=0), c.max(axis=0)


def distr_support_scan(D: DiffOp, u: PiecewiseDensity, eps: float, centers,
                       rel_threshold: float = 1e-8) -> ScanResult:
    """Flag bump centers c where ``|<D u, phi_c>| > rel_threshold * max``."""
    if eps <= 0:
        raise ValueError("probe width must be positive")
    centers = np.asarray(centers, dtype=float)
    pts = centers.reshape(len(centers), -1)
    Dt = D.transpose()
    vals = np.array([weak_apply(D, u, CompactBump(c, eps), Dt=Dt) for c in pts])
    peak = float(np.max(np.abs(vals))) if vals.size else 0.0
    flagged = np.abs(vals) > rel_threshold * peak if peak > 1e-300 else np.zeros(len(vals), bool)
    return ScanResult(centers=centers, values=vals, flagged=flagged, probe_width=eps,
                      rel_threshold=rel_threshold)
