"""Strong application of a DiffOp on a uniform tensor grid."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .diffop import DiffOp
from .errors import SingularGridPoint


@dataclass(frozen=True)
class Grid:
    lower: tuple
    upper: tuple
    shape: tuple

    def __post_init__(self):
        if not (len(self.lower) == len(self.upper) == len(self.shape)):
            raise ValueError("lower, upper and shape must have equal length")
        if any(n < 2 for n in self.shape) or any(u <= l for l, u in zip(self.lower, self.upper)):
            raise ValueError("grid needs at least two points and upper > lower on every axis")

    @classmethod
    def centered(cls, extent: float, points: int, dim: int = 1, offset: float = 0.0) -> "Grid":
        """``points`` nodes per axis on [-extent, extent] shifted by ``offset``."""
        return cls(tuple([-extent + offset] * dim), tuple([extent + offset] * dim), tuple([points] * dim))

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def spacing(self) -> tuple:
        return tuple((u - l) / (n - 1) for l, u, n in zip(self.lower, self.upper, self.shape))

    @property
    def h(self) -> float:
        return max(self.spacing)

    def axes(self, pad: int = 0) -> list:
        return [l + h * np.arange(-pad, n + pad) for l, h, n in zip(self.lower, self.spacing, self.shape)]

    def points(self, pad: int = 0) -> np.ndarray:
        """Array of shape ``shape + (dim,)`` (grown by ``pad`` nodes per side)."""
        return np.stack(np.meshgrid(*self.axes(pad), indexing="ij"), axis=-1)

    def to_json(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper), "shape": list(self.shape),
                "spacing": list(self.spacing)}


@dataclass
class Field:
    grid: Grid
    values: np.ndarray

    def to_csv(self, path) -> None:
        pts = self.grid.points().reshape(-1, self.grid.dim)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{j}" for j in range(self.grid.dim)] + ["value"])
            for p, v in zip(pts, self.values.ravel()):
                w.writerow([repr(float(c)) for c in p] + [repr(float(v))])


def fd_weights(derivative: int, halfwidth: int) -> np.ndarray:
    """Central weights on offsets -hw..hw for the given derivative (unit spacing)."""
    k = np.arange(-halfwidth, halfwidth + 1, dtype=float)
    n = len(k)
    V = np.vander(k, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[derivative] = math.factorial(derivative)
    return np.linalg.solve(V, rhs)


def stencil_halfwidth(derivative: int, fd_order: int) -> int:
    if derivative == 0:
        return 0
    return (derivative + 1) // 2 + fd_order // 2 - 1


def _check_singular(D: DiffOp, grid: Grid) -> None:
    forms = D.singular_forms()
    if not forms:
        return
    pts = grid.points().reshape(-1, grid.dim)
    limit = 0.5 * min(grid.spacing) * (1 - 1e-6)
    for u in forms:
        d = float(np.min(np.abs(pts @ u)))
        if d < limit:
            raise SingularGridPoint(f"grid node at distance {d:.3g} from singular hyperplane {u.tolist()}")


def _apply_once(D: DiffOp, F: np.ndarray, grid: Grid, pad: int, fd_order: int, stride: int) -> np.ndarray:
    pts = grid.points()
    out = np.zeros(grid.shape)
    for idx, coeff in D.terms.items():
        arr = F
        for axis, a in enumerate(idx):
            n = grid.shape[axis]
            hw = stencil_halfwidth(a, fd_order)
            w = fd_weights(a, hw) / (stride * grid.spacing[axis]) ** a if a else np.ones(1)
            acc = 0.0
            for k, wk in zip(range(-hw, hw + 1), w):
                sl = [slice(None)] * arr.ndim
                start = pad + k * stride
                sl[axis] = slice(start, start + n)
                acc = acc + wk * arr[tuple(sl)]
            arr = acc
        out += coeff(pts) * arr
    return out


def apply_grid(D: DiffOp, f, grid: Grid, fd_order: int = 4, richardson: bool = False) -> Field:
    """Central finite differences of ``D f`` at every grid node.

    ``f`` is a vectorized callable taking points of shape (..., dim).  It is
    sampled on a padded grid so stencils never need one-sided formulas.  With
    ``richardson`` the result is extrapolated from spacings h and 2h.
    """
    if fd_order not in (2, 4):
        raise ValueError("fd_order must be 2 or 4")
    if D.dim != grid.dim:
        raise ValueError("operator and grid dimensions differ")
    _check_singular(D, grid)
    stride = 2 if richardson else 1
    hw = max((stencil_halfwidth(a, fd_order) for idx in D.terms for a in idx), default=0)
    pad = hw * stride
    F = np.asarray(f(grid.points(pad)), dtype=float)
    val = _apply_once(D, F, grid, pad, fd_order, 1)
    if richardson:
        coarse = _apply_once(D, F, grid, pad, fd_order, 2)
        val = (2 ** fd_order * val - coarse) / (2 ** fd_order - 1)
    return Field(grid, val)


def sample(f, grid: Grid) -> Field:
    return Field(grid, np.asarray(f(grid.points()), dtype=float))
