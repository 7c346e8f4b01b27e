"""Support-hull harness: bumps with invariant hulls, Df on a grid, hull comparison.

The named scenarios in :data:`SCENARIOS` bundle an operator, a grid and one
or more bump specifications; :func:`run_scenario` returns JSON-ready reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial import cKDTree

from . import catalog as C
from .convexgeo import ConvexBody, convex_hull, distances, hausdorff, is_invariant_body, orbit_hull
from .diffop import DiffOp
from .errors import BodyNotInRegion, BodyNotInvariant, ConfigError, UnknownScenario
from .gridops import Grid, apply_grid, sample
from .rootsys import (CoxeterGroup, RootSystem, ThetaCone, build_root_system, generate_group,
                      parabolic_subgroup, sum_zero_basis, theta_cone)
from .weak import PiecewiseDensity, distr_support_scan

SCHEMA_VERSION = 1


# --------------------------------------------------------------------------
# bumps

def _phi(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    with np.errstate(over="ignore"):  # subnormal s: exp(-inf) = 0 is the right value
        out[pos] = np.exp(-1.0 / s[pos])
    return out


def plateau(t):
    """Smooth step: 1 for t <= 0, 0 for t >= 1, all derivatives flat at both ends."""
    a = _phi(1.0 - np.asarray(t, dtype=float))
    b = _phi(np.asarray(t, dtype=float))
    return a / (a + b)


@dataclass
class BumpSpec:
    """Bump equal to 1 on ``core`` and vanishing outside ``core + B_eps``.

    In ``hull-only`` mode the bump is a weighted sum of plateau bumps over
    ``pieces`` (default: the distinct group images of the core); its support
    can be disconnected and the function itself is not invariant, but the
    hull of its support is.
    """

    core: ConvexBody
    eps: float
    mode: str = "symmetric"
    pieces: tuple = ()
    cone: ThetaCone | None = None

    def hull(self, group: CoxeterGroup | None = None) -> ConvexBody:
        pieces = self.pieces
        if self.mode == "hull-only" and not pieces and group is not None:
            pieces = _distinct_images(self.core, group)
        if self.mode == "hull-only" and pieces:
            return ConvexBody(convex_hull(np.concatenate([p.vertices for p in pieces])).vertices, self.eps)
        return ConvexBody(self.core.vertices, self.eps)


def _distinct_images(core: ConvexBody, group: CoxeterGroup) -> tuple:
    out = []
    for m in group.matrices:
        v = core.vertices @ m.T
        body = convex_hull(v)
        if not any(_same_body(body, b) for b in out):
            out.append(body)
    return tuple(out)


def _same_body(a: ConvexBody, b: ConvexBody) -> bool:
    return a.vertices.shape == b.vertices.shape and hausdorff(a, b) < 1e-9


def make_bump(spec: BumpSpec, group: CoxeterGroup | None = None):
    """Vectorized bump function for ``spec``; checks region and hull invariance."""
    if spec.eps <= 0:
        raise ValueError("eps must be positive")
    if spec.mode not in ("symmetric", "hull-only"):
        raise ValueError(f"unknown bump mode {spec.mode!r}")
    hull = spec.hull(group)
    if spec.cone is not None and len(spec.cone.forms):
        lows = -np.array([hull.support(-y) for y in spec.cone.forms])
        if np.any(lows <= 0):
            raise BodyNotInRegion("core + B_eps leaves the region a_theta")
    if group is not None and not is_invariant_body(hull, group, tol=1e-9):
        raise BodyNotInvariant("hull of the bump support is not invariant")
    eps = spec.eps
    if spec.mode == "symmetric":
        core = spec.core

        def f(x):
            return plateau(distances(core, x) / eps)

        if group is not None and group.order > 1:
            mats = group.matrices

            def g(x):
                x = np.asarray(x, dtype=float)
                return sum(f(x @ m) for m in mats) / len(mats)
            return g
        return f
    pieces = spec.pieces or (_distinct_images(spec.core, group) if group is not None else (spec.core,))
    K = len(pieces)

    def h(x):
        return sum((1 + k / K) * plateau(distances(p, x) / eps) for k, p in enumerate(pieces))
    return h


# --------------------------------------------------------------------------
# support estimation

def estimate_support(field_, rel_threshold: float = 1e-8) -> np.ndarray:
    """Grid points where |value| > rel_threshold * max|value| (shape (k, dim))."""
    if not 0 < rel_threshold < 1:
        raise ValueError("rel_threshold must lie in (0, 1)")
    v = np.abs(field_.values)
    peak = float(v.max()) if v.size else 0.0
    if peak < 1e-300:
        return np.zeros((0, field_.grid.dim))
    mask = v > rel_threshold * peak
    return field_.grid.points()[mask]


def _hull_of_grid_points(pts: np.ndarray) -> ConvexBody | None:
    if len(pts) == 0:
        return None
    if pts.shape[1] == 2:
        # only the extreme point of each grid row can be a hull vertex
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        p = pts[order]
        _, first = np.unique(p[:, 0], return_index=True)
        last = np.r_[first[1:] - 1, len(p) - 1]
        pts = np.concatenate([p[first], p[last]])
    return convex_hull(pts)


@dataclass
class SupportReport:
    operator: str
    case: str
    grid: dict
    threshold: float
    fd_order: int
    eps: float
    hull_f: ConvexBody | None
    hull_Df: ConvexBody | None
    hausdorff_distance: float
    budget: float
    verdict: bool
    locality_ok: bool
    directions: int
    seed: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def hull(b):
            return None if b is None else b.vertices.tolist()
        d = self.hausdorff_distance
        return {
            "schema_version": SCHEMA_VERSION,
            "operator": self.operator,
            "case": self.case,
            "grid": self.grid,
            "threshold": self.threshold,
            "fd_order": self.fd_order,
            "eps": self.eps,
            "hull_f": hull(self.hull_f),
            "hull_Df": hull(self.hull_Df),
            "hausdorff": d if math.isfinite(d) else None,
            "budget": self.budget,
            "verdict": "pass" if self.verdict else "fail",
            "locality": "pass" if self.locality_ok else "fail",
            "directions": self.directions,
            "seed": self.seed,
            **self.extra,
        }


def support_check(D: DiffOp, spec: BumpSpec, grid: Grid, group: CoxeterGroup | None = None,
                  fd_order: int = 4, rel_threshold: float = 1e-8, seed: int = 0,
                  directions: int | None = None, case: str = "", richardson: bool = False) -> SupportReport:
    """Compare conv supp f with conv supp Df on ``grid``.

    The verdict passes iff the sampled Hausdorff distance of the two hulls is
    within ``2h + eps + (fd_order/2) h``.  Locality (every flagged Df node
    lies within the stencil reach of a node where f is nonzero) is reported
    separately.
    """
    f = make_bump(spec, group)
    F = sample(f, grid)
    DF = apply_grid(D, f, grid, fd_order=fd_order, richardson=richardson)
    sf = estimate_support(F, rel_threshold)
    sd = estimate_support(DF, rel_threshold)
    hf = _hull_of_grid_points(sf)
    hd = _hull_of_grid_points(sd)
    h = grid.h
    reach = (fd_order // 2) * h * (2 if richardson else 1)
    budget = 2 * h + spec.eps + (fd_order / 2) * h
    if hf is None or hd is None:
        dist = math.inf
        local = hd is None
    else:
        dist = hausdorff(hf, hd, directions, seed)
        # locality is about the exact zero set of f, not its thresholded support
        nonzero = grid.points()[F.values != 0]
        gap, _ = cKDTree(nonzero).query(sd, p=np.inf)
        local = bool(np.all(gap <= reach + 1e-9 * max(1.0, h)))
    ndir = 2 if grid.dim == 1 else (directions or (720 if grid.dim == 2 else 2000))
    return SupportReport(operator=D.name, case=case, grid=grid.to_json(), threshold=rel_threshold,
                         fd_order=fd_order, eps=spec.eps, hull_f=hf, hull_Df=hd, hausdorff_distance=dist,
                         budget=budget, verdict=bool(dist <= budget), locality_ok=local,
                         directions=ndir, seed=seed)


# --------------------------------------------------------------------------
# the distributional counterexample

@dataclass
class CounterexampleReport:
    eps_probe: float
    centers: int
    hull_Du: tuple | None
    hull_u: tuple | None
    hausdorff: float
    hull_differs: bool
    verdict: bool
    operator: str = "xdx"

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "operator": self.operator, "case": "indicator[0,1]",
                "eps_probe": self.eps_probe, "centers": self.centers,
                "hull_Du": None if self.hull_Du is None else list(self.hull_Du),
                "hull_u": None if self.hull_u is None else list(self.hull_u),
                "hausdorff": self.hausdorff, "hull_differs": self.hull_differs,
                "verdict": "pass" if self.verdict else "fail"}


def _interval(scan):
    h = scan.hull()
    return None if h is None else (float(h[0][0]), float(h[1][0]))


def counterexample_demo(eps_probe: float = 0.05, centers=None, rel_threshold: float = 1e-8,
                        operator: DiffOp | None = None, u: PiecewiseDensity | None = None) -> CounterexampleReport:
    """Scan D u and u for D = x d/dx, u = indicator of [0, 1].

    Passes when hull(D u) sits inside [1 - eps, 1 + eps] while hull(u) is
    (up to the probe width) [0, 1]: the two hulls differ.
    """
    if centers is None:
        centers = np.linspace(-0.5, 1.5, 401)
    centers = np.asarray(centers, dtype=float)
    D = operator if operator is not None else C.xdx()
    u = u if u is not None else PiecewiseDensity.indicator(0.0, 1.0)
    scan_du = distr_support_scan(D, u, eps_probe, centers, rel_threshold)
    scan_u = distr_support_scan(DiffOp.identity(1), u, eps_probe, centers, rel_threshold)
    hd, hu = _interval(scan_du), _interval(scan_u)
    if hd is None or hu is None:
        dist = math.inf
    else:
        dist = max(abs(hd[0] - hu[0]), abs(hd[1] - hu[1]))
    differs = dist >= 0.9
    inside = hd is not None and 1 - eps_probe <= hd[0] and hd[1] <= 1 + eps_probe
    return CounterexampleReport(eps_probe=eps_probe, centers=len(centers), hull_Du=hd, hull_u=hu,
                                hausdorff=float(dist), hull_differs=differs, verdict=bool(differs and inside),
                                operator=D.name)


# --------------------------------------------------------------------------
# scenarios

DEFAULTS_1D = {"points": 2001, "extent": 5.0, "eps": 0.1}
DEFAULTS_2D = {"points": 301, "extent": 3.0, "eps": 0.1}
CONFIG_KEYS = ("grid", "h", "eps", "threshold", "fd_order", "seed", "directions", "eps_probe", "centers")


@dataclass
class ScenarioConfig:
    grid: int | None = None
    h: float | None = None       # None means "auto" (use grid / defaults)
    eps: float | None = None
    threshold: float = 1e-8
    fd_order: int = 4
    seed: int = 0
    directions: int | None = None
    eps_probe: float = 0.05
    centers: int = 401

    @classmethod
    def from_overrides(cls, overrides: dict | None) -> "ScenarioConfig":
        cfg = cls()
        for k, v in (overrides or {}).items():
            if k not in CONFIG_KEYS:
                raise ConfigError(f"unknown configuration key {k!r}")
            if v is None:
                continue
            if k == "h" and v == "auto":
                continue
            try:
                v = int(v) if k in ("grid", "fd_order", "seed", "directions", "centers") else float(v)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {k}: {v!r}") from None
            if k != "seed" and v <= 0:
                raise ConfigError(f"{k} must be positive")
            if k == "fd_order" and v not in (2, 4):
                raise ConfigError("fd_order must be 2 or 4")
            if k == "threshold" and not v < 1:
                raise ConfigError("threshold must lie in (0, 1)")
            cfg = replace(cfg, **{k: v})
        return cfg

    def make_grid(self, dim: int) -> Grid:
        d = DEFAULTS_1D if dim == 1 else DEFAULTS_2D
        extent = d["extent"]
        points = self.grid or d["points"]
        if self.h is not None:
            points = int(round(2 * extent / self.h)) + 1
        return Grid.centered(extent, points, dim)

    def bump_eps(self, dim: int) -> float:
        return self.eps if self.eps is not None else (DEFAULTS_1D if dim == 1 else DEFAULTS_2D)["eps"]


def _interval_body(lo, hi) -> ConvexBody:
    return ConvexBody(np.array([[lo], [hi]], dtype=float))


def _rank_one_cases(D: DiffOp, cfg: ScenarioConfig) -> list:
    rs = C.rank_one()
    G = generate_group(rs)
    trivial = parabolic_subgroup(rs, G, ())
    eps = cfg.bump_eps(1)
    grid = cfg.make_grid(1)
    right = theta_cone(rs, ())
    left = ThetaCone(theta=(), strict_inequalities=right.strict_inequalities, forms=-right.forms)
    cases = [
        ("a", BumpSpec(_interval_body(1.0, 2.0), eps, cone=right), trivial),
        ("b", BumpSpec(_interval_body(-2.0, -1.0), eps, cone=left), trivial),
        ("c", BumpSpec(_interval_body(1.0, 2.0), eps, mode="hull-only",
                       pieces=(_interval_body(1.0, 2.0), _interval_body(-2.0, -1.0))), G),
    ]
    out = []
    for name, spec, group in cases:
        r = support_check(D, spec, grid, group, fd_order=cfg.fd_order, rel_threshold=cfg.threshold,
                          seed=cfg.seed, directions=cfg.directions, case=name)
        out.append(r)
    return out


def _a2_plane():
    rs3 = build_root_system("A", 2)
    U = sum_zero_basis(3)
    rs = rs3.restrict(U)
    return rs3, rs, U


def hexagon_core(rs: RootSystem, group: CoxeterGroup) -> ConvexBody:
    """Orbit hull of a fixed generic point of the open chamber (a hexagon for A_2)."""
    p = np.array([1.2, 0.4])
    return orbit_hull(group, p)


def _a2_case(build, cfg: ScenarioConfig, case: str) -> list:
    rs3, rs, U = _a2_plane()
    G = generate_group(rs)
    D = build()
    Dp = D.restrict(U)
    spec = BumpSpec(hexagon_core(rs, G), cfg.bump_eps(2))
    r = support_check(Dp, spec, cfg.make_grid(2), G, fd_order=cfg.fd_order, rel_threshold=cfg.threshold,
                      seed=cfg.seed, directions=cfg.directions, case=case)
    return [r]


def _theta_case(cfg: ScenarioConfig) -> list:
    rs3, rs, U = _a2_plane()
    G = generate_group(rs)
    theta = (0,)
    WT = parabolic_subgroup(rs, G, theta)
    B = C.get("hyperL").build("A2", m=2.0)
    Dp = C.theta_factorization(B.reg, rs3, theta).restrict(U)
    p0 = np.array([0.5, 0.5, -1.0]) @ U
    offsets = np.array([[0.35, 0.1], [0.1, 0.3], [-0.2, 0.25], [0.15, -0.3]])
    core = orbit_hull(WT, p0 + offsets)
    spec = BumpSpec(core, cfg.bump_eps(2), cone=theta_cone(rs, theta))
    r = support_check(Dp, spec, cfg.make_grid(2), WT, fd_order=cfg.fd_order, rel_threshold=cfg.threshold,
                      seed=cfg.seed, directions=cfg.directions, case="theta={alpha_12}")
    r.extra["hull_invariant_full_group"] = is_invariant_body(spec.hull(WT), G)
    r.extra["hull_invariant_theta_group"] = is_invariant_body(spec.hull(WT), WT)
    return [r]


def _counterexample(cfg: ScenarioConfig) -> list:
    centers = np.linspace(-0.5, 1.5, cfg.centers)
    return [counterexample_demo(cfg.eps_probe, centers, cfg.threshold)]


SCENARIOS = {
    "rank1-abc": lambda cfg: _rank_one_cases(C.xdx(), cfg),
    "jacobi-1d": lambda cfg: _rank_one_cases(C.get("jacobi1d").build(a=2.0, b=1.0).reg, cfg),
    "bessel-1d": lambda cfg: _rank_one_cases(C.get("bessel1d").build(a=2.0, b=1.0).reg, cfg),
    "calogero-A2": lambda cfg: _a2_case(lambda: C.get("calogero").build(n=2, g=1.0).reg, cfg, "hexagon"),
    "hyper-A2": lambda cfg: _a2_case(lambda: C.get("hyperL").build("A2", m=2.0).reg, cfg, "hexagon"),
    "bessel-A2": lambda cfg: _a2_case(lambda: C.get("besselL0").build("A2", m=2.0).reg, cfg, "hexagon"),
    "theta-halfspace": _theta_case,
    "counterexample": _counterexample,
}


def run_scenario(name: str, overrides: dict | None = None) -> list:
    """Run a named scenario; returns report objects (each has ``to_json`` and ``verdict``)."""
    if name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    cfg = ScenarioConfig.from_overrides(overrides)
    reports = SCENARIOS[name](cfg)
    for r in reports:
        if isinstance(r, SupportReport):
            r.extra["scenario"] = name
    return reports
