"""Command-line front end.

Subcommands: ``roots``, ``symbol``, ``verify`` and ``ops list``.
Exit codes: 0 success, 1 domain failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import catalog as C
from .diffop import check_factorization
from .errors import ConfigError, WSupportError
from .rootsys import (build_root_system, check_cone_lemma, generate_group, root_orbits, theta_cone)
from .verify import CONFIG_KEYS, run_scenario, SCENARIOS

SCHEMA_VERSION = 1


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


# --------------------------------------------------------------------------
# roots

def cmd_roots(args) -> int:
    rs = build_root_system(args.family, args.rank)
    G = generate_group(rs, cap=args.cap)
    out = {
        "schema_version": SCHEMA_VERSION,
        "root_system": rs.to_json(),
        "group_order": G.order,
        "orbits": [list(o) for o in root_orbits(rs)],
    }
    if args.theta is not None:
        theta = [t - 1 for t in _ints(args.theta)]
        if any(t < 0 or t >= rs.rank for t in theta):
            raise ConfigError(f"--theta entries must lie in 1..{rs.rank}")
        cone = theta_cone(rs, theta)
        rep = check_cone_lemma(rs, G, theta, num_samples=args.samples, seed=args.seed)
        out["theta"] = [t + 1 for t in cone.theta]
        out["a_theta_inequalities"] = [{"root_index": i, "y": rs.roots[i].tolist()}
                                       for i in cone.strict_inequalities]
        out["cone_lemma"] = {**rep.to_json(), "theta": out["theta"]}
    _emit(args, out)
    return 0


# --------------------------------------------------------------------------
# symbol

def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise ConfigError(f"parameter {k} needs a number") from None
    return out


def cmd_symbol(args) -> int:
    try:
        entry = C.get(args.op)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    params = _params(args.param)
    if "n" in params:
        params["n"] = int(params["n"])
    try:
        built = entry.build(args.system, **params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    D = built.reg if args.reg else built.op
    n = D.dim
    x = _floats(args.x) if args.x else np.linspace(0.7, 0.3, n) * np.arange(n, 0, -1)
    lam = _floats(args.lam) if args.lam else np.ones(n)
    if len(x) != n or len(lam) != n:
        raise ConfigError(f"--x and --lam need {n} components")
    value = D.principal_symbol(x, lam)
    out = {"schema_version": SCHEMA_VERSION, "operator": D.name, "regularized": bool(args.reg),
           "x": x.tolist(), "lambda": lam.tolist(), "symbol": value}
    if args.factor:
        if D.factorization is None:
            raise ConfigError("this operator carries no factorization; use --reg")
        rep = check_factorization(D, n_samples=args.samples, seed=args.seed)
        out["factorization"] = rep.to_json()
        _emit(args, out)
        return 0 if rep.passed else 1
    _emit(args, out)
    return 0


# --------------------------------------------------------------------------
# verify

def read_config(path: str) -> dict:
    """Flat ``key = value`` file, ``#`` comments; unknown keys are errors."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        key = k.replace("-", "_")
        if key not in CONFIG_KEYS and key not in ("out", "csv"):
            raise ConfigError(f"{path}:{no}: unknown key {k!r}")
        out[key] = v
    return out


def cmd_verify(args) -> int:
    cfg = read_config(args.config) if args.config else {}
    out_dir = cfg.pop("out", None)
    cfg.pop("csv", None)
    flags = {"grid": args.grid, "h": args.h, "eps": args.eps, "threshold": args.threshold,
             "fd_order": args.fd_order, "seed": args.seed}
    for k, v in flags.items():
        if v is not None:
            cfg[k] = v
    if args.out:
        out_dir = args.out
    reports = run_scenario(args.scenario, cfg)
    docs = [r.to_json() for r in reports]
    ok = all(r.verdict for r in reports)
    summary = {"schema_version": SCHEMA_VERSION, "scenario": args.scenario,
               "config": {k: cfg[k] for k in sorted(cfg)}, "passed": ok, "reports": docs}
    text = _dumps(summary)
    if out_dir:
        for i, d in enumerate(docs):
            write_atomic(os.path.join(out_dir, f"{args.scenario}-{i}.json"), _dumps(d))
        write_atomic(os.path.join(out_dir, f"{args.scenario}-summary.json"), text)
    if args.csv:
        _dump_csv(args, reports)
    sys.stdout.write(text)
    return 0 if ok else 1


def _dump_csv(args, reports):
    # hull vertices of both supports, one row per vertex
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["report", "hull", "vertex", "coords"])
    for i, r in enumerate(reports):
        doc = r.to_json()
        for key in ("hull_f", "hull_Df"):
            for j, v in enumerate(doc.get(key) or []):
                w.writerow([i, key, j, " ".join(repr(c) for c in v)])
    write_atomic(args.csv, buf.getvalue())


# --------------------------------------------------------------------------
# ops

def cmd_ops(args) -> int:
    out = {"schema_version": SCHEMA_VERSION,
           "operators": [C.CATALOG[k].descriptor() for k in sorted(C.CATALOG)]}
    _emit(args, out)
    return 0


def _emit(args, obj) -> None:
    text = _dumps(obj)
    path = getattr(args, "output", None)
    if path:
        write_atomic(path, text)
    sys.stdout.write(text)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsupport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="build a root system and its reflection group")
    p.add_argument("family", choices=["A", "B", "C", "D", "BC", "I2"])
    p.add_argument("rank", type=int, help="rank (or m for I2)")
    p.add_argument("--theta", help="comma-separated simple-root positions, 1-based")
    p.add_argument("--cap", type=_positive_int, default=10_000, help="maximum group order")
    p.add_argument("--samples", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="also write the JSON here")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("symbol", help="evaluate a principal symbol")
    p.add_argument("op", help="catalog operator id (see 'ops list')")
    p.add_argument("system", nargs="?", help="root system such as A2, B3, I2_5")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--reg", action="store_true", help="use the canonical regularization")
    p.add_argument("--x", help="point, comma-separated")
    p.add_argument("--lam", help="covector, comma-separated")
    p.add_argument("--factor", action="store_true", help="run the factorization check")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("verify", help="run a support scenario")
    p.add_argument("scenario", choices=sorted(SCENARIOS))
    p.add_argument("--grid", type=_positive_int, help="points per axis")
    p.add_argument("--h", help="grid spacing or 'auto'")
    p.add_argument("--eps", type=float, help="mollifier radius")
    p.add_argument("--threshold", type=float, help="relative support threshold")
    p.add_argument("--fd-order", type=int, choices=[2, 4])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="directory for per-report JSON files")
    p.add_argument("--csv", help="write hull vertices as CSV")
    p.add_argument("--config", help="key = value config file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ops", help="catalog operations")
    ops = p.add_subparsers(dest="ops_command", required=True)
    q = ops.add_parser("list", help="list catalog operators as JSON")
    q.add_argument("--output")
    q.set_defaults(func=cmd_ops)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WSupportError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
