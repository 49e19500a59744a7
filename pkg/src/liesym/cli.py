"""Command-line interface: ``liesym {classify,curvature,geodesic,symmetry,verify-paper}``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import algebra as alg
from . import geodesics as geo
from . import verify
from .classification import HaLeeMetric, classify_algebra, classify_halee
from .curvature import frame_pipeline, is_locally_symmetric, sectional
from .errors import LieSymError
from .milnor import canonical_defect, identify_family, milnor_frame

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_seed():
    raw = os.environ.get("LIESYM_SEED")
    if raw is None or raw == "":
        return verify.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LIESYM_SEED must be an integer, got {raw!r}") from None


def _positive(text):
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return val


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump(obj, fh, lines=False):
    if lines:
        fh.write(json.dumps(obj, sort_keys=False) + "\n")
    else:
        fh.write(json.dumps(obj, indent=2) + "\n")


def _json_only(args):
    if args.format not in (None, "json"):
        raise UsageError(f"{args.command} supports only --format json")


# -- inputs ------------------------------------------------------------------------

def _halee_from_args(args):
    if args.group is None:
        raise UsageError("pass --group or --json")
    params = {}
    for key, val in (("mu", args.mu), ("nu", args.nu), ("lam", args.lam), ("D", args.D)):
        if val is not None:
            params[key] = val
    if args.group == "G0":
        params["form"] = args.form
    return HaLeeMetric(args.group, params)


def _algebra_from_args(args):
    """``(mla, HaLeeMetric or None)`` from ``--json`` or the group flags."""
    if args.json:
        try:
            return alg.load(args.json), None
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.json}: {exc}") from None
    hl = _halee_from_args(args)
    return hl.algebra(), hl


# -- commands ------------------------------------------------------------------------

def cmd_classify(args):
    _json_only(args)
    mla, hl = _algebra_from_args(args)
    tol = args.tol or 1e-9
    if hl is not None:
        v = classify_halee(hl, tol)
    else:
        v = classify_algebra(mla, tol, group="input", params={"path": args.json})
    rec = verify.plain(v.record())
    if v.printed_failures:
        rec["printed_system_failures"] = list(v.printed_failures)
    with _sink(args.out) as fh:
        _dump(rec, fh, lines=True)
    return EXIT_OK


def cmd_curvature(args):
    _json_only(args)
    mla, _ = _algebra_from_args(args)
    tol = args.tol or 1e-9
    frame = milnor_frame(mla)
    conn, R, dR = frame_pipeline(frame.st)
    sym, resid = is_locally_symmetric(mla, tol)
    nz = np.argwhere(np.abs(R.r) > 1e-14)
    rec = {
        "kind": frame.kind,
        "milnor_constants": list(frame.constants),
        "family": str(identify_family(frame)),
        "frame_P": frame.P.tolist(),
        "canonical_defect": canonical_defect(frame),
        "sectional": {"e1e2": sectional(R, 0, 1), "e1e3": sectional(R, 0, 2),
                      "e2e3": sectional(R, 1, 2)},
        "riemann": [[int(i) + 1, int(j) + 1, int(k) + 1, int(l) + 1, float(R.r[i, j, k, l])]
                    for i, j, k, l in nz],
        "nabla_r_max": dR.max_abs(),
        "locally_symmetric": sym,
        "residual": resid,
    }
    with _sink(args.out) as fh:
        _dump(verify.plain(rec), fh)
    return EXIT_OK


def cmd_geodesic(args):
    fmt = args.format or "csv"
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    nu, v = args.nu, (args.v1, args.v2, args.v3)
    if not all(np.isfinite(v)):
        raise UsageError("velocity components must be finite")
    path = geo.integrate_geodesic(nu, v, args.t_end, args.step, args.every)
    closed = geo.closed_geodesic(nu, v, path.t)
    dev = np.max(np.abs(path.points - closed), axis=1)
    max_dev = float(dev.max())
    with _sink(args.out) as fh:
        if fmt == "csv":
            geo.write_csv(fh, path, {"x_closed": closed[:, 0], "y_closed": closed[:, 1],
                                     "s_closed": closed[:, 2], "deviation": dev})
        else:
            _dump({"nu": nu, "v": list(v), "t": path.t.tolist(), "points": path.points.tolist(),
                   "alpha": path.alpha.tolist(), "closed": closed.tolist(),
                   "max_deviation": max_dev, "energy_drift": path.energy_drift()}, fh)
    print(f"max_deviation={max_dev:.3e} energy_drift={path.energy_drift():.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_symmetry(args):
    _json_only(args)
    nu = args.nu
    rng = np.random.default_rng(args.seed)
    k_range = range(-args.k, args.k + 1)
    tol = args.tol or geo.TOL_WELLDEF
    if args.point is not None:
        points = [geo.project(args.point)]
    else:
        points = [geo.project((*rng.uniform(-1, 1, 2), rng.uniform(-np.pi, np.pi)))
                  for _ in range(args.samples)]
    rows, all_ok = [], True
    for q in points:
        ok, images = geo.symmetry_welldefined(nu, q, k_range, tol)
        all_ok &= ok
        rows.append({"point": list(q), "consistent": ok, "images": [list(im) for im in images]})
    rec = {
        "nu": nu,
        "seed": args.seed,
        "k_range": [k_range.start, k_range.stop - 1],
        "symmetric_space": geo.is_symmetric_space_E02(nu),
        "consistent_on_samples": all_ok,
        "samples": rows,
    }
    with _sink(args.out) as fh:
        _dump(verify.plain(rec), fh)
    return EXIT_OK


def cmd_verify(args):
    _json_only(args)
    try:
        report = verify.run(seed=args.seed, tol=args.tol, only=args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for rec in report["checks"]:
        print(f"{rec['check_id']} {rec['status'].upper():4s} {rec['ref']}", file=sys.stderr)
    with _sink(args.out) as fh:
        _dump(report, fh)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# -- parser --------------------------------------------------------------------------

def _algebra_flags(p):
    p.add_argument("--group", choices=["R3", "E0tilde2", "SU2", "GI", "G0", "GD"])
    p.add_argument("--mu", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--D", type=float)
    p.add_argument("--form", choices=["A1", "A2"], default="A1", help="G0 normal form")
    p.add_argument("--json", metavar="PATH", help="algebra record (constants + metric)")


def _common(p, seed=False):
    p.add_argument("--tol", type=_positive)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=["json", "csv"])
    if seed:
        p.add_argument("--seed", type=int)


def build_parser():
    ap = argparse.ArgumentParser(prog="liesym", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="local symmetry of a metric Lie algebra")
    _algebra_flags(p)
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("curvature", help="Milnor frame, curvature and nabla R")
    _algebra_flags(p)
    _common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("geodesic", help="geodesic samples on the cover of E0(2)")
    p.add_argument("--nu", type=_positive, required=True)
    p.add_argument("--v1", type=float, default=0.0)
    p.add_argument("--v2", type=float, default=0.0)
    p.add_argument("--v3", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--every", type=int, default=1, help="write every n-th step")
    _common(p)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("symmetry", help="does the identity symmetry descend to E0(2)?")
    p.add_argument("--nu", type=_positive, required=True)
    p.add_argument("--point", type=float, nargs=3, metavar=("X", "Y", "S"))
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--k", type=int, default=3, help="lifts s + 2 pi k for |k| <= K")
    _common(p, seed=True)
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("verify-paper", help="run the reproduction checks AC01..AC10")
    p.add_argument("--only", help="comma-separated modules or check ids")
    _common(p, seed=True)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        if getattr(args, "every", 1) < 1:
            raise UsageError("--every must be >= 1")
        return args.func(args)
    except (UsageError, LieSymError, ValueError) as exc:
        print(f"liesym {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
