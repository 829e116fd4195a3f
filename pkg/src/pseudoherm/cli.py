"""Command-line front end.

Subcommands:
  invariants  sample the surface and write J, R, |A11|, Q11 per point
  locus       write the closed-form umbilical curves
  trace       numerically trace the residual variety for generic params
  verify      run the named verification suites

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
Output is CSV (leading `# pseudoherm-format: 1` comment, header row,
'.' decimals, ',' separator) or JSON with a format_version field.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import ellipsoid, invariants, tracer, verify
from .ambient import GeometryError
from .ellipsoid import EllipsoidParams, LocusKind, ParameterError

FORMAT_VERSION = 1


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as e:
        raise ParameterError("cannot open output path %r: %s" % (path, e))


def _write_csv(path, header, rows):
    fh, close = _open_out(path)
    try:
        fh.write("# pseudoherm-format: %d\n" % FORMAT_VERSION)
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(c)) if isinstance(c, float) else c for c in row])
    finally:
        if close:
            fh.close()


def _write_json(path, payload):
    fh, close = _open_out(path)
    try:
        json.dump({"format_version": FORMAT_VERSION, **payload}, fh, indent=1)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _params(args) -> EllipsoidParams:
    return EllipsoidParams(args.a, args.b)


def _surface_grid(params: EllipsoidParams, n: int):
    """Two-angle chart: direction (cos(phi) e^{i theta}, sin(phi) e^{i theta}),
    radially scaled onto the ellipsoid.  Covers the z- and w-axis circles."""
    thetas = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    phis = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    for th in thetas:
        for ph in phis:
            d = (math.cos(ph) * math.cos(th), math.cos(ph) * math.sin(th),
                 math.sin(ph) * math.cos(th), math.sin(ph) * math.sin(th))
            if all(abs(c) < 1e-15 for c in d):
                continue
            yield params.surface_point(*d)


def cmd_invariants(args) -> int:
    params = _params(args)
    header = ["x", "y", "u", "v", "J", "R", "abs_A11", "re_Q11", "im_Q11"]
    rows = []
    for p in _surface_grid(params, args.grid):
        c = params.contractions(p)
        rep = invariants.cartan_q11(c)
        x, y, u, v = p.as_real()
        rows.append([x, y, u, v, c.J, rep.R, abs(rep.A11),
                     rep.Q11.real, rep.Q11.imag])
    if args.format == "csv":
        _write_csv(args.out, header, rows)
    else:
        _write_json(args.out, {"command": "invariants", "a": params.a, "b": params.b,
                               "columns": header, "rows": rows})
    return 0


def _locus_curves(params: EllipsoidParams, samples: int):
    if params.a == 0.0:
        raise ParameterError("a = 0 is the sphere: every point is umbilical")
    if params.b == 0.0:
        return ellipsoid.special_locus_b0(params.a, samples)
    if params.b == params.a:
        return ellipsoid.special_locus_ba(params.a, samples)
    curves = [ellipsoid.gamma_locus(params, 1, samples),
              ellipsoid.gamma_locus(params, -1, samples)]
    print("note: 0 < b < a carries a residual variety; run `trace` to extract it",
          file=sys.stderr)
    return curves


def cmd_locus(args) -> int:
    params = _params(args)
    curves = _locus_curves(params, args.samples)
    header = ["kind", "tau", "sign", "index", "x", "y", "u", "v",
              "rho_residual", "defining_residual"]
    rows = []
    for curve in curves:
        for i, (pt, rr, dr) in enumerate(zip(curve.points, curve.rho_residual,
                                             curve.defining_residual)):
            rows.append([curve.kind.value,
                         "" if curve.tau is None else repr(float(curve.tau)),
                         "" if curve.sign is None else curve.sign,
                         i, *map(float, pt), float(rr), float(dr)])
    if args.format == "csv":
        _write_csv(args.out, header, rows)
    else:
        payload = {"command": "locus", "a": params.a, "b": params.b, "curves": [
            {"kind": c.kind.value, "tau": c.tau, "sign": c.sign,
             "points": c.points.tolist(),
             "rho_residual": c.rho_residual.tolist(),
             "defining_residual": c.defining_residual.tolist()}
            for c in curves]}
        _write_json(args.out, payload)
    return 0


def cmd_trace(args) -> int:
    params = _params(args)
    cfg = tracer.TraceConfig(seed_grid=args.seed_grid, newton_tol=args.tol,
                             step_len=args.step)
    if params.b == 0.0 or params.b == params.a:
        raise ParameterError(
            "b = 0 and b = a have closed-form loci: run `locus` instead")
    tv = tracer.trace_variety(params, cfg)
    header = ["component", "vertex", "closed", "x", "y", "u", "v",
              "rho_residual", "re_s_residual", "im_s_residual", "gamma_distance"]
    rows = []
    for ci, comp in enumerate(tv.components):
        for vi in range(len(comp.points)):
            rows.append([ci, vi, int(comp.closed), *map(float, comp.points[vi]),
                         *map(float, comp.residuals[vi]),
                         float(comp.gamma_distance[vi])])
    if args.format == "csv":
        _write_csv(args.out, header, rows)
    else:
        payload = {"command": "trace", "a": params.a, "b": params.b, "components": [
            {"closed": comp.closed,
             "singular": comp.singular,
             "points": comp.points.tolist(),
             "residuals": comp.residuals.tolist(),
             "gamma_distance": comp.gamma_distance.tolist()}
            for comp in tv.components]}
        _write_json(args.out, payload)
    return 0


def cmd_verify(args) -> int:
    names = args.suite or None
    results = verify.run_suites(names)
    width = max(len(r.name) for r in results)
    for r in results:
        print("%-*s  %s  %s" % (width, r.name, "PASS" if r.passed else "FAIL", r.detail))
    failed = [r for r in results if not r.passed]
    print("%d/%d suites passed" % (len(results) - len(failed), len(results)))
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pseudoherm",
        description="Pseudohermitian invariants and umbilical loci of real "
                    "ellipsoids in C^2")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_params=True):
        if need_params:
            p.add_argument("--a", type=float, required=True, help="semi-axis parameter a")
            p.add_argument("--b", type=float, required=True, help="semi-axis parameter b")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("invariants", help="invariant fields on a surface grid")
    common(p)
    p.add_argument("--grid", type=int, default=100, help="grid points per angle")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("locus", help="closed-form umbilical curves")
    common(p)
    p.add_argument("--samples", type=int, default=720, help="samples per curve")
    p.set_defaults(func=cmd_locus)

    p = sub.add_parser("trace", help="trace the residual variety (0 < b < a)")
    common(p)
    p.add_argument("--seed-grid", type=int, default=12, dest="seed_grid",
                   help="spherical seed grid points per angle")
    p.add_argument("--step", type=float, default=0.02, help="arc-length step")
    p.add_argument("--tol", type=float, default=1e-10, help="Newton tolerance")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", action="append",
                   help="suite name (repeatable); default runs all: %s"
                   % ", ".join(sorted(verify.SUITES)))
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, GeometryError, KeyError, ValueError) as e:
        print("error: %s" % (e,), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
