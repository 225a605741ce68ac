"""Batch CLI: every analysis as a subcommand with reproducible CSV/JSON
output.

Exit codes: 0 success, 2 usage/config error, 3 budget or radius shortfall.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import annuli, deadends, metric, paths
from .errors import (
    BudgetExceeded,
    CayleyError,
    InsufficientRadius,
    InvalidParameter,
    MalformedElement,
    UnsupportedFamily,
)
from .groups import REGISTRY_SPECS, make_group

__version__ = "0.1.0"


def registry_hash():
    h = hashlib.sha256()
    for spec in REGISTRY_SPECS:
        h.update(spec.encode())
        h.update(b"\n")
    return h.hexdigest()[:16]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


class Sink:
    """Writes rows as CSV (golden format) or a JSON array of objects."""

    def __init__(self, path, fmt, model_spec):
        self.path = path
        self.fmt = fmt
        self.model_spec = model_spec
        self.header = None
        self.rows = []

    def write_row(self, header, row):
        if self.header is None:
            self.header = header
        self.rows.append(row)

    def close(self):
        out = sys.stdout if not self.path else open(self.path, "w")
        try:
            if self.fmt == "json":
                payload = {
                    "model": self.model_spec,
                    "rows": [dict(zip(self.header or [], r)) for r in self.rows],
                }
                out.write(json.dumps(payload, indent=1, sort_keys=True))
                out.write("\n")
            else:
                out.write(f"# model={self.model_spec}\n")
                if self.header:
                    out.write(",".join(self.header) + "\n")
                for r in self.rows:
                    out.write(",".join(_fmt(x) for x in r) + "\n")
        finally:
            if self.path:
                out.close()


def _table(args, model, N):
    cache = args.cache_dir or os.environ.get("CAYLEY_CACHE") or None
    return metric.table_for(model, N, budget=args.budget, cache_dir=cache)


def cmd_enumerate(args):
    model = make_group(args.model)
    nmax = args.nmax if args.nmax is not None else (args.n or 0)
    table = _table(args, model, nmax)
    sink = Sink(args.out, args.format, model.spec)
    for n in range(nmax + 1):
        sink.write_row(["n", "sphere", "ball"],
                       [n, table.sphere_size(n), table.ball_size(n)])
    sink.close()
    return 0


def cmd_thickness(args):
    model = make_group(args.model)
    n_lo = args.n if args.n is not None else 1
    n_hi = args.nmax if args.nmax is not None else n_lo
    rcap = args.rcap if args.rcap is not None else max(8, n_hi + 2)
    N = max(2 * n_hi, n_hi + rcap)
    table = _table(args, model, N)
    sink = Sink(args.out, args.format, model.spec)
    for n in range(n_lo, n_hi + 1):
        try:
            th = annuli.connection_thickness(n, rcap, table)
        except InsufficientRadius:
            th = None
        cell = ">cap" if th is annuli.ABOVE_CAP else th
        sink.write_row(["n", "thickness", "rcap"], [n, cell, rcap])
    sink.close()
    return 0


def cmd_components(args):
    model = make_group(args.model)
    n, r = args.n, args.r if args.r is not None else 0
    N = max(n + r, 2 * n if args.filtered else n + r)
    table = _table(args, model, N)
    ann = annuli.build_annulus(n, r, args.filtered, table)
    restrict = annuli.SPHERE_INF if args.filtered else annuli.FULL
    part = annuli.components(ann, restrict)
    H, h, blocks = annuli.entropy(part)
    diam = None
    if len(ann) <= annuli.EXACT_DIAMETER_CAP:
        res = annuli.induced_diameter(ann)
        diam = None if res is None else res.value
    flag = "connected" if blocks == 1 else "disconnected"
    sink = Sink(args.out, args.format, model.spec)
    sink.write_row(
        ["model", "n", "r", "filtered", "vertices", "blocks", "H", "h",
         "diameter", "thickness_flag"],
        [model.spec, n, r, int(args.filtered), len(ann), blocks, H, h,
         diam, flag])
    sink.close()
    if args.out:
        members = args.out + ".members.csv"
        with open(members, "w") as fh:
            fh.write(f"# model={model.spec}\n")
            fh.write("component_id,element_encoding\n")
            for cid, ids in part.blocks:
                for i in ids:
                    fh.write(f"{cid},{model.encode(table.elements[i])}\n")
    return 0


def cmd_deadends(args):
    model = make_group(args.model)
    n_lo = args.n if args.n is not None else 1
    n_hi = args.nmax if args.nmax is not None else n_lo
    table = _table(args, model, 2 * n_hi + 2)
    sink = Sink(args.out, args.format, model.spec)
    header = ["model", "n", "element", "is_deadend", "width", "rd", "sd",
              "straight"]
    for n in range(n_lo, n_hi + 1):
        for rep in deadends.find_deadends(n, table):
            sink.write_row(header, [model.spec, n, rep.encoding, 1, rep.width,
                                    rep.retreat_depth, rep.shadow_depth,
                                    int(rep.straight)])
    sink.close()
    return 0


def cmd_distortion(args):
    model = make_group(args.model)
    n_lo = args.n if args.n is not None else 1
    n_hi = args.nmax if args.nmax is not None else n_lo
    r = args.r if args.r is not None else 2
    N = max(2 * n_hi, n_hi + r)
    table = _table(args, model, N)
    sink = Sink(args.out, args.format, model.spec)
    header = ["n", "r", "vertices", "diameter", "exact", "sprawl"]
    for n in range(n_lo, n_hi + 1):
        ann = annuli.build_annulus(n, r, False, table)
        diam = annuli.induced_diameter(ann)
        sprawl = None
        if args.samples and diam is not None:
            sprawl = annuli.sprawl_estimate(ann, args.samples, args.seed)
        sink.write_row(header,
                       [n, r, len(ann),
                        None if diam is None else diam.value,
                        None if diam is None else int(diam.exact),
                        sprawl])
    sink.close()
    return 0


def cmd_verify(args):
    model = make_group(args.model)
    with open(args.certificate) as fh:
        cert = paths.parse_certificate(model, fh.read())
    table = None
    if args.nmax:
        table = _table(args, model, args.nmax)
    res = paths.verify_certificate(cert, table)
    sink = Sink(args.out, args.format, model.spec)
    sink.write_row(["steps", "ok", "first_violation"],
                   [len(cert), int(res["ok"]), res["first_violation"]])
    sink.close()
    return 0 if res["ok"] else 1


def cmd_experiment(args):
    name = args.experiment
    sink_spec = None
    rows = []
    if name == "zsq-conjecture":
        # measured thickness of the plane lamplighter at tiny radii
        model = make_group("plane-lamplighter m=2")
        sink_spec = model.spec
        nmax = min(args.nmax or 3, 4)
        table = _table(args, model, 2 * nmax)
        header = ["n", "thickness"]
        for n in range(1, nmax + 1):
            th = annuli.connection_thickness(n, 2 * nmax - n, table)
            rows.append([n, ">cap" if th is annuli.ABOVE_CAP else th])
    elif name == "entropy-curve":
        model = make_group(args.model or "line-lamplighter m=2")
        sink_spec = model.spec
        n = args.n or 10
        rcap = args.rcap if args.rcap is not None else n + 2
        table = _table(args, model, max(2 * n, n + rcap))
        header = ["n", "r", "r_over_th", "blocks", "H", "h"]
        th = annuli.connection_thickness(n, rcap, table)
        cap = th if isinstance(th, int) else rcap
        for r in range(0, cap + 1):
            ann = annuli.build_annulus(n, r, True, table)
            part = annuli.components(ann, annuli.SPHERE_INF)
            rows.append([n, r, r / cap if cap else 1.0, part.block_count,
                         part.H, part.h])
    elif name == "sd-question":
        # is sd(x) <= ceil(|x|/2)?  reported, never asserted
        model = make_group(args.model or "line-lamplighter m=2")
        sink_spec = model.spec
        nmax = args.nmax or 5
        table = _table(args, model, 2 * nmax + 2)
        header = ["n", "max_sd", "ceil_half", "within"]
        for n in range(1, nmax + 1):
            worst = 0
            for g in table.sphere(n):
                worst = max(worst, deadends.shadow_depth(g, table))
            rows.append([n, worst, -(-n // 2), int(worst <= -(-n // 2))])
    elif name == "ladder-deadends":
        # the pair-lamp dead-end family (0,1,f_k); depth recorded only
        model = make_group("ladder-lamplighter m=2 set=sws")
        sink_spec = model.spec
        kmax = args.nmax or 1
        table = _table(args, model, args.n or 10)
        header = ["k", "length", "is_deadend"]
        for k in range(1, kmax + 1):
            lamps = {(x, e): 1 for x in range(-k, k + 1) for e in (0, 1)}
            g = model.from_parts(0, 1, lamps)
            L = table.word_length(g)
            dead = None
            if L is not None and L < table.N:
                dead = int(deadends.is_deadend(g, table))
            rows.append([k, L, dead])
    else:
        print(f"unknown experiment {name!r}", file=sys.stderr)
        return 2
    sink = Sink(args.out, args.format, sink_spec)
    for row in rows:
        sink.write_row(header, row)
    sink.close()
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="cayleyspheres",
        description="Sphere/annulus connectivity analysis in Cayley graphs")
    p.add_argument("--version", action="store_true",
                   help="print version and model-registry hash")
    sub = p.add_subparsers(dest="command")
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        if name == "experiment":
            sp.add_argument("experiment")
        if name == "verify":
            sp.add_argument("certificate")
        sp.add_argument("--model", default=None)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--nmax", type=int, default=None)
        sp.add_argument("--r", type=int, default=None)
        sp.add_argument("--rcap", type=int, default=None)
        sp.add_argument("--filtered", action="store_true")
        sp.add_argument("--samples", type=int, default=0)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1,
                        help="worker cap (current implementation is serial)")
        sp.add_argument("--budget", type=int, default=metric.DEFAULT_BUDGET)
        sp.add_argument("--cache-dir", default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


COMMANDS = {
    "enumerate": cmd_enumerate,
    "thickness": cmd_thickness,
    "components": cmd_components,
    "deadends": cmd_deadends,
    "distortion": cmd_distortion,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        print(f"cayleyspheres {__version__} registry={registry_hash()}")
        return 0
    if not getattr(args, "fn", None):
        parser.print_usage(sys.stderr)
        return 2
    if getattr(args, "model", None) is None and args.command not in ("experiment",):
        print("--model is required", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (UnsupportedFamily, InvalidParameter, MalformedElement) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceeded, InsufficientRadius) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except CayleyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
