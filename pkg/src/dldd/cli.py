"""Command-line interface: ``dldd {gen,decompose,verify,stats,bench}``.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
Set ``LDD_LOG=debug`` (or info, warning) for diagnostic logging on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import gen
from ._accel import backend_name
from .decomposer import LddConfig, decompose
from .graph import GraphError, format_edge_list, read_edge_list
from .ldd_core import ConfigError
from .verify import estimate_cut_probs, validate

log = logging.getLogger("dldd")

GEN_KINDS = ("cycle", "path", "bicycle", "random", "grid", "zero-mix", "multigraph", "heavy-close", "heavy-far")
NOISE_FLOOR = 0.05  # seconds; ratios of faster runs are flagged as noisy


class UsageError(Exception):
    pass


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for --kind {args.kind}")


def make_graph(args):
    k = args.kind
    if k == "cycle":
        _need(args, "n")
        return gen.cycle(args.n, args.w)
    if k == "path":
        _need(args, "n")
        return gen.path(args.n, args.w)
    if k == "bicycle":
        _need(args, "n")
        return gen.bidirected_cycle(args.n, args.w)
    if k == "random":
        _need(args, "n", "m")
        return gen.random_digraph(args.n, args.m, args.wmax, args.seed)
    if k == "grid":
        _need(args, "n")
        return gen.grid(args.n, args.cols or args.n, args.wmax, args.seed)
    if k == "zero-mix":
        _need(args, "n", "m")
        return gen.zero_weight_mix(args.n, args.m, args.wmax, args.zero_share, args.seed)
    if k == "multigraph":
        _need(args, "n", "m")
        return gen.multigraph(args.n, args.m, args.wmax, args.seed)
    _need(args, "n", "delta")
    return gen.heavy_gadget("close-pair" if k == "heavy-close" else "far-pair", args.n, args.delta)


def cmd_gen(args):
    _emit(format_edge_list(make_graph(args)), args.out)
    return 0


def _config(args):
    return LddConfig(speedup=not args.no_speedup, monitor=args.monitor,
                     diagnostics=args.diagnostics, timings=args.timings)


def cmd_decompose(args):
    g = read_edge_list(args.input)
    res = decompose(g, args.delta, args.seed, _config(args))
    _emit(res.to_json(include_diagnostics=args.diagnostics), args.out)
    return 0


def cmd_verify(args):
    g = read_edge_list(args.input)
    try:
        result = json.loads(Path(args.result).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.result}: not valid JSON ({exc})") from None
    for key in ("delta", "deleted", "components"):
        if key not in result:
            raise UsageError(f"{args.result}: missing field {key!r}")
    rep = validate(g, result)
    print(json.dumps(rep.to_dict(), indent=2))
    for line in rep.failures:
        print(line, file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_stats(args):
    g = read_edge_list(args.input)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    st = estimate_cut_probs(g, args.delta, args.trials, args.seed, jobs=args.jobs, kappa=args.kappa)
    if args.csv:
        Path(args.csv).write_text(st.to_csv())
    _emit(json.dumps(st.summary(), sort_keys=True) + "\n", args.out)
    return 0


def _time_run(g, delta, seed, config, repeats):
    best = None
    res = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        res = decompose(g, delta, seed, config)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, res


def cmd_bench(args):
    modes = {"on": [True], "off": [False], "both": [True, False]}[args.speedup]
    # warm the compiled kernels so the first size is not charged for compilation
    decompose(gen.random_digraph(16, 64, args.wmax, 0), args.delta, 0)
    rows = []
    for e in args.sizes:
        m = 1 << e
        n = max(1, m // args.density)
        g = gen.random_digraph(n, m, args.wmax, args.seed)
        row = {"m": m, "n": n}
        outs = []
        for on in modes:
            cfg = LddConfig(speedup=on, diagnostics=False)
            dt, res = _time_run(g, args.delta, args.seed, cfg, args.repeats)
            row["seconds_" + ("on" if on else "off")] = round(dt, 4)
            outs.append(res.deleted)
        if len(outs) == 2:
            row["identical"] = bool(np.array_equal(outs[0], outs[1]))
        rows.append(row)
    key = "seconds_" + ("on" if modes[0] else "off")
    for prev, row in zip(rows, rows[1:]):
        row["ratio"] = round(row[key] / prev[key], 3) if prev[key] > 0 else None
        row["noisy"] = prev[key] < NOISE_FLOOR
    if args.json:
        print(json.dumps({"backend": backend_name(), "delta": args.delta, "rows": rows}, indent=2))
        return 0
    cols = ["m", "n"] + [c for c in ("seconds_on", "seconds_off", "identical", "ratio", "noisy") if c in rows[-1]]
    print(f"backend: {backend_name()}  delta: {args.delta}")
    print("\t".join(cols))
    for row in rows:
        print("\t".join(str(row.get(c, "")) for c in cols))
    return 0 if all(r.get("identical", True) for r in rows) else 1


def _add_config_flags(p):
    p.add_argument("--no-speedup", action="store_true", help="disable skipping of already-settled vertices")
    p.add_argument("--monitor", action="store_true", help="count ball-volume violations each round (slow)")
    p.add_argument("--timings", action="store_true", help="record per-instance wall time in diagnostics")


def build_parser():
    ap = argparse.ArgumentParser(prog="dldd", description="Directed low-diameter decomposition.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--kind", required=True, choices=GEN_KINDS)
    p.add_argument("--n", type=int, help="vertices (grid: rows, gadgets: size)")
    p.add_argument("--m", type=int, help="edges")
    p.add_argument("--cols", type=int, help="grid columns (default: --n)")
    p.add_argument("--w", type=int, default=1, help="uniform weight for cycle/path kinds")
    p.add_argument("--wmax", type=int, default=16)
    p.add_argument("--zero-share", type=float, default=0.5)
    p.add_argument("--delta", type=int, help="target delta, gadgets only")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="run the decomposition and print result JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--diagnostics", action="store_true", help="include per-instance records")
    p.add_argument("--out")
    _add_config_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check a result JSON against its graph")
    p.add_argument("--input", required=True)
    p.add_argument("--result", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="Monte Carlo per-edge cut probabilities")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="first trial seed")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--kappa", type=float, default=1.0, help="constant for the reference bound")
    p.add_argument("--csv", help="write the per-edge table here")
    p.add_argument("--out", help="summary JSON path (default stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="doubling experiment on random digraphs")
    p.add_argument("--sizes", type=int, nargs="+", default=[14, 15, 16, 17], help="log2 of edge counts")
    p.add_argument("--density", type=int, default=8, help="edges per vertex")
    p.add_argument("--delta", type=int, default=10**6)
    p.add_argument("--wmax", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--repeats", type=int, default=3, help="report the fastest of this many runs")
    p.add_argument("--speedup", choices=("on", "off", "both"), default="on")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    level = os.environ.get("LDD_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        ap.error(str(exc))
    except (ConfigError, GraphError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"dldd: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
