"""Command-line front end.

Subcommands: solve, dist, sample, analyze, experiment, table1.
Exit codes: 0 success, 1 usage or parse error, 2 runtime error
(node cap exceeded, unattainable size, no valid input lines).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import analytic, experiments, tree as tree_ops
from .offspring import FAMILY_GRAMMAR, OffspringError, parse_family
from .sampler import RandomStream, SamplerError, sample_conditioned
from .tree import TreeError

DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise _UsageError(message)


def _color(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise _UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _write_out(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser() -> _Parser:
    p = _Parser(prog="gwpeel",
                description="Conditioned Galton-Watson trees: peel numbers, "
                            "leaf-heights, independence numbers, and their limit laws.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="fixed-point constants q and q_s")
    sp.add_argument("--family", required=True, help=FAMILY_GRAMMAR)
    sp.add_argument("--s", type=int, default=None, help="also solve the s-path constant")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    dp = sub.add_parser("dist", help="root-parameter distribution tables")
    dp.add_argument("--family", required=True)
    dp.add_argument("--kind", choices=("peel", "leafheight", "rootlaw"), required=True)
    dp.add_argument("--terms", type=int, default=50)
    dp.add_argument("--format", choices=("text", "csv", "json"), default="text")
    dp.add_argument("--output", default=None)

    smp = sub.add_parser("sample", help="emit exact-size trees as degree lines")
    smp.add_argument("--family", required=True)
    smp.add_argument("--n", type=int, required=True)
    smp.add_argument("--count", type=int, default=1)
    smp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    smp.add_argument("--output", default=None)

    ap = sub.add_parser("analyze", help="per-tree parameters for degree-sequence lines")
    ap.add_argument("input", nargs="?", default="-", help="file of degree lines, - for stdin")
    ap.add_argument("--s", type=int, default=None, help="also report V_s")
    ap.add_argument("--format", choices=("text", "json"), default="text")

    ep = sub.add_parser("experiment", help="Monte Carlo limit-law verification")
    ep.add_argument("name", choices=("independence", "peel", "leafheight",
                                     "layers", "rootlaw", "spvc"))
    ep.add_argument("--family", required=True)
    ep.add_argument("--n", default="1001,10001", help="comma-separated size grid")
    ep.add_argument("--trials", type=int, default=200)
    ep.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ep.add_argument("--i-max", type=int, default=10, help="layers: top layer index")
    ep.add_argument("--s-values", default="2,3", help="spvc: comma-separated s grid")
    ep.add_argument("--threads", type=int, default=1)
    ep.add_argument("--format", choices=("text", "json"), default="text")
    ep.add_argument("--output", default=None)
    ep.add_argument("--dump-trials", default=None, help="write per-trial CSV here")

    tp = sub.add_parser("table1", help="constants vs Monte Carlo for the named families")
    tp.add_argument("--trials", type=int, default=100)
    tp.add_argument("--n", type=int, default=10001)
    tp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    tp.add_argument("--threads", type=int, default=1)
    tp.add_argument("--format", choices=("text", "json"), default="text")
    tp.add_argument("--output", default=None)
    return p


# ----------------------------------------------------------------------

def _cmd_solve(args) -> int:
    d = parse_family(args.family)
    q = analytic.solve_q(d)
    payload = {"family": d.label, "q": q.value,
               "iterations": q.iterations, "residual": q.residual}
    if args.s is not None:
        qs = analytic.solve_qs(d, args.s)
        payload.update({"s": args.s, "q_s": qs.value,
                        "q_s_iterations": qs.iterations, "q_s_residual": qs.residual})
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"family {d.label}")
        print(f"q   = {q.value:.12f}   (iterations {q.iterations}, "
              f"residual {q.residual:.3e})")
        if args.s is not None:
            print(f"q_{args.s} = {payload['q_s']:.12f}   "
                  f"(iterations {payload['q_s_iterations']}, "
                  f"residual {payload['q_s_residual']:.3e})")
    return EXIT_OK


def _cmd_dist(args) -> int:
    d = parse_family(args.family)
    if args.terms < 1:
        raise _UsageError("--terms must be >= 1")
    kind = args.kind
    if kind == "peel":
        table = analytic.peel_distribution(d, args.terms)
    elif kind == "leafheight":
        table = analytic.leafheight_distribution(d, args.terms)
    else:
        table = analytic.root_limit_law(d, args.terms)
    if args.format == "json":
        _write_out(table.to_json() + "\n", args.output)
    elif args.format == "csv":
        _write_out(table.to_csv(), args.output)
    else:
        lines = [f"{kind} distribution, family {d.label}"]
        lines += [f"{i:>4}  {v:.12g}" for i, v in enumerate(table.values)]
        lines.append(f"tail  {table.tail_mass:.12g}")
        _write_out("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_sample(args) -> int:
    d = parse_family(args.family)
    if args.n < 1 or args.count < 1:
        raise _UsageError("--n and --count must be >= 1")
    lines = []
    for k in range(args.count):
        t = sample_conditioned(d, args.n, RandomStream(args.seed, k))
        lines.append(tree_ops.format_degrees(t.degrees))
    _write_out("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    if args.input == "-":
        rows, bad = _analyze_lines(sys.stdin, args.s)
    else:
        with open(args.input) as fh:
            rows, bad = _analyze_lines(fh, args.s)
    if args.format == "json":
        print(json.dumps({"trees": rows, "invalid_lines": bad}, sort_keys=True))
    else:
        for r in rows:
            extra = f"  V_{args.s}={r['v_s']}" if args.s is not None else ""
            print(f"line {r['line']}: n={r['n']} I={r['independence']} "
                  f"V={r['vertex_cover']} m={r['max_peel']} "
                  f"lambda={r['max_leaf_height']} rho_root={r['root_peel']} "
                  f"layers={r['layers']}{extra}")
        for lineno, msg in bad:
            print(f"line {lineno}: invalid ({msg})", file=sys.stderr)
    if rows:
        return EXIT_OK
    return EXIT_RUNTIME


def _analyze_lines(fh, s: int | None):
    rows, bad = [], []
    for lineno, line in enumerate(fh, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            t = tree_ops.from_degrees(tree_ops.parse_degree_line(stripped))
        except TreeError as exc:
            bad.append((lineno, str(exc)))
            continue
        peel = tree_ops.peel_numbers(t)
        lam = tree_ops.leaf_heights(t)
        row = {
            "line": lineno,
            "n": t.n,
            "independence": int(np.count_nonzero(peel % 2 == 0)),
            "vertex_cover": int(np.count_nonzero(peel % 2 == 1)),
            "max_peel": int(peel.max()),
            "max_leaf_height": int(lam.max()),
            "root_peel": int(peel[0]),
            "layers": [int(c) for c in np.bincount(peel)],
        }
        if s is not None:
            row["v_s"] = tree_ops.mark_spvc(t, s).size
        rows.append(row)
    return rows, bad


def _cmd_experiment(args) -> int:
    stream = RandomStream(args.seed)
    n_values = _int_list(args.n)
    name = args.name
    if name == "independence":
        report = experiments.run_independence(args.family, n_values, args.trials,
                                              stream, threads=args.threads)
    elif name == "peel":
        report = experiments.run_peel(args.family, n_values, args.trials,
                                      stream, threads=args.threads)
    elif name == "leafheight":
        report = experiments.run_leafheight(args.family, n_values, args.trials,
                                            stream, threads=args.threads)
    elif name == "layers":
        report = experiments.run_layers(args.family, n_values[-1], args.trials,
                                        args.i_max, stream, threads=args.threads)
    elif name == "rootlaw":
        report = experiments.run_root_leafheight(args.family, n_values[-1],
                                                 args.trials, stream,
                                                 threads=args.threads)
    else:
        reports = experiments.run_spvc(args.family, _int_list(args.s_values),
                                       n_values, args.trials, stream,
                                       threads=args.threads)
        return _emit_reports(reports, args)
    return _emit_reports([report], args)


def _emit_reports(reports, args) -> int:
    if args.format == "json":
        blob = "".join(r.to_json() for r in reports)
    else:
        chunks = []
        for r in reports:
            text = r.to_text()
            if hasattr(r, "verdict"):
                colored = _color(r.verdict.upper(),
                                 "32" if r.verdict == "consistent" else "31")
                text = text.replace(r.verdict.upper(), colored, 1)
            chunks.append(text)
        blob = "\n".join(chunks)
    _write_out(blob, args.output)
    if args.dump_trials:
        dumpable = [r for r in reports if hasattr(r, "trials_csv")]
        with open(args.dump_trials, "w") as fh:
            for r in dumpable:
                fh.write(r.trials_csv())
    return EXIT_OK


def _cmd_table1(args) -> int:
    report = experiments.table1(args.trials, args.n, RandomStream(args.seed),
                                threads=args.threads)
    text = report.to_json() if args.format == "json" else report.to_text()
    _write_out(text, args.output)
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "dist": _cmd_dist,
    "sample": _cmd_sample,
    "analyze": _cmd_analyze,
    "experiment": _cmd_experiment,
    "table1": _cmd_table1,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"gwpeel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OffspringError, TreeError) as exc:
        print(f"gwpeel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SamplerError as exc:
        print(f"gwpeel: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, OSError) as exc:
        print(f"gwpeel: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
