"""Command line: ``parm mine``, ``parm gen`` and ``parm eval``.

Exit codes: 0 on success, 1 on a configuration or usage error (bad
parameters, unparsable or dominated rule), 2 on an input/output error
(missing or malformed files).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .approx import mine_pioneer_approx
from .baseline import mine_baseline
from .config import ConfigError, MiningConfig
from .graph import GraphFormatError, load_graph, save_dictionary, save_graph
from .measures import DominatedRuleError, EmptyAntecedent, EmptyConsequent, Rule, evaluate_rule
from .patterns import PatternSyntaxError, parse_pattern
from .pioneer import mine_pioneer
from .results import rule_rows
from .synthgen import GenSpec, GenSpecError, generate

EXIT_CONFIG = 1
EXIT_IO = 2

BASE_COLUMNS = ("antecedent", "consequent", "asupp", "rsupp", "conf", "lift")
EST_COLUMNS = ("est", "ci_low", "ci_high")

DEFAULT_THREADS = min(32, os.cpu_count() or 1)
APPROX_DEFAULT = 0.4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _load(args):
    try:
        return load_graph(args.vertices, args.edges, args.dict)
    except (OSError, GraphFormatError) as exc:
        raise _Fail(EXIT_IO, str(exc)) from None


def _config(args) -> MiningConfig:
    psi, rho = args.psi, args.rho
    if args.algo == "pioneer-approx":
        psi = APPROX_DEFAULT if psi is None else psi
        rho = APPROX_DEFAULT if rho is None else rho
    try:
        return MiningConfig(
            theta=args.theta, relative=args.relative, k=args.k,
            psi=1.0 if psi is None else psi, rho=1.0 if rho is None else rho,
            threads=args.threads, seed=args.seed, z=args.z, star_mode=args.star_mode)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None


def write_rules(rows, fh, fmt: str = "tsv", with_estimates: bool = False) -> None:
    cols = BASE_COLUMNS + (EST_COLUMNS if with_estimates else ())
    if fmt == "json":
        for row in rows:
            fh.write(json.dumps({c: row.get(c) for c in cols}) + "\n")
        return
    fh.write("\t".join(cols) + "\n")
    for row in rows:
        fh.write("\t".join(row[c] if c in ("antecedent", "consequent") else _fmt(row[c])
                           for c in cols) + "\n")


def cmd_mine(args) -> int:
    config = _config(args)
    g = _load(args)
    if args.algo == "baseline":
        if config.approximate:
            raise _Fail(EXIT_CONFIG, "--psi/--rho need --algo pioneer or pioneer-approx")
        fs = mine_baseline(g, config)
    elif config.approximate:
        fs = mine_pioneer_approx(g, config)
    else:
        fs = mine_pioneer(g, config)
    rows = rule_rows(fs, g)
    with_est = config.rho < 1
    try:
        if args.output and args.output != "-":
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                write_rules(rows, fh, args.format, with_est)
        else:
            write_rules(rows, sys.stdout, args.format, with_est)
        if args.report:
            with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(fs.report.to_json(timings=not args.no_timings) + "\n")
    except OSError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    print(f"{len(rows)} rules, {len(fs.patterns())} patterns, theta={fs.theta}", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    try:
        spec = GenSpec(args.n, args.m, args.dist, args.labels, args.attrs,
                       args.avg_attrs, args.seed, args.lam)
    except GenSpecError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None
    g = generate(spec)
    vfile, efile = args.prefix + ".vertices.tsv", args.prefix + ".edges.tsv"
    try:
        save_graph(g, vfile, efile)
        save_dictionary(g, args.prefix)
    except OSError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    print(f"wrote {vfile} and {efile}: {g.n_vertices} vertices, {g.n_edges} edges", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    g = _load(args)
    if "=>" not in args.rule:
        raise _Fail(EXIT_CONFIG, "rule must look like '<pattern> => <pattern>'")
    left, right = args.rule.split("=>", 1)
    try:
        rule = Rule(parse_pattern(left.strip(), g), parse_pattern(right.strip(), g))
        hops = args.k if args.star_mode == "capped" else None
        m = evaluate_rule(g, rule, hops)
    except PatternSyntaxError as exc:
        raise _Fail(EXIT_CONFIG, f"cannot parse rule: {exc}") from None
    except DominatedRuleError:
        raise _Fail(EXIT_CONFIG, "refusing rule: one side dominates the other, "
                                 "so the rule holds trivially") from None
    except (EmptyAntecedent, EmptyConsequent) as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None
    for name, value in zip(("asupp", "rsupp", "conf", "lift"), m.as_floats()):
        print(f"{name}\t{_fmt(int(value)) if name == 'asupp' else _fmt(value)}")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage mistakes are configuration errors; exit code 2 means I/O
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def star_args(sp) -> None:
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--star-mode", choices=("capped", "unbounded"), default="capped",
                       help="cap reachability at k hops (default) or not")
    group.add_argument("--unbounded-star", dest="star_mode", action="store_const", const="unbounded",
                       help="same as --star-mode unbounded")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="parm", description="Path association rule mining.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_args(sp):
        sp.add_argument("vertices", help="vertex file: <id>\\t<attr>,<attr>...")
        sp.add_argument("edges", help="edge file: <src>\\t<label>\\t<dst>")
        sp.add_argument("--dict", metavar="PREFIX", help="reuse attribute/label ids from a dictionary sidecar")

    m = sub.add_parser("mine", help="mine frequent patterns and rules")
    graph_args(m)
    m.add_argument("--theta", type=float, required=True, help="minimum support")
    m.add_argument("--relative", action="store_true", help="read --theta as a fraction of |V|")
    m.add_argument("--k", type=int, default=2, help="maximum path length (default 2)")
    m.add_argument("--algo", choices=("baseline", "pioneer", "pioneer-approx"), default="pioneer")
    m.add_argument("--psi", type=float, help="candidate reduction exponent (pioneer-approx default 0.4)")
    m.add_argument("--rho", type=float, help="vertex sampling ratio (pioneer-approx default 0.4)")
    m.add_argument("--threads", type=int, default=DEFAULT_THREADS,
                   help=f"worker partitions (default {DEFAULT_THREADS})")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--z", type=float, default=1.96, help="z-value of the sampling interval")
    star_args(m)
    m.add_argument("--format", choices=("tsv", "json"), default="tsv")
    m.add_argument("--output", "-o", help="rules file (default stdout)")
    m.add_argument("--report", help="write the JSON run report here")
    m.add_argument("--no-timings", action="store_true", help="omit timing and memory fields from the report")
    m.set_defaults(func=cmd_mine)

    gsp = sub.add_parser("gen", help="generate a synthetic graph")
    gsp.add_argument("-n", type=int, required=True, help="vertices")
    gsp.add_argument("-m", type=int, required=True, help="edges")
    gsp.add_argument("--dist", choices=("uniform", "exponential"), default="uniform")
    gsp.add_argument("--labels", type=int, default=4)
    gsp.add_argument("--attrs", type=int, default=10)
    gsp.add_argument("--avg-attrs", type=float, default=2.0)
    gsp.add_argument("--lam", type=float, default=5.0, help="decay rate of the exponential distribution")
    gsp.add_argument("--seed", type=int, default=0)
    gsp.add_argument("--prefix", "-o", default="synthetic", help="output prefix")
    gsp.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="measures of one rule, e.g. '{a}-[l]->{b} => {c}-[m]->{d}'")
    graph_args(e)
    e.add_argument("rule")
    e.add_argument("--k", type=int, default=2, help="hop cap for reachability patterns")
    star_args(e)
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"parm: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
