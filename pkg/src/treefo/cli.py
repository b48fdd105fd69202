"""Command-line interface.

Exit codes for analyze/verdict: 0 DEFINABLE, 1 NOT_DEFINABLE, 2 UNKNOWN,
3 and above for errors.  member exits 0 on accept, 1 on reject.  Every flag
has an environment override with the TREEFO_ prefix.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .errors import TreefoError
from .automata import Dfta
from .clone import build_syntactic
from .congruence import congruence_lattice
from .definability import verdict, divisor_index
from .reports import (
    analysis_document,
    congruence_section,
    minimal_set_section,
    operations_section,
    carrier_section,
    semigroup_section,
    render_analysis_text,
    to_json,
    SCHEMA_VERSION,
)
from .starfree import compare_language, parse_expression
from .trees import enumerate_trees, parse_tree

ENV_PREFIX = "TREEFO_"
EXIT_ERROR = 3


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def _add_common(p):
    p.add_argument(
        "--max-arity",
        type=int,
        default=None,
        help="arity cap for operation tables (default: max(3, max rank))",
    )
    p.add_argument(
        "--oracle-depth",
        type=int,
        default=None,
        help="tree height bound for enumeration-based commands (default 5)",
    )
    p.add_argument(
        "--format",
        choices=("text", "json"),
        default=None,
        help="report format (default text)",
    )
    p.add_argument("--names", default=None, help="JSON file mapping representatives to aliases")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="treefo",
        description="first-order definability analysis for regular tree languages",
    )
    ap.add_argument("--version", action="version", version=f"treefo {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in [
        ("analyze", "full report: carrier, semigroup, lattice, minimal sets, verdict"),
        ("syntactic", "carrier, operation counts and semigroup of the syntactic algebra"),
        ("congruences", "the congruence lattice"),
        ("minsets", "minimal sets and trace types per covering pair"),
        ("verdict", "definability verdict only"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("automaton", help="automaton JSON file")
        _add_common(p)

    p = sub.add_parser("member", help="membership of a ground tree")
    p.add_argument("automaton")
    p.add_argument("tree", help="tree text, e.g. a(c,c)")
    _add_common(p)

    p = sub.add_parser("enumerate", help="ground trees of the alphabet in canonical order")
    p.add_argument("automaton")
    _add_common(p)

    p = sub.add_parser("starfree", help="compare a star-free expression with an automaton")
    p.add_argument("expression", help="expression file")
    p.add_argument("automaton")
    _add_common(p)
    return ap


def _resolve(args):
    cfg = {}
    cfg["max_arity"] = (
        args.max_arity
        if args.max_arity is not None
        else int(_env("MAX_ARITY", "0")) or None
    )
    cfg["oracle_depth"] = (
        args.oracle_depth
        if args.oracle_depth is not None
        else int(_env("ORACLE_DEPTH", "5"))
    )
    cfg["format"] = args.format or _env("FORMAT", "text")
    cfg["names"] = args.names or _env("NAMES") or None
    if cfg["oracle_depth"] < 1:
        raise TreefoError("oracle depth must be at least 1")
    return cfg


def _build(args, cfg):
    dfta = Dfta.load(args.automaton)
    C = build_syntactic(dfta, cfg["max_arity"])
    if cfg["names"]:
        with open(cfg["names"], "r", encoding="utf-8") as fh:
            C.rename(json.load(fh))
    return dfta, C


def _config_echo(args, cfg):
    return {
        "input": args.automaton,
        "max_arity": cfg["max_arity"] or "default",
        "oracle_depth": cfg["oracle_depth"],
        "names": cfg["names"] or "",
        "schema_version": SCHEMA_VERSION,
    }


def _emit(doc, cfg, text_renderer):
    if cfg["format"] == "json":
        sys.stdout.write(to_json(doc))
    else:
        sys.stdout.write(text_renderer(doc))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)

        if args.command == "analyze":
            _, C = _build(args, cfg)
            doc = analysis_document(C, _config_echo(args, cfg))
            _emit(doc, cfg, render_analysis_text)
            return {"DEFINABLE": 0, "NOT_DEFINABLE": 1, "UNKNOWN": 2}[
                doc["verdict"]["status"]
            ]

        if args.command == "verdict":
            _, C = _build(args, cfg)
            v = verdict(C)
            doc = v.to_dict(C.names)
            if cfg["format"] == "json":
                sys.stdout.write(to_json(doc))
            else:
                sys.stdout.write(f"status: {v.status}\n")
                if v.witness:
                    sys.stdout.write(f"witness: {json.dumps(v.witness, sort_keys=True)}\n")
                for c in v.caveats:
                    sys.stdout.write(f"caveat: {c}\n")
            return v.exit_code()

        if args.command == "syntactic":
            _, C = _build(args, cfg)
            doc = {
                "schema_version": SCHEMA_VERSION,
                "carrier": carrier_section(C),
                "operations": operations_section(C),
                "semigroup": semigroup_section(C),
            }
            if cfg["format"] == "json":
                sys.stdout.write(to_json(doc))
            else:
                for row in doc["carrier"]["elements"]:
                    acc = " accepting" if row["accepting"] else ""
                    sys.stdout.write(
                        f"[{row['index']}] {row['name']} = {row['representative']}{acc}\n"
                    )
                counts = doc["operations"]["counts_by_arity"]
                sys.stdout.write(
                    "tables by arity: "
                    + ", ".join(f"{k}:{counts[k]}" for k in sorted(counts, key=int))
                    + "\n"
                )
                ap = doc["semigroup"]["aperiodicity"]
                sys.stdout.write(f"semigroup size: {len(doc['semigroup']['elements'])}\n")
                sys.stdout.write(f"aperiodic: {'yes' if ap['aperiodic'] else 'no'}\n")
            return 0

        if args.command == "congruences":
            _, C = _build(args, cfg)
            doc = {"schema_version": SCHEMA_VERSION, **congruence_section(C)}
            if cfg["format"] == "json":
                sys.stdout.write(to_json(doc))
            else:
                sys.stdout.write(f"simple: {'yes' if doc['simple'] else 'no'}\n")
                for p in doc["lattice"]:
                    sys.stdout.write(p + "\n")
            return 0

        if args.command == "minsets":
            _, C = _build(args, cfg)
            doc = {"schema_version": SCHEMA_VERSION, **minimal_set_section(C)}
            if cfg["format"] == "json":
                sys.stdout.write(to_json(doc))
            else:
                for rep in doc["reports"]:
                    sys.stdout.write(f"pair {rep['alpha']} < {rep['beta']}\n")
                    for ms in rep["minimal_sets"]:
                        image = "{" + ",".join(ms["image"]) + "}"
                        sys.stdout.write(f"  minimal set {image}\n")
                        for tr in ms["traces"]:
                            tset = "{" + ",".join(tr["elements"]) + "}"
                            sys.stdout.write(f"    trace {tset}: type {tr['label']}\n")
            return 0

        if args.command == "member":
            dfta, _ = None, None
            dfta = Dfta.load(args.automaton).complete()
            tree = parse_tree(args.tree)
            ok = dfta.member(tree)
            sys.stdout.write("accept\n" if ok else "reject\n")
            return 0 if ok else 1

        if args.command == "enumerate":
            dfta = Dfta.load(args.automaton)
            for t in enumerate_trees(dfta.alphabet, (), cfg["oracle_depth"]):
                sys.stdout.write(str(t) + "\n")
            return 0

        if args.command == "starfree":
            dfta = Dfta.load(args.automaton).complete()
            with open(args.expression, "r", encoding="utf-8") as fh:
                text = fh.read()
            expr = parse_expression(text, dfta.alphabet)
            report = compare_language(expr, dfta, cfg["oracle_depth"])
            if cfg["format"] == "json":
                sys.stdout.write(to_json({"schema_version": SCHEMA_VERSION, **report.to_dict()}))
            else:
                sys.stdout.write(report.render() + "\n")
            return 0

        raise TreefoError(f"unknown command {args.command!r}")
    except TreefoError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR + 1


def entry():
    raise SystemExit(main())
