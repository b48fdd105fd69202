"""Deterministic text and JSON report assembly.

Identical inputs and flags produce byte-identical output: every collection
is sorted before rendering and no timestamps or machine state are embedded.
The JSON schema carries an integer version; the text format is for humans.
"""

from __future__ import annotations

import itertools
import json

from . import __version__
from .clone import CloneAlgebra, apply_table, is_aperiodic, render_term, sg
from .congruence import (
    Partition,
    congruence_lattice,
    is_simple,
    preservation_witness,
)
from .definability import divisor_index, semilattice_certificate, verdict
from .tct import idempotents, is_minimal_algebra, classify_minimal, min_sets, localise

SCHEMA_VERSION = 1
MERGE_REPORT_LIMIT = 6  # carriers above this get no pairwise-merge section


def _table_lines(name, table, arity, size, names):
    out = []
    for args in itertools.product(range(size), repeat=arity):
        val = apply_table(table, args, size)
        rendered = ",".join(names[a] for a in args)
        out.append(f"{name}({rendered})={names[val]}" if arity else f"{name}={names[val]}")
    return out


def carrier_section(C: CloneAlgebra) -> dict:
    rows = []
    for i in range(C.size):
        rows.append(
            {
                "index": i,
                "name": C.names[i],
                "representative": str(C.reps[i]) if C.reps else None,
                "accepting": (i in C.accepting) if C.accepting is not None else None,
            }
        )
    return {"size": C.size, "elements": rows}


def operations_section(C: CloneAlgebra) -> dict:
    letters = {}
    for name in sorted(C.letters):
        table = C.letters[name]
        arity = C.alphabet.rank(name) if C.alphabet else None
        letters[name] = {"arity": arity, "table": list(table)}
    return {"counts_by_arity": {str(k): v for k, v in C.counts_by_arity().items()},
            "letters": letters}


def semigroup_section(C: CloneAlgebra) -> dict:
    S = sg(C)
    ap = is_aperiodic(S)
    return {
        "elements": [
            {"table": list(t), "term": render_term(S.provenance.get(t), C.names)}
            for t in S.elements
        ],
        "composition": [list(row) for row in S.composition],
        "aperiodicity": ap.to_dict(),
    }


def congruence_section(C: CloneAlgebra) -> dict:
    lat = congruence_lattice(C)
    out = {
        "count": len(lat),
        "lattice": [p.render(C.names) for p in lat.congruences],
        "covering_pairs": [
            [lat.congruences[i].render(C.names), lat.congruences[j].render(C.names)]
            for i, j in lat.covering_pairs
        ],
        "simple": is_simple(C),
    }
    if C.size <= MERGE_REPORT_LIMIT:
        merges = []
        for a in range(C.size):
            for b in range(a + 1, C.size):
                part = Partition.merge_pair(C.size, a, b)
                w = preservation_witness(C, part)
                merges.append(
                    {
                        "merge": [C.names[a], C.names[b]],
                        "congruence": w is None,
                        "witness": w.to_dict(C.names) if w else None,
                    }
                )
        out["pairwise_merges"] = merges
    return out


def idempotent_section(C: CloneAlgebra) -> dict:
    rows = []
    for e in idempotents(C):
        loc = localise(C, e.image)
        if loc.size == 1:
            kind = "trivial"
        elif is_minimal_algebra(loc):
            kind = classify_minimal(loc)
        else:
            kind = "not minimal"
        row = e.to_dict(C.names)
        row["localisation"] = kind
        rows.append(row)
    return {"idempotents": rows}


def minimal_set_section(C: CloneAlgebra) -> dict:
    lat = congruence_lattice(C)
    reports = []
    for i, j in lat.covering_pairs:
        rep = min_sets(C, lat.congruences[i], lat.congruences[j], lattice=lat)
        reports.append(rep.to_dict(C.names))
    return {"reports": reports}


def divisor_section(C: CloneAlgebra, index) -> dict:
    rows = []
    for entry in index:
        alg = entry.algebra
        lat = congruence_lattice(alg)
        simple = alg.size >= 2 and len(lat) == 2
        row = entry.to_dict(C.names)
        row["congruence_count"] = len(lat)
        row["simple"] = simple
        if simple:
            row["semilattice"] = semilattice_certificate(entry) is not None
        rows.append(row)
    return {"count": len(rows), "entries": rows}


def analysis_document(C: CloneAlgebra, config: dict) -> dict:
    index = divisor_index(C)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "treefo", "version": __version__},
        "config": config,
        "notes": list(C.notes),
        "carrier": carrier_section(C),
        "operations": operations_section(C),
        "semigroup": semigroup_section(C),
        "congruences": congruence_section(C),
        "idempotents": idempotent_section(C)["idempotents"],
        "minimal_sets": minimal_set_section(C)["reports"],
        "divisors": divisor_section(C, index),
        "verdict": verdict(C, index).to_dict(C.names),
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------- text rendering


def _hdr(title):
    return [title, "-" * len(title)]


def render_analysis_text(doc: dict) -> str:
    lines = []
    tool = doc["tool"]
    lines.append(f"{tool['name']} {tool['version']} analysis report")
    cfg = doc["config"]
    lines.append(
        "config: " + " ".join(f"{k}={cfg[k]}" for k in sorted(cfg))
    )
    for note in doc["notes"]:
        lines.append(f"note: {note}")
    lines.append("")

    lines += _hdr("carrier")
    for row in doc["carrier"]["elements"]:
        acc = " accepting" if row["accepting"] else ""
        lines.append(f"  [{row['index']}] {row['name']} = {row['representative']}{acc}")
    lines.append("")

    lines += _hdr("operations")
    counts = doc["operations"]["counts_by_arity"]
    lines.append(
        "  tables by arity: "
        + ", ".join(f"{k}:{counts[k]}" for k in sorted(counts, key=int))
    )
    names = [row["name"] for row in doc["carrier"]["elements"]]
    for sym in sorted(doc["operations"]["letters"]):
        info = doc["operations"]["letters"][sym]
        size = len(names)
        for line in _table_lines(sym, tuple(info["table"]), info["arity"], size, names):
            lines.append("  " + line)
    lines.append("")

    lines += _hdr("unary semigroup")
    ap = doc["semigroup"]["aperiodicity"]
    for el in doc["semigroup"]["elements"]:
        lines.append(f"  {el['term']}: {el['table']}")
    if ap["aperiodic"]:
        lines.append(f"  aperiodic: yes (f^n = f^(n+1) at n={ap['bound']})")
    else:
        lines.append(
            f"  aperiodic: NO, witness {ap['witness_term']} with period {ap['period']}"
        )
    lines.append("")

    lines += _hdr("congruences")
    lines.append(f"  simple: {'yes' if doc['congruences']['simple'] else 'no'}")
    for p in doc["congruences"]["lattice"]:
        lines.append(f"  {p}")
    for pair in doc["congruences"]["covering_pairs"]:
        lines.append(f"  covering: {pair[0]} < {pair[1]}")
    for m in doc["congruences"].get("pairwise_merges", []):
        if m["congruence"]:
            lines.append(f"  merge {m['merge'][0]}~{m['merge'][1]}: congruence")
        else:
            w = m["witness"]
            lines.append(
                f"  merge {m['merge'][0]}~{m['merge'][1]}: rejected, "
                f"{w['table']}({','.join(w['args'])})={w['out']} but "
                f"{w['table']}({','.join(w['args_related'])})={w['out_related']}"
            )
    lines.append("")

    lines += _hdr("idempotents")
    for row in doc["idempotents"]:
        image = "{" + ",".join(row["image"]) + "}"
        tag = " (identity)" if row["identity"] else ""
        lines.append(
            f"  {row['term']}{tag}: image {image}, localisation {row['localisation']}"
        )
    lines.append("")

    lines += _hdr("minimal sets")
    for rep in doc["minimal_sets"]:
        lines.append(f"  covering pair {rep['alpha']} < {rep['beta']}")
        for ms in rep["minimal_sets"]:
            image = "{" + ",".join(ms["image"]) + "}"
            lines.append(f"    minimal set {image} via {ms['idempotent']['term']}")
            for tr in ms["traces"]:
                tset = "{" + ",".join(tr["elements"]) + "}"
                lines.append(f"      trace {tset}: type {tr['label']}")
        for note in rep["order_notes"]:
            lines.append(f"    note: {note}")
    lines.append("")

    lines += _hdr("divisors")
    lines.append(f"  entries: {doc['divisors']['count']}")
    for row in doc["divisors"]["entries"]:
        simple = "simple" if row["simple"] else f"{row['congruence_count']} congruences"
        extra = ""
        if row["simple"]:
            extra = ", semilattice" if row.get("semilattice") else ", NOT a semilattice"
        lines.append(f"  {row['label']}: size {row['size']}, {simple}{extra}")
    lines.append("")

    lines += _hdr("verdict")
    v = doc["verdict"]
    lines.append(f"  status: {v['status']}")
    if v["witness"]:
        lines.append(f"  witness: {json.dumps(v['witness'], sort_keys=True)}")
    for cert in v["certificates"]:
        lines.append(f"  certificate for {cert['divisor']}: meet {cert['meet']}")
    for caveat in v["caveats"]:
        lines.append(f"  caveat: {caveat}")
    return "\n".join(lines) + "\n"
