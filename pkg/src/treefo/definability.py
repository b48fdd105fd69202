"""The verdict engine.

Necessary side: the unary-element semigroup must be aperiodic, and no trace
of any covering pair of any divisor may have unary, affine, boolean or
lattice type.  Sufficient side: aperiodicity plus every simple divisor
polynomially equivalent to a semilattice.  The gap between the two is
reported as UNKNOWN with full diagnostics.

Divisors are built from the linear (exactly-once) elements: a subset S of
the carrier induces the subalgebra of all linear tables preserving S, and
the analysis algebra is its identification closure computed within S.  The
index contains these localisations for every nonempty subset, plus their
quotients by every congruence.  Subalgebras obtained by also removing
operations are not enumerated (no finite bound is available); a DEFINABLE
verdict therefore carries an explicit caveat line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ContractError
from .clone import (
    CloneAlgebra,
    TableAlgebra,
    apply_table,
    close_tables,
    compose_unary,
    is_aperiodic,
    preserves_subset,
    render_term,
    restrict_table,
    sg,
)
from .congruence import Partition, congruence_lattice, quotient
from .tct import BAD_TYPES, min_sets

NOT_DEFINABLE = "NOT_DEFINABLE"
DEFINABLE = "DEFINABLE"
UNKNOWN = "UNKNOWN"

OPERATION_REMOVAL_CAVEAT = (
    "divisor enumeration covers localisations over every carrier subset and "
    "their quotients; subalgebras obtained by also removing operations are "
    "not enumerated, so the sufficient check may accept an algebra with a "
    "non-semilattice operation-removed simple divisor"
)

UNKNOWN_NOTE = (
    "the necessary conditions hold but the sufficient ones fail; "
    "definability is open for this input"
)


# -------------------------------------------------------------- divisor index


@dataclass
class DivisorEntry:
    subset: tuple                 # carrier indices of the localisation
    congruence: Partition         # congruence of the localised algebra
    algebra: TableAlgebra
    label: str

    def to_dict(self, names=None):
        nm = (lambda e: names[e]) if names else str
        return {
            "subset": [nm(e) for e in self.subset],
            "congruence": self.congruence.render([nm(e) for e in self.subset]),
            "size": self.algebra.size,
            "label": self.label,
        }


def divisor_algebra(C: CloneAlgebra, subset) -> TableAlgebra:
    """The identification closure, within the subset, of the linear elements
    preserving it.  For the full carrier this is the clone itself."""
    sub = tuple(sorted(set(subset)))
    if not sub:
        raise ContractError("divisor subset must be nonempty")
    if sub == tuple(range(C.size)):
        return TableAlgebra(size=C.size, names=C.names, ops=C.ops, n_max=C.n_max)
    seeds = {}
    counter = 0
    for k in sorted(C.linear_ops):
        if k == 0:
            continue
        for table in sorted(C.linear_ops[k]):
            if preserves_subset(table, k, C.size, sub):
                seeds[f"g{counter}"] = (k, restrict_table(table, k, C.size, sub))
                counter += 1
    ops, _ = close_tables(len(sub), {n: kt for n, kt in seeds.items()}, C.n_max)
    ops[0] = {
        (i,): C.ops[0].get((e,)) for i, e in enumerate(sub)
    }
    names = tuple(C.names[e] for e in sub)
    return TableAlgebra(size=len(sub), names=names, ops=ops, n_max=C.n_max)


def divisor_index(C: CloneAlgebra) -> list:
    """Localisation-per-subset divisors and all their congruence quotients,
    in deterministic order: subsets by (size, lexicographic), then congruences."""
    entries = []
    indices = range(C.size)
    subsets = []
    for r in range(1, C.size + 1):
        subsets.extend(itertools.combinations(indices, r))
    subsets.sort(key=lambda s: (len(s), s))
    for sub in subsets:
        alg = divisor_algebra(C, sub)
        lat = congruence_lattice(alg)
        subset_names = "{" + ",".join(C.names[e] for e in sub) + "}"
        for part in lat.congruences:
            if part.is_bottom():
                entry_alg = alg
                label = subset_names
            else:
                entry_alg = quotient(alg, part)
                label = f"{subset_names}/{part.render([C.names[e] for e in sub])}"
            entries.append(DivisorEntry(sub, part, entry_alg, label))
    return entries


# ------------------------------------------------------------ necessary side


@dataclass
class TraceWitness:
    divisor: DivisorEntry
    alpha: Partition
    beta: Partition
    image: tuple
    trace: tuple
    label: str

    def to_dict(self, names=None):
        dn = self.divisor.algebra.names
        return {
            "kind": "trace_type",
            "divisor": self.divisor.label,
            "alpha": self.alpha.render(dn),
            "beta": self.beta.render(dn),
            "minimal_set": [dn[e] for e in self.image],
            "trace": [dn[e] for e in self.trace],
            "label": self.label,
        }


@dataclass
class AperiodicityWitness:
    table: tuple
    term: str
    period: int

    def to_dict(self, names=None):
        return {
            "kind": "non_aperiodic",
            "element": list(self.table),
            "term": self.term,
            "period": self.period,
        }


@dataclass
class NecessaryResult:
    passed: bool
    witness: object = None
    aperiodicity_bound: int | None = None
    scanned: tuple = ()

    def to_dict(self, names=None):
        d = {"passed": self.passed, "divisors_scanned": len(self.scanned)}
        if self.passed:
            d["aperiodicity_bound"] = self.aperiodicity_bound
        else:
            d["witness"] = self.witness.to_dict(names)
        return d


def check_necessary(C: CloneAlgebra, index=None) -> NecessaryResult:
    """Fail on a non-aperiodic unary element or a forbidden trace type."""
    ap = is_aperiodic(sg(C))
    if not ap.aperiodic:
        return NecessaryResult(
            passed=False,
            witness=AperiodicityWitness(
                ap.witness, render_term(ap.witness_prov, C.names), ap.period
            ),
        )
    if index is None:
        index = divisor_index(C)
    scanned = []
    for entry in index:
        lat = congruence_lattice(entry.algebra)
        for i, j in lat.covering_pairs:
            alpha, beta = lat.congruences[i], lat.congruences[j]
            report = min_sets(entry.algebra, alpha, beta, lattice=lat)
            scanned.append((entry.label, alpha, beta))
            for ms in report.minimal_sets:
                for tr in ms.traces:
                    if tr.label in BAD_TYPES:
                        return NecessaryResult(
                            passed=False,
                            witness=TraceWitness(
                                entry, alpha, beta, ms.image, tr.elements, tr.label
                            ),
                        )
    return NecessaryResult(
        passed=True, aperiodicity_bound=ap.bound, scanned=tuple(scanned)
    )


# ----------------------------------------------------------- sufficient side


@dataclass
class SemilatticeCertificate:
    divisor: DivisorEntry
    meet: tuple
    order_pairs: tuple            # (lower, upper) element-index pairs
    normal_forms: dict            # (arity, table) -> {"support": [...], "constant": ...}

    def to_dict(self, names=None):
        dn = self.divisor.algebra.names
        return {
            "divisor": self.divisor.label,
            "meet": list(self.meet),
            "order": [[dn[a], dn[b]] for a, b in self.order_pairs],
            "normal_forms": [
                {
                    "arity": k,
                    "table": list(t),
                    "support": nf["support"],
                    "constant": (dn[nf["constant"]] if nf["constant"] is not None else None),
                }
                for (k, t), nf in sorted(self.normal_forms.items())
            ],
        }


@dataclass
class SufficientResult:
    passed: bool
    certificates: tuple = ()
    aperiodicity_bound: int | None = None
    failure: dict | None = None

    def to_dict(self, names=None):
        d = {"passed": self.passed}
        if self.passed:
            d["aperiodicity_bound"] = self.aperiodicity_bound
            d["certificates"] = [c.to_dict(names) for c in self.certificates]
        else:
            d["failure"] = self.failure
        return d


def _meet_candidates(alg):
    """Stored binary tables that are semilattice operations."""
    size = alg.size
    for table in sorted(alg.tables_at(2)):
        if any(apply_table(table, (x, x), size) != x for x in range(size)):
            continue
        if any(
            apply_table(table, (x, y), size) != apply_table(table, (y, x), size)
            for x in range(size)
            for y in range(size)
        ):
            continue
        if any(
            apply_table(table, (apply_table(table, (x, y), size), z), size)
            != apply_table(table, (x, apply_table(table, (y, z), size)), size)
            for x in range(size)
            for y in range(size)
            for z in range(size)
        ):
            continue
        yield table


def _normal_form(table, arity, size, meet):
    """A nonempty argument subset and optional constant whose meet equals the
    table, or None.  Arity-0 tables pass as bare constants."""
    if arity == 0:
        return {"support": [], "constant": table[0]}

    def meet_of(values):
        acc = values[0]
        for v in values[1:]:
            acc = apply_table(meet, (acc, v), size)
        return acc

    coords = range(arity)
    for r in range(1, arity + 1):
        for support in itertools.combinations(coords, r):
            for constant in (None,) + tuple(range(size)):
                ok = True
                for args in itertools.product(range(size), repeat=arity):
                    vals = [args[i] for i in support]
                    if constant is not None:
                        vals.append(constant)
                    if apply_table(table, args, size) != meet_of(vals):
                        ok = False
                        break
                if ok:
                    return {"support": list(support), "constant": constant}
    return None


def semilattice_certificate(entry: DivisorEntry):
    """A meet table plus per-operation normal forms, or None.

    The divisor is polynomially equivalent to a semilattice exactly when one
    of its own binary tables is a semilattice operation under which every
    stored table is a meet of a nonempty argument subset, optionally with a
    constant (closure of the table family supplies the converse direction).
    """
    alg = entry.algebra
    for meet in _meet_candidates(alg):
        forms = {}
        good = True
        for k, table, _ in alg.iter_tables():
            nf = _normal_form(table, k, alg.size, meet)
            if nf is None:
                good = False
                break
            forms[(k, table)] = nf
        if good:
            order = tuple(
                (a, b)
                for a in range(alg.size)
                for b in range(alg.size)
                if a != b and apply_table(meet, (a, b), alg.size) == a
            )
            return SemilatticeCertificate(entry, meet, order, forms)
    return None


def check_sufficient(C: CloneAlgebra, index=None) -> SufficientResult:
    """Aperiodicity plus a semilattice certificate for every simple divisor."""
    ap = is_aperiodic(sg(C))
    if not ap.aperiodic:
        return SufficientResult(
            passed=False,
            failure={
                "reason": "semigroup not aperiodic",
                "witness": AperiodicityWitness(
                    ap.witness, render_term(ap.witness_prov, C.names), ap.period
                ).to_dict(),
            },
        )
    if index is None:
        index = divisor_index(C)
    certificates = []
    for entry in index:
        alg = entry.algebra
        if alg.size < 2:
            continue
        if len(congruence_lattice(alg)) != 2:
            continue
        cert = semilattice_certificate(entry)
        if cert is None:
            return SufficientResult(
                passed=False,
                failure={
                    "reason": "simple divisor is not a semilattice",
                    "divisor": entry.label,
                    "size": alg.size,
                },
            )
        certificates.append(cert)
    return SufficientResult(
        passed=True, certificates=tuple(certificates), aperiodicity_bound=ap.bound
    )


# ---------------------------------------------------------------- the verdict


@dataclass
class Verdict:
    status: str
    witness: dict | None = None
    certificates: tuple = ()
    diagnostics: dict = field(default_factory=dict)
    caveats: tuple = ()

    def exit_code(self) -> int:
        return {DEFINABLE: 0, NOT_DEFINABLE: 1, UNKNOWN: 2}[self.status]

    def to_dict(self, names=None):
        return {
            "status": self.status,
            "witness": self.witness,
            "certificates": [c.to_dict(names) for c in self.certificates],
            "diagnostics": self.diagnostics,
            "caveats": list(self.caveats),
        }


def verdict(C: CloneAlgebra, index=None) -> Verdict:
    if index is None:
        index = divisor_index(C)
    nec = check_necessary(C, index)
    if not nec.passed:
        return Verdict(
            status=NOT_DEFINABLE,
            witness=nec.witness.to_dict(),
            diagnostics={"necessary": nec.to_dict()},
        )
    suf = check_sufficient(C, index)
    if suf.passed:
        return Verdict(
            status=DEFINABLE,
            certificates=suf.certificates,
            diagnostics={
                "necessary": nec.to_dict(),
                "sufficient": {"passed": True},
                "aperiodicity_bound": suf.aperiodicity_bound,
            },
            caveats=(OPERATION_REMOVAL_CAVEAT,),
        )
    full = _full_algebra_reports(C)
    return Verdict(
        status=UNKNOWN,
        diagnostics={
            "necessary": nec.to_dict(),
            "sufficient": suf.to_dict(),
            "minimal_set_reports": full,
        },
        caveats=(UNKNOWN_NOTE,),
    )


def _full_algebra_reports(C: CloneAlgebra):
    lat = congruence_lattice(C)
    out = []
    for i, j in lat.covering_pairs:
        rep = min_sets(C, lat.congruences[i], lat.congruences[j], lattice=lat)
        out.append(rep.to_dict(C.names))
    return out


def replay_witness(C: CloneAlgebra, v: Verdict) -> bool:
    """Re-verify a NOT_DEFINABLE witness from scratch from its coordinates."""
    if v.status != NOT_DEFINABLE or v.witness is None:
        return False
    w = v.witness
    if w["kind"] == "non_aperiodic":
        f = tuple(w["element"])
        if f not in sg(C).elements:
            return False
        seen = {f: 1}
        power = f
        k = 1
        while True:
            power = compose_unary(power, f)
            k += 1
            if power in seen:
                return k - seen[power] == w["period"] and w["period"] > 1
            seen[power] = k
    if w["kind"] == "trace_type":
        for entry in divisor_index(C):
            if entry.label != w["divisor"]:
                continue
            lat = congruence_lattice(entry.algebra)
            dn = entry.algebra.names
            for i, j in lat.covering_pairs:
                alpha, beta = lat.congruences[i], lat.congruences[j]
                if alpha.render(dn) != w["alpha"] or beta.render(dn) != w["beta"]:
                    continue
                rep = min_sets(entry.algebra, alpha, beta, lattice=lat)
                for ms in rep.minimal_sets:
                    for tr in ms.traces:
                        if [dn[e] for e in tr.elements] == w["trace"]:
                            return tr.label == w["label"]
        return False
    return False
