"""Minimal-set analysis of finite table algebras.

Idempotents, localisations, separating elements, minimal sets, traces and
the five-type labelling of minimal algebras.  The analysis ambient is the
identification-closed table clone; unary polynomials additionally include
all constant maps (polynomial-level closure).  Constant maps are never
separating, so they do not influence minimal sets; they do participate in
the constant-or-bijective minimality test, where they are harmless.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ClassifyError, ContractError
from .clone import (
    TableAlgebra,
    apply_table,
    compose_unary,
    const_table,
    essential_coords,
    is_constant,
    is_projection,
    preserves_subset,
    proj_table,
    render_term,
    restrict_table,
)
from .congruence import Partition, congruence_lattice, quotient
from .trees import Tree

TYPE_TRIVIAL = "T"
TYPE_UNARY = "U"
TYPE_AFFINE = "A"
TYPE_BOOLEAN = "B"
TYPE_LATTICE = "L"
TYPE_SEMILATTICE = "S"
ALL_TYPES = (TYPE_TRIVIAL, TYPE_UNARY, TYPE_AFFINE, TYPE_BOOLEAN, TYPE_LATTICE, TYPE_SEMILATTICE)
BAD_TYPES = (TYPE_UNARY, TYPE_AFFINE, TYPE_BOOLEAN, TYPE_LATTICE)


def unary_polynomials(alg) -> dict:
    """All unary polynomials: stored unary tables, the identity, constant maps.

    Diagonals and constant substitutions of higher-arity tables are already
    present among the stored unary tables (the clone is identification
    closed), so only the identity and the constant maps are adjoined here.
    Values are provenance terms or short tags.
    """
    out = dict(alg.tables_at(1))
    ident = proj_table(alg.size, 1, 0)
    out.setdefault(ident, Tree("x0"))
    for c in range(alg.size):
        out.setdefault(const_table(alg.size, 1, c), Tree(f"<{alg.names[c]}>"))
    return out


@dataclass(frozen=True)
class Idempotent:
    table: tuple
    image: tuple
    provenance: Tree
    is_identity: bool

    def to_dict(self, names=None):
        nm = (lambda e: names[e]) if names else str
        return {
            "map": list(self.table),
            "image": [nm(e) for e in self.image],
            "term": render_term(self.provenance, names) if names else str(self.provenance),
            "identity": self.is_identity,
        }


def idempotents(alg) -> tuple:
    """Idempotent unary tables of the clone (plus the identity), one per image.

    Only element-induced unary tables qualify (constant maps enter only when
    some term induces them); the paper-style identification collapses
    idempotents with equal images.
    """
    ident = proj_table(alg.size, 1, 0)
    candidates = dict(alg.tables_at(1))
    candidates.setdefault(ident, Tree("x0"))
    found = {}
    items = sorted(
        candidates.items(),
        key=lambda kv: (len(set(kv[0])), tuple(sorted(set(kv[0]))), kv[0]),
    )
    for table, prov in items:
        if compose_unary(table, table) != table:
            continue
        image = tuple(sorted(set(table)))
        if image not in found:
            found[image] = Idempotent(table, image, prov, table == ident)
    return tuple(found.values())


def localise(alg, subset) -> TableAlgebra:
    """The largest subalgebra sitting over the subset: every stored table
    mapping subset tuples into the subset, restricted and deduplicated."""
    sub = tuple(sorted(set(subset)))
    if not sub:
        raise ContractError("localisation subset must be nonempty")
    if any(not 0 <= e < alg.size for e in sub):
        raise ContractError("subset outside the carrier")
    ops: dict = {}
    for k in sorted(alg.ops):
        bucket = {}
        if k == 0:
            for (c,), prov in alg.ops[0].items():
                if c in sub:
                    bucket[(sub.index(c),)] = prov
        else:
            for table, prov in alg.ops[k].items():
                if preserves_subset(table, k, alg.size, sub):
                    r = restrict_table(table, k, alg.size, sub)
                    bucket.setdefault(r, prov)
        ops[k] = bucket
    names = tuple(alg.names[e] for e in sub)
    return TableAlgebra(size=len(sub), names=names, ops=ops, n_max=alg.n_max)


def is_minimal_algebra(alg) -> bool:
    """At least two elements, and every unary polynomial constant or bijective."""
    if alg.size < 2:
        return False
    for table in unary_polynomials(alg):
        if is_constant(table):
            continue
        if len(set(table)) == alg.size:
            continue
        return False
    return True


def _binary_polynomials(alg) -> set:
    """Binary tables plus dummy-argument lifts of the unary polynomials."""
    out = set(alg.tables_at(2))
    for u in unary_polynomials(alg):
        out.add(identify_to_binary(u, alg.size, 0))
        out.add(identify_to_binary(u, alg.size, 1))
    return out


def identify_to_binary(unary: tuple, size: int, coord: int) -> tuple:
    return tuple(
        unary[args[coord]] for args in itertools.product(range(size), repeat=2)
    )


def _maltsev_tables(alg):
    size = alg.size
    for table in sorted(alg.tables_at(3)):
        ok = True
        for x in range(size):
            for y in range(size):
                if (
                    apply_table(table, (x, y, y), size) != x
                    or apply_table(table, (y, y, x), size) != x
                ):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield table


def _affine_identity_holds(alg, m: tuple) -> bool:
    """f(m(x, y, z)) == m(f(x), f(y), f(z)) argumentwise, for every stored f."""
    size = alg.size
    for k in sorted(alg.ops):
        if k == 0:
            continue
        for table in alg.ops[k]:
            for xs in itertools.product(range(size), repeat=k):
                for ys in itertools.product(range(size), repeat=k):
                    for zs in itertools.product(range(size), repeat=k):
                        mixed = tuple(
                            apply_table(m, (x, y, z), size)
                            for x, y, z in zip(xs, ys, zs)
                        )
                        lhs = apply_table(table, mixed, size)
                        rhs = apply_table(
                            m,
                            (
                                apply_table(table, xs, size),
                                apply_table(table, ys, size),
                                apply_table(table, zs, size),
                            ),
                            size,
                        )
                        if lhs != rhs:
                            return False
    return True


def classify_minimal(alg) -> str:
    """The type of a minimal algebra.

    Decision order: all operations constant-or-projection (trivial); all
    essentially unary (unary type); a Maltsev table present (boolean if the
    two-element clone is full, affine if the Maltsev term commutes with
    everything); otherwise the carrier must be two-element and the label is
    decided by which of meet and join are present.
    """
    if alg.n_max < 3:
        raise ClassifyError(
            "classification needs tables up to arity 3",
            {"n_max": alg.n_max},
        )
    size = alg.size

    def all_tables():
        for k in sorted(alg.ops):
            if k >= 1:
                for t in alg.ops[k]:
                    yield k, t

    if all(
        is_constant(t) or is_projection(t, size, k) is not None for k, t in all_tables()
    ):
        return TYPE_TRIVIAL

    if all(len(essential_coords(t, size, k)) <= 1 for k, t in all_tables()):
        return TYPE_UNARY

    maltsev = next(iter(_maltsev_tables(alg)), None)
    if maltsev is not None:
        if size == 2 and len(_binary_polynomials(alg)) == 16:
            return TYPE_BOOLEAN
        if _affine_identity_holds(alg, maltsev):
            return TYPE_AFFINE
        raise ClassifyError(
            "Maltsev table present but the affine identity fails",
            {"maltsev": maltsev, "size": size},
        )

    if size != 2:
        raise ClassifyError(
            "no Maltsev table and more than two elements; input is not minimal",
            {"size": size},
        )
    meet = tuple(min(a, b) for a, b in itertools.product(range(2), repeat=2))
    join = tuple(max(a, b) for a, b in itertools.product(range(2), repeat=2))
    binaries = set(alg.tables_at(2))
    has_meet = meet in binaries
    has_join = join in binaries
    if has_meet and has_join:
        return TYPE_LATTICE
    if has_meet or has_join:
        return TYPE_SEMILATTICE
    raise ClassifyError(
        "two-element algebra with an essentially binary table but neither "
        "meet nor join; input is not minimal",
        {"binaries": sorted(binaries)},
    )


# ------------------------------------------------------------- minimal sets


@dataclass
class TraceInfo:
    elements: tuple          # carrier indices
    label: str

    def to_dict(self, names=None):
        nm = (lambda e: names[e]) if names else str
        return {"elements": [nm(e) for e in self.elements], "label": self.label}


@dataclass
class MinimalSet:
    idempotent: Idempotent
    image: tuple
    traces: tuple = field(default=())

    def to_dict(self, names=None):
        nm = (lambda e: names[e]) if names else str
        return {
            "idempotent": self.idempotent.to_dict(names),
            "image": [nm(e) for e in self.image],
            "traces": [t.to_dict(names) for t in self.traces],
        }


@dataclass
class MinimalSetReport:
    alpha: Partition
    beta: Partition
    minimal_sets: tuple
    order_notes: tuple = ()

    def trace_labels(self):
        return tuple(t.label for ms in self.minimal_sets for t in ms.traces)

    def to_dict(self, names=None):
        return {
            "alpha": self.alpha.render(names),
            "beta": self.beta.render(names),
            "minimal_sets": [ms.to_dict(names) for ms in self.minimal_sets],
            "order_notes": list(self.order_notes),
        }


def _is_separating(table: tuple, alpha: Partition, beta: Partition, size: int) -> bool:
    for x in range(size):
        for y in range(x + 1, size):
            if beta.same(x, y) and not alpha.same(table[x], table[y]):
                return True
    return False


def trace_algebra(alg, trace, alpha: Partition) -> TableAlgebra:
    """The induced algebra of a trace: localisation, then quotient by alpha."""
    local = localise(alg, trace)
    restricted = alpha.restrict(sorted(trace))
    if restricted.is_bottom():
        return local
    return quotient(local, restricted)


def min_sets(alg, alpha: Partition, beta: Partition, lattice=None) -> MinimalSetReport:
    """Minimal sets, traces and trace types for a covering pair.

    Candidates are the images of separating idempotents; minimal ones under
    image inclusion are kept.  Every trace's induced algebra must pass the
    minimality test before classification; a violation signals a bug, not a
    property of the input.
    """
    if lattice is None:
        lattice = congruence_lattice(alg)
    pair_ok = any(
        lattice.congruences[i] == alpha and lattice.congruences[j] == beta
        for i, j in lattice.covering_pairs
    )
    if not pair_ok:
        raise ContractError("(alpha, beta) is not a covering pair of the lattice")

    idems = idempotents(alg)
    separating = [e for e in idems if _is_separating(e.table, alpha, beta, alg.size)]
    if not separating:
        raise ClassifyError(
            "no separating idempotent for a covering pair; internal error",
            {"alpha": alpha.render(), "beta": beta.render()},
        )

    minimal = []
    for e in separating:
        if any(
            f is not e and set(f.image) < set(e.image) for f in separating
        ):
            continue
        minimal.append(e)
    minimal.sort(key=lambda e: e.image)

    sets = []
    for e in minimal:
        traces = []
        for block in beta.blocks:
            tr = tuple(sorted(set(block) & set(e.image)))
            if len({alpha.index[x] for x in tr}) < 2:
                continue
            talg = trace_algebra(alg, tr, alpha)
            if not is_minimal_algebra(talg):
                raise ClassifyError(
                    "trace algebra failed the minimality test; internal error",
                    {"trace": tr},
                )
            traces.append(TraceInfo(tr, classify_minimal(talg)))
        sets.append(MinimalSet(e, e.image, tuple(traces)))

    notes = _order_notes(alg, separating)
    return MinimalSetReport(alpha, beta, tuple(sets), notes)


def _localisation_signature(alg, subset) -> frozenset:
    """The set of (arity, unrestricted table) preserving the subset."""
    sig = set()
    for k in sorted(alg.ops):
        if k == 0:
            continue
        for table in alg.ops[k]:
            if preserves_subset(table, k, alg.size, tuple(sorted(subset))):
                sig.add((k, table))
    return frozenset(sig)


def _order_notes(alg, idems) -> tuple:
    """Disagreements between image inclusion and localised-operation inclusion."""
    notes = []
    sigs = {e.image: _localisation_signature(alg, e.image) for e in idems}
    for e, f in itertools.combinations(idems, 2):
        by_image = set(e.image) <= set(f.image)
        by_ops = sigs[e.image] <= sigs[f.image]
        if by_image != by_ops:
            notes.append(
                f"idempotent order differs for images {e.image} vs {f.image}: "
                f"image-inclusion={by_image}, operation-inclusion={by_ops}"
            )
    return tuple(notes)
