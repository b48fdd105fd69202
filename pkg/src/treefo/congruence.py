"""Congruences of the finite algebra induced on the carrier.

A congruence is a partition of the carrier preserved by every operation
table; by the clone/preclone correspondence these partitions enumerate
exactly the saturated congruences of the ambient algebra.  Only generator
tables need to be checked for preservation (composites preserve whatever
the generators preserve); the equality with the full-table check is kept
as a test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ContractError
from .clone import CloneAlgebra, TableAlgebra, apply_table


class Partition:
    """An equivalence relation on range(n), canonical blocks sorted by least element."""

    __slots__ = ("size", "index", "blocks")

    def __init__(self, size, block_index):
        self.size = size
        # normalize block ids: number blocks by first occurrence
        remap = {}
        norm = []
        for b in block_index:
            if b not in remap:
                remap[b] = len(remap)
            norm.append(remap[b])
        self.index = tuple(norm)
        blocks = [[] for _ in range(len(remap))]
        for e, b in enumerate(self.index):
            blocks[b].append(e)
        self.blocks = tuple(tuple(b) for b in blocks)

    # ------------------------------------------------------------- builders

    @classmethod
    def bottom(cls, n):
        return cls(n, tuple(range(n)))

    @classmethod
    def top(cls, n):
        return cls(n, (0,) * n)

    @classmethod
    def from_blocks(cls, n, blocks):
        idx = [None] * n
        for b, members in enumerate(blocks):
            for e in members:
                if idx[e] is not None:
                    raise ContractError("blocks overlap")
                idx[e] = b
        if any(i is None for i in idx):
            raise ContractError("blocks do not cover the carrier")
        return cls(n, tuple(idx))

    @classmethod
    def merge_pair(cls, n, a, b):
        idx = list(range(n))
        idx[max(a, b)] = min(a, b)
        return cls(n, tuple(idx))

    # -------------------------------------------------------------- queries

    @property
    def num_blocks(self):
        return len(self.blocks)

    def is_bottom(self):
        return self.num_blocks == self.size

    def is_top(self):
        return self.num_blocks == 1

    def same(self, a, b):
        return self.index[a] == self.index[b]

    def refines(self, other):
        """Whether every block of self is contained in a block of other."""
        return all(
            other.index[b[0]] == other.index[e] for b in self.blocks for e in b
        )

    def meet(self, other):
        return Partition(self.size, _pair_index(self, other))

    def join(self, other):
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for part in (self, other):
            for block in part.blocks:
                for e in block[1:]:
                    union(block[0], e)
        return Partition(self.size, tuple(find(e) for e in range(self.size)))

    def restrict(self, subset):
        """The induced partition of the subset, in subset-index space."""
        sub = tuple(subset)
        return Partition(len(sub), tuple(self.index[e] for e in sub))

    def render(self, names=None):
        def nm(e):
            return names[e] if names else str(e)

        return "{" + " | ".join(" ".join(nm(e) for e in b) for b in self.blocks) + "}"

    def __eq__(self, other):
        return isinstance(other, Partition) and self.index == other.index

    def __hash__(self):
        return hash(self.index)

    def __repr__(self):
        return f"Partition({self.render()})"


def _pair_index(p, q):
    pairs = {}
    out = []
    for e in range(p.size):
        key = (p.index[e], q.index[e])
        out.append(pairs.setdefault(key, len(pairs)))
    return tuple(out)


@dataclass(frozen=True)
class PreservationWitness:
    """A concrete violation: one table, two related argument tuples, unrelated outputs."""

    table_name: str
    args: tuple
    args2: tuple
    out1: int
    out2: int

    def render(self, names=None):
        def nm(e):
            return names[e] if names else str(e)

        a1 = ",".join(nm(x) for x in self.args)
        a2 = ",".join(nm(x) for x in self.args2)
        return (
            f"{self.table_name}({a1})={nm(self.out1)} but "
            f"{self.table_name}({a2})={nm(self.out2)}"
        )

    def to_dict(self, names=None):
        def nm(e):
            return names[e] if names else str(e)

        return {
            "table": self.table_name,
            "args": [nm(x) for x in self.args],
            "args_related": [nm(x) for x in self.args2],
            "out": nm(self.out1),
            "out_related": nm(self.out2),
        }


def _algebra_tables(alg):
    if isinstance(alg, CloneAlgebra) and alg.letters:
        return alg.generator_tables()
    out = []
    for k in sorted(alg.ops):
        if k == 0:
            continue
        for i, table in enumerate(sorted(alg.ops[k])):
            out.append((f"op{k}_{i}", k, table))
    return out


def preservation_witness(alg, part: Partition):
    """None if the partition is a congruence, else the first violation found.

    Scan order (tables by name, positions ascending, tuples lexicographic)
    is part of the report contract.
    """
    size = alg.size
    for name, k, table in _algebra_tables(alg):
        if k == 0:
            continue
        for i in range(k):
            for a in range(size):
                for b in range(a + 1, size):
                    if not part.same(a, b):
                        continue
                    for rest in itertools.product(range(size), repeat=k - 1):
                        t1 = rest[:i] + (a,) + rest[i:]
                        t2 = rest[:i] + (b,) + rest[i:]
                        o1 = apply_table(table, t1, size)
                        o2 = apply_table(table, t2, size)
                        if not part.same(o1, o2):
                            return PreservationWitness(name, t1, t2, o1, o2)
    return None


def is_congruence(alg, part: Partition) -> bool:
    return preservation_witness(alg, part) is None


def principal_congruence(alg, a: int, b: int) -> Partition:
    """The least congruence identifying a and b (chase to fixpoint)."""
    if not (0 <= a < alg.size and 0 <= b < alg.size):
        raise ContractError("elements outside the carrier")
    part = Partition.merge_pair(alg.size, a, b)
    while True:
        w = preservation_witness(alg, part)
        if w is None:
            return part
        part = part.join(Partition.merge_pair(alg.size, w.out1, w.out2))


@dataclass
class CongruenceLattice:
    congruences: tuple          # sorted: finer first
    covering_pairs: tuple       # pairs of indices (i, j) with cong[i] covered by cong[j]

    def __len__(self):
        return len(self.congruences)

    def bottom(self):
        return self.congruences[0]

    def top(self):
        return self.congruences[-1]

    def index_of(self, part):
        return self.congruences.index(part)


def congruence_lattice(alg) -> CongruenceLattice:
    """All congruences: principal ones joined to closure, plus bottom."""
    n = alg.size
    found = {Partition.bottom(n)}
    for a in range(n):
        for b in range(a + 1, n):
            found.add(principal_congruence(alg, a, b))
    # join closure
    frontier = list(found)
    while frontier:
        new = []
        for p in frontier:
            for q in list(found):
                j = p.join(q)
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    congs = sorted(found, key=lambda p: (-p.num_blocks, p.index))
    covering = []
    for i, lo in enumerate(congs):
        for j, hi in enumerate(congs):
            if lo is hi or not lo.refines(hi):
                continue
            if any(
                k not in (i, j)
                and lo.refines(mid)
                and mid.refines(hi)
                for k, mid in enumerate(congs)
            ):
                continue
            covering.append((i, j))
    return CongruenceLattice(tuple(congs), tuple(covering))


def is_simple(alg) -> bool:
    """Exactly two congruences, which requires at least two elements."""
    if alg.size < 2:
        return False
    return len(congruence_lattice(alg)) == 2


def quotient(alg, part: Partition) -> TableAlgebra:
    """The blockwise-induced algebra; tables deduplicated (result reduced)."""
    w = preservation_witness(alg, part)
    if w is not None:
        raise ContractError(f"partition is not a congruence: {w.render()}")
    size = part.num_blocks
    reps = [b[0] for b in part.blocks]
    names = tuple(
        "{" + ",".join(alg.names[e] for e in b) + "}" if len(b) > 1 else alg.names[b[0]]
        for b in part.blocks
    )
    ops: dict = {}
    for k in sorted(alg.ops):
        bucket = {}
        for table, prov in alg.ops[k].items():
            newt = []
            for args in itertools.product(range(size), repeat=k):
                lifted = tuple(reps[x] for x in args)
                newt.append(part.index[apply_table(table, lifted, alg.size)])
            newt = tuple(newt)
            if newt not in bucket:
                bucket[newt] = prov
        ops[k] = bucket
    return TableAlgebra(size=size, names=names, ops=ops, n_max=alg.n_max)
