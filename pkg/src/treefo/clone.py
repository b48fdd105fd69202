"""Syntactic algebras as finite clones of operation tables.

The carrier is the set of ground-tree classes of the language's syntactic
congruence, computed as the states of the minimized automaton.  An element of
arity n is stored extensionally as a total function carrier^n -> carrier
(a flat tuple in row-major order, first argument most significant).

Two families of tables are tracked:

* ``ops``        -- tables of terms over the alphabet in which every variable
                    occurs at least once (repetitions allowed).  This is the
                    identification-closed clone the type analysis runs on.
* ``linear_ops`` -- the subfamily with a witness term using every variable
                    exactly once.  These are the elements of the syntactic
                    algebra proper; the unary ones form the semigroup used by
                    the aperiodicity test, and they seed divisor construction.

Projections are adjoined implicitly at every arity (they are not induced by
terms but belong to the identification closure by construction); consumers
ask for them explicitly via ``proj_table``.

The closure is computed at the arity cap N: a pair (T, used) records an
N-ary numpy table together with the set of argument positions its witness
term actually mentions.  Seeding pairs are the projections and all carrier
constants; one closure step applies a letter to a tuple of stored pairs via
fancy indexing.  An induction on witness terms shows this reaches exactly
the term-induced tables with at most N distinct variables; requiring the
components' used-sets to be pairwise disjoint carves out the linear family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CloneSizeError, ConfigError, ContractError, InputError
from .trees import RankedAlphabet, Tree, tree_key

MAX_CARRIER = 120
MAX_PAIRS = 200_000


# --------------------------------------------------------------- table utils


def apply_table(table: tuple, args: tuple, size: int):
    idx = 0
    for a in args:
        idx = idx * size + a
    return table[idx]


def proj_table(size: int, arity: int, i: int) -> tuple:
    """The i-th projection as an arity-ary table."""
    return tuple(
        args[i] for args in itertools.product(range(size), repeat=arity)
    )


def const_table(size: int, arity: int, c: int) -> tuple:
    return (c,) * (size**arity)


def is_projection(table: tuple, size: int, arity: int):
    """The projected coordinate, or None."""
    for i in range(arity):
        if table == proj_table(size, arity, i):
            return i
    return None


def is_constant(table: tuple):
    return len(set(table)) == 1


def essential_coords(table: tuple, size: int, arity: int) -> tuple:
    """Argument positions the table actually depends on."""
    ess = []
    for i in range(arity):
        dep = False
        for args in itertools.product(range(size), repeat=arity):
            for v in range(size):
                changed = args[:i] + (v,) + args[i + 1 :]
                if apply_table(table, args, size) != apply_table(table, changed, size):
                    dep = True
                    break
            if dep:
                break
        if dep:
            ess.append(i)
    return tuple(ess)


def identify_table(table: tuple, arity: int, size: int, sigma: tuple) -> tuple:
    """Precompose with the variable map sigma: position j reads argument sigma[j]."""
    target = max(sigma) + 1 if sigma else 0
    out = []
    for args in itertools.product(range(size), repeat=target):
        out.append(apply_table(table, tuple(args[s] for s in sigma), size))
    return tuple(out)


def restrict_table(table: tuple, arity: int, size: int, subset: tuple) -> tuple:
    """View a subset-preserving table as a table over the subset (reindexed)."""
    pos = {e: i for i, e in enumerate(subset)}
    out = []
    for args in itertools.product(subset, repeat=arity):
        out.append(pos[apply_table(table, args, size)])
    return tuple(out)


def preserves_subset(table: tuple, arity: int, size: int, subset: tuple) -> bool:
    sub = set(subset)
    return all(
        apply_table(table, args, size) in sub
        for args in itertools.product(subset, repeat=arity)
    )


def compose_unary(f: tuple, g: tuple) -> tuple:
    """f after g, both unary."""
    return tuple(f[g[x]] for x in range(len(g)))


def render_term(prov, names) -> str:
    """Render a provenance term, replacing constant markers <i> by element names."""
    if prov is None:
        return "?"

    def walk(t):
        label = t.label
        if isinstance(label, str) and label.startswith("<") and label.endswith(">"):
            inner = label[1:-1]
            if inner.isdigit():
                label = names[int(inner)]
        if not t.children:
            return str(label)
        return str(label) + "(" + ",".join(walk(c) for c in t.children) + ")"

    return walk(prov)


# ------------------------------------------------------------------ algebras


@dataclass
class TableAlgebra:
    """A finite carrier plus per-arity families of operation tables.

    ``ops[k]`` maps each k-ary table to a provenance term (a Tree over
    generator names and the canonical variables), or None when unknown.
    Projections are implicit.  Instances are immutable by convention.
    """

    size: int
    names: tuple
    ops: dict
    n_max: int

    def tables_at(self, arity: int) -> dict:
        return self.ops.get(arity, {})

    def arities(self):
        return sorted(self.ops)

    def unary_tables(self) -> dict:
        return dict(self.tables_at(1))

    def counts_by_arity(self) -> dict:
        return {k: len(v) for k, v in sorted(self.ops.items())}

    def iter_tables(self):
        for k in sorted(self.ops):
            for t, prov in self.ops[k].items():
                yield k, t, prov


class CloneAlgebra(TableAlgebra):
    """The table clone of a recognized language (or of explicit generators)."""

    def __init__(
        self,
        size,
        names,
        ops,
        n_max,
        linear_ops,
        letters,
        alphabet=None,
        accepting=None,
        reps=None,
        separators=None,
        notes=(),
    ):
        super().__init__(size=size, names=tuple(names), ops=ops, n_max=n_max)
        self.linear_ops = linear_ops
        self.letters = letters
        self.alphabet = alphabet
        self.accepting = accepting
        self.reps = reps
        self.separators = separators
        self.notes = tuple(notes)

    # ------------------------------------------------------------ queries

    def letter_table(self, name: str) -> tuple:
        try:
            return self.letters[name]
        except KeyError:
            raise InputError(f"unknown symbol {name!r}") from None

    def eval(self, t: Tree) -> int:
        """Bottom-up product of a ground tree through the letter tables."""
        if not isinstance(t.label, str) or t.label not in self.letters:
            raise InputError(f"node {t.label!r} is not a symbol of this algebra")
        kids = tuple(self.eval(c) for c in t.children)
        return apply_table(self.letters[t.label], kids, self.size)

    def accepts(self, t: Tree) -> bool:
        if self.accepting is None:
            raise ContractError("algebra has no accepting set")
        return self.eval(t) in self.accepting

    def generator_tables(self):
        """(name, arity, table) triples sufficient for congruence checks."""
        out = []
        for name in sorted(self.letters):
            table = self.letters[name]
            if self.alphabet is not None:
                arity = self.alphabet.rank(name)
            else:
                arity = _infer_arity(table, self.size)
            out.append((name, arity, table))
        return out

    def rename(self, mapping: dict) -> "CloneAlgebra":
        """Apply a representative-text -> alias naming file."""
        unknown = set(mapping) - set(self.names)
        if unknown:
            raise ConfigError(f"naming file keys match no element: {sorted(unknown)}")
        self.names = tuple(mapping.get(n, n) for n in self.names)
        return self


def _infer_arity(table: tuple, size: int) -> int:
    k = 0
    while size**k < len(table):
        k += 1
    if size**k != len(table):
        raise ContractError("table length is not a power of the carrier size")
    return k


# ------------------------------------------------------------ closure engine


@dataclass
class _Pair:
    arr: np.ndarray
    used: frozenset
    prov: Tree
    generated: bool = False


def _closure(size, generators, n_max, linear, budget=MAX_PAIRS):
    """Fixpoint of letter application over (table, used-positions) pairs.

    generators: dict name -> (arity, flat tuple table).  With ``linear`` the
    used-sets of the combined pairs must be pairwise disjoint, which restricts
    the witnesses to terms using each variable exactly once.
    Returns the pairs in discovery order.
    """
    if size > MAX_CARRIER:
        raise CloneSizeError(f"carrier size {size} exceeds supported maximum")
    shape = (size,) * n_max
    coords = np.indices(shape, dtype=np.int16)

    pairs: dict = {}
    order: list = []

    def add(arr, used, prov, generated):
        key = (used, arr.tobytes())
        hit = pairs.get(key)
        if hit is not None:
            if generated and not hit.generated:
                hit.generated = True
            return None
        if len(pairs) >= budget:
            raise CloneSizeError(
                f"operation-table closure exceeded {budget} entries; "
                "raise the budget or reduce the arity cap"
            )
        p = _Pair(arr, used, prov, generated)
        pairs[key] = p
        order.append(key)
        return key

    for i in range(n_max):
        add(coords[i], frozenset([i]), Tree(f"x{i}"), generated=False)
    for c in range(size):
        add(
            np.full(shape, c, dtype=np.int16),
            frozenset(),
            Tree(f"<{c}>"),
            generated=True,
        )

    gen_tables = {
        name: (k, np.asarray(tbl, dtype=np.int16).reshape((size,) * k))
        for name, (k, tbl) in sorted(generators.items())
        if k >= 1
    }

    frontier = list(order)
    while frontier:
        new_round: dict = {}
        stored_keys = list(order)
        frontier_set = set(frontier)
        for name, (k, gnd) in gen_tables.items():
            for combo in itertools.product(stored_keys, repeat=k):
                if not any(c in frontier_set for c in combo):
                    continue
                ps = [pairs[c] for c in combo]
                if linear:
                    seen: set = set()
                    ok = True
                    for p in ps:
                        if p.used & seen:
                            ok = False
                            break
                        seen |= p.used
                    if not ok:
                        continue
                used = frozenset().union(*(p.used for p in ps))
                arr = gnd[tuple(p.arr for p in ps)] if k else gnd
                prov = Tree(name, tuple(p.prov for p in ps))
                key = (used, arr.tobytes())
                if key in pairs:
                    if not pairs[key].generated:
                        pairs[key].generated = True
                    continue
                old = new_round.get(key)
                if old is None or tree_key(prov) < tree_key(old[2]):
                    new_round[key] = (arr, used, prov)
        frontier = []
        for key in sorted(new_round, key=lambda k: (tuple(sorted(k[0])), k[1])):
            arr, used, prov = new_round[key]
            added = add(arr, used, prov, generated=True)
            if added is not None:
                frontier.append(added)
    return pairs, order


def _extract_ops(size, n_max, pairs, order):
    """Per-arity proper tables (generated pairs), deduplicated, with provenance."""
    ops: dict = {k: {} for k in range(n_max + 1)}
    for key in order:
        p = pairs[key]
        if not p.generated:
            continue
        positions = sorted(p.used)
        arity = len(positions)
        flat = p.arr.ravel()
        strides = [size ** (n_max - 1 - q) for q in range(n_max)]
        table = []
        for args in itertools.product(range(size), repeat=arity):
            idx = sum(a * strides[q] for a, q in zip(args, positions))
            table.append(int(flat[idx]))
        table = tuple(table)
        if table not in ops[arity]:
            ops[arity][table] = _remap_prov(p.prov, positions)
    return ops


def _remap_prov(prov: Tree, positions) -> Tree:
    mapping = {f"x{q}": f"x{j}" for j, q in enumerate(positions)}

    def walk(t):
        if not t.children and isinstance(t.label, str) and t.label in mapping:
            return Tree(mapping[t.label])
        return Tree(t.label, tuple(walk(c) for c in t.children))

    return walk(prov)


def close_tables(size, generators, n_max, budget=MAX_PAIRS):
    """Public closure entry: build ops and linear_ops from generator tables."""
    full_pairs, full_order = _closure(size, generators, n_max, linear=False, budget=budget)
    lin_pairs, lin_order = _closure(size, generators, n_max, linear=True, budget=budget)
    ops = _extract_ops(size, n_max, full_pairs, full_order)
    linear = _extract_ops(size, n_max, lin_pairs, lin_order)
    linear_ops = {k: set(v) for k, v in linear.items()}
    return ops, linear_ops


# --------------------------------------------------------------- constructors


def build_syntactic(dfta, n_max=None) -> CloneAlgebra:
    """The reduced syntactic algebra of the automaton's language.

    Carrier elements are the minimized automaton's states, ordered by their
    least representative tree; letter tables are the minimized transitions;
    the per-arity table families are the closure described in the module
    docstring, capped at n_max (default max(3, maximal rank)).
    """
    alphabet = dfta.alphabet
    if n_max is None:
        n_max = max(3, alphabet.max_rank)
    if n_max < alphabet.max_rank:
        raise ConfigError(
            f"arity cap {n_max} is below the maximal alphabet rank {alphabet.max_rank}"
        )
    if n_max < 1:
        raise ConfigError("arity cap must be at least 1")

    M = dfta.minimize()
    states = list(M.states)  # already ordered by representative
    index = {q: i for i, q in enumerate(states)}
    size = len(states)

    letters = {}
    for name, k in alphabet.ranks:
        table = []
        for args in itertools.product(states, repeat=k):
            table.append(index[M.transitions[(name, args)]])
        letters[name] = tuple(table)

    generators = {name: (alphabet.rank(name), tbl) for name, tbl in letters.items()}
    ops, linear_ops = close_tables(size, generators, n_max)

    # arity-0 provenance: the representative trees themselves
    reps = tuple(M.reps[q] for q in states)
    ops[0] = {(i,): reps[i] for i in range(size)}
    linear_ops[0] = set(ops[0])

    separators = {
        (index[a], index[b]): ctx for (a, b), ctx in M.separators.items()
    }
    return CloneAlgebra(
        size=size,
        names=tuple(str(r) for r in reps),
        ops=ops,
        n_max=n_max,
        linear_ops=linear_ops,
        letters=letters,
        alphabet=alphabet,
        accepting=frozenset(index[q] for q in M.accepting),
        reps=reps,
        separators=separators,
        notes=M.notes,
    )


def from_tables(size, generators, n_max=3, names=None) -> CloneAlgebra:
    """A clone from explicit generator tables (no automaton), for analysis
    of hand-built algebras.  generators: dict name -> flat tuple table."""
    gens = {}
    for name, tbl in generators.items():
        gens[name] = (_infer_arity(tuple(tbl), size), tuple(tbl))
    for name, (k, _) in gens.items():
        if k > n_max:
            raise ConfigError(f"generator {name!r} has arity {k} above the cap {n_max}")
    ops, linear_ops = close_tables(size, gens, n_max)
    ops[0] = {(i,): Tree(f"<{i}>") for i in range(size)}
    linear_ops[0] = set(ops[0])
    names = tuple(names) if names else tuple(str(i) for i in range(size))
    letters = {name: tbl for name, (k, tbl) in gens.items()}
    return CloneAlgebra(
        size=size,
        names=names,
        ops=ops,
        n_max=n_max,
        linear_ops=linear_ops,
        letters=letters,
    )


# ------------------------------------------------------------- the semigroup


@dataclass
class Semigroup:
    """Unary elements of the syntactic algebra under composition."""

    size: int
    elements: tuple          # unary tables, sorted
    provenance: dict         # table -> witness term
    composition: tuple = field(default=())

    def __post_init__(self):
        if not self.composition:
            comp = []
            for f in self.elements:
                row = []
                for g in self.elements:
                    fg = compose_unary(f, g)
                    row.append(self.elements.index(fg) if fg in self.elements else -1)
                comp.append(tuple(row))
            self.composition = tuple(comp)

    def is_closed(self) -> bool:
        return all(v >= 0 for row in self.composition for v in row)


def sg(C: CloneAlgebra) -> Semigroup:
    """The semigroup of unary elements (identity only if some term induces it)."""
    tables = sorted(C.linear_ops.get(1, ()))
    provs = {t: C.ops[1].get(t) for t in tables}
    return Semigroup(size=C.size, elements=tuple(tables), provenance=provs)


@dataclass
class AperiodicityResult:
    aperiodic: bool
    bound: int | None = None          # least n with f^n = f^(n+1) for all f
    witness: tuple | None = None      # offending unary table
    witness_prov: Tree | None = None
    period: int | None = None
    cycle: tuple | None = None        # the tables in the power cycle

    def to_dict(self):
        d = {"aperiodic": self.aperiodic}
        if self.aperiodic:
            d["bound"] = self.bound
        else:
            d["witness"] = list(self.witness)
            d["witness_term"] = str(self.witness_prov) if self.witness_prov else None
            d["period"] = self.period
        return d


def is_aperiodic(S: Semigroup) -> AperiodicityResult:
    """Whether every element's power sequence reaches a fixed point.

    On failure the witness element, its power period and the cycle are
    returned; on success the least uniform stabilization bound.
    """
    bound = 0
    for f in S.elements:
        seen = {f: 1}
        power = f
        k = 1
        while True:
            nxt = compose_unary(power, f)
            k += 1
            if nxt == power:
                bound = max(bound, k - 1)
                break
            if nxt in seen:
                start = seen[nxt]
                period = k - start
                cycle = []
                g = nxt
                for _ in range(period):
                    cycle.append(g)
                    g = compose_unary(g, f)
                return AperiodicityResult(
                    aperiodic=False,
                    witness=f,
                    witness_prov=S.provenance.get(f),
                    period=period,
                    cycle=tuple(cycle),
                )
            seen[nxt] = k
            power = nxt
    return AperiodicityResult(aperiodic=True, bound=max(bound, 1))
