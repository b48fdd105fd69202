"""Shared helpers for the test suite: fixture paths, random generators, and
brute-force oracles kept independent of the library's own machinery."""

import itertools
import os

from treefo import RankedAlphabet, Tree

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

FIXTURE_NAMES = ["even_depth", "path_parity", "and_only", "and_or"]


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def load_alphabet(name):
    import json

    with open(fixture_path(name + ".json")) as fh:
        return RankedAlphabet.from_dict(json.load(fh)["alphabet"])


# ------------------------------------------------------------- random trees


def random_linear_tree(rng, alphabet, variables, max_height):
    """A random tree using each given variable exactly once, not a bare variable."""
    consts = list(alphabet.constants)
    nonconst = [(n, k) for n, k in alphabet.ranks if k > 0]

    def build(vars_, h):
        if not vars_:
            if h <= 1 or not nonconst or rng.random() < 0.5:
                return Tree(rng.choice(consts))
            name, k = rng.choice(nonconst)
            return Tree(name, tuple(build([], h - 1) for _ in range(k)))
        if len(vars_) == 1 and h > 1 and rng.random() < 0.3:
            return Tree(vars_[0])
        if len(vars_) == 1 and h <= 1:
            return Tree(vars_[0])
        h = max(h, 2)
        name, k = rng.choice(nonconst)
        parts = [[] for _ in range(k)]
        for v in vars_:
            parts[rng.randrange(k)].append(v)
        return Tree(name, tuple(build(p, h - 1) for p in parts))

    t = build(list(variables), max_height)
    if isinstance(t.label, str) and t.label not in alphabet:
        name, k = nonconst[0]
        kids = [Tree(rng.choice(consts)) for _ in range(k)]
        kids[0] = t
        t = Tree(name, tuple(kids))
    return t


def random_layered(rng, alphabet, level, variables, max_height):
    """A random level-fold nested tree: level 1 trees are over the alphabet,
    level n trees have level n-1 trees as labels.  Outer variables used at
    least once each; label sorts are the canonical x0..x_{k-1}."""
    max_vars_per_label = 1 if alphabet.max_rank <= 1 else 2

    def build(vars_, h):
        if len(vars_) == 1 and (h <= 1 or rng.random() < 0.2):
            return Tree(vars_[0])
        kmin = 1 if vars_ else 0
        if len(vars_) >= 2:
            kmin = max_vars_per_label
        k = kmin if h <= 1 else rng.randrange(kmin, max_vars_per_label + 1)
        label_vars = [f"x{i}" for i in range(k)]
        if level == 2:
            label = random_linear_tree(rng, alphabet, label_vars, rng.randrange(1, 4))
        else:
            label = random_layered(rng, alphabet, level - 1, label_vars, rng.randrange(1, 3))
        parts = [[] for _ in range(k)]
        if h <= 1 and len(vars_) >= 2:
            for idx, v in enumerate(vars_):
                parts[idx % k].append(v)
        else:
            for v in vars_:
                parts[rng.randrange(k)].append(v)
        return Tree(label, tuple(build(p, h - 1) for p in parts))

    return build(list(variables), max_height)


def map_labels(t, f, alphabet):
    """Apply f to each operation label; variable leaves stay put."""
    if isinstance(t.label, str):
        return t
    return Tree(f(t.label), tuple(map_labels(c, f, alphabet) for c in t.children))


def vars_of(t, alphabet):
    out = []

    def walk(n):
        if isinstance(n.label, str) and n.label not in alphabet:
            out.append(n.label)
            return
        for c in n.children:
            walk(c)

    walk(t)
    return out


# -------------------------------------------------------- partition oracle


def all_partitions(n):
    """Every partition of range(n) as a frozenset of blocks."""

    def rec(elements):
        if not elements:
            yield []
            return
        first, rest = elements[0], elements[1:]
        for smaller in rec(rest):
            for i in range(len(smaller)):
                yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1 :]
            yield [[first]] + smaller

    for blocks in rec(list(range(n))):
        yield frozenset(frozenset(b) for b in blocks)


# ----------------------------------------------------- boolean clone oracle


def _index(args, size=2):
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


def infer_arity(table, size=2):
    k = 0
    while size**k < len(table):
        k += 1
    assert size**k == len(table)
    return k


def close_binary_clone(generators):
    """Polynomial clone on {0,1} at arities 1..3, dummy arguments allowed.

    Plain per-arity superposition closure seeded with projections and both
    constants; deliberately independent of the library's closure engine.
    """
    gens = [(infer_arity(tuple(t)), tuple(t)) for t in generators]
    out = {}
    for arity in (1, 2, 3):
        tuples = list(itertools.product((0, 1), repeat=arity))
        funcs = set()
        for i in range(arity):
            funcs.add(tuple(args[i] for args in tuples))
        funcs.add((0,) * 2**arity)
        funcs.add((1,) * 2**arity)
        changed = True
        while changed:
            changed = False
            for k, g in gens:
                for combo in itertools.product(sorted(funcs), repeat=k):
                    new = tuple(
                        g[_index(tuple(c[pos] for c in combo))]
                        for pos in range(len(tuples))
                    )
                    if new not in funcs:
                        funcs.add(new)
                        changed = True
        out[arity] = frozenset(funcs)
    return out


def _canned(build):
    out = {}
    for arity in (1, 2, 3):
        tuples = list(itertools.product((0, 1), repeat=arity))
        out[arity] = frozenset(build(arity, tuples))
    return out


def all_functions_clone():
    return _canned(
        lambda arity, tuples: itertools.product((0, 1), repeat=2**arity)
    )


def affine_clone():
    def build(arity, tuples):
        for c in (0, 1):
            for mask in itertools.product((0, 1), repeat=arity):
                yield tuple(
                    (c + sum(m * a for m, a in zip(mask, args))) % 2 for args in tuples
                )

    return _canned(build)


def monotone_clone():
    def build(arity, tuples):
        for values in itertools.product((0, 1), repeat=len(tuples)):
            table = dict(zip(tuples, values))
            if all(
                table[a] <= table[b]
                for a in tuples
                for b in tuples
                if all(x <= y for x, y in zip(a, b))
            ):
                yield tuple(values)

    return _canned(build)


def semilattice_clone(join=False):
    op = max if join else min

    def build(arity, tuples):
        yield (0,) * len(tuples)
        yield (1,) * len(tuples)
        for r in range(1, arity + 1):
            for support in itertools.combinations(range(arity), r):
                yield tuple(op(args[i] for i in support) for args in tuples)

    return _canned(build)


def unary_type_clone():
    def build(arity, tuples):
        for i in range(arity):
            proj = tuple(args[i] for args in tuples)
            yield proj
            yield tuple(1 - v for v in proj)
        yield (0,) * len(tuples)
        yield (1,) * len(tuples)

    return _canned(build)


def trivial_type_clone():
    def build(arity, tuples):
        for i in range(arity):
            yield tuple(args[i] for args in tuples)
        yield (0,) * len(tuples)
        yield (1,) * len(tuples)

    return _canned(build)


def oracle_label(generators):
    """Direct type check of the 2-element algebra generated by the tables:
    compare its polynomial clone against the seven candidate clones."""
    clone = close_binary_clone(generators)
    candidates = [
        ("B", all_functions_clone()),
        ("A", affine_clone()),
        ("L", monotone_clone()),
        ("S", semilattice_clone(join=False)),
        ("S", semilattice_clone(join=True)),
        ("U", unary_type_clone()),
        ("T", trivial_type_clone()),
    ]
    for label, cand in candidates:
        if all(clone[k] == cand[k] for k in (1, 2, 3)):
            return label
    raise AssertionError("clone matches none of the seven candidates")
