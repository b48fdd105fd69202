"""Ranked alphabets and finite terms with variables.

Trees are immutable.  A node label is either a string (a symbol of the
alphabet, or a variable of the ambient sort) or, for nested terms, another
Tree acting as an operation.  Which strings are variables is decided by
context: every function that needs the distinction takes the alphabet.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import InputError, StructureError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class RankedAlphabet:
    """A finite set of symbols with fixed ranks.

    At least one symbol of rank 0 is required; without constants the set of
    ground trees is empty and nothing downstream is meaningful, so this is
    rejected on construction.
    """

    ranks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.ranks]
        if len(set(names)) != len(names):
            raise InputError("alphabet symbols must be pairwise distinct")
        for name, rank in self.ranks:
            if not _IDENT.match(name):
                raise InputError(f"bad symbol name {name!r}")
            if rank < 0:
                raise InputError(f"negative rank for symbol {name!r}")
        if not any(r == 0 for _, r in self.ranks):
            raise InputError("alphabet needs at least one symbol of rank 0")

    @classmethod
    def from_dict(cls, d: dict) -> "RankedAlphabet":
        return cls(tuple(sorted((str(k), int(v)) for k, v in d.items())))

    def to_dict(self) -> dict:
        return {n: r for n, r in self.ranks}

    def rank(self, name: str) -> int:
        for n, r in self.ranks:
            if n == name:
                return r
        raise InputError(f"unknown symbol {name!r}")

    def __contains__(self, name) -> bool:
        return any(n == name for n, _ in self.ranks)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.ranks)

    @property
    def max_rank(self) -> int:
        return max(r for _, r in self.ranks)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(n for n, r in self.ranks if r == 0)


@dataclass(frozen=True)
class Tree:
    """A finite ordered tree.  `label` is a str or (for nested terms) a Tree."""

    label: object
    children: tuple["Tree", ...] = ()

    def __str__(self):
        head = str(self.label)
        if not self.children:
            return head
        return head + "(" + ",".join(str(c) for c in self.children) + ")"


def height(t: Tree) -> int:
    """Height with the convention that a single leaf has height 1."""
    if not t.children:
        return 1
    return 1 + max(height(c) for c in t.children)


def tree_key(t: Tree):
    """Sort key for the canonical tree order: height, then shortlex on the text."""
    s = str(t)
    return (height(t), len(s), s)


def iter_nodes(t: Tree):
    yield t
    for c in t.children:
        yield from iter_nodes(c)


def parse_tree(text: str) -> Tree:
    """Parse the nested-parentheses form ``a(b(c,c),c)``; whitespace ignored."""
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def ident():
        nonlocal pos
        skip_ws()
        start = pos
        while pos < n and (text[pos].isalnum() or text[pos] == "_"):
            pos += 1
        if pos == start:
            raise InputError(f"expected identifier at position {start} in {text!r}")
        return text[start:pos]

    def node():
        nonlocal pos
        name = ident()
        skip_ws()
        kids = []
        if pos < n and text[pos] == "(":
            pos += 1
            while True:
                kids.append(node())
                skip_ws()
                if pos < n and text[pos] == ",":
                    pos += 1
                    continue
                if pos < n and text[pos] == ")":
                    pos += 1
                    break
                raise InputError(f"expected ',' or ')' at position {pos} in {text!r}")
        return Tree(name, tuple(kids))

    result = node()
    skip_ws()
    if pos != n:
        raise InputError(f"trailing input at position {pos} in {text!r}")
    return result


def tree_vars(t: Tree, alphabet: RankedAlphabet) -> list[str]:
    """Variable occurrences of a tree over the alphabet, left to right.

    A string label that is not an alphabet symbol is a variable and must be
    a leaf; a symbol node must carry exactly rank-many children.
    """
    out = []

    def walk(node):
        if isinstance(node.label, Tree):
            for c in node.children:
                walk(c)
            return
        if node.label in alphabet:
            if len(node.children) != alphabet.rank(node.label):
                raise StructureError(
                    f"symbol {node.label!r} has {len(node.children)} children, "
                    f"rank is {alphabet.rank(node.label)}"
                )
            for c in node.children:
                walk(c)
        else:
            if node.children:
                raise StructureError(f"variable {node.label!r} cannot have children")
            out.append(node.label)

    walk(t)
    return out


def check_tree(t: Tree, alphabet: RankedAlphabet, sort=()) -> None:
    """Validate ranking and that all variables belong to the given sort."""
    for v in tree_vars(t, alphabet):
        if v not in sort:
            raise StructureError(f"variable {v!r} not declared in sort {tuple(sort)}")


def is_linear(t: Tree, alphabet: RankedAlphabet, sort=()) -> bool:
    """Whether every sort variable occurs exactly once and t is not a bare variable."""
    occ = tree_vars(t, alphabet)
    if set(occ) - set(sort):
        return False
    if isinstance(t.label, str) and t.label not in alphabet:
        return False
    return all(occ.count(v) == 1 for v in sort)


def is_nonlinear_member(t: Tree, alphabet: RankedAlphabet, sort=()) -> bool:
    """Membership in the wider class where variables only need to occur at least once."""
    occ = tree_vars(t, alphabet)
    if set(occ) - set(sort):
        return False
    return all(occ.count(v) >= 1 for v in sort)


def substitute(t: Tree, alphabet: RankedAlphabet, mapping: dict) -> Tree:
    """Replace every occurrence of each mapped variable by the mapped tree."""

    def walk(node):
        if isinstance(node.label, str) and node.label not in alphabet:
            if node.label in mapping:
                return mapping[node.label]
            return node
        return Tree(node.label, tuple(walk(c) for c in node.children))

    return walk(t)


def sing(alphabet: RankedAlphabet, name: str) -> Tree:
    """The one-operation term a(x0,...,x_{n-1}) over the canonical variables."""
    n = alphabet.rank(name)
    return Tree(name, tuple(Tree(f"x{i}") for i in range(n)))


def canonical_vars(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


def flat(t: Tree, alphabet: RankedAlphabet) -> Tree:
    """Flatten a tree whose operation labels are themselves trees.

    Each node's label-tree is instantiated at the flattened children, child i
    standing for the i-th variable of the label in canonical (lexicographic)
    order.  String labels are variables of the outer sort and stay put.
    """
    if isinstance(t.label, str):
        if t.children:
            raise StructureError(f"outer variable {t.label!r} cannot have children")
        return t
    inner = t.label
    varset = sorted(set(tree_vars(inner, alphabet)))
    if len(varset) != len(t.children):
        raise StructureError(
            f"label uses variables {varset} but node has {len(t.children)} children"
        )
    mapping = {v: flat(c, alphabet) for v, c in zip(varset, t.children)}
    return substitute(inner, alphabet, mapping)


def wrap_sing(t: Tree, alphabet: RankedAlphabet) -> Tree:
    """Relabel each symbol node by its one-operation term (variables untouched)."""
    if isinstance(t.label, str) and t.label not in alphabet:
        return t
    return Tree(sing(alphabet, t.label), tuple(wrap_sing(c, alphabet) for c in t.children))


def _slot_assignments(vars_: frozenset, k: int):
    """All ways to split vars_ into k ordered disjoint (possibly empty) parts."""
    vs = sorted(vars_)
    for choice in itertools.product(range(k), repeat=len(vs)):
        parts = [set() for _ in range(k)]
        for v, slot in zip(vs, choice):
            parts[slot].add(v)
        yield tuple(frozenset(p) for p in parts)


def enumerate_trees(alphabet: RankedAlphabet, variables=(), depth: int = 1):
    """Yield the linear trees with exactly the given variables, height <= depth.

    Order is part of the contract: ascending height, then shortlex on the
    text form.  With no variables this enumerates ground trees.
    """
    if depth < 1:
        raise InputError("depth must be at least 1")
    sort = tuple(sorted(variables))
    if len(set(sort)) != len(sort):
        raise InputError("variable names must be distinct")

    memo: dict = {}

    def upto(vars_: frozenset, h: int):
        if h == 0:
            return []
        key = (vars_, h)
        if key in memo:
            return memo[key]
        out = []
        if len(vars_) == 1:
            (v,) = vars_
            out.append(Tree(v))
        for name, k in alphabet.ranks:
            if k == 0:
                if not vars_:
                    out.append(Tree(name))
                continue
            for parts in _slot_assignments(vars_, k):
                for kids in itertools.product(*(upto(p, h - 1) for p in parts)):
                    out.append(Tree(name, kids))
        memo[key] = out
        return out

    trees = [
        t
        for t in upto(frozenset(sort), depth)
        if not (isinstance(t.label, str) and t.label not in alphabet and not t.children)
    ]
    for t in sorted(trees, key=tree_key):
        yield t


def count_trees(alphabet: RankedAlphabet, depth: int) -> int:
    """Ground-tree count to the given height via the alphabet's recurrence."""
    t = 0
    for _ in range(depth):
        t = sum(1 if k == 0 else t**k for _, k in alphabet.ranks)
    return t
