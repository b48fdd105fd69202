"""Star-free tree expressions with bounded-depth evaluation.

Text syntax (whitespace insignificant)::

    empty            the empty set; sort defaults to {} unless annotated
    empty{z}         sort annotation: a brace-list of variables
    a[x0,x1]         a letter with an enumeration of its sort (rank many,
                     no repetitions); rank-0 letters may drop the brackets
    e1 + e2          union (same sort)
    ~e               complement, relative to the bounded universe of e's sort
    e1 .z e2         concatenation: replace the z-leaf of each tree of e1 by
                     a tree of e2; sorts must be disjoint after removing z
    (e)              grouping; any subexpression may carry a {..} annotation

Values are computed relative to the universe of linear trees of height at
most the requested depth; every report states the bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError
from .trees import RankedAlphabet, Tree, enumerate_trees, height, substitute, tree_key


@dataclass(frozen=True)
class Expr:
    kind: str                 # "empty" | "letter" | "union" | "complement" | "concat"
    sort: tuple               # sorted variable names
    symbol: str = None        # letter
    enumeration: tuple = ()   # letter argument order
    var: str = None           # concat binder
    children: tuple = ()

    def render(self):
        if self.kind == "empty":
            ann = "{" + ",".join(self.sort) + "}" if self.sort else ""
            return "empty" + ann
        if self.kind == "letter":
            if not self.enumeration:
                return self.symbol
            return self.symbol + "[" + ",".join(self.enumeration) + "]"
        if self.kind == "union":
            return "(" + self.children[0].render() + " + " + self.children[1].render() + ")"
        if self.kind == "complement":
            return "~" + self.children[0].render()
        return (
            "("
            + self.children[0].render()
            + " ."
            + self.var
            + " "
            + self.children[1].render()
            + ")"
        )


def empty(sort=()):
    return Expr("empty", tuple(sorted(sort)))


def letter(alphabet: RankedAlphabet, symbol: str, enumeration=()):
    rank = alphabet.rank(symbol)
    enumeration = tuple(enumeration)
    if len(enumeration) != rank:
        raise InputError(
            f"letter {symbol!r} has rank {rank} but {len(enumeration)} variables given"
        )
    if len(set(enumeration)) != len(enumeration):
        raise InputError(f"letter {symbol!r}: variable enumeration repeats a name")
    return Expr("letter", tuple(sorted(enumeration)), symbol=symbol, enumeration=enumeration)


def union(a: Expr, b: Expr):
    if a.sort != b.sort:
        raise InputError(f"union of different sorts {a.sort} and {b.sort}")
    return Expr("union", a.sort, children=(a, b))


def complement(a: Expr):
    return Expr("complement", a.sort, children=(a,))


def concat(a: Expr, var: str, b: Expr):
    if var not in a.sort:
        raise InputError(f"concatenation binder {var!r} not in the left sort {a.sort}")
    eta = tuple(v for v in a.sort if v != var)
    if set(eta) & set(b.sort):
        raise InputError(
            f"concatenation sorts overlap: {sorted(set(eta) & set(b.sort))}"
        )
    return Expr("concat", tuple(sorted(eta + b.sort)), var=var, children=(a, b))


# -------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text, alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def error(self, msg):
        raise InputError(f"{msg} at position {self.pos} in expression")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def ident(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected identifier")
        return self.text[start : self.pos]

    def varlist(self, open_ch, close_ch):
        self.eat(open_ch)
        out = []
        if self.peek() == close_ch:
            self.pos += 1
            return tuple(out)
        while True:
            out.append(self.ident())
            if self.peek() == ",":
                self.pos += 1
                continue
            self.eat(close_ch)
            return tuple(out)

    def parse(self):
        e = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.error("trailing input")
        return e

    def expr(self):
        e = self.term()
        while self.peek() == "+":
            self.pos += 1
            e = union(e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.peek() == ".":
            self.pos += 1
            z = self.ident()
            e = concat(e, z, self.factor())
        return e

    def factor(self):
        if self.peek() == "~":
            self.pos += 1
            return complement(self.factor())
        return self.atom()

    def atom(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            e = self.expr()
            self.eat(")")
            return self.annotated(e)
        name = self.ident()
        if name == "empty":
            sort = ()
            if self.peek() == "{":
                sort = self.varlist("{", "}")
            return empty(sort)
        if name not in self.alphabet:
            self.error(f"unknown symbol {name!r}")
        enumeration = ()
        if self.peek() == "[":
            enumeration = self.varlist("[", "]")
        return self.annotated(letter(self.alphabet, name, enumeration))

    def annotated(self, e):
        if self.peek() == "{":
            sort = tuple(sorted(self.varlist("{", "}")))
            if sort != e.sort:
                self.error(f"annotation {sort} does not match computed sort {e.sort}")
        return e


def parse_expression(text: str, alphabet: RankedAlphabet) -> Expr:
    return _Parser(text, alphabet).parse()


# ----------------------------------------------------------------- evaluation


def eval_bounded(e: Expr, alphabet: RankedAlphabet, depth: int) -> frozenset:
    """The expression's value intersected with the trees of height <= depth.

    Complements are relative to the enumerated universe at the node's sort;
    concatenation substitutes and keeps results within the bound (sound:
    both factors of a bounded result are themselves bounded).
    """
    if depth < 1:
        raise InputError("depth must be at least 1")
    universes: dict = {}
    memo: dict = {}

    def universe(sort):
        if sort not in universes:
            universes[sort] = frozenset(enumerate_trees(alphabet, sort, depth))
        return universes[sort]

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if node.kind == "empty":
            val = frozenset()
        elif node.kind == "letter":
            t = Tree(node.symbol, tuple(Tree(v) for v in node.enumeration))
            val = frozenset([t] if height(t) <= depth else [])
        elif node.kind == "union":
            val = go(node.children[0]) | go(node.children[1])
        elif node.kind == "complement":
            val = universe(node.sort) - go(node.children[0])
        else:
            left = go(node.children[0])
            right = go(node.children[1])
            out = set()
            for s in left:
                for t in right:
                    r = substitute(s, alphabet, {node.var: t})
                    if height(r) <= depth:
                        out.add(r)
            val = frozenset(out)
        memo[key] = val
        return val

    return go(e)


@dataclass
class AgreementReport:
    depth: int
    agree: bool
    only_expression: tuple
    only_automaton: tuple

    def to_dict(self):
        return {
            "depth": self.depth,
            "agree": self.agree,
            "only_expression": [str(t) for t in self.only_expression],
            "only_automaton": [str(t) for t in self.only_automaton],
        }

    def render(self):
        if self.agree:
            return f"agree to depth {self.depth}"
        lines = [f"disagree at depth {self.depth}"]
        for t in self.only_expression:
            lines.append(f"  only expression: {t}")
        for t in self.only_automaton:
            lines.append(f"  only automaton:  {t}")
        return "\n".join(lines)


def compare_language(e: Expr, dfta, depth: int) -> AgreementReport:
    """Symmetric difference of the bounded value and the accepted trees.

    The expression must have been parsed against the automaton's alphabet;
    symbols from a different alphabet are rejected at parse time.
    """
    if e.sort:
        raise InputError("language comparison needs a ground-sort expression")
    val = eval_bounded(e, dfta.alphabet, depth)
    auto = frozenset(
        t for t in enumerate_trees(dfta.alphabet, (), depth) if dfta.member(t)
    )
    only_e = tuple(sorted(val - auto, key=tree_key))
    only_a = tuple(sorted(auto - val, key=tree_key))
    return AgreementReport(depth, not only_e and not only_a, only_e, only_a)
