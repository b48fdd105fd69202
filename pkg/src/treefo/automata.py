"""Deterministic bottom-up tree automata.

A Dfta is the finite presentation of a regular language of ground trees.
Instances are immutable after construction; every operation returns a new
automaton.  The JSON input format is::

    {"alphabet": {"a": 2, "c": 0},
     "states": ["s0", "s1"],
     "transitions": [{"symbol": "a", "args": ["s1", "s1"], "to": "s0"}, ...],
     "accepting": ["s1"]}

Omitted transitions are legal; completion routes them to a fresh sink.
Nondeterministic files (two transitions for the same left-hand side with
different targets) are rejected.
"""

from __future__ import annotations

import itertools
import json

from .errors import InputError
from .trees import RankedAlphabet, Tree, height, tree_key

HOLE = "@"


class Dfta:
    def __init__(self, alphabet, states, transitions, accepting, notes=()):
        self.alphabet = alphabet
        self.states = tuple(states)
        self.transitions = dict(transitions)
        self.accepting = frozenset(accepting)
        self.notes = tuple(notes)
        self.reps = None        # filled in by minimize()
        self.separators = None  # filled in by minimize()
        self._validate()

    def _validate(self):
        if len(set(self.states)) != len(self.states):
            raise InputError("duplicate state names")
        stateset = set(self.states)
        if not self.accepting <= stateset:
            raise InputError("accepting states must be listed states")
        for (sym, args), to in self.transitions.items():
            if sym not in self.alphabet:
                raise InputError(f"transition uses unknown symbol {sym!r}")
            if len(args) != self.alphabet.rank(sym):
                raise InputError(f"transition arity mismatch for {sym!r}")
            for q in args:
                if q not in stateset:
                    raise InputError(f"transition uses unknown state {q!r}")
            if to not in stateset:
                raise InputError(f"transition targets unknown state {to!r}")

    # ------------------------------------------------------------------ I/O

    @classmethod
    def from_dict(cls, d: dict) -> "Dfta":
        try:
            alphabet = RankedAlphabet.from_dict(d["alphabet"])
            states = [str(s) for s in d["states"]]
            accepting = [str(s) for s in d.get("accepting", [])]
            transitions = {}
            for t in d.get("transitions", []):
                key = (str(t["symbol"]), tuple(str(a) for a in t["args"]))
                to = str(t["to"])
                if key in transitions and transitions[key] != to:
                    raise InputError(
                        f"nondeterministic transitions for {key[0]}{key[1]}; "
                        "determinize externally"
                    )
                transitions[key] = to
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed automaton document: {exc}") from exc
        return cls(alphabet, states, transitions, accepting)

    @classmethod
    def from_json(cls, text: str) -> "Dfta":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path) -> "Dfta":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def to_dict(self) -> dict:
        return {
            "alphabet": self.alphabet.to_dict(),
            "states": list(self.states),
            "transitions": [
                {"symbol": s, "args": list(a), "to": t}
                for (s, a), t in sorted(self.transitions.items())
            ],
            "accepting": sorted(self.accepting),
        }

    # ------------------------------------------------------------- queries

    def is_complete(self) -> bool:
        for name, k in self.alphabet.ranks:
            for args in itertools.product(self.states, repeat=k):
                if (name, args) not in self.transitions:
                    return False
        return True

    def run(self, t: Tree) -> str:
        """The unique bottom-up state of a ground tree (automaton must be complete)."""
        if not isinstance(t.label, str) or t.label not in self.alphabet:
            raise InputError(f"node {t.label!r} is not a symbol of the alphabet")
        kids = tuple(self.run(c) for c in t.children)
        try:
            return self.transitions[(t.label, kids)]
        except KeyError:
            raise InputError(
                f"missing transition for {t.label}{kids}; complete the automaton first"
            ) from None

    def member(self, t: Tree) -> bool:
        return self.run(t) in self.accepting

    # -------------------------------------------------------- construction

    def complete(self) -> "Dfta":
        """Route all missing transitions to a fresh non-accepting sink."""
        missing = []
        for name, k in self.alphabet.ranks:
            for args in itertools.product(self.states, repeat=k):
                if (name, args) not in self.transitions:
                    missing.append((name, args))
        if not missing:
            return self
        sink = "sink"
        while sink in self.states:
            sink += "_"
        states = self.states + (sink,)
        transitions = dict(self.transitions)
        for name, k in self.alphabet.ranks:
            for args in itertools.product(states, repeat=k):
                if (name, args) not in transitions:
                    transitions[(name, args)] = sink
        notes = self.notes + (f"completed with sink state {sink!r}",)
        return Dfta(self.alphabet, states, transitions, self.accepting, notes)

    def reachable_states(self) -> set:
        reached = set()
        changed = True
        while changed:
            changed = False
            for (sym, args), to in self.transitions.items():
                if to not in reached and all(q in reached for q in args):
                    reached.add(to)
                    changed = True
        return reached

    def prune_unreachable(self) -> "Dfta":
        reached = self.reachable_states()
        if reached == set(self.states):
            return self
        dropped = sorted(set(self.states) - reached)
        states = tuple(q for q in self.states if q in reached)
        transitions = {
            k: v
            for k, v in self.transitions.items()
            if v in reached and all(q in reached for q in k[1])
        }
        notes = self.notes + (f"pruned unreachable states: {', '.join(dropped)}",)
        return Dfta(self.alphabet, states, transitions, self.accepting & reached, notes)

    def minimize(self) -> "Dfta":
        """Merge context-indistinguishable states.

        The result is complete, has only reachable states, is named by the
        least tree (height, then text) reaching each class, and carries
        `reps` (state -> least tree) and `separators` (a single-hole context
        for every pair of distinct states, hole label '@').
        """
        A = self.complete().prune_unreachable()
        states = list(A.states)
        block = {q: (0 if q in A.accepting else 1) for q in states}
        while True:
            sigs = {}
            for q in states:
                sig = [block[q]]
                for name, k in A.alphabet.ranks:
                    if k == 0:
                        continue
                    for i in range(k):
                        for rest in itertools.product(states, repeat=k - 1):
                            args = rest[:i] + (q,) + rest[i:]
                            sig.append(block[A.transitions[(name, args)]])
                sigs[q] = tuple(sig)
            order = sorted(set(sigs.values()))
            new_block = {q: order.index(sigs[q]) for q in states}
            if new_block == block:
                break
            block = new_block

        classes = sorted(set(block.values()))
        btrans = {}
        for (sym, args), to in A.transitions.items():
            btrans[(sym, tuple(block[q] for q in args))] = block[to]
        baccept = {block[q] for q in A.accepting}

        reps = _least_reps(A.alphabet, classes, btrans)
        namemap = {b: str(reps[b]) for b in classes}
        ordered = sorted(classes, key=lambda b: tree_key(reps[b]))
        result = Dfta(
            A.alphabet,
            [namemap[b] for b in ordered],
            {(s, tuple(namemap[q] for q in a)): namemap[t] for (s, a), t in btrans.items()},
            [namemap[b] for b in baccept],
            A.notes + (f"minimized: {len(states)} -> {len(classes)} states",),
        )
        result.reps = {namemap[b]: reps[b] for b in classes}
        result.separators = _separating_contexts(result)
        return result


def _least_reps(alphabet, classes, transitions):
    """Least tree (height, then text) reaching each state of a complete DFTA."""
    rep: dict = {}
    changed = True
    while changed:
        changed = False
        for name, k in alphabet.ranks:
            if k == 0:
                q = transitions[(name, ())]
                cand = Tree(name)
                if q not in rep or tree_key(cand) < tree_key(rep[q]):
                    rep[q] = cand
                    changed = True
                continue
            known = sorted(rep)
            for args in itertools.product(known, repeat=k):
                q = transitions[(name, args)]
                cand = Tree(name, tuple(rep[a] for a in args))
                if q not in rep or tree_key(cand) < tree_key(rep[q]):
                    rep[q] = cand
                    changed = True
    missing = set(classes) - set(rep)
    if missing:
        raise InputError(f"states unreachable after minimization: {sorted(missing)}")
    return rep


def _separating_contexts(A: Dfta) -> dict:
    """A single-hole context telling each pair of distinct states apart.

    Plugging the two states' representative trees into the context yields one
    tree inside the language and one outside.  Exists for every pair since
    minimized states are context-distinguishable.
    """
    hole = Tree(HOLE)
    sep = {}
    for q1 in A.states:
        for q2 in A.states:
            if q1 != q2 and (q1 in A.accepting) != (q2 in A.accepting):
                sep[(q1, q2)] = hole
    changed = True
    while changed:
        changed = False
        for name, k in A.alphabet.ranks:
            if k == 0:
                continue
            for i in range(k):
                for rest in itertools.product(A.states, repeat=k - 1):
                    for q1 in A.states:
                        for q2 in A.states:
                            if q1 == q2 or (q1, q2) in sep:
                                continue
                            a1 = rest[:i] + (q1,) + rest[i:]
                            a2 = rest[:i] + (q2,) + rest[i:]
                            t1 = A.transitions[(name, a1)]
                            t2 = A.transitions[(name, a2)]
                            if t1 == t2 or (t1, t2) not in sep:
                                continue
                            inner = Tree(
                                name,
                                tuple(
                                    Tree(HOLE) if j == i else A.reps[rest[j if j < i else j - 1]]
                                    for j in range(k)
                                ),
                            )
                            sep[(q1, q2)] = _plug(sep[(t1, t2)], inner)
                            changed = True
    for q1 in A.states:
        for q2 in A.states:
            if q1 != q2 and (q1, q2) not in sep:
                raise InputError(f"states {q1!r}, {q2!r} not separable; minimization bug")
    return sep


def _plug(context: Tree, filler: Tree) -> Tree:
    if context.label == HOLE and not context.children:
        return filler
    return Tree(context.label, tuple(_plug(c, filler) for c in context.children))


def language_to_depth(A: Dfta, depth: int):
    """All accepted ground trees of height <= depth, in enumeration order."""
    from .trees import enumerate_trees

    return [t for t in enumerate_trees(A.alphabet, (), depth) if A.member(t)]
