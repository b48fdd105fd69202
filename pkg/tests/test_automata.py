import itertools

import pytest

from treefo import Dfta, InputError, enumerate_trees, parse_tree
from treefo.automata import HOLE, _plug, language_to_depth

import genutil


@pytest.fixture(scope="module")
def even(automata):
    return automata["even_depth"].complete()


class TestParsing:
    def test_load_fixtures(self, automata):
        for name, d in automata.items():
            assert d.states

    def test_rejects_nondeterminism(self):
        doc = {
            "alphabet": {"c": 0},
            "states": ["p", "q"],
            "transitions": [
                {"symbol": "c", "args": [], "to": "p"},
                {"symbol": "c", "args": [], "to": "q"},
            ],
            "accepting": ["p"],
        }
        with pytest.raises(InputError):
            Dfta.from_dict(doc)

    def test_rejects_unknowns(self):
        with pytest.raises(InputError):
            Dfta.from_dict(
                {
                    "alphabet": {"c": 0},
                    "states": ["p"],
                    "transitions": [{"symbol": "d", "args": [], "to": "p"}],
                    "accepting": [],
                }
            )


class TestRun:
    def test_even_depth_examples(self, even):
        assert even.run(parse_tree("c")) == "even"
        assert even.member(parse_tree("c"))
        assert not even.member(parse_tree("a(c,c)"))
        assert even.member(parse_tree("a(a(c,c),a(c,c))"))

    def test_run_is_homomorphism(self, even):
        for tree in enumerate_trees(even.alphabet, (), 4):
            kids = tuple(even.run(c) for c in tree.children)
            assert even.run(tree) == even.transitions[(tree.label, kids)]

    def test_unknown_symbol(self, even):
        with pytest.raises(InputError):
            even.run(parse_tree("d"))


class TestComplete:
    def test_already_complete_unchanged(self, automata):
        d = automata["and_only"]
        assert d.is_complete()
        assert d.complete() is d

    def test_sink_entry_count(self, automata):
        d = automata["even_depth"]
        assert not d.is_complete()
        full = d.complete()
        assert full.is_complete()
        # rank-2 symbol over the enlarged state set
        n = len(full.states)
        a_trans = [k for k in full.transitions if k[0] == "a"]
        assert len(a_trans) == n * n

    def test_no_transitions_for_symbol(self):
        d = Dfta.from_dict(
            {
                "alphabet": {"a": 2, "c": 0},
                "states": ["q"],
                "transitions": [{"symbol": "c", "args": [], "to": "q"}],
                "accepting": ["q"],
            }
        )
        full = d.complete()
        n = len(full.states)
        assert len([k for k in full.transitions if k[0] == "a"]) == n * n

    def test_language_unchanged(self, automata):
        for name, d in automata.items():
            depth = 3 if name == "and_or" else 4
            full = d.complete()
            before = set(map(str, language_to_depth(full, depth)))
            after = set(map(str, language_to_depth(full.complete(), depth)))
            assert before == after


class TestMinimize:
    def test_even_depth_three_states(self, automata):
        m = automata["even_depth"].minimize()
        assert len(m.states) == 3

    def test_duplicated_accepting_states_merge(self):
        d = Dfta.from_dict(
            {
                "alphabet": {"a": 1, "c": 0, "d": 0},
                "states": ["p", "q", "r"],
                "transitions": [
                    {"symbol": "c", "args": [], "to": "p"},
                    {"symbol": "d", "args": [], "to": "q"},
                    {"symbol": "a", "args": ["p"], "to": "r"},
                    {"symbol": "a", "args": ["q"], "to": "r"},
                    {"symbol": "a", "args": ["r"], "to": "r"},
                ],
                "accepting": ["p", "q"],
            }
        )
        m = d.minimize()
        assert len(m.states) == 2

    def test_idempotent(self, automata):
        for d in automata.values():
            m = d.minimize()
            assert len(m.minimize().states) == len(m.states)

    def test_state_count_not_larger(self, automata):
        for d in automata.values():
            full = d.complete()
            assert len(d.minimize().states) <= len(full.states)

    def test_language_preserved(self, automata):
        for name, d in automata.items():
            depth = {"path_parity": 6, "and_or": 3}.get(name, 4)
            m = d.minimize()
            before = set(map(str, language_to_depth(d.complete(), depth)))
            after = set(map(str, language_to_depth(m, depth)))
            assert before == after

    def test_canonical_names_are_representatives(self, automata):
        m = automata["even_depth"].minimize()
        assert m.states == ("c", "a(c,c)", "a(a(c,c),c)")
        for q in m.states:
            assert m.run(m.reps[q]) == q

    def test_separating_contexts(self, automata):
        for d in automata.values():
            m = d.minimize()
            for (q1, q2), ctx in m.separators.items():
                t1 = _plug(ctx, m.reps[q1])
                t2 = _plug(ctx, m.reps[q2])
                assert m.member(t1) != m.member(t2)

    def test_unreachable_pruned(self):
        d = Dfta.from_dict(
            {
                "alphabet": {"c": 0},
                "states": ["p", "ghost"],
                "transitions": [{"symbol": "c", "args": [], "to": "p"}],
                "accepting": ["p"],
            }
        )
        m = d.minimize()
        assert all("ghost" not in q for q in m.states)
        assert any("pruned" in n for n in m.notes)
