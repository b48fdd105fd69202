import itertools

import pytest

from treefo import (
    ConfigError,
    Dfta,
    build_syntactic,
    enumerate_trees,
    from_tables,
    is_aperiodic,
    parse_tree,
    sg,
)
from treefo.clone import (
    apply_table,
    close_tables,
    compose_unary,
    essential_coords,
    proj_table,
)

import genutil

# even-depth carrier indices: 0 = class of c ("1"), 1 = class of a(c,c) ("0"),
# 2 = junk ("bot")
A11 = (1, 2, 2, 2, 0, 2, 2, 2, 2)
MEET_LIKE = (0, 2, 2, 2, 1, 2, 2, 2, 2)  # (0,0)->0 and (1,1)->1, else bot
SWAP_BOT = (1, 0, 2)


class TestBuild:
    def test_even_depth_carrier(self, clones):
        C = clones["even_depth"]
        assert C.size == 3
        assert C.names == ("c", "a(c,c)", "a(a(c,c),c)")
        assert sorted(C.accepting) == [0]

    def test_letter_table_matches_worked_example(self, clones):
        C = clones["even_depth"]
        assert C.letters["a"] == A11
        assert C.letters["c"] == (0,)

    def test_identification_closure_contains_diagonal_meet(self, clones):
        C = clones["even_depth"]
        assert MEET_LIKE in C.ops[2]
        # cross-check one entry by hand: inner a(1,1)=0 twice, outer a(0,0)=1
        assert apply_table(MEET_LIKE, (0, 0), 3) == 0

    def test_arity_zero_tables_are_carrier(self, clones):
        for C in clones.values():
            assert sorted(C.ops[0]) == [(i,) for i in range(C.size)]

    def test_reducedness_no_duplicate_tables(self, clones):
        for C in clones.values():
            for arity, bucket in C.ops.items():
                assert len(bucket) == len(set(bucket))

    def test_linear_tables_are_subset(self, clones):
        for C in clones.values():
            for arity, tables in C.linear_ops.items():
                assert set(tables) <= set(C.ops[arity])

    def test_arity_cap_validation(self, automata):
        with pytest.raises(ConfigError):
            build_syntactic(automata["even_depth"], 1)

    def test_path_parity_carrier(self, clones):
        C = clones["path_parity"]
        assert C.size == 2
        assert C.letters["a"] == (1, 0)


class TestRecognition:
    def test_eval_examples(self, clones):
        C = clones["even_depth"]
        assert C.eval(parse_tree("c")) == 0
        assert C.eval(parse_tree("a(c,c)")) == 1
        assert C.accepts(parse_tree("a(a(c,c),a(c,c))"))

    @pytest.mark.parametrize("fixture", genutil.FIXTURE_NAMES)
    def test_agrees_with_automaton(self, fixture, automata, clones):
        d = automata[fixture].complete()
        C = clones[fixture]
        depth = {"path_parity": 6, "and_or": 3}.get(fixture, 4)
        for tree in enumerate_trees(d.alphabet, (), depth):
            assert C.accepts(tree) == d.member(tree)

    def test_accepted_classes_union(self, clones, automata):
        # membership is decided by the carrier class alone
        for name, C in clones.items():
            d = automata[name].complete()
            depth = 3 if name == "and_or" else 4
            for tree in enumerate_trees(d.alphabet, (), depth):
                assert d.member(tree) == (C.eval(tree) in C.accepting)


class TestClosureSoundness:
    @pytest.mark.parametrize("fixture", genutil.FIXTURE_NAMES)
    def test_fixpoint_is_closed(self, fixture, clones):
        # one more closure round starting from the stored tables adds nothing
        C = clones[fixture]
        gens = {}
        for arity, bucket in C.ops.items():
            if arity == 0:
                continue
            for i, table in enumerate(sorted(bucket)):
                gens[f"t{arity}_{i}"] = (arity, table)
        ops, _ = close_tables(C.size, gens, C.n_max)
        for arity in range(1, C.n_max + 1):
            assert set(ops[arity]) == set(C.ops[arity]), f"arity {arity} not closed"


class TestSemigroup:
    def test_even_depth_elements(self, clones):
        S = sg(clones["even_depth"])
        # the five unary elements of the worked example; no identity, no swap
        assert set(S.elements) == {
            (0, 2, 2),
            (1, 2, 2),
            (2, 0, 2),
            (2, 1, 2),
            (2, 2, 2),
        }
        assert SWAP_BOT not in S.elements
        assert S.is_closed()

    def test_swap_is_in_identification_closure_only(self, clones):
        C = clones["even_depth"]
        assert SWAP_BOT in C.ops[1]
        assert SWAP_BOT not in C.linear_ops[1]

    def test_path_parity_contains_swap(self, clones):
        S = sg(clones["path_parity"])
        assert (1, 0) in S.elements
        assert (0, 1) in S.elements  # generated by a(a(x))

    def test_power_stabilization_bound(self, clones):
        import math

        for C in clones.values():
            S = sg(C)
            n = math.factorial(C.size) * C.size
            for f in S.elements:
                p = f
                for _ in range(n - 1):
                    p = compose_unary(p, f)
                q = p
                for _ in range(math.factorial(C.size)):
                    q = compose_unary(q, f)
                assert p == q


class TestAperiodicity:
    def test_even_depth_aperiodic(self, clones):
        r = is_aperiodic(sg(clones["even_depth"]))
        assert r.aperiodic
        assert r.bound >= 1

    def test_path_parity_not_aperiodic(self, clones):
        r = is_aperiodic(sg(clones["path_parity"]))
        assert not r.aperiodic
        assert r.witness == (1, 0)
        assert r.period == 2

    def test_one_element_carrier(self):
        d = Dfta.from_dict(
            {
                "alphabet": {"a": 2, "c": 0},
                "states": ["q"],
                "transitions": [
                    {"symbol": "c", "args": [], "to": "q"},
                    {"symbol": "a", "args": ["q", "q"], "to": "q"},
                ],
                "accepting": ["q"],
            }
        )
        C = build_syntactic(d)
        assert C.size == 1
        assert is_aperiodic(sg(C)).aperiodic


class TestFromTables:
    def test_xor_algebra(self):
        xor = (0, 1, 1, 0)
        C = from_tables(2, {"xor": xor})
        assert xor in C.ops[2]
        # the ternary sum is a Maltsev operation
        triple = tuple(
            (a + b + c) % 2 for a, b, c in itertools.product(range(2), repeat=3)
        )
        assert triple in C.ops[3]

    def test_constants_only(self):
        C = from_tables(3, {})
        assert C.ops[1] == {}
        assert sorted(C.ops[0]) == [(0,), (1,), (2,)]


class TestCriterion5Oracle:
    """Stored binary tables equal brute-force two-variable terms to depth 3."""

    @pytest.mark.parametrize("fixture", genutil.FIXTURE_NAMES)
    def test_binary_tables_match_enumeration(self, fixture, automata):
        d = automata[fixture]
        C = build_syntactic(d, n_max=max(2, d.alphabet.max_rank))
        size = C.size

        def eval_tree(tree, env):
            if tree.label in env:
                return env[tree.label]
            kids = tuple(eval_tree(c, env) for c in tree.children)
            return apply_table(C.letters[tree.label], kids, size)

        def variable_trees(depth):
            # all terms over the alphabet and {x, y}, both variables occurring
            leaves = [parse_tree("x"), parse_tree("y")] + [
                parse_tree(c) for c in d.alphabet.constants
            ]
            levels = [list(leaves)]
            for _ in range(depth - 1):
                prev = levels[-1]
                pool = [t for lvl in levels for t in lvl]
                new = []
                for name, k in d.alphabet.ranks:
                    if k == 0:
                        continue
                    for kids in itertools.product(pool, repeat=k):
                        if any(x in prev for x in kids):
                            new.append(type(leaves[0])(name, tuple(kids)))
                levels.append(new)
            seen = set()
            for lvl in levels:
                for t in lvl:
                    text = str(t)
                    if text not in seen:
                        seen.add(text)
                        yield t

        expected = set()
        for tree in variable_trees(3):
            occurring = set(genutil.vars_of(tree, d.alphabet))
            if occurring != {"x", "y"}:
                continue
            table = tuple(
                eval_tree(tree, {"x": vx, "y": vy})
                for vx, vy in itertools.product(range(size), repeat=2)
            )
            expected.add(table)
        assert expected == set(C.ops[2])
