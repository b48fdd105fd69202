import random

import pytest

from treefo import (
    InputError,
    RankedAlphabet,
    StructureError,
    Tree,
    enumerate_trees,
    flat,
    height,
    is_linear,
    parse_tree,
    sing,
)
from treefo.trees import count_trees, tree_vars, wrap_sing

import genutil

AC = RankedAlphabet.from_dict({"a": 2, "c": 0})
ABC = RankedAlphabet.from_dict({"a": 2, "b": 1, "c": 0})


def t(text):
    return parse_tree(text)


class TestAlphabet:
    def test_requires_constant(self):
        with pytest.raises(InputError):
            RankedAlphabet.from_dict({"a": 2})

    def test_rejects_duplicates(self):
        with pytest.raises(InputError):
            RankedAlphabet((("a", 2), ("a", 0)))

    def test_lookup(self):
        assert AC.rank("a") == 2
        assert "c" in AC and "z" not in AC
        with pytest.raises(InputError):
            AC.rank("z")


class TestParsing:
    def test_round_trip_exact(self):
        for text in ["c", "a(c,c)", "a(a(c,c),c)", "a(c,a(a(c,c),c))"]:
            assert str(parse_tree(text)) == text

    def test_whitespace_insignificant(self):
        assert parse_tree(" a ( c , c ) ") == t("a(c,c)")

    def test_errors(self):
        for bad in ["", "a(c", "a(c,)", "a c", "()"]:
            with pytest.raises(InputError):
                parse_tree(bad)


class TestFlatSing:
    def test_sing(self):
        assert str(sing(AC, "c")) == "c"
        assert str(sing(AC, "a")) == "a(x0,x1)"

    def test_worked_flat_example(self):
        # s(x,y,z) = a(a(x,y),b(z)); t(x,y) = b(a(x,y)); u(x) = a(c,x); v(x) = b(a(x,x))
        s = t("a(a(x,y),b(z))")
        tt = t("b(a(x,y))")
        u = t("a(c,x)")
        v = t("b(a(x,x))")
        outer = Tree(
            s,
            (
                Tree(tt, (Tree("y"), Tree("x"))),
                Tree(u, (Tree("z"),)),
                Tree(v, (Tree("y"),)),
            ),
        )
        assert str(flat(outer, ABC)) == "a(a(b(a(y,x)),a(c,z)),b(b(a(y,y))))"

    def test_flat_sing_is_identity(self):
        for text in ["c", "a(c,c)", "a(a(c,x),y)"]:
            tree = t(text)
            assert flat(wrap_sing(tree, AC), AC) == tree
            whole = Tree(tree, tuple(Tree(v) for v in sorted(set(tree_vars(tree, AC)))))
            assert flat(whole, AC) == tree

    def test_flat_arity_mismatch(self):
        bad = Tree(t("a(x,y)"), (Tree("c"),))
        with pytest.raises(StructureError):
            flat(bad, AC)

    def test_flat_preserves_linearity(self):
        rng = random.Random(7)
        for _ in range(300):
            nested = genutil.random_layered(rng, AC, 2, ["y0", "y1"], 3)
            result = flat(nested, AC)
            occ = tree_vars(result, AC)
            assert sorted(occ) == ["y0", "y1"] or sorted(set(occ)) == ["y0", "y1"]


class TestMonadLaws:
    @pytest.mark.parametrize("fixture", genutil.FIXTURE_NAMES)
    def test_unit_laws_random(self, fixture):
        alphabet = genutil.load_alphabet(fixture)
        rng = random.Random(13)
        nvars = 1 if alphabet.max_rank <= 1 else 2
        for i in range(300):
            vars_ = [f"y{j}" for j in range(rng.randrange(nvars + 1))]
            tree = genutil.random_linear_tree(rng, alphabet, vars_, 4)
            assert flat(wrap_sing(tree, alphabet), alphabet) == tree
            whole = Tree(tree, tuple(Tree(v) for v in sorted(set(vars_))))
            assert flat(whole, alphabet) == tree

    @pytest.mark.parametrize("fixture", genutil.FIXTURE_NAMES)
    def test_associativity_random(self, fixture):
        alphabet = genutil.load_alphabet(fixture)
        rng = random.Random(29)
        nvars = 1 if alphabet.max_rank <= 1 else 2
        for i in range(300):
            vars_ = [f"y{j}" for j in range(rng.randrange(nvars + 1))]
            t3 = genutil.random_layered(rng, alphabet, 3, vars_, 3)
            inner_first = flat(
                genutil.map_labels(t3, lambda lbl: flat(lbl, alphabet), alphabet),
                alphabet,
            )
            outer_first = flat(flat(t3, alphabet), alphabet)
            assert inner_first == outer_first


class TestLinearity:
    def test_examples(self):
        assert is_linear(t("a(x,c)"), AC, ("x",))
        assert is_linear(t("a(x,y)"), AC, ("x", "y"))
        assert not is_linear(t("a(x,x)"), AC, ("x",))
        assert not is_linear(t("x"), AC, ("x",))      # bare variable excluded
        assert not is_linear(t("a(c,c)"), AC, ("x",))  # x missing


class TestEnumeration:
    def test_depth_one(self):
        assert [str(x) for x in enumerate_trees(AC, (), 1)] == ["c"]

    def test_depth_two(self):
        assert [str(x) for x in enumerate_trees(AC, (), 2)] == ["c", "a(c,c)"]

    def test_depth_three_exact_order(self):
        got = [str(x) for x in enumerate_trees(AC, (), 3)]
        assert got == [
            "c",
            "a(c,c)",
            "a(a(c,c),c)",
            "a(c,a(c,c))",
            "a(a(c,c),a(c,c))",
        ]

    def test_prefix_property(self):
        smaller = list(enumerate_trees(AC, (), 3))
        larger = list(enumerate_trees(AC, (), 4))
        assert larger[: len(smaller)] == smaller

    @pytest.mark.parametrize("fixture", genutil.FIXTURE_NAMES)
    def test_counts_match_recurrence(self, fixture):
        alphabet = genutil.load_alphabet(fixture)
        depth = 4 if alphabet.max_rank > 1 else 6
        if fixture == "and_or":
            depth = 3
        for d in range(1, depth + 1):
            assert len(list(enumerate_trees(alphabet, (), d))) == count_trees(alphabet, d)

    def test_with_variables(self):
        got = [str(x) for x in enumerate_trees(AC, ("x",), 2)]
        assert got == ["a(c,x)", "a(x,c)"]
        for tree in enumerate_trees(AC, ("x", "y"), 3):
            assert is_linear(tree, AC, ("x", "y"))

    def test_depth_zero_rejected(self):
        with pytest.raises(InputError):
            list(enumerate_trees(AC, (), 0))


def test_height_convention():
    assert height(t("c")) == 1
    assert height(t("a(c,c)")) == 2
