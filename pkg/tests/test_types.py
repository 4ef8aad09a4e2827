import pickle

import pytest
from hypothesis import given

from iamspace.ttypes import (
    EMPTY, LEFT, RIGHT, STAR, Arrow, Tree, atom_paths, env_get, env_join, env_nest,
    env_remove, focus_str, is_linear, leaf_index, leaf_paths, leaves, parse_focus, show,
    spine_height, split_leaf, star_paths, tree_height, type_at, type_from_json, type_to_json,
)

from .strategies import generic_types

A = STAR
B = Arrow(Tree((STAR,)), STAR)


class TestConstruction:
    def test_interned(self):
        assert Arrow(Tree((STAR,)), STAR) is B
        assert Tree((A, B)) is Tree([A, B])
        assert hash(Tree((A, B))) == hash(Tree((A, B)))

    def test_order_significant(self):
        assert Tree((A, B)) != Tree((B, A))

    def test_arrow_codomain_is_linear(self):
        with pytest.raises(TypeError):
            Arrow(EMPTY, EMPTY)
        with pytest.raises(TypeError):
            Arrow(STAR, STAR)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            B.left = EMPTY

    @given(generic_types())
    def test_pickle_preserves_identity(self, g):
        assert pickle.loads(pickle.dumps(g)) is g


class TestLeaves:
    def test_empty(self):
        assert leaves(EMPTY) == ()

    def test_nesting_example(self):
        t = Tree((A, Tree((Tree((B, B)), A, Tree((A,)))), A, B))
        assert leaves(t) == (A, B, B, A, A, A, B)
        assert leaf_paths(t)[1] == (1, 0, 0)
        assert leaf_index(t, (1, 2, 0)) == 4

    def test_singleton(self):
        assert leaves(Tree((STAR,))) == (STAR,)

    @given(generic_types())
    def test_leaf_contexts_plug_back(self, g):
        if not isinstance(g, Tree):
            return
        for p, a in zip(leaf_paths(g), leaves(g)):
            assert type_at(g, p) is a
            assert is_linear(a)


class TestPaths:
    def test_type_at_and_split(self):
        g = Arrow(Tree((Tree((B,)), STAR)), STAR)
        assert type_at(g, (LEFT, 0, 0)) is B
        assert split_leaf(g, (LEFT, 0, 0, RIGHT), 1) == ((0, 0), (RIGHT,))
        with pytest.raises(ValueError):
            type_at(g, (RIGHT, RIGHT))

    def test_star_paths(self):
        assert star_paths(B) == [(LEFT, 0), (RIGHT,)]
        assert list(atom_paths(Tree((B, STAR)), B)) == [(0,)]

    def test_focus_round_trip(self):
        p = (LEFT, 1, 0, RIGHT)
        assert focus_str(p) == "l.1.0.r"
        assert parse_focus(focus_str(p)) == p
        assert parse_focus("") == ()

    def test_heights(self):
        t = Tree((Tree((Tree((STAR,)),)),))
        assert tree_height(t) == 3
        assert spine_height(t) == 1
        inner = Tree((STAR, Tree((STAR,))))
        assert spine_height(Tree((STAR, inner))) == 3


class TestSerialization:
    def test_show(self):
        assert show(Arrow(Tree((B, Tree((STAR,)))), STAR)) == "[[*]->*,[*]]->*"

    @given(generic_types())
    def test_json_round_trip(self, g):
        assert type_from_json(type_to_json(g)) is g

    def test_bad_json(self):
        with pytest.raises(ValueError):
            type_from_json({"bogus": 1})


class TestEnvironments:
    def test_join_concatenates_left_first(self):
        e1 = (("x", Tree((B,))),)
        e2 = (("x", Tree((Tree((STAR,)),))), ("y", Tree((STAR,))))
        j = env_join(e1, e2)
        assert env_get(j, "x") == Tree((B, Tree((STAR,))))
        assert env_get(j, "y") == Tree((STAR,))

    def test_absent_is_empty(self):
        assert env_get((), "x") is EMPTY
        assert env_join((), ()) == ()

    def test_nest_and_remove(self):
        e = (("x", Tree((STAR,))), ("y", Tree((B,))))
        assert env_get(env_nest(e), "x") == Tree((Tree((STAR,)),))
        assert env_remove(e, "x") == (("y", Tree((B,))),)
