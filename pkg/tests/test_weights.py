import pytest
from hypothesis import given, strategies as st

from iamspace.corpus import gen_tn
from iamspace.derivation import Derivation, tlamstar
from iamspace.expansion import infer
from iamspace.extraction import Extractor
from iamspace.iam import state_space
from iamspace.measure import SpaceMeasure, default_x
from iamspace.terms import parse
from iamspace.tiam import Tiam
from iamspace.ttypes import EMPTY, LEFT, RIGHT, STAR, Arrow, Tree, star_paths
from iamspace.weights import (
    branch_size_focus, branch_size_judgment, bsize, type_weight, verify_exact_bound, weigh,
)

from .strategies import generic_types

B = Arrow(Tree((STAR,)), STAR)


def _has_nested_empty(g, inside=False) -> bool:
    if isinstance(g, Arrow):
        return _has_nested_empty(g.left) or _has_nested_empty(g.right)
    if isinstance(g, Tree):
        if not g.children:
            return inside
        return any(_has_nested_empty(c, True) for c in g.children)
    return False


class TestTypeWeight:
    def test_examples(self):
        assert type_weight(STAR, 4) == SpaceMeasure(0, 0)
        assert type_weight(EMPTY, 4) == SpaceMeasure(0, 0)
        assert type_weight(B, 4) == SpaceMeasure(0, 1)
        assert type_weight(Tree((B,)), 4) == SpaceMeasure(0, 2)

    def test_units_win_at_small_x(self):
        # [] -> [] -> * weighs 2 units, beating X only when X < 2
        g = Arrow(EMPTY, Arrow(EMPTY, STAR))
        assert type_weight(g, 1) == SpaceMeasure(2, 0)
        assert type_weight(Arrow(Tree((g,)), STAR), 1) == SpaceMeasure(2, 1)

    @given(generic_types(), st.integers(1, 9))
    def test_weight_is_max_branch_size(self, g, x):
        # independent oracle: enumerate the ⋆-selecting focus paths
        if _has_nested_empty(g):
            return
        paths = star_paths(g)
        want = max((branch_size_focus(p).eval(x) for p in paths), default=0)
        assert type_weight(g, x).eval(x) == want

    def test_nested_empty_tree_has_no_star_context(self):
        # the max-over-contexts identity needs every tree child to hold a ⋆
        g = Tree((EMPTY,))
        assert star_paths(g) == []
        assert type_weight(g, 3) == SpaceMeasure(0, 1)

    def test_inferred_types_have_no_nested_empty_tree(self, corpus):
        for t in corpus[:200]:
            for _, n, _ in infer(t).nodes():
                assert not _has_nested_empty(n.type)

    @given(generic_types(), st.integers(1, 9))
    def test_monotone_in_x(self, g, x):
        assert type_weight(g, x).eval(x) <= type_weight(g, x + 1).eval(x + 1)


class TestBranchSize:
    def test_focus(self):
        assert branch_size_focus(()) == SpaceMeasure(0, 0)
        assert branch_size_focus((RIGHT,)) == SpaceMeasure(1, 0)
        assert branch_size_focus((LEFT, 0, 1, 0)) == SpaceMeasure(0, 3)

    def test_judgment(self, example):
        m = Tiam(infer(example))
        assert branch_size_judgment(m, 0) == SpaceMeasure(0, 0)
        axiom = m.by_path((1, 0, 0, 0, 1, 0))
        assert branch_size_judgment(m, axiom) == SpaceMeasure(0, 2)

    def test_bsize_is_extracted_space(self, corpus):
        for t in corpus[:80]:
            m = Tiam(infer(t))
            ex = Extractor(m)
            for s in m.run().states:
                assert bsize(m, s) == state_space(ex.extract_state(s))


class TestWeigh:
    def test_example_annotations(self, example):
        w = weigh(infer(example), 4)
        expected = {
            (): 3, (0,): 1, (0, 0): 0, (1,): 3, (1, 0): 2, (1, 0, 0): 2, (1, 0, 0, 0): 1,
            (1, 0, 0, 0, 0): 1, (1, 0, 0, 0, 1): 1, (1, 0, 0, 0, 1, 0): 0, (1, 0, 1): 2,
            (1, 0, 1, 0): 1, (1, 0, 1, 0, 0): 0, (1, 0, 1, 1): 1, (1, 0, 1, 1, 0): 0,
        }
        assert {p: m.x_count for p, m in w.by_path.items()} == expected
        assert all(m.units == 0 for m in w.by_path.values())
        assert w.root == SpaceMeasure(0, 3)

    def test_lambda_star(self):
        assert weigh(Derivation(parse(r"\x.x"), tlamstar())).root == SpaceMeasure(0, 0)

    def test_identity_application(self, idapp):
        assert weigh(infer(idapp), 3).root == SpaceMeasure(0, 1)

    def test_default_x(self, example):
        assert weigh(infer(example)).x == default_x(10)


class TestExactBound:
    def test_example(self, example):
        rep = verify_exact_bound(example)
        assert rep.ok and rep.weight == rep.run_space == SpaceMeasure(0, 3)

    def test_identity_application(self, idapp):
        rep = verify_exact_bound(idapp)
        assert rep.ok and rep.weight == SpaceMeasure(0, 1)

    def test_t2_with_witness(self):
        rep = verify_exact_bound(gen_tn(2), strict=True)
        assert rep.ok
        assert rep.witness_state is not None
        w = rep.witness_state
        assert (w["bsize_units"], w["bsize_x"]) == (rep.weight.units, rep.weight.x_count)
        assert rep.lemma_checks["strict_no_flip"]

    def test_report_json(self, example):
        obj = verify_exact_bound(example).to_json()
        assert set(obj) == {"term", "x", "weight_units", "weight_x", "run_space_units",
                            "run_space_x", "equal", "witness_state", "lemma_checks"}

    @pytest.mark.parametrize("x", [1, 2, 5, 11])
    def test_other_x(self, example, x):
        assert verify_exact_bound(example, x=x).ok
