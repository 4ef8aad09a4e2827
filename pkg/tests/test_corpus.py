import pytest

from iamspace.corpus import (
    divergent_corpus, fix_schema, gen_random_closed, gen_theta, gen_tn, random_corpus,
    theta_unfolded, tn_derivation,
)
from iamspace.derivation import check
from iamspace.expansion import infer
from iamspace.iam import run_space_fast
from iamspace.measure import SpaceMeasure, default_x
from iamspace.terms import Code, FuelExhausted, alpha_eq, free_vars, head_step, parse, size, whnf
from iamspace.ttypes import STAR, Arrow, Tree, spine_height
from iamspace.weights import weigh


class TestTn:
    def test_shape(self):
        assert gen_tn(0) == parse(r"\x.x")
        assert alpha_eq(gen_tn(2), parse(r"(\x.x x)((\x.x x)(\x.x))"))
        assert size(gen_tn(2)) == 12
        with pytest.raises(ValueError):
            gen_tn(-1)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_beta_steps(self, n):
        assert whnf(gen_tn(n), 10**5).step_count == 2 ** (n + 1) - 2

    @pytest.mark.parametrize("n", range(1, 9))
    def test_arrow_derivation_weight(self, n):
        d = tn_derivation(n)
        check(d)
        a = Arrow(Tree((STAR,)), STAR)
        assert d.root.type == a
        x = default_x(len(Code.of(d.term)))
        assert weigh(d, x, atom=a).root == SpaceMeasure(0, 2 * n)

    def test_space_grows_linearly(self):
        coeffs = []
        for n in range(1, 9):
            _, final, space = run_space_fast(gen_tn(n), 10**7)
            assert final and space.units == 0
            coeffs.append(space.x_count)
        assert coeffs == [2 * n for n in range(1, 9)]


class TestTheta:
    def test_one_step_unfolding(self):
        reduct, step = head_step(gen_theta())
        assert alpha_eq(reduct, theta_unfolded())
        assert step.spine == 0

    @pytest.mark.parametrize("n", range(6))
    def test_fix_schema(self, n):
        fs = fix_schema(n)
        check(fs.derivation)
        check(fs.theta)
        assert fs.theta.root.type == fs.F
        assert fs.F == Arrow(fs.T, STAR)
        x = default_x(len(Code.of(gen_theta())))
        assert weigh(fs.theta, x).root.eval(x) >= (2 * n + 1) * x
        assert spine_height(fs.T) == n + 1

    def test_schema_types(self):
        a = (STAR, Arrow(Tree((STAR,)), STAR))
        fs = fix_schema(1, a)
        check(fs.theta)
        assert fs.F.right == a[1]
        with pytest.raises(ValueError):
            fix_schema(2, a)


class TestRandom:
    def test_closed_and_sized(self):
        for i in range(200):
            t = gen_random_closed(f"s:{i}", 40)
            assert not free_vars(t)
            assert size(t) <= 40

    def test_deterministic(self):
        assert random_corpus(8, 42) == random_corpus(8, 42)
        assert gen_random_closed(7) == gen_random_closed(7)

    def test_mostly_normalizing(self):
        ok = 0
        for i in range(200):
            try:
                whnf(gen_random_closed(f"0:{i}", 40), 10**5)
                ok += 1
            except FuelExhausted:
                pass
        assert ok >= 100

    def test_corpus_is_typable(self, corpus):
        assert len(corpus) == 500
        for t in corpus[:50]:
            assert infer(t).root.type == STAR

    def test_divergent(self, divergent):
        assert len(divergent) == 50
        for t in divergent:
            assert not free_vars(t)
            with pytest.raises(FuelExhausted):
                whnf(t, 2000)
