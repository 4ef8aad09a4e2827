import pytest

from iamspace.corpus import tn_derivation
from iamspace.derivation import Derivation, tlamstar
from iamspace.expansion import infer
from iamspace.iam import FINAL, INITIAL, iam_run
from iamspace.terms import parse
from iamspace.tiam import BLUE, RED, Tiam, TiamState, tiam_init, tiam_run, tiam_step, tiam_step_back
from iamspace.ttypes import LEFT, RIGHT

EXAMPLE_RULES = ["•1", "•2", "var", "arg", "•1", "•2", "•1", "var", "arg", "•2", "var",
                 "bt1", "bt2", "arg", "var", "arg"]


@pytest.fixture(scope="module")
def example_d(example):
    return infer(example)


@pytest.fixture(scope="module")
def example_run(example_d):
    return tiam_run(example_d)


class TestExample:
    def test_seventeen_states(self, example_run):
        assert example_run.final and example_run.outcome == "final"
        assert len(example_run.states) == 17

    def test_census_all_ones(self, example_run):
        assert len(example_run.census) == 17
        assert set(example_run.census.values()) == {1}

    def test_rules_match_iam(self, example, example_run):
        assert example_run.rules == EXAMPLE_RULES == iam_run(example).rules

    def test_first_states(self, example_d):
        m, s = tiam_init(example_d)
        assert s == TiamState(0, (), RED)
        s1 = tiam_step(m, s)
        assert s1 == TiamState(m.by_path((0,)), (RIGHT,), RED)
        s3 = tiam_step(m, tiam_step(m, s1))
        assert s3 == TiamState(m.by_path((0,)), (LEFT, 0), BLUE)

    def test_step_back(self, example_d, example_run):
        m = Tiam(example_d)
        for a, b in zip(example_run.states, example_run.states[1:]):
            assert tiam_step_back(m, b) == a
        assert tiam_step_back(m, example_run.states[0]) is INITIAL
        assert tiam_step(m, example_run.states[-1]) is FINAL

    def test_json(self, example_d, example_run):
        m = Tiam(example_d)
        rec = m.state_json(example_run.states[3], 3)
        assert rec == {"step": 3, "judgment_path": "0", "focus_path": "l.0", "direction": BLUE}
        census = m.census_json(example_run.census)
        assert census["1.0.0.0.1.0:"] == 1


class TestSmall:
    def test_identity_application(self, idapp):
        r = tiam_run(infer(idapp))
        assert len(r.states) == 5
        assert r.rules == ["•1", "•2", "var", "arg"]
        assert len(r.census) == 5 and set(r.census.values()) == {1}

    def test_lambda_star_is_final(self):
        r = tiam_run(Derivation(parse(r"\x.x"), tlamstar()))
        assert r.final and r.steps == 0

    def test_fuel(self, example_d):
        r = tiam_run(example_d, fuel=5)
        assert not r.final and r.steps == 5 and r.outcome == "fuel-exhausted"


class TestCorpus:
    def test_census_and_length(self, corpus):
        for t in corpus[:200]:
            d = infer(t)
            r = tiam_run(d)
            assert r.final
            assert set(r.census.values()) <= {1}
            assert len(r.states) == len(r.census)
            assert r.rules == iam_run(t).rules

    def test_generalized_machine_on_tn(self):
        d = tn_derivation(3)
        r = tiam_run(d, atom=d.root.type)
        assert r.final
        assert set(r.census.values()) == {1}
