import dataclasses

import pytest

from iamspace.expansion import infer
from iamspace.derivation import Derivation
from iamspace.extraction import Extractor, verify_bisimulation
from iamspace.iam import LoggedPosition, iam_run, lemma1_violations
from iamspace.tiam import BLUE, RED, Tiam


@pytest.fixture(scope="module")
def machine(example):
    m = Tiam(infer(example))
    return m, m.run(), Extractor(m)


def _lp(code, var, binder, log=()):
    return LoggedPosition(code.node(var), code.node(binder), tuple(log))


class TestTests:
    def test_initial_state_has_none(self, machine):
        m, run, ex = machine
        assert ex.tests_of(run.states[0]) == ([], [])

    # states are indexed from 0, so the fifth state of the run is index 4
    def test_fifth_state(self, machine):
        m, run, ex = machine
        jt, tt = ex.tests_of(run.states[4])
        assert len(jt) == 1 and tt == []
        assert jt[0].state.direction == BLUE and jt[0].state.focus == ()

    def test_thirteenth_state(self, machine):
        m, run, ex = machine
        s = run.states[12]
        jt, tt = ex.tests_of(s)
        assert (len(jt), len(tt)) == (1, 2)
        assert [t.state.direction for t in tt] == [RED, BLUE]
        assert [t.index for t in tt] == [1, 2]

    def test_type_test_exhausts_in_one_bt2(self, machine):
        # a var transition's source: the first type test lands on the bound axiom
        m, run, ex = machine
        k = run.rules.index("var")
        s = run.states[k + 1]
        (test,) = ex.type_tests(s)
        rule, nxt = m.transition(test.state)
        assert rule == "bt2"
        assert ex.exhaust(test) == nxt


class TestExtraction:
    def test_positions(self, machine):
        m, run, ex = machine
        code = m.code
        p_z = _lp(code, ("L", "B"), ("L",))
        p_y = _lp(code, ("R", "R", "B"), ("R", "R"))
        p_x = _lp(code, ("R", "L", "B", "R"), ("R", "L"), [p_y])
        assert ex.extract_tape(run.states[3]) == (p_z,)
        assert ex.extract_log(run.states[14]) == (p_y, p_z)
        assert ex.extract_tape(run.states[15]) == (p_x,)

    def test_lockstep_with_iam(self, example, machine):
        m, run, ex = machine
        iam = iam_run(example)
        for k, s in enumerate(run.states):
            got = ex.extract_state(s)
            assert got == iam.states[k]
            assert not lemma1_violations(m.code, got)
            assert len(got.log) == len(ex.judgment_tests(s))

    def test_log_length_counts_many_trees(self, corpus):
        for t in corpus[:60]:
            m = Tiam(infer(t))
            ex = Extractor(m)
            for s in m.run().states:
                assert len(ex.extract_log(s)) == len(m.judgment_tests(s.judgment))


class TestBisimulation:
    def test_example(self, example):
        rep = verify_bisimulation(example)
        assert rep.ok and rep.steps == 16 and rep.first_divergence is None

    def test_identity_application(self, idapp):
        rep = verify_bisimulation(idapp)
        assert rep.ok and rep.steps == 4
        assert set(rep.to_json()) == {"term", "steps", "ok", "first_divergence"}

    def test_swapped_premises_diverge(self, example):
        d = infer(example)
        many = d.node_at((1, 0, 1))
        swapped = dataclasses.replace(many, children=many.children[::-1])
        app = d.node_at((1, 0))
        bad_app = dataclasses.replace(app, children=(app.children[0], swapped))
        root = dataclasses.replace(d.root, children=(
            d.root.children[0], dataclasses.replace(d.node_at((1,)), children=(bad_app,))))
        rep = verify_bisimulation(example, Derivation(example, root))
        assert not rep.ok
        assert set(rep.first_divergence) >= {"index", "tiam_state", "extracted", "iam_state"}

    def test_corpus_prefix(self, corpus):
        for t in corpus[:100]:
            assert verify_bisimulation(t).ok
