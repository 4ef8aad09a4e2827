"""Reading λIAM states off TIAM states, and the lockstep bisimulation check.

A test is a TIAM state from which the generalized machine is run until a
``bt2`` transition lands on an axiom whose whole type is the formula the
test focuses on.  Judgment tests sit on the leaf judgments through which
the descent to the root enters T-many trees; type tests follow the
prefixes of a focus path that end on a leaf of an arrow's domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .derivation import Derivation
from .expansion import infer
from .iam import BULLET, DOWN, UP, FINAL, IamState, LoggedPosition, iam_run
from .terms import DEFAULT_FUEL, Code, Term, pretty
from .tiam import BLUE, RED, Tiam, TiamState
from .ttypes import LEFT, RIGHT, GenericType, split_leaf, type_at

__all__ = ["Test", "Extractor", "ExhaustionFailed", "BisimReport", "verify_bisimulation"]


class ExhaustionFailed(RuntimeError):
    pass


class Test(NamedTuple):
    state: TiamState
    kind: str  # "judgment" or "type"
    index: int  # 1-based


@dataclass
class Extractor:
    tiam: Tiam
    fuel: int | None = None
    _exhaust: dict = field(default_factory=dict)
    _positions: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fuel is None:
            self.fuel = self.tiam.default_fuel()

    @property
    def code(self) -> Code:
        return self.tiam.code

    # -- tests ------------------------------------------------------------

    def judgment_tests(self, s: TiamState) -> list[Test]:
        return [Test(TiamState(j, (), BLUE), "judgment", i + 1)
                for i, j in enumerate(self.tiam.judgment_tests(s.judgment))]

    def type_tests(self, s: TiamState) -> list[Test]:
        ty = self.tiam.node(s.judgment).type
        m = s.focus
        out = []
        k = 0
        while k < len(m):
            if m[k] == RIGHT:
                k += 1
                continue
            if m[k] != LEFT:
                raise ValueError("focus path leaves the linear layer")
            ctx, _ = split_leaf(ty, m, k + 1)
            k += 1 + len(ctx)
            i = len(out) + 1
            out.append(Test(TiamState(s.judgment, m[:k], RED if i % 2 else BLUE), "type", i))
        return out

    def tests_of(self, s: TiamState) -> tuple[list[Test], list[Test]]:
        return self.judgment_tests(s), self.type_tests(s)

    def focus_formula(self, test: Test | TiamState) -> GenericType:
        st = test.state if isinstance(test, Test) else test
        return type_at(self.tiam.node(st.judgment).type, st.focus)

    # -- exhaustion and extraction -----------------------------------------

    def exhaust(self, test: Test | TiamState) -> TiamState:
        st = test.state if isinstance(test, Test) else test
        hit = self._exhaust.get(st)
        if hit is not None:
            return hit
        want = self.focus_formula(st)
        s = st
        for _ in range(self.fuel):
            r = self.tiam.transition(s)
            if r is FINAL:
                break
            rule, s = r
            if rule == "bt2" and not s.focus and self.tiam.node(s.judgment).type == want:
                self._exhaust[st] = s
                return s
        raise ExhaustionFailed(f"test at {self.tiam.path(st.judgment)} did not exhaust")

    def extract_position(self, test: Test | TiamState) -> LoggedPosition:
        st = test.state if isinstance(test, Test) else test
        hit = self._positions.get(st)
        if hit is not None:
            return hit
        ax = self.exhaust(st)
        var = self.tiam.subject[ax.judgment]
        code = self.code
        if code.kind[var] != Code.VAR:
            raise ExhaustionFailed("exhaustion ended away from a variable")
        n = code.depth[var]
        jt = self.judgment_tests(ax)
        if len(jt) < n:
            raise ExhaustionFailed("too few judgment tests for the binder's level")
        log = tuple(self.extract_position(t) for t in jt[:n])
        p = LoggedPosition(var, code.binder[var], log)
        self._positions[st] = p
        return p

    def extract_log(self, s: TiamState) -> tuple[LoggedPosition, ...]:
        return tuple(self.extract_position(t) for t in self.judgment_tests(s))

    def extract_tape(self, s: TiamState) -> tuple:
        ty = self.tiam.node(s.judgment).type
        m = s.focus
        tests = iter(self.type_tests(s))
        out = []
        k = 0
        while k < len(m):
            if m[k] == RIGHT:
                out.append(BULLET)
                k += 1
            else:
                ctx, _ = split_leaf(ty, m, k + 1)
                out.append(self.extract_position(next(tests)))
                k += 1 + len(ctx)
        return tuple(out)

    def extract_state(self, s: TiamState) -> IamState:
        return IamState(self.tiam.subject[s.judgment], self.extract_tape(s), self.extract_log(s),
                        DOWN if s.direction == RED else UP)


@dataclass
class BisimReport:
    term: str
    steps: int
    ok: bool
    first_divergence: dict | None

    def to_json(self) -> dict:
        return {"term": self.term, "steps": self.steps, "ok": self.ok,
                "first_divergence": self.first_divergence}


def verify_bisimulation(term: Term, derivation: Derivation | None = None,
                        fuel: int = DEFAULT_FUEL) -> BisimReport:
    """Run both machines in lockstep and compare extracted states pointwise."""
    d = infer(term, fuel) if derivation is None else derivation
    code = Code.of(term)
    iam = iam_run(code, fuel)

    def diverged(index, ts=None, extracted=None, reason=None):
        ist = iam.states[index] if index < len(iam.states) else None
        return BisimReport(pretty(term), index, False, {
            "index": index,
            "tiam_state": None if ts is None else tiam.state_json(ts, index),
            "extracted": None if extracted is None else extracted.to_json(code, index),
            "iam_state": None if ist is None else ist.to_json(code, index),
            **({"reason": reason} if reason else {}),
        })

    try:
        tiam = Tiam(d, code=code)
        ex = Extractor(tiam)
        run = tiam.run()
    except Exception as e:  # malformed derivations are a divergence, not a crash
        tiam = None
        return BisimReport(pretty(term), 0, False, {"index": 0, "tiam_state": None, "extracted": None,
                                                    "iam_state": iam.states[0].to_json(code, 0),
                                                    "reason": str(e)})
    for k, ts in enumerate(run.states):
        if k >= len(iam.states):
            return diverged(k, ts, reason="the TIAM run is longer")
        try:
            got = ex.extract_state(ts)
        except Exception as e:
            return diverged(k, ts, reason=str(e))
        if got != iam.states[k]:
            return diverged(k, ts, got)
    if len(run.states) != len(iam.states) or run.final != iam.final:
        return diverged(len(run.states), reason="runs end at different indices")
    return BisimReport(pretty(term), len(run.states) - 1, True, None)
