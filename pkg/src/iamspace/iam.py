"""The interaction abstract machine on lambda-terms.

A state is ``(position, tape, log, direction)`` over a fixed :class:`Code`.
Positions are node ids; tape and log are tuples whose head is index 0.  The
tape holds :data:`BULLET` markers and :class:`LoggedPosition` entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .measure import SpaceMeasure, default_x, smax
from .terms import DEFAULT_FUEL, Code, Term, path_str

__all__ = [
    "DOWN", "UP", "BULLET", "FINAL", "INITIAL", "LoggedPosition", "IamState",
    "IamRun", "StuckState", "iam_init", "iam_step", "iam_transition",
    "iam_step_back", "iam_run", "state_space", "lemma1_violations",
    "flip", "code_x", "run_space_fast", "KERNEL",
]

DOWN = "down"
UP = "up"


class _Marker:
    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self) -> str:
        return self.label


BULLET = _Marker("BULLET")
FINAL = _Marker("FINAL")
INITIAL = _Marker("INITIAL")


class StuckState(RuntimeError):
    """No transition applies and the state is not final."""


class LoggedPosition:
    """A variable occurrence, its binder and a log as long as the level between them."""

    __slots__ = ("var", "binder", "log", "x_count", "_hash")

    def __init__(self, var: int, binder: int, log: tuple["LoggedPosition", ...]):
        self.var = var
        self.binder = binder
        self.log = log
        self.x_count = 1 + sum(p.x_count for p in log)
        self._hash = hash((var, binder, log))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, LoggedPosition):
            return NotImplemented
        return (self._hash == other._hash and self.var == other.var
                and self.binder == other.binder and self.log == other.log)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LoggedPosition({self.var}, {self.binder}, {self.log!r})"

    def to_json(self, code: Code) -> dict:
        return {
            "var": path_str(code.path(self.var)),
            "binder": path_str(code.path(self.binder)),
            "log": [p.to_json(code) for p in self.log],
        }


TapeEntry = Union[_Marker, LoggedPosition]


@dataclass(frozen=True, slots=True)
class IamState:
    position: int
    tape: tuple[TapeEntry, ...]
    log: tuple[LoggedPosition, ...]
    direction: str

    def to_json(self, code: Code, step: int | None = None, x: int | None = None) -> dict:
        sp = state_space(self)
        out = {
            "step": step,
            "direction": self.direction,
            "position": path_str(code.path(self.position)),
            "tape": [e.to_json(code) if isinstance(e, LoggedPosition) else "bullet" for e in self.tape],
            "log": [p.to_json(code) for p in self.log],
            "space_units": sp.units,
            "space_x": sp.x_count,
        }
        if x is not None:
            out["space"] = sp.eval(x)
        return out


def state_space(s: IamState) -> SpaceMeasure:
    units = 0
    xs = 0
    for e in s.tape:
        if e is BULLET:
            units += 1
        else:
            xs += e.x_count
    for p in s.log:
        xs += p.x_count
    return SpaceMeasure(units, xs)


def code_x(code: Code, x: int | None = None) -> int:
    return default_x(len(code)) if x is None else x


def iam_init(code: Code) -> IamState:
    return IamState(0, (), (), DOWN)


def flip(s: IamState) -> IamState:
    return IamState(s.position, s.tape, s.log, UP if s.direction == DOWN else DOWN)


def iam_transition(code: Code, s: IamState) -> tuple[str, IamState] | _Marker:
    """Return ``(rule name, next state)`` or :data:`FINAL`."""
    n, tape, log = s.position, s.tape, s.log
    kind = code.kind[n]
    if s.direction == DOWN:
        if kind == Code.APP:
            return "•1", IamState(code.left[n], (BULLET,) + tape, log, DOWN)
        if kind == Code.ABS:
            if not tape:
                return FINAL
            head = tape[0]
            if head is BULLET:
                return "•2", IamState(code.left[n], tape[1:], log, DOWN)
            if head.binder != n:
                raise StuckState(f"bt2 at node {n} with a position bound at {head.binder}")
            return "bt2", IamState(head.var, tape[1:], head.log + log, UP)
        b = code.binder[n]
        m = code.depth[n]
        if len(log) < m:
            raise StuckState(f"var at node {n} needs a log of length {m}")
        p = LoggedPosition(n, b, log[:m])
        return "var", IamState(b, (p,) + tape, log[m:], UP)
    par = code.parent[n]
    if par < 0:
        raise StuckState("upward move at the root")
    if code.kind[par] == Code.ABS:
        return "•4", IamState(par, (BULLET,) + tape, log, UP)
    if code.left[par] == n:
        if not tape:
            raise StuckState(f"upward move from function side of {par} with empty tape")
        head = tape[0]
        if head is BULLET:
            return "•3", IamState(par, tape[1:], log, UP)
        return "arg", IamState(code.right[par], tape[1:], (head,) + log, DOWN)
    if not log:
        raise StuckState(f"bt1 at node {n} with empty log")
    return "bt1", IamState(code.left[par], (log[0],) + tape, log[1:], DOWN)


def iam_step(code: Code, s: IamState) -> IamState | _Marker:
    r = iam_transition(code, s)
    return r if r is FINAL else r[1]


def iam_step_back(code: Code, s: IamState) -> IamState | _Marker:
    """The unique predecessor, by switching direction, stepping and switching back."""
    if s == iam_init(code):
        return INITIAL
    r = iam_step(code, flip(s))
    if r is FINAL:
        raise StuckState("no predecessor")
    return flip(r)


def lemma1_violations(code: Code, s: IamState) -> list[str]:
    out = []
    if len(s.log) != code.level[s.position]:
        out.append(f"log length {len(s.log)} != level {code.level[s.position]}")
    logged = sum(1 for e in s.tape if e is not BULLET)
    if (s.direction == DOWN) != (logged % 2 == 0):
        out.append(f"direction {s.direction} with {logged} logged positions on the tape")

    def check_pos(p: LoggedPosition):
        if code.kind[p.var] != Code.VAR or code.binder[p.var] != p.binder:
            out.append(f"logged position {p.var} not bound at {p.binder}")
        elif len(p.log) != code.depth[p.var]:
            out.append(f"logged position {p.var} carries a log of length {len(p.log)}")
        for q in p.log:
            check_pos(q)

    for e in s.tape:
        if e is not BULLET:
            check_pos(e)
    for p in s.log:
        check_pos(p)
    return out


@dataclass
class IamRun:
    code: Code
    x: int
    states: list[IamState]
    rules: list[str]
    final: bool
    space: SpaceMeasure
    steps: int

    @property
    def outcome(self) -> str:
        return "final" if self.final else "fuel-exhausted"


def iam_run(term_or_code: Term | Code, fuel: int = DEFAULT_FUEL, x: int | None = None,
            keep_states: bool = True) -> IamRun:
    """Run from the initial state for at most ``fuel`` transitions."""
    code = term_or_code if isinstance(term_or_code, Code) else Code.of(term_or_code)
    xv = code_x(code, x)
    s = iam_init(code)
    states = [s] if keep_states else []
    rules: list[str] = []
    best = state_space(s)
    steps = 0
    final = False
    while True:
        r = iam_transition(code, s)
        if r is FINAL:
            final = True
            break
        if steps >= fuel:
            break
        rule, s = r
        steps += 1
        sp = state_space(s)
        if sp.key(xv) > best.key(xv):
            best = sp
        if keep_states:
            states.append(s)
            rules.append(rule)
    return IamRun(code, xv, states, rules, final, best, steps)


# ---------------------------------------------------------------------------
# fast space-only runs

try:
    from ._iam_kernel import run_space as _run_space  # type: ignore[import-not-found]
    KERNEL = "cython"
except ImportError:  # pragma: no cover - exercised when the extension is absent
    from ._iam_kernel_py import run_space as _run_space
    KERNEL = "python"


def run_space_fast(term_or_code: Term | Code, fuel: int = DEFAULT_FUEL,
                   x: int | None = None) -> tuple[int, bool, SpaceMeasure]:
    """``(transitions, reached_final, space)`` without materializing states."""
    code = term_or_code if isinstance(term_or_code, Code) else Code.of(term_or_code)
    xv = code_x(code, x)
    steps, final, units, xs = _run_space(list(code.kind), list(code.left), list(code.right),
                                         list(code.parent), list(code.binder), list(code.depth),
                                         fuel, xv)
    return steps, bool(final), SpaceMeasure(units, xs)
