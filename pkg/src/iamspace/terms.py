"""Closed lambda-terms, paths into them, and instrumented weak head evaluation.

Terms keep their source binder names; equality checks go through
:func:`alpha_eq`.  A :class:`TermPath` is a tuple of steps ``"B"`` (into an
abstraction body), ``"L"`` (into an application's function) and ``"R"``
(into an application's argument).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

__all__ = [
    "Var", "Abs", "App", "Term", "TermPath", "ParseError", "FreeVariableError",
    "FuelExhausted", "Step", "ReductionTrace", "Code",
    "parse", "pretty", "alpha_eq", "free_vars", "is_closed", "size",
    "subterm", "replace_at", "level", "path_str", "parse_path",
    "substitute", "whnf", "DEFAULT_FUEL",
]

DEFAULT_FUEL = 100_000

BODY, FUN, ARG = "B", "L", "R"


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Abs:
    binder: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Var, Abs, App]
TermPath = tuple[str, ...]


class ParseError(ValueError):
    """Syntax error, carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class FreeVariableError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"free variable {name!r}")
        self.name = name


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-zA-Z][a-zA-Z0-9_']*)|(?P<sym>[\\λ.()]))")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(offset: int) -> tuple[int, int]:
        line = max(i for i, s in enumerate(line_starts) if s <= offset)
        return line + 1, offset - line_starts[line] + 1

    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            line, col = where(pos + stripped)
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", line, col)
        kind = "ident" if m.group("ident") else "sym"
        value = m.group(kind)
        line, col = where(m.start(kind))
        tokens.append((kind, "\\" if value == "λ" else value, line, col))
        pos = m.end()
    line, col = where(len(text))
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {want}, got {got}", tok[2], tok[3])
        self.i += 1
        return tok

    def term(self) -> Term:
        if self.peek()[1] == "\\":
            return self.abstraction()
        return self.application()

    def abstraction(self) -> Term:
        self.take("\\")
        name = self.take(kind="ident")[1]
        self.take(".")
        return Abs(name, self.term())

    def starts_atom(self) -> bool:
        kind, value = self.peek()[:2]
        return kind == "ident" or value in ("(", "\\")

    def application(self) -> Term:
        head = self.atom()
        while self.starts_atom():
            if self.peek()[1] == "\\":
                # a trailing abstraction extends maximally to the right
                head = App(head, self.abstraction())
                break
            head = App(head, self.atom())
        return head

    def atom(self) -> Term:
        kind, value, line, col = self.peek()
        if kind == "ident":
            self.i += 1
            return Var(value)
        if value == "(":
            self.i += 1
            inner = self.term()
            self.take(")")
            return inner
        got = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected a term, got {got}", line, col)


def parse(text: str, *, closed: bool = True) -> Term:
    """Parse ``text``; by default reject terms with free variables."""
    p = _Parser(text)
    t = p.term()
    p.take(kind="eof")
    if closed:
        fv = free_vars(t)
        if fv:
            raise FreeVariableError(sorted(fv)[0])
    return t


def pretty(t: Term) -> str:
    """Print with minimal parentheses; ``parse(pretty(t)) == t``."""
    return _pretty(t, True)


def _pretty(t: Term, rightmost: bool) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Abs):
        s = f"\\{t.binder}.{_pretty(t.body, True)}"
        return s if rightmost else f"({s})"
    fun = _pretty(t.fun, False)
    if isinstance(t.arg, App):
        arg = f"({_pretty(t.arg, True)})"
    else:
        arg = _pretty(t.arg, rightmost)
    return f"{fun} {arg}"


# ---------------------------------------------------------------------------
# structural helpers


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.binder}
    return free_vars(t.fun) | free_vars(t.arg)


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def size(t: Term) -> int:
    """Number of tree nodes."""
    n = 0
    todo = [t]
    while todo:
        t = todo.pop()
        n += 1
        if isinstance(t, Abs):
            todo.append(t.body)
        elif isinstance(t, App):
            todo.append(t.fun)
            todo.append(t.arg)
    return n


def alpha_eq(a: Term, b: Term) -> bool:
    def go(a, b, env_a, env_b, depth):
        if isinstance(a, Var) and isinstance(b, Var):
            ia, ib = env_a.get(a.name), env_b.get(b.name)
            if ia is None and ib is None:
                return a.name == b.name
            return ia == ib
        if isinstance(a, Abs) and isinstance(b, Abs):
            return go(a.body, b.body, {**env_a, a.binder: depth}, {**env_b, b.binder: depth}, depth + 1)
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fun, b.fun, env_a, env_b, depth) and go(a.arg, b.arg, env_a, env_b, depth)
        return False

    return go(a, b, {}, {}, 0)


def subterm(t: Term, path: TermPath) -> Term:
    for step in path:
        if step == BODY and isinstance(t, Abs):
            t = t.body
        elif step == FUN and isinstance(t, App):
            t = t.fun
        elif step == ARG and isinstance(t, App):
            t = t.arg
        else:
            raise ValueError(f"invalid path {path_str(path)!r}")
    return t


def replace_at(t: Term, path: TermPath, new: Term) -> Term:
    spine = []
    for step in path:
        spine.append(t)
        if step == BODY and isinstance(t, Abs):
            t = t.body
        elif step in (FUN, ARG) and isinstance(t, App):
            t = t.fun if step == FUN else t.arg
        else:
            raise ValueError(f"invalid path step {step!r}")
    for step, above in zip(reversed(path), reversed(spine)):
        if step == BODY:
            new = Abs(above.binder, new)
        elif step == FUN:
            new = App(new, above.arg)
        else:
            new = App(above.fun, new)
    return new


def level(path: TermPath) -> int:
    return sum(1 for s in path if s == ARG)


def path_str(path: TermPath) -> str:
    return ".".join(path)


def parse_path(text: str) -> TermPath:
    steps = tuple(s for s in text.split(".") if s)
    if any(s not in (BODY, FUN, ARG) for s in steps):
        raise ValueError(f"bad term path {text!r}")
    return steps


# ---------------------------------------------------------------------------
# substitution and weak head evaluation


def substitute(t: Term, var: str, arg: Term, skip: frozenset[int] | set[int] = frozenset()
               ) -> tuple[Term, list[TermPath]]:
    """``t{var:=arg}`` for closed ``arg``, plus the paths of the inserted copies.

    Subterms whose ``id`` is in ``skip`` are known to be closed and left alone.
    """
    hits: list = []
    out: list[Term] = []
    todo: list = [(t, None, False)]
    while todo:
        node, here, rebuild = todo.pop()
        if not rebuild and id(node) in skip:
            out.append(node)
        elif rebuild:
            if isinstance(node, Abs):
                body = out.pop()
                out.append(node if body is node.body else Abs(node.binder, body))
            else:
                a = out.pop()
                f = out.pop()
                out.append(node if (f is node.fun and a is node.arg) else App(f, a))
        elif isinstance(node, Var):
            if node.name == var:
                hits.append(here)
                out.append(arg)
            else:
                out.append(node)
        elif isinstance(node, Abs):
            if node.binder == var:
                out.append(node)
            else:
                todo.append((node, here, True))
                todo.append((node.body, (BODY, here), False))
        else:
            todo.append((node, here, True))
            todo.append((node.arg, (ARG, here), False))
            todo.append((node.fun, (FUN, here), False))
    return out[0], [_unlink(h) for h in hits]


def _unlink(cell) -> TermPath:
    steps = []
    while cell is not None:
        steps.append(cell[0])
        cell = cell[1]
    return tuple(reversed(steps))


@dataclass(frozen=True)
class Step:
    """One head step ``H<(λx.body) arg>  ->  H<body{x:=arg}>``.

    ``H`` is ``spine`` applications deep; ``copies`` are the paths of the
    inserted copies of ``arg`` relative to the contracted body.
    """

    spine: int
    binder: str
    copies: tuple[TermPath, ...]
    body: Term
    arg: Term

    @property
    def redex_path(self) -> TermPath:
        return (FUN,) * self.spine

    @property
    def occurrences(self) -> tuple[TermPath, ...]:
        prefix = self.redex_path
        return tuple(prefix + p for p in self.copies)


@dataclass(frozen=True)
class ReductionTrace:
    initial: Term
    steps: tuple[Step, ...]
    result: Term

    @property
    def step_count(self) -> int:
        return len(self.steps)


class FuelExhausted(RuntimeError):
    def __init__(self, term: Term, steps: tuple[Step, ...]):
        super().__init__(f"fuel exhausted after {len(steps)} steps")
        self.term = term
        self.steps = steps


def _unwind(t: Term) -> tuple[Term, list[Term]]:
    """Head and argument stack (first argument on top)."""
    stack = []
    while isinstance(t, App):
        stack.append(t.arg)
        t = t.fun
    return t, stack


def _rewind(head: Term, stack: list[Term]) -> Term:
    for a in reversed(stack):
        head = App(head, a)
    return head


def _contract(head: Term, stack: list[Term], skip=frozenset()) -> tuple[Term, Step] | None:
    if isinstance(head, Var):
        raise FreeVariableError(head.name)
    if not stack:
        return None
    a = stack.pop()
    body, occ = substitute(head.body, head.binder, a, skip)
    return body, Step(len(stack), head.binder, tuple(occ), head.body, a)


def head_step(t: Term) -> tuple[Term, Step] | None:
    """Contract the weak head redex of ``t``; ``None`` on an abstraction."""
    head, stack = _unwind(t)
    r = _contract(head, stack)
    if r is None:
        return None
    return _rewind(r[0], stack), r[1]


def whnf(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionTrace:
    """Weak head normalize; raise :class:`FuelExhausted` after ``fuel`` steps."""
    steps: list[Step] = []
    # every inserted argument is closed; ``steps`` keeps them alive
    inserted: set[int] = set()
    head, stack = _unwind(t)
    while True:
        if isinstance(head, App):
            head, more = _unwind(head)
            stack.extend(more)
        if isinstance(head, Var):
            raise FreeVariableError(head.name)
        if not stack:
            return ReductionTrace(t, tuple(steps), head)
        if len(steps) >= fuel:
            raise FuelExhausted(_rewind(head, stack), tuple(steps))
        head, step = _contract(head, stack, inserted)
        inserted.add(id(step.arg))
        steps.append(step)


# ---------------------------------------------------------------------------
# indexed code for the machines


@dataclass(frozen=True)
class Code:
    """Pre-order numbering of a closed term's nodes.

    Both machines run over fixed code; positions are node ids.  ``kind`` is
    0 for variables, 1 for abstractions and 2 for applications.  For a
    variable, ``binder`` is the id of the abstraction binding it and
    ``depth`` the level of the context between them.
    """

    term: Term
    kind: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    parent: tuple[int, ...]
    step: tuple[str, ...]
    name: tuple[str, ...]
    binder: tuple[int, ...]
    depth: tuple[int, ...]
    level: tuple[int, ...]
    _paths: dict = field(default_factory=dict, compare=False, repr=False)

    VAR, ABS, APP = 0, 1, 2

    @classmethod
    def of(cls, term: Term) -> "Code":
        kind, left, right, parent, step, name, binder, depth, lvl = ([] for _ in range(9))
        stack: list[tuple[Term, int, str, dict, int]] = [(term, -1, "", {}, 0)]
        while stack:
            t, par, st, scope, lv = stack.pop()
            me = len(kind)
            if par >= 0:
                if st == ARG:
                    right[par] = me
                else:
                    left[par] = me
            parent.append(par)
            step.append(st)
            lvl.append(lv)
            left.append(-1)
            right.append(-1)
            if isinstance(t, Var):
                kind.append(0)
                name.append(t.name)
                if t.name not in scope:
                    raise FreeVariableError(t.name)
                b, blv = scope[t.name]
                binder.append(b)
                depth.append(lv - blv)
            elif isinstance(t, Abs):
                kind.append(1)
                name.append(t.binder)
                binder.append(-1)
                depth.append(0)
                stack.append((t.body, me, BODY, {**scope, t.binder: (me, lv)}, lv))
            else:
                kind.append(2)
                name.append("")
                binder.append(-1)
                depth.append(0)
                # push arg first so the function side gets the smaller ids
                stack.append((t.arg, me, ARG, scope, lv + 1))
                stack.append((t.fun, me, FUN, scope, lv))
        return cls(term, tuple(kind), tuple(left), tuple(right), tuple(parent),
                   tuple(step), tuple(name), tuple(binder), tuple(depth), tuple(lvl))

    def __len__(self) -> int:
        return len(self.kind)

    def path(self, node: int) -> TermPath:
        cached = self._paths.get(node)
        if cached is None:
            steps = []
            n = node
            while self.parent[n] >= 0:
                steps.append(self.step[n])
                n = self.parent[n]
            cached = tuple(reversed(steps))
            self._paths[node] = cached
        return cached

    def node(self, path: TermPath) -> int:
        n = 0
        for s in path:
            if s == BODY and self.kind[n] == 1:
                n = self.left[n]
            elif s == FUN and self.kind[n] == 2:
                n = self.left[n]
            elif s == ARG and self.kind[n] == 2:
                n = self.right[n]
            else:
                raise ValueError(f"invalid path {path_str(path)!r}")
        return n

    def nodes(self) -> Iterator[int]:
        return iter(range(len(self.kind)))
