"""The tree interaction machine over a fixed derivation.

A state ``(judgment, focus, direction)`` points at a judgment occurrence
(integer id of a derivation node, see :class:`Tiam`), a type path into its
right-hand type, and :data:`RED` (upwards) or :data:`BLUE` (downwards).
The machine is the generalized one: it follows any linear formula, and a
state with no outgoing move is final.  The plain machine follows ``⋆``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

from .derivation import TAPP, TLAM, TLAMSTAR, TMANY, TNONE, TVAR, Derivation, DerivPath, Node
from .iam import FINAL, INITIAL, StuckState
from .terms import Code
from .ttypes import (
    LEFT, RIGHT, STAR, Arrow, GenericType, TypePath, atom_paths, focus_str,
    leaf_index, leaf_paths, split_leaf, type_at,
)

__all__ = [
    "RED", "BLUE", "TiamState", "Tiam", "TiamRun", "FINAL", "INITIAL",
    "tiam_init", "tiam_step", "tiam_step_back", "tiam_run",
]

RED = "up-red"
BLUE = "down-blue"


class TiamState(NamedTuple):
    judgment: int
    focus: TypePath
    direction: str


@dataclass
class TiamRun:
    states: list[TiamState]
    rules: list[str]
    final: bool
    census: Counter

    @property
    def outcome(self) -> str:
        return "final" if self.final else "fuel-exhausted"

    @property
    def steps(self) -> int:
        return len(self.states) - 1


class Tiam:
    """Index of a derivation for the machine: node ids in pre-order."""

    def __init__(self, derivation: Derivation, atom: GenericType = STAR, code: Code | None = None):
        self.derivation = derivation
        self.atom = atom
        self.code = Code.of(derivation.term) if code is None else code
        nodes: list[Node] = []
        parent: list[int] = []
        paths: list[DerivPath] = []
        subject: list[int] = []
        children: list[tuple[int, ...]] = []
        stack = [(derivation.root, -1, (), 0)]
        code_ = self.code
        while stack:
            n, par, p, t = stack.pop()
            me = len(nodes)
            nodes.append(n)
            parent.append(par)
            paths.append(p)
            subject.append(t)
            children.append(())
            if par >= 0:
                children[par] = children[par] + (me,)
            if n.rule == TLAM:
                kids = [(n.children[0], code_.left[t])]
            elif n.rule == TAPP:
                kids = [(n.children[0], code_.left[t]), (n.children[1], code_.right[t])]
            else:
                kids = [(c, t) for c in n.children]
            for i in reversed(range(len(kids))):
                stack.append((kids[i][0], me, p + (i,), kids[i][1]))
        self.nodes = nodes
        self.parent = parent
        self.paths = paths
        self.subject = subject
        self.children = children
        self._by_path = {p: i for i, p in enumerate(paths)}

        # binders and their axioms, left to right
        self.binder_of: dict[int, tuple[int, int]] = {}
        self.axioms: dict[int, list[int]] = {i: [] for i, n in enumerate(nodes) if n.rule == TLAM}
        for i, n in enumerate(nodes):
            if n.rule != TVAR:
                continue
            target = code_.binder[subject[i]]
            j = parent[i]
            while j >= 0 and not (nodes[j].rule == TLAM and subject[j] == target):
                j = parent[j]
            if j < 0:
                raise StuckState(f"axiom at {paths[i]} has no binder in the derivation")
            self.binder_of[i] = (j, len(self.axioms[j]))
            self.axioms[j].append(i)

        # leaves of the T-many trees standing as argument premises
        self.app_leaves: dict[int, list[int]] = {}
        self.leaf_of: dict[int, tuple[int, int]] = {}
        for i, n in enumerate(nodes):
            if n.rule == TAPP:
                found: list[int] = []
                self._collect_leaves(children[i][1], found)
                self.app_leaves[i] = found
                for k, leaf in enumerate(found):
                    self.leaf_of[leaf] = (i, k)

        self.many_below = [0] * len(nodes)
        for i in range(len(nodes)):
            if parent[i] >= 0:
                self.many_below[i] = self.many_below[parent[i]] + (nodes[parent[i]].rule == TMANY)
        self._jtests: dict[int, tuple[int, ...]] = {}

    def _collect_leaves(self, i: int, out: list[int]) -> None:
        rule = self.nodes[i].rule
        if rule == TMANY:
            for c in self.children[i]:
                self._collect_leaves(c, out)
        elif rule != TNONE:
            out.append(i)

    # -- navigation -------------------------------------------------------

    def node(self, j: int) -> Node:
        return self.nodes[j]

    def path(self, j: int) -> DerivPath:
        return self.paths[j]

    def by_path(self, p: DerivPath) -> int:
        return self._by_path[p]

    def judgment_tests(self, j: int) -> tuple[int, ...]:
        """Leaf judgments through which the descent from ``j`` enters T-many trees."""
        out = self._jtests.get(j)
        if out is None:
            acc = []
            c = j
            while self.parent[c] >= 0:
                par = self.parent[c]
                if self.nodes[par].rule == TMANY and self.nodes[c].rule not in (TMANY, TNONE):
                    acc.append(c)
                c = par
            out = tuple(acc)
            self._jtests[j] = out
        return out

    def admissible(self) -> list[tuple[int, TypePath]]:
        """Occurrences of the followed formula in non-T-many judgments."""
        out = []
        for i, n in enumerate(self.nodes):
            if n.rule in (TMANY, TNONE):
                continue
            out.extend((i, p) for p in atom_paths(n.type, self.atom))
        return out

    # -- dynamics ---------------------------------------------------------

    def init(self) -> TiamState:
        if self.nodes[0].rule in (TMANY, TNONE):
            raise StuckState("the root concludes a tree type")
        return TiamState(0, (), RED)

    def transition(self, s: TiamState):
        """``(rule, next state)`` or :data:`FINAL`."""
        j, m, d = s
        n = self.nodes[j]
        if d == RED:
            if n.rule == TAPP:
                return "•1", TiamState(self.children[j][0], (RIGHT,) + m, RED)
            if n.rule == TLAM:
                if not m:
                    return FINAL
                if m[0] == RIGHT:
                    return "•2", TiamState(self.children[j][0], m[1:], RED)
                ctx, rest = split_leaf(n.type, m, 1)
                i = leaf_index(n.type.left, ctx)
                return "bt2", TiamState(self.axioms[j][i], rest, BLUE)
            if n.rule == TVAR:
                lam, i = self.binder_of[j]
                ctx = leaf_paths(self.nodes[lam].type.left)[i]
                return "var", TiamState(lam, (LEFT,) + ctx + m, BLUE)
            if n.rule == TLAMSTAR:
                return FINAL
            raise StuckState(f"red state on a {n.rule} conclusion")
        par = self.parent[j]
        if par < 0:
            return FINAL
        prule = self.nodes[par].rule
        if prule == TLAM:
            return "•4", TiamState(par, (RIGHT,) + m, BLUE)
        if prule == TAPP:
            if self.children[par][0] != j:
                raise StuckState("blue state on an argument premise")
            if not m:
                return FINAL
            if m[0] == RIGHT:
                return "•3", TiamState(par, m[1:], BLUE)
            ctx, rest = split_leaf(n.type, m, 1)
            i = leaf_index(n.type.left, ctx)
            return "arg", TiamState(self.app_leaves[par][i], rest, RED)
        if prule == TMANY:
            found = self.leaf_of.get(j)
            if found is None:
                return FINAL
            app, i = found
            fun = self.children[app][0]
            ctx = leaf_paths(self.nodes[fun].type.left)[i]
            return "bt1", TiamState(fun, (LEFT,) + ctx + m, RED)
        raise StuckState(f"blue state above a {prule} rule")

    def step(self, s: TiamState):
        r = self.transition(s)
        return r if r is FINAL else r[1]

    @staticmethod
    def flip(s: TiamState) -> TiamState:
        return TiamState(s.judgment, s.focus, BLUE if s.direction == RED else RED)

    def step_back(self, s: TiamState):
        if s == self.init():
            return INITIAL
        r = self.step(self.flip(s))
        if r is FINAL:
            raise StuckState("no predecessor")
        return self.flip(r)

    def default_fuel(self) -> int:
        return 4 * max(1, len(self.admissible()))

    def run(self, fuel: int | None = None, start: TiamState | None = None) -> TiamRun:
        fuel = self.default_fuel() if fuel is None else fuel
        s = self.init() if start is None else start
        states = [s]
        rules: list[str] = []
        final = False
        while True:
            r = self.transition(s)
            if r is FINAL:
                final = True
                break
            if len(rules) >= fuel:
                break
            rule, s = r
            states.append(s)
            rules.append(rule)
        census = Counter({occ: 0 for occ in self.admissible()})
        for st in states:
            census[(st.judgment, st.focus)] += 1
        return TiamRun(states, rules, final, census)

    # -- rendering --------------------------------------------------------

    def focused_type(self, s: TiamState) -> GenericType:
        return type_at(self.nodes[s.judgment].type, s.focus)

    def occurrence_id(self, j: int, focus: TypePath) -> str:
        return f"{'.'.join(map(str, self.paths[j]))}:{focus_str(focus)}"

    def state_json(self, s: TiamState, step: int | None = None) -> dict:
        return {
            "step": step,
            "judgment_path": ".".join(map(str, self.paths[s.judgment])),
            "focus_path": focus_str(s.focus),
            "direction": s.direction,
        }

    def census_json(self, census: Counter) -> dict:
        return {self.occurrence_id(j, f): c for (j, f), c in census.items()}


# ---------------------------------------------------------------------------
# functional entry points


def tiam_init(derivation: Derivation, atom: GenericType = STAR) -> tuple[Tiam, TiamState]:
    m = Tiam(derivation, atom)
    return m, m.init()


def tiam_step(m: Tiam, s: TiamState):
    return m.step(s)


def tiam_step_back(m: Tiam, s: TiamState):
    return m.step_back(s)


def tiam_run(derivation: Derivation, fuel: int | None = None, atom: GenericType = STAR) -> TiamRun:
    return Tiam(derivation, atom).run(fuel)
