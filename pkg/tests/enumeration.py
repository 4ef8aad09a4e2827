"""Brute-force enumeration of small tree type derivations.

Derivations are built bottom-up from axioms over a fixed pool of linear
types, the T-lambda-star rule on ``λz.z``, abstractions over two binder
names, and applications whose argument trees have arity at most two and
nesting at most two.  Every derivation of size up to the bound over these
ingredients is produced, each paired with its subject.
"""

from __future__ import annotations

from collections import defaultdict

from iamspace.derivation import Node, tapp, tlam, tlamstar, tmany, tnone, tvar
from iamspace.terms import Abs, App, Term, Var
from iamspace.ttypes import EMPTY, STAR, Arrow, Tree

NAMES = ("x", "y")
ID = Abs("z", Var("z"))
POOL = (STAR, Arrow(EMPTY, STAR), Arrow(Tree((STAR,)), STAR))
NONE_SUBJECTS = (ID, Var("x"))
MAX_ARITY = 2


class Enumeration:
    def __init__(self, max_size: int = 6):
        self.max_size = max_size
        # linear conclusions: size -> [(term, node)]
        self.linear: dict[int, list[tuple[Term, Node]]] = defaultdict(list)
        # (term, linear type) -> [(size, node)]
        self._index: dict[tuple[Term, object], list[tuple[int, Node]]] = defaultdict(list)
        self._build()

    def _add(self, s: int, term: Term, node: Node) -> None:
        self.linear[s].append((term, node))
        self._index[(term, node.type)].append((s, node))

    def _build(self) -> None:
        for v in NAMES:
            for a in POOL:
                self._add(1, Var(v), tvar(v, a))
        self._add(1, ID, tlamstar())
        for s in range(2, self.max_size + 1):
            for term, n in self.linear[s - 1]:
                for b in NAMES:
                    self._add(s, Abs(b, term), tlam(b, n))
            for sf in range(1, s):
                for ft, f in self.linear[sf]:
                    if not isinstance(f.type, Arrow):
                        continue
                    for at, a in self.trees(f.type.left, s - 1 - sf):
                        self._add(s, App(ft, at), tapp(f, a))

    def subjects(self) -> set[Term]:
        return {t for t, _ in self._index}

    def trees(self, ty: Tree, size: int, subject: Term | None = None):
        """Tree derivations ``(subject, node)`` concluding ``ty`` with exactly ``size`` rules."""
        if not ty.children:
            if size == 0:
                for u in ((subject,) if subject is not None else NONE_SUBJECTS):
                    yield u, tnone()
            return
        if len(ty.children) > MAX_ARITY:
            return
        subjects = (subject,) if subject is not None else sorted(self.subjects(), key=repr)
        for u in subjects:
            for parts in self._premises(u, ty.children, size):
                yield u, tmany(parts)

    def _premises(self, u: Term, kids, size: int):
        if not kids:
            if size == 0:
                yield []
            return
        head, rest = kids[0], kids[1:]
        for s in range(0, size + 1):
            for node in self._one(u, head, s):
                for tail in self._premises(u, rest, size - s):
                    yield [node] + tail

    def _one(self, u: Term, g, s: int):
        if isinstance(g, Tree):
            if tree_depth(g) > 2:
                return
            for _, n in self.trees(g, s, u):
                yield n
        else:
            for sz, n in self._index.get((u, g), ()):
                if sz == s:
                    yield n

    def all_linear(self):
        for s in range(1, self.max_size + 1):
            for term, n in self.linear[s]:
                yield s, term, n


def tree_depth(g) -> int:
    if isinstance(g, Tree):
        return 1 + max((tree_depth(c) for c in g.children), default=0)
    return 0


def arg_trees(en: Enumeration, ty: Tree, max_size: int, closed_subjects: list[Term]):
    """Closed argument derivations of ``ty`` up to ``max_size`` rules."""
    for s in range(0, max_size + 1):
        if not ty.children:
            if s == 0:
                yield ID, tnone(), 0
            continue
        for u in closed_subjects:
            for _, node in en.trees(ty, s, u):
                yield u, node, s

