"""Tree type derivations: nodes, checker, split/merge, flattening, JSON.

Nodes do not store their subject; it is recovered from the root term by
walking the derivation (TMany premises share their conclusion's subject).
Environments are computed by the smart constructors and re-verified by
:func:`check`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .terms import ARG, BODY, FUN, Abs, App, Term, TermPath, Var, alpha_eq, free_vars, parse, path_str, pretty, subterm
from .ttypes import (
    EMPTY, STAR, Arrow, Env, GenericType, Star, Tree, env_get, env_join, env_nest,
    env_remove, is_linear, leaves, show, type_from_json, type_to_json,
)

__all__ = [
    "TVAR", "TLAMSTAR", "TLAM", "TAPP", "TMANY", "TNONE", "RULES", "Node",
    "Derivation", "DerivPath", "RuleViolation", "tvar", "tlamstar", "tlam",
    "tapp", "tmany", "tnone", "many_or_none", "size", "check", "check_flat",
    "split", "merge", "flatten", "node_to_json", "derivation_to_json",
    "derivation_from_json", "walk",
]

TVAR, TLAMSTAR, TLAM, TAPP, TMANY, TNONE = "TVar", "TLamStar", "TLam", "TApp", "TMany", "TNone"
RULES = (TVAR, TLAMSTAR, TLAM, TAPP, TMANY, TNONE)

DerivPath = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Node:
    rule: str
    type: GenericType
    env: Env
    children: tuple["Node", ...] = ()
    name: str | None = None  # variable of a TVar, binder of a TLam


def tvar(name: str, ty: GenericType) -> Node:
    return Node(TVAR, ty, ((name, Tree((ty,))),), (), name)


def tlamstar() -> Node:
    return Node(TLAMSTAR, STAR, ())


def tlam(binder: str, body: Node) -> Node:
    return Node(TLAM, Arrow(env_get(body.env, binder), body.type),
                env_remove(body.env, binder), (body,), binder)


def tapp(fun: Node, arg: Node) -> Node:
    if not isinstance(fun.type, Arrow):
        raise TypeError(f"function premise typed {show(fun.type)}")
    if fun.type.left != arg.type:
        raise TypeError(f"argument typed {show(arg.type)}, expected {show(fun.type.left)}")
    return Node(TAPP, fun.type.right, env_join(fun.env, arg.env), (fun, arg))


def tmany(children: Sequence[Node]) -> Node:
    if not children:
        raise ValueError("TMany needs at least one premise; use tnone")
    children = tuple(children)
    return Node(TMANY, Tree(tuple(c.type for c in children)),
                env_nest(env_join(*(c.env for c in children))), children)


def tnone() -> Node:
    return Node(TNONE, EMPTY, ())


def many_or_none(children: Sequence[Node]) -> Node:
    return tmany(children) if children else tnone()


def size(node: Node) -> int:
    """Number of rules other than TMany and TNone."""
    own = 0 if node.rule in (TMANY, TNONE) else 1
    return own + sum(size(c) for c in node.children)


def walk(node: Node, path: DerivPath = (), tpath: TermPath = ()) -> Iterator[tuple[DerivPath, Node, TermPath]]:
    """Pre-order ``(derivation path, node, subject path)``."""
    stack = [(path, node, tpath)]
    while stack:
        p, n, tp = stack.pop()
        yield p, n, tp
        if n.rule == TLAM:
            stack.append((p + (0,), n.children[0], tp + (BODY,)))
        elif n.rule == TAPP:
            stack.append((p + (1,), n.children[1], tp + (ARG,)))
            stack.append((p + (0,), n.children[0], tp + (FUN,)))
        elif n.rule == TMANY:
            for i in reversed(range(len(n.children))):
                stack.append((p + (i,), n.children[i], tp))


@dataclass(frozen=True)
class Derivation:
    term: Term
    root: Node

    def size(self) -> int:
        return size(self.root)

    def node_at(self, path: DerivPath) -> Node:
        n = self.root
        for i in path:
            n = n.children[i]
        return n

    def subject_path(self, path: DerivPath) -> TermPath:
        n = self.root
        out: list[str] = []
        for i in path:
            if n.rule == TLAM:
                out.append(BODY)
            elif n.rule == TAPP:
                out.append(FUN if i == 0 else ARG)
            n = n.children[i]
        return tuple(out)

    def nodes(self) -> Iterator[tuple[DerivPath, Node, TermPath]]:
        return walk(self.root)


class RuleViolation(ValueError):
    def __init__(self, path: DerivPath, clause: str, detail: str = ""):
        where = ".".join(map(str, path)) or "root"
        super().__init__(f"{clause} at {where}" + (f": {detail}" if detail else ""))
        self.path = path
        self.clause = clause


def _axiom_types(node: Node, name: str) -> list[GenericType]:
    """Types of the free axioms for ``name`` in ``node``, left to right."""
    out: list[GenericType] = []
    stack = [node]
    while stack:
        n = stack.pop()
        if n.rule == TVAR:
            if n.name == name:
                out.append(n.type)
        elif n.rule == TLAM and n.name == name:
            continue
        else:
            stack.extend(reversed(n.children))
    return out


def check(d: Derivation | Node, term: Term | None = None, *, flat: bool = False) -> None:
    """Raise :class:`RuleViolation` unless the derivation is well formed."""
    if isinstance(d, Derivation):
        node, term = d.root, d.term
    else:
        node = d
    if term is None:
        raise ValueError("a root term is needed")
    _check(node, term, (), flat)


def check_flat(d: Derivation) -> None:
    check(d, flat=True)


def _check(n: Node, t: Term, path: DerivPath, flat: bool) -> None:
    def fail(clause: str, detail: str = ""):
        raise RuleViolation(path, clause, detail)

    if n.rule not in RULES:
        fail("rule", n.rule)
    if n.rule == TVAR:
        if not isinstance(t, Var) or t.name != n.name:
            fail("subject", "axiom on a non-variable")
        if n.children or not is_linear(n.type):
            fail("arity/type")
        if n.env != ((n.name, Tree((n.type,))),):
            fail("env", "axiom environment")
    elif n.rule == TLAMSTAR:
        if not isinstance(t, Abs):
            fail("subject", "T-lambda-star on a non-abstraction")
        if n.children or n.type is not STAR or n.env:
            fail("shape", "T-lambda-star concludes an empty-environment star")
    elif n.rule == TLAM:
        if not isinstance(t, Abs) or t.binder != n.name:
            fail("subject", "T-lambda on a non-abstraction")
        if len(n.children) != 1 or not isinstance(n.type, Arrow):
            fail("arity/type")
        (c,) = n.children
        _check(c, t.body, path + (0,), flat)
        if n.type.right != c.type:
            fail("type", "codomain differs from the premise")
        if list(leaves(n.type.left)) != _axiom_types(c, n.name):
            fail("axiom-order", "leaves of the domain do not list the axioms left to right")
        if n.type.left != env_get(c.env, n.name):
            fail("env", "domain differs from the premise's hypothesis")
        if n.env != env_remove(c.env, n.name):
            fail("env")
    elif n.rule == TAPP:
        if not isinstance(t, App):
            fail("subject", "T-app on a non-application")
        if len(n.children) != 2:
            fail("arity")
        f, a = n.children
        _check(f, t.fun, path + (0,), flat)
        _check(a, t.arg, path + (1,), flat)
        if not isinstance(f.type, Arrow) or f.type.left != a.type or f.type.right != n.type:
            fail("type", "premises do not match")
        if a.rule not in (TMANY, TNONE):
            fail("shape", "argument premise must conclude a tree")
        if n.env != env_join(f.env, a.env):
            fail("env", "join")
    elif n.rule == TMANY:
        if not n.children:
            fail("arity", "T-many with no premise")
        for i, c in enumerate(n.children):
            if flat and not is_linear(c.type):
                fail("flat", "nested multi type")
            _check(c, t, path + (i,), flat)
        if n.type != Tree(tuple(c.type for c in n.children)):
            fail("type", "tree of premise types")
        joined = env_join(*(c.env for c in n.children))
        if n.env != (joined if flat else env_nest(joined)):
            fail("env", "nesting")
    elif n.rule == TNONE:
        if n.children or n.type != EMPTY or n.env:
            fail("shape")
    if flat:
        for _, ty in n.env:
            if any(not is_linear(c) for c in ty.children):
                fail("flat", "nested environment entry")
    if not path and not {k for k, _ in n.env} <= free_vars(t):
        fail("relevance", "environment mentions a variable not free in the subject")


# ---------------------------------------------------------------------------
# split and merge


def split(node: Node, sizes: Sequence[int]) -> list[Node]:
    """Split a tree-typed derivation along a partition of its top-level children."""
    if node.rule not in (TMANY, TNONE):
        raise ValueError("only tree-typed derivations split")
    kids = node.children
    if sum(sizes) != len(kids) or any(s < 0 for s in sizes):
        raise ValueError(f"partition {list(sizes)} does not match arity {len(kids)}")
    out = []
    i = 0
    for s in sizes:
        out.append(many_or_none(kids[i:i + s]))
        i += s
    return out


def merge(nodes: Sequence[Node]) -> Node:
    kids: list[Node] = []
    for n in nodes:
        if n.rule not in (TMANY, TNONE):
            raise ValueError("only tree-typed derivations merge")
        kids.extend(n.children)
    return many_or_none(kids)


# ---------------------------------------------------------------------------
# flattening to multi types


def _flat_type(g: GenericType) -> GenericType:
    if isinstance(g, Star):
        return g
    if isinstance(g, Arrow):
        return Arrow(Tree(tuple(_flat_type(a) for a in leaves(g.left))), _flat_type(g.right))
    return Tree(tuple(_flat_type(a) for a in leaves(g)))


def _flat_leaves(n: Node) -> list[Node]:
    if n.rule == TMANY:
        return [leaf for c in n.children for leaf in _flat_leaves(c)]
    if n.rule == TNONE:
        return []
    return [n]


def _flatten(n: Node) -> Node:
    if n.rule == TVAR:
        ty = _flat_type(n.type)
        return Node(TVAR, ty, ((n.name, Tree((ty,))),), (), n.name)
    if n.rule == TLAMSTAR:
        return n
    if n.rule == TLAM:
        return tlam(n.name, _flatten(n.children[0]))
    if n.rule == TAPP:
        f, a = n.children
        return tapp(_flatten(f), _flatten(a))
    kids = tuple(_flatten(c) for c in _flat_leaves(n))
    if not kids:
        return tnone()
    return Node(TMANY, Tree(tuple(c.type for c in kids)), env_join(*(c.env for c in kids)), kids)


def flatten(d: Derivation) -> Derivation:
    """Erase tree nesting, leaving a multi-type derivation sketch."""
    return Derivation(d.term, _flatten(d.root))


# ---------------------------------------------------------------------------
# JSON


def node_to_json(n: Node, tpath: TermPath = ()) -> dict:
    kids = []
    for i, c in enumerate(n.children):
        if n.rule == TLAM:
            sub = tpath + (BODY,)
        elif n.rule == TAPP:
            sub = tpath + ((FUN,) if i == 0 else (ARG,))
        else:
            sub = tpath
        kids.append(node_to_json(c, sub))
    return {
        "rule": n.rule,
        "subject_path": path_str(tpath),
        "type": type_to_json(n.type),
        "env": {k: type_to_json(v) for k, v in n.env},
        "children": kids,
    }


def derivation_to_json(d: Derivation) -> dict:
    return {"term": pretty(d.term), "root": node_to_json(d.root)}


def _node_from_json(obj: dict, term: Term, tpath: TermPath) -> Node:
    rule = obj["rule"]
    if obj.get("subject_path", path_str(tpath)) != path_str(tpath):
        raise ValueError(f"subject path {obj['subject_path']!r} inconsistent with {path_str(tpath)!r}")
    sub = subterm(term, tpath)
    kids = []
    for i, c in enumerate(obj["children"]):
        if rule == TLAM:
            step = (BODY,)
        elif rule == TAPP:
            step = (FUN,) if i == 0 else (ARG,)
        else:
            step = ()
        kids.append(_node_from_json(c, term, tpath + step))
    env = tuple(sorted((k, type_from_json(v)) for k, v in obj["env"].items()))
    name = None
    if rule == TVAR and isinstance(sub, Var):
        name = sub.name
    elif rule == TLAM and isinstance(sub, Abs):
        name = sub.binder
    return Node(rule, type_from_json(obj["type"]), env, tuple(kids), name)


def derivation_from_json(obj: dict, term: Term | None = None) -> Derivation:
    t = parse(obj["term"]) if term is None else term
    if term is not None and "term" in obj and not alpha_eq(parse(obj["term"]), term):
        raise ValueError("derivation subject differs from the given term")
    return Derivation(t, _node_from_json(obj["root"], t, ()))
