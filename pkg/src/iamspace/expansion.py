"""Quantitative substitution, subject reduction and expansion, and ``infer``.

``infer`` normalizes the term, types the abstraction it reaches with
T-lambda-star, and expands backwards along the recorded trace.
"""

from __future__ import annotations

from .derivation import (
    TAPP, TLAM, TLAMSTAR, TMANY, TNONE, TVAR, Derivation, Node, merge, split,
    tapp, tlam, tlamstar, tmany, tnone, tvar,
)
from .terms import (
    ARG, BODY, FUN, Abs, App, FuelExhausted, ReductionTrace, Step, Term,
    TermPath, Var, head_step, replace_at, whnf,
)
from .ttypes import env_get, show

__all__ = [
    "NotNormalizing", "ExpansionError", "substitute_derivation", "anti_substitute",
    "subject_expand", "subject_reduce", "infer", "infer_with_trace",
]


class NotNormalizing(RuntimeError):
    def __init__(self, exhausted: FuelExhausted):
        super().__init__(f"no weak head normal form within {len(exhausted.steps)} steps")
        self.exhausted = exhausted


class ExpansionError(ValueError):
    """Recorded occurrences disagree with the derivation being expanded."""


def substitute_derivation(body: Node, var: str, arg: Node) -> Node:
    """From ``Γ, var:T ⊢ t : G`` and ``⊢ u : T`` build ``Γ ⊢ t{var:=u} : G``."""
    expected = env_get(body.env, var)
    if arg.type != expected:
        raise TypeError(f"argument typed {show(arg.type)}, hypothesis is {show(expected)}")
    return _subst(body, var, arg)


def _subst(n: Node, x: str, arg: Node) -> Node:
    if not env_get(n.env, x).children:
        return n
    if n.rule == TVAR:
        if arg.rule != TMANY or len(arg.children) != 1:
            raise TypeError("an axiom takes a unary T-many argument")
        return arg.children[0]
    if n.rule == TLAM:
        return tlam(n.name, _subst(n.children[0], x, arg))
    if n.rule == TAPP:
        f, a = n.children
        sizes = [len(env_get(f.env, x).children), len(env_get(a.env, x).children)]
        pf, pa = split(arg, sizes)
        return tapp(_subst(f, x, pf), _subst(a, x, pa))
    if n.rule == TMANY:
        # the hypothesis on x is [T1 ⊎ ... ⊎ Tn]: unwrap, then split per premise
        if arg.rule != TMANY or len(arg.children) != 1:
            raise TypeError("a T-many body takes a wrapped argument")
        sizes = [len(env_get(c.env, x).children) for c in n.children]
        parts = split(arg.children[0], sizes)
        return tmany([_subst(c, x, p) for c, p in zip(n.children, parts)])
    raise TypeError(f"{n.rule} cannot carry a hypothesis on {x}")


def anti_substitute(n: Node, t: Term, x: str, occurrences: frozenset[TermPath] | None = None,
                    here: TermPath = ()) -> tuple[Node, Node]:
    """Split a derivation of ``t{x:=u}`` into one of ``t`` and one of ``u``.

    Returns ``(π_t, π_u)`` with ``π_t ▷ Γ, x:T ⊢ t : G`` and ``π_u ▷ ⊢ u : T``.
    When ``occurrences`` is given, every copy met must be one of them.
    """
    if n.rule == TMANY:
        parts = [anti_substitute(c, t, x, occurrences, here) for c in n.children]
        merged = merge([p[1] for p in parts])
        wrapped = tmany([merged]) if merged.rule == TMANY else tnone()
        return tmany([p[0] for p in parts]), wrapped
    if n.rule == TNONE:
        return tnone(), tnone()
    if isinstance(t, Var):
        if t.name == x:
            if occurrences is not None and here not in occurrences:
                raise ExpansionError(f"unrecorded copy at {'.'.join(here)!r}")
            return tvar(x, n.type), tmany([n])
        if n.rule != TVAR or n.name != t.name:
            raise ExpansionError("derivation does not follow the body")
        return n, tnone()
    if isinstance(t, Abs):
        if n.rule == TLAMSTAR:
            return tlamstar(), tnone()
        if n.rule != TLAM:
            raise ExpansionError("derivation does not follow the body")
        if t.binder == x:
            return n, tnone()
        body, arg = anti_substitute(n.children[0], t.body, x, occurrences, here + (BODY,))
        return tlam(t.binder, body), arg
    if n.rule != TAPP:
        raise ExpansionError("derivation does not follow the body")
    f, fa = anti_substitute(n.children[0], t.fun, x, occurrences, here + (FUN,))
    a, aa = anti_substitute(n.children[1], t.arg, x, occurrences, here + (ARG,))
    return tapp(f, a), merge([fa, aa])


def _along_spine(n: Node, depth: int, base) -> Node:
    if n.rule == TMANY:
        return tmany([_along_spine(c, depth, base) for c in n.children])
    if depth == 0:
        return base(n)
    if n.rule != TAPP:
        raise ExpansionError("head context must be typed by applications")
    return tapp(_along_spine(n.children[0], depth - 1, base), n.children[1])


def subject_expand(reduct: Derivation, step: Step) -> Derivation:
    """Type ``H<(λx.r)w>`` from a derivation of ``H<r{x:=w}>``."""
    h = step.spine
    occ = frozenset(step.copies)

    def base(n: Node) -> Node:
        body, arg = anti_substitute(n, step.body, step.binder, occ)
        return tapp(tlam(step.binder, body), arg)

    root = _along_spine(reduct.root, h, base)
    term = replace_at(reduct.term, step.redex_path, App(Abs(step.binder, step.body), step.arg))
    return Derivation(term, root)


def subject_reduce(d: Derivation) -> tuple[Derivation, Step]:
    """Type the head reduct of ``d.term``; the size strictly decreases."""
    nxt = head_step(d.term)
    if nxt is None:
        raise ValueError("the subject is already normal")
    reduct, step = nxt

    def base(n: Node) -> Node:
        if n.rule != TAPP or n.children[0].rule != TLAM:
            raise ExpansionError("redex not typed by T-app over T-lambda")
        lam, arg = n.children
        return substitute_derivation(lam.children[0], step.binder, arg)

    return Derivation(reduct, _along_spine(d.root, step.spine, base)), step


def infer_with_trace(term: Term, fuel: int | None = None) -> tuple[Derivation, ReductionTrace]:
    try:
        trace = whnf(term) if fuel is None else whnf(term, fuel)
    except FuelExhausted as e:
        raise NotNormalizing(e) from None
    d = Derivation(trace.result, tlamstar())
    for step in reversed(trace.steps):
        d = subject_expand(d, step)
    return Derivation(term, d.root), trace


def infer(term: Term, fuel: int | None = None) -> Derivation:
    """A derivation of ``⊢ term : ⋆``, or :class:`NotNormalizing`."""
    return infer_with_trace(term, fuel)[0]
