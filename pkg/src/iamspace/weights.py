"""Type and judgment weights, branch sizes, and the exact space bound check.

Every ``max`` is taken at one concrete ``X``.  With the default atom ``⋆``
the weights are the plain rules; passing another linear formula as
``atom`` gives the weights of the generalized machine following it, where
formulas not containing the atom carry no weight and an abstraction typed
exactly by the atom is final.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .derivation import TAPP, TLAM, TLAMSTAR, TMANY, TNONE, TVAR, Derivation, DerivPath, Node
from .expansion import infer
from .extraction import Extractor
from .iam import iam_run, run_space_fast, state_space
from .measure import ONE, X1, ZERO, SpaceMeasure, default_x, smax
from .terms import DEFAULT_FUEL, Code, Term, pretty
from .tiam import Tiam, TiamState
from .ttypes import LEFT, RIGHT, STAR, Arrow, GenericType, Star, Tree, TypePath, atom_paths, focus_str

__all__ = [
    "type_weight", "weigh", "Weights", "branch_size_focus", "branch_size_judgment",
    "bsize", "ExactBoundReport", "verify_exact_bound",
]


def type_weight(g: GenericType, x: int, atom: GenericType | None = None) -> SpaceMeasure:
    if atom is None or atom == STAR:
        return _tw_plain(g, x)
    w = _tw_atom(g, x, atom)
    return ZERO if w is None else w


def _tw_plain(g: GenericType, x: int) -> SpaceMeasure:
    if isinstance(g, Star):
        return ZERO
    if isinstance(g, Arrow):
        return smax((_tw_plain(g.left, x), _tw_plain(g.right, x) + ONE), x)
    if not g.children:
        return ZERO
    return X1 + smax((_tw_plain(c, x) for c in g.children), x)


def _tw_atom(g: GenericType, x: int, atom: GenericType) -> SpaceMeasure | None:
    if g == atom:
        return ZERO
    if isinstance(g, Star):
        return None
    if isinstance(g, Arrow):
        left = _tw_atom(g.left, x, atom)
        right = _tw_atom(g.right, x, atom)
        opts = [m for m in (left, None if right is None else right + ONE) if m is not None]
    else:
        sub = [m for m in (_tw_atom(c, x, atom) for c in g.children) if m is not None]
        opts = [X1 + smax(sub, x)] if sub else []
    return smax(opts, x) if opts else None


@dataclass
class Weights:
    derivation: Derivation
    x: int
    atom: GenericType | None
    by_path: dict[DerivPath, SpaceMeasure] = field(default_factory=dict)

    @property
    def root(self) -> SpaceMeasure:
        return self.by_path[()]

    def __getitem__(self, path: DerivPath) -> SpaceMeasure:
        return self.by_path[path]


def weigh(d: Derivation, x: int | None = None, atom: GenericType | None = None) -> Weights:
    """Annotate every judgment with its weight; the root weight is the derivation's."""
    xv = default_x(len(Code.of(d.term))) if x is None else x
    out = Weights(d, xv, atom)
    plain = atom is None or atom == STAR

    def go(n: Node, path: DerivPath) -> SpaceMeasure | None:
        kids = [go(c, path + (i,)) for i, c in enumerate(n.children)]
        if plain:
            if n.rule == TVAR:
                w = _tw_plain(n.type, xv)
            elif n.rule in (TLAMSTAR, TNONE):
                w = ZERO
            elif n.rule == TLAM:
                w = smax((kids[0], _tw_plain(n.type, xv)), xv)
            elif n.rule == TAPP:
                w = smax(kids, xv)
            else:
                w = X1 + smax(kids, xv)
        else:
            present = [k for k in kids if k is not None]
            if n.rule == TVAR:
                w = _tw_atom(n.type, xv, atom)
            elif n.rule == TLAMSTAR:
                w = ZERO if atom == STAR else None
            elif n.rule == TNONE:
                w = None
            elif n.rule == TLAM:
                if n.type == atom:
                    w = ZERO
                else:
                    own = _tw_atom(n.type, xv, atom)
                    opts = present + ([own] if own is not None else [])
                    w = smax(opts, xv) if opts else None
            elif n.rule == TAPP:
                w = smax(present, xv) if present else None
            else:
                w = X1 + smax(present, xv) if present else None
        out.by_path[path] = ZERO if w is None else w
        return w

    go(d.root, ())
    return out


def branch_size_focus(focus: TypePath, x: int | None = None) -> SpaceMeasure:
    units = sum(1 for s in focus if s == RIGHT)
    xs = sum(1 for s in focus if s >= 0)
    return SpaceMeasure(units, xs)


def branch_size_judgment(tiam: Tiam, judgment: int) -> SpaceMeasure:
    return SpaceMeasure(0, tiam.many_below[judgment])


def bsize(tiam: Tiam, s: TiamState) -> SpaceMeasure:
    return branch_size_focus(s.focus) + branch_size_judgment(tiam, s.judgment)


@dataclass
class ExactBoundReport:
    term: str
    x: int
    weight: SpaceMeasure
    run_space: SpaceMeasure
    equal: bool
    witness_state: dict | None
    lemma_checks: dict

    @property
    def ok(self) -> bool:
        return self.equal and self.witness_state is not None and all(self.lemma_checks.values())

    def to_json(self) -> dict:
        return {
            "term": self.term,
            "x": self.x,
            "weight_units": self.weight.units,
            "weight_x": self.weight.x_count,
            "run_space_units": self.run_space.units,
            "run_space_x": self.run_space.x_count,
            "equal": self.equal,
            "witness_state": self.witness_state,
            "lemma_checks": self.lemma_checks,
        }


def verify_exact_bound(term: Term, fuel: int = DEFAULT_FUEL, x: int | None = None,
                       derivation: Derivation | None = None, strict: bool = False) -> ExactBoundReport:
    """Compare the root weight with the space of the complete run, plus the lemmas behind it."""
    code = Code.of(term)
    xv = default_x(len(code)) if x is None else x
    d = infer(term, fuel) if derivation is None else derivation
    wts = weigh(d, xv)
    w = wts.root
    steps, final, space = run_space_fast(code, fuel, xv)
    tiam = Tiam(d, code=code)
    ex = Extractor(tiam)
    run = tiam.run()

    checks = {"complete_runs": final and run.final}
    # judgment weights dominate their own types, and the root dominates v + tlm(J)
    type_ok = True
    log_ok = True
    for j, n in enumerate(tiam.nodes):
        v = wts[tiam.path(j)]
        if v.eval(xv) < type_weight(n.type, xv).eval(xv):
            type_ok = False
        if w.eval(xv) < (v + branch_size_judgment(tiam, j)).eval(xv):
            log_ok = False
    checks["weights_bound_types"] = type_ok
    checks["weights_bound_logs"] = log_ok

    witness = None
    bound_ok = True
    space_ok = True
    for k, s in enumerate(run.states):
        b = bsize(tiam, s)
        if b.eval(xv) > w.eval(xv):
            bound_ok = False
        if b != state_space(ex.extract_state(s)):
            space_ok = False
        if witness is None and b.eval(xv) == w.eval(xv):
            witness = {**tiam.state_json(s, k), "bsize_units": b.units, "bsize_x": b.x_count}
    checks["weight_bounds_states"] = bound_ok
    checks["bsize_is_extracted_space"] = space_ok
    if strict:
        x2 = xv + 7
        w2 = weigh(d, x2).root
        s2 = run_space_fast(code, fuel, x2)[2]
        checks["strict_no_flip"] = (w2 == w and s2 == space)
    equal = final and w.eval(xv) == space.eval(xv)
    return ExactBoundReport(pretty(term), xv, w, space, equal, witness, checks)
