"""Witness families and random closed terms."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .derivation import Derivation, Node, tapp, tlam, tmany, tnone, tvar
from .expansion import subject_expand
from .terms import DEFAULT_FUEL, Abs, App, FuelExhausted, Term, Var, head_step, whnf
from .ttypes import EMPTY, STAR, Arrow, LinearType, Tree

__all__ = [
    "gen_tn", "gen_theta", "theta_unfolded", "tn_derivation", "FixSchema", "fix_schema",
    "gen_random_closed", "random_corpus", "gen_divergent", "divergent_corpus",
]


# ---------------------------------------------------------------------------
# t_n


def gen_tn(n: int) -> Term:
    """``t_0 = λx.x`` and ``t_{n+1} = (λx.xx) t_n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    t: Term = Abs("x", Var("x"))
    delta = Abs("x", App(Var("x"), Var("x")))
    for _ in range(n):
        t = App(delta, t)
    return t


def _tn_node(n: int, a: LinearType) -> Node:
    """``t_n : [a] → a``."""
    if n == 0:
        return tlam("x", tvar("x", a))
    big = Arrow(Tree((a,)), a)
    fun = tlam("x", tapp(tvar("x", Arrow(Tree((big,)), big)), tmany([tvar("x", big)])))
    arg = tmany([_tn_node(n - 1, big), tmany([_tn_node(n - 1, a)])])
    return tapp(fun, arg)


def tn_derivation(n: int, a_prime: LinearType = STAR) -> Derivation:
    """The derivation of ``t_n`` at ``A = [A′] → A′``, built by the family's schema."""
    return Derivation(gen_tn(n), _tn_node(n, a_prime))


# ---------------------------------------------------------------------------
# the fixed point combinator


def _theta_half() -> Term:
    return Abs("x", Abs("y", App(Var("y"), App(App(Var("x"), Var("x")), Var("y")))))


def gen_theta() -> Term:
    """``Θ = θθ`` with ``θ = λx.λy.y(xxy)``."""
    return App(_theta_half(), _theta_half())


def theta_unfolded() -> Term:
    """``λy.y(Θy)``, the head reduct of ``Θ``."""
    return Abs("y", App(Var("y"), App(gen_theta(), Var("y"))))


@dataclass(frozen=True)
class FixSchema:
    n: int
    types: tuple[LinearType, ...]
    F: Arrow
    T: Tree
    Y: Arrow
    derivation: Derivation  # of ⊢ λy.y(Θy) : F_n
    theta: Derivation  # of ⊢ Θ : F_n, by one expansion step


def fix_schema(n: int, types: Sequence[LinearType] | None = None) -> FixSchema:
    """Types ``F_n``, ``T_n``, ``Y_n`` and derivations for the unfolded and folded ``Θ``.

    ``types[i]`` is ``A_i``; at least ``n + 1`` are needed (all ``⋆`` by default).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a = tuple(types) if types is not None else (STAR,) * (n + 1)
    if len(a) < n + 1:
        raise ValueError(f"fix_schema({n}) needs {n + 1} types, got {len(a)}")
    unfolded = theta_unfolded()
    reduct, step = head_step(gen_theta())

    Y = Arrow(EMPTY, a[0])
    T = Tree((Y,))
    vartree = tmany([tvar("y", Y)])
    body = tapp(tvar("y", Y), tnone())
    unfolded_node = tlam("y", body)
    for k in range(n):
        theta_node = subject_expand(Derivation(unfolded, unfolded_node), step).root
        Y = Arrow(Tree((a[k],)), a[k + 1])
        inner = tmany([tapp(theta_node, vartree)])
        unfolded_node = tlam("y", tapp(tvar("y", Y), inner))
        T = Tree((Y, Tree((T,))))
        vartree = tmany([tvar("y", Y), tmany([vartree])])
    F = Arrow(T, a[n])
    d = Derivation(unfolded, unfolded_node)
    theta = subject_expand(d, step)
    return FixSchema(n, a, F, T, Y, d, theta)


# ---------------------------------------------------------------------------
# random terms

_NAMES = ("x", "y", "z", "w", "u", "v")


def _gen(rng: random.Random, budget: int, scope: tuple[str, ...], arg_depth: int) -> Term:
    if budget <= 1:
        return Var(rng.choice(scope)) if scope else _closed_leaf(rng)
    if budget == 2 or (scope and rng.random() < 0.15):
        if scope and rng.random() < 0.5:
            return Var(rng.choice(scope))
        name = rng.choice(_NAMES)
        return Abs(name, _gen(rng, budget - 1, scope + (name,), arg_depth))
    r = rng.random()
    if r < 0.45 or not scope:
        name = rng.choice(_NAMES)
        return Abs(name, _gen(rng, budget - 1, scope + (name,), arg_depth))
    if arg_depth >= 3:
        return Var(rng.choice(scope))
    k = rng.randint(1, budget - 2)
    return App(_gen(rng, k, scope, arg_depth), _gen(rng, budget - 1 - k, scope, arg_depth + 1))


def _closed_leaf(rng: random.Random) -> Term:
    name = rng.choice(_NAMES)
    return Abs(name, Var(name))


def gen_random_closed(seed: int | str, size: int = 40) -> Term:
    """A reproducible closed term with at most ``size`` nodes.

    The root is an application of an abstraction to arguments, so most
    samples do some work before reaching a weak head normal form.
    """
    rng = random.Random(seed)
    budget = rng.randint(min(4, size), size)
    if budget < 5:
        return _gen(rng, budget, (), 0) if budget > 1 else _closed_leaf(rng)
    nargs = rng.randint(1, 2)
    parts = _split(rng, budget - nargs, nargs + 1)
    head = _closed_abs(rng, parts[0])
    for p in parts[1:]:
        head = App(head, _closed_abs(rng, p))
    return head


def _split(rng: random.Random, total: int, k: int) -> list[int]:
    sizes = [2] * k
    for _ in range(max(0, total - 2 * k)):
        sizes[rng.randrange(k)] += 1
    return sizes


def _closed_abs(rng: random.Random, budget: int) -> Term:
    name = rng.choice(_NAMES)
    return Abs(name, _gen(rng, budget - 1, (name,), 0))


def _normalizes(t: Term, fuel: int) -> bool:
    try:
        whnf(t, fuel)
        return True
    except FuelExhausted:
        return False


def random_corpus(count: int, seed: int = 0, size: int = 40, fuel: int = DEFAULT_FUEL) -> list[Term]:
    """The first ``count`` normalizing samples from the seeds ``f"{seed}:{i}"``."""
    out = []
    i = 0
    while len(out) < count:
        t = gen_random_closed(f"{seed}:{i}", size)
        i += 1
        if _normalizes(t, fuel):
            out.append(t)
    return out


def gen_divergent(seed: int | str, size: int = 12) -> Term:
    """A term whose head reduction provably never ends.

    ``W W r1 .. rk`` with ``W = λx.x x r1 .. rk`` reduces to itself applied
    to more arguments; it is placed in head position, possibly under
    identity applications and extra arguments.
    """
    rng = random.Random(seed)
    extra = [_closed_abs(rng, rng.randint(2, size)) for _ in range(rng.randint(0, 2))]
    body: Term = App(Var("x"), Var("x"))
    for r in extra:
        body = App(body, r)
    w = Abs("x", body)
    t: Term = App(w, w)
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            t = App(t, _closed_abs(rng, rng.randint(2, size)))
        else:
            name = rng.choice(_NAMES)
            t = App(Abs(name, Var(name)), t)
    return t


def divergent_corpus(count: int, seed: int = 0) -> list[Term]:
    return [gen_divergent(f"div:{seed}:{i}") for i in range(count)]


def iter_random(seed: int = 0, size: int = 40) -> Iterator[Term]:
    i = 0
    while True:
        yield gen_random_closed(f"{seed}:{i}", size)
        i += 1
