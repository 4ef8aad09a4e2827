"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from iamspace.corpus import gen_random_closed
from iamspace.terms import Abs, App, Var
from iamspace.ttypes import STAR, Arrow, Tree

NAMES = ("x", "y", "z", "w")


def closed_terms(max_depth: int = 5):
    """Closed terms built with binders in scope."""

    def build(scope: tuple[str, ...], depth: int):
        options = []
        if scope:
            options.append(st.sampled_from(scope).map(Var))
        if depth > 0:
            options.append(st.sampled_from(NAMES).flatmap(
                lambda n: build(scope + (n,), depth - 1).map(lambda b, n=n: Abs(n, b))))
            if scope:
                options.append(st.tuples(build(scope, depth - 1), build(scope, depth - 1))
                               .map(lambda p: App(*p)))
        if not options:
            return st.just(Abs("x", Var("x")))
        return st.one_of(*options)

    return st.one_of(
        build((), max_depth),
        st.tuples(build((), max_depth - 1), build((), max_depth - 1)).map(lambda p: App(*p)),
    ).filter(lambda t: not isinstance(t, Var))


def corpus_terms(size: int = 40):
    """Samples of the corpus generator under hypothesis-chosen seeds."""
    return st.integers(0, 10**6).map(lambda s: gen_random_closed(f"h:{s}", size))


def linear_types(depth: int = 3):
    return st.recursive(
        st.just(STAR),
        lambda inner: st.builds(Arrow, tree_types_of(inner), inner),
        max_leaves=6,
    )


def tree_types_of(elements):
    return st.recursive(
        st.lists(elements, max_size=3).map(lambda cs: Tree(tuple(cs))),
        lambda inner: st.lists(st.one_of(elements, inner), max_size=3).map(lambda cs: Tree(tuple(cs))),
        max_leaves=4,
    )


def generic_types():
    lin = linear_types()
    return st.one_of(lin, tree_types_of(lin))
