"""Linear and tree types, type paths and leaf contexts.

``A ::= Star | Arrow(T, A)`` and ``T ::= Tree([G, ...])`` with ``G ::= A | T``.
A type path is a tuple of ints: :data:`LEFT` enters an arrow's tree,
:data:`RIGHT` its codomain, and ``i >= 0`` the i-th child of a tree.
"""

from __future__ import annotations

import weakref
from functools import lru_cache
from typing import Iterator, Union

__all__ = [
    "Star", "STAR", "Arrow", "Tree", "EMPTY", "GenericType", "LinearType",
    "TypePath", "LEFT", "RIGHT", "is_linear", "leaves", "leaf_paths",
    "leaf_index", "type_at", "atom_paths", "star_paths", "split_leaf",
    "type_to_json", "type_from_json", "show", "focus_str", "parse_focus",
    "tree_height", "spine_height", "env_join", "env_nest", "env_get",
    "env_remove", "Env",
]

LEFT = -1
RIGHT = -2


class Star:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "STAR"

    def __reduce__(self):
        return (Star, ())


STAR = Star()


# Types are hash-consed: structurally equal types are the same object, so
# equality is identity and hashing is constant time, even when a type is a
# DAG whose unfolding is exponential.
_INTERN: "weakref.WeakValueDictionary[tuple, GenericType]" = weakref.WeakValueDictionary()


class _Interned:
    __slots__ = ()

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __ne__(self, other) -> bool:
        return self is not other

    @classmethod
    def _make(cls, key: tuple, **attrs):
        hit = _INTERN.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        for k, v in attrs.items():
            object.__setattr__(self, k, v)
        object.__setattr__(self, "_hash", hash(key))
        _INTERN[key] = self
        return self


class Arrow(_Interned):
    __slots__ = ("left", "right", "_hash", "__weakref__")
    left: "Tree"
    right: "LinearType"

    def __new__(cls, left: "Tree", right: "LinearType"):
        if not isinstance(left, Tree):
            raise TypeError("the domain of an arrow is a tree type")
        if not isinstance(right, (Star, Arrow)):
            raise TypeError("the codomain of an arrow is linear")
        return cls._make(("->", left, right), left=left, right=right)

    def __repr__(self) -> str:
        return f"Arrow({self.left!r}, {self.right!r})"

    def __reduce__(self):
        return (Arrow, (self.left, self.right))


class Tree(_Interned):
    __slots__ = ("children", "_hash", "__weakref__")
    children: tuple["GenericType", ...]

    def __new__(cls, children=()):
        children = tuple(children)
        for c in children:
            if not isinstance(c, (Star, Arrow, Tree)):
                raise TypeError(f"not a type: {c!r}")
        return cls._make(("[]",) + children, children=children)

    def __len__(self) -> int:
        return len(self.children)

    def __repr__(self) -> str:
        return f"Tree({self.children!r})"

    def __reduce__(self):
        return (Tree, (self.children,))


EMPTY = Tree(())

LinearType = Union[Star, Arrow]
GenericType = Union[Star, Arrow, Tree]
TypePath = tuple[int, ...]


def is_linear(g: GenericType) -> bool:
    return not isinstance(g, Tree)


@lru_cache(maxsize=None)
def leaf_paths(t: Tree) -> tuple[TypePath, ...]:
    """Paths (child indices only) of the linear leaves of ``t``, left to right."""
    out: list[TypePath] = []
    for i, c in enumerate(t.children):
        if isinstance(c, Tree):
            out.extend((i,) + p for p in leaf_paths(c))
        else:
            out.append((i,))
    return tuple(out)


@lru_cache(maxsize=None)
def _leaf_index_table(t: Tree) -> dict[TypePath, int]:
    return {p: i for i, p in enumerate(leaf_paths(t))}


def leaf_index(t: Tree, path: TypePath) -> int:
    return _leaf_index_table(t)[path]


def leaves(t: Tree) -> tuple[LinearType, ...]:
    out = []
    for c in t.children:
        if isinstance(c, Tree):
            out.extend(leaves(c))
        else:
            out.append(c)
    return tuple(out)


def type_at(g: GenericType, path: TypePath) -> GenericType:
    for s in path:
        if s == LEFT and isinstance(g, Arrow):
            g = g.left
        elif s == RIGHT and isinstance(g, Arrow):
            g = g.right
        elif s >= 0 and isinstance(g, Tree) and s < len(g.children):
            g = g.children[s]
        else:
            raise ValueError(f"type path {focus_str(path)!r} does not resolve")
    return g


def split_leaf(g: GenericType, path: TypePath, start: int) -> tuple[TypePath, TypePath]:
    """Split ``path[start:]`` (entering a tree) into its leaf context and the rest."""
    sub = type_at(g, path[:start])
    i = start
    while isinstance(sub, Tree):
        sub = sub.children[path[i]]
        i += 1
    return path[start:i], path[i:]


def atom_paths(g: GenericType, atom: GenericType) -> Iterator[TypePath]:
    """Paths to the occurrences of ``atom`` in ``g``, left to right."""
    if g == atom:
        yield ()
        return
    if isinstance(g, Arrow):
        for p in atom_paths(g.left, atom):
            yield (LEFT,) + p
        for p in atom_paths(g.right, atom):
            yield (RIGHT,) + p
    elif isinstance(g, Tree):
        for i, c in enumerate(g.children):
            for p in atom_paths(c, atom):
                yield (i,) + p


def star_paths(g: GenericType) -> list[TypePath]:
    return list(atom_paths(g, STAR))


def tree_height(g: GenericType) -> int:
    """Number of tree constructors on the deepest root-to-leaf path."""
    if isinstance(g, Tree):
        return 1 + max((tree_height(c) for c in g.children), default=0)
    return 0


def spine_height(t: Tree) -> int:
    """Height counting only the levels that hold leaves.

    A tree whose only child is itself a tree adds no level of its own.
    """
    if len(t.children) == 1 and isinstance(t.children[0], Tree):
        return spine_height(t.children[0])
    sub = [spine_height(c) for c in t.children if isinstance(c, Tree)]
    return 1 + max(sub, default=0)


# ---------------------------------------------------------------------------
# rendering and serialization


def show(g: GenericType) -> str:
    if isinstance(g, Star):
        return "*"
    if isinstance(g, Arrow):
        return f"{show(g.left)}->{show(g.right)}"
    return "[" + ",".join(show(c) for c in g.children) + "]"


def type_to_json(g: GenericType):
    if isinstance(g, Star):
        return "*"
    if isinstance(g, Arrow):
        return {"arrow": [type_to_json(g.left), type_to_json(g.right)]}
    return [type_to_json(c) for c in g.children]


def type_from_json(d) -> GenericType:
    if d == "*":
        return STAR
    if isinstance(d, dict) and set(d) == {"arrow"}:
        left, right = d["arrow"]
        return Arrow(type_from_json(left), type_from_json(right))
    if isinstance(d, list):
        return Tree(tuple(type_from_json(c) for c in d))
    raise ValueError(f"bad type encoding {d!r}")


def focus_str(path: TypePath) -> str:
    return ".".join("l" if s == LEFT else "r" if s == RIGHT else str(s) for s in path)


def parse_focus(text: str) -> TypePath:
    out = []
    for s in text.split("."):
        if not s:
            continue
        out.append(LEFT if s == "l" else RIGHT if s == "r" else int(s))
    return tuple(out)


# ---------------------------------------------------------------------------
# type environments: sorted tuples of (name, non-empty tree)

Env = tuple[tuple[str, Tree], ...]


def env_get(env: Env, name: str) -> Tree:
    for k, v in env:
        if k == name:
            return v
    return EMPTY


def env_join(*envs: Env) -> Env:
    acc: dict[str, tuple] = {}
    for env in envs:
        for k, v in env:
            acc[k] = acc.get(k, ()) + v.children
    return tuple(sorted((k, Tree(v)) for k, v in acc.items() if v))


def env_nest(env: Env) -> Env:
    return tuple((k, Tree((v,))) for k, v in env)


def env_remove(env: Env, name: str) -> Env:
    return tuple((k, v) for k, v in env if k != name)
