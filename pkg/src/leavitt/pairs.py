"""Pairs (H, S): a hereditary saturated vertex set plus chosen breaking
vertices.  These pairs index both the graded ideals of the Leavitt path
algebra and the open invariant subsets of the boundary-path space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

from .errors import ContractError, InputError
from .graphs import (Graph, VertexSet, breaking_vertices, check_vertex_set,
                     is_hereditary, is_saturated, ordered)


@dataclass(frozen=True)
class HSPair:
    """A pair ``(h, s)`` with ``h`` hereditary saturated and ``s`` a set of
    breaking vertices of ``h``.  Build through :func:`hs_pair`."""

    graph: Graph
    h: VertexSet
    s: VertexSet

    def label(self) -> str:
        hs = ",".join(ordered(self.graph, self.h))
        ss = ",".join(ordered(self.graph, self.s))
        return f"H={{{hs}}};S={{{ss}}}"


def hs_pair(g: Graph, h: Iterable[str], s: Iterable[str] = ()) -> HSPair:
    """Validated pair constructor.

    Raises InputError for unknown vertices and ContractError when ``h`` is
    not hereditary saturated or ``s`` is not made of breaking vertices.
    """
    h = check_vertex_set(g, h)
    s = check_vertex_set(g, s)
    if not is_hereditary(g, h):
        raise ContractError(f"H={sorted(h)} is not hereditary")
    if not is_saturated(g, h):
        raise ContractError(f"H={sorted(h)} is not saturated")
    allowed = breaking_vertices(g, h)
    if not s <= allowed:
        raise ContractError(
            f"S={sorted(s)} is not a subset of the breaking vertices "
            f"{sorted(allowed)} of H={sorted(h)}")
    return HSPair(g, h, s)


def check_pair(g: Graph, pair: HSPair) -> HSPair:
    """Cheap membership guard used by operations that take a pair."""
    if not isinstance(pair, HSPair):
        raise InputError(f"expected an HSPair, got {pair!r}")
    if pair.graph != g:
        raise InputError("pair belongs to a different graph")
    return pair


UNION = "union"
INTERSECTION = "intersection"


@dataclass(frozen=True)
class InvariantOpen:
    """A one-level union or intersection of the open invariant sets
    determined by pairs.  Membership semantics live in
    :func:`leavitt.boundary.open_membership`."""

    kind: str
    parts: Tuple[HSPair, ...]


def _combine(kind: str, pairs) -> InvariantOpen:
    parts = tuple(pairs)
    if not parts:
        raise InputError("an invariant open set needs at least one pair")
    first = parts[0]
    for p in parts:
        if not isinstance(p, HSPair):
            raise InputError(f"expected HSPair components, got {p!r}")
        if p.graph != first.graph:
            raise InputError("components belong to different graphs")
    return InvariantOpen(kind, parts)


def union_open(*pairs) -> InvariantOpen:
    return _combine(UNION, pairs)


def intersection_open(*pairs) -> InvariantOpen:
    return _combine(INTERSECTION, pairs)


def merged_union_sets(u: InvariantOpen) -> Tuple[VertexSet, VertexSet]:
    """For a union, membership only depends on (∪h_i, ∪s_i): a path is a
    member iff it touches the merged h or is finite with terminal in the
    merged s."""
    h = frozenset().union(*(p.h for p in u.parts))
    s = frozenset().union(*(p.s for p in u.parts))
    return h, s
