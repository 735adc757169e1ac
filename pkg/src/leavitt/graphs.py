"""Bundle graphs and the hereditary/saturated/breaking-vertex machinery.

A graph is a finite vertex set plus finitely many *bundles*.  A bundle is a
directed edge carrying a multiplicity in {1, 2, ...} or ``OMEGA``; an omega
bundle stands for countably many parallel edges, which is what makes graphs
with infinite emitters finitely representable.  Individual edges are
addressed as ``(bundle id, index)`` pairs, see :mod:`leavitt.boundary`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, Tuple, Union

from .errors import ContractError, InputError, ResourceLimitError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class OmegaType:
    """The countably infinite cardinal.

    Absorbing under addition and multiplication by positive numbers;
    ``OMEGA * 0 == 0``.  There is a single instance, ``OMEGA``.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "omega"

    def __reduce__(self):
        return (OmegaType, ())

    def _check(self, other):
        if not isinstance(other, (int, OmegaType)):
            raise TypeError(f"cannot combine omega with {other!r}")

    def __add__(self, other):
        self._check(other)
        return self

    __radd__ = __add__

    def __mul__(self, other):
        self._check(other)
        if other == 0:
            return 0
        return self

    __rmul__ = __mul__

    def __lt__(self, other):
        self._check(other)
        return False

    def __le__(self, other):
        self._check(other)
        return other is OMEGA

    def __gt__(self, other):
        self._check(other)
        return other is not OMEGA

    def __ge__(self, other):
        self._check(other)
        return True


OMEGA = OmegaType()

#: A count in N ∪ {omega}.
Card = Union[int, OmegaType]


def is_finite(count: Card) -> bool:
    return not isinstance(count, OmegaType)


@dataclass(frozen=True)
class Bundle:
    """A directed edge bundle ``source -> target`` with a multiplicity."""

    id: str
    source: str
    target: str
    multiplicity: Card = 1


class Graph:
    """Immutable bundle graph.

    ``vertices`` keeps declaration order; that order fixes every
    deterministic enumeration in the library.  Vertex and bundle ids must be
    identifier-like and must not collide with each other (the expression and
    path grammars rely on this).
    """

    __slots__ = ("vertices", "bundles", "_index", "_bundle_by_id",
                 "_bundle_order", "_out", "_in", "_hash")

    def __init__(self, vertices: Iterable[str], bundles: Iterable = ()):
        self.vertices: Tuple[str, ...] = tuple(vertices)
        blist = []
        for b in bundles:
            if not isinstance(b, Bundle):
                b = Bundle(*b)
            blist.append(b)
        self.bundles: Tuple[Bundle, ...] = tuple(blist)
        self._validate()
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._bundle_by_id = {b.id: b for b in self.bundles}
        self._bundle_order = {b.id: i for i, b in enumerate(self.bundles)}
        out = {v: [] for v in self.vertices}
        inn = {v: [] for v in self.vertices}
        for b in self.bundles:
            out[b.source].append(b)
            inn[b.target].append(b)
        self._out = {v: tuple(bs) for v, bs in out.items()}
        self._in = {v: tuple(bs) for v, bs in inn.items()}
        self._hash = hash((self.vertices, self.bundles))

    def _validate(self):
        seen = set()
        for v in self.vertices:
            if not isinstance(v, str) or not _IDENT.match(v):
                raise InputError(f"vertex id {v!r} is not identifier-like")
            if v in seen:
                raise InputError(f"duplicate vertex id {v!r}")
            seen.add(v)
        bids = set()
        for b in self.bundles:
            if not isinstance(b.id, str) or not _IDENT.match(b.id):
                raise InputError(f"bundle id {b.id!r} is not identifier-like")
            if b.id in bids:
                raise InputError(f"duplicate bundle id {b.id!r}")
            if b.id in seen:
                raise InputError(f"bundle id {b.id!r} collides with a vertex id")
            bids.add(b.id)
            if b.source not in seen:
                raise InputError(f"bundle {b.id!r}: unknown source {b.source!r}")
            if b.target not in seen:
                raise InputError(f"bundle {b.id!r}: unknown target {b.target!r}")
            m = b.multiplicity
            if not isinstance(m, OmegaType) and (not isinstance(m, int) or m < 1):
                raise InputError(
                    f"bundle {b.id!r}: multiplicity must be a positive "
                    f"integer or omega, got {m!r}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.bundles == other.bundles

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph({list(self.vertices)!r}, {len(self.bundles)} bundles)"

    # -- indexed access -----------------------------------------------------

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def bundle(self, bundle_id: str) -> Bundle:
        try:
            return self._bundle_by_id[bundle_id]
        except KeyError:
            raise InputError(f"unknown bundle {bundle_id!r}") from None

    def bundle_order(self, bundle_id: str) -> int:
        self.bundle(bundle_id)
        return self._bundle_order[bundle_id]

    def out(self, v: str) -> Tuple[Bundle, ...]:
        self.index(v)
        return self._out[v]

    def into(self, v: str) -> Tuple[Bundle, ...]:
        self.index(v)
        return self._in[v]


VertexSet = FrozenSet[str]


def check_vertex_set(g: Graph, xs: Iterable[str]) -> VertexSet:
    xs = frozenset(xs)
    for v in xs:
        g.index(v)
    return xs


def ordered(g: Graph, xs: Iterable[str]) -> Tuple[str, ...]:
    """Vertices of ``xs`` in declaration order (the canonical display order)."""
    return tuple(sorted(xs, key=g.index))


def subset_key(g: Graph, xs: Iterable[str]):
    """Deterministic sort key for vertex sets: size, then lexicographic."""
    idx = tuple(sorted(g.index(v) for v in xs))
    return (len(idx), idx)


# -- vertex classification --------------------------------------------------

SINK = "sink"
REGULAR = "regular"
INFINITE_EMITTER = "infinite-emitter"


def classify_vertex(g: Graph, v: str) -> str:
    out = g.out(v)
    if not out:
        return SINK
    if any(isinstance(b.multiplicity, OmegaType) for b in out):
        return INFINITE_EMITTER
    return REGULAR


def is_sink(g: Graph, v: str) -> bool:
    return classify_vertex(g, v) == SINK


def is_regular(g: Graph, v: str) -> bool:
    return classify_vertex(g, v) == REGULAR


def is_infinite_emitter(g: Graph, v: str) -> bool:
    return classify_vertex(g, v) == INFINITE_EMITTER


def out_count_into(g: Graph, v: str, targets: Iterable[str]) -> Card:
    """Number of edges from ``v`` landing in ``targets``, omega-absorbing."""
    targets = check_vertex_set(g, targets)
    return sum(b.multiplicity for b in g.out(v) if b.target in targets)


# -- reachability -----------------------------------------------------------

def reachable_from(g: Graph, v: str, within: Iterable[str] = None) -> VertexSet:
    """Vertices reachable from ``v`` (length-0 paths count).

    With ``within`` given, both ``v`` and every vertex on the walk must lie
    in ``within``; an empty result means ``v`` itself is outside.
    """
    g.index(v)
    allowed = None if within is None else check_vertex_set(g, within)
    if allowed is not None and v not in allowed:
        return frozenset()
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for b in g.out(u):
            t = b.target
            if t in seen:
                continue
            if allowed is not None and t not in allowed:
                continue
            seen.add(t)
            stack.append(t)
    return frozenset(seen)


def coreachable_to(g: Graph, targets: Iterable[str],
                   within: Iterable[str] = None) -> VertexSet:
    """Vertices from which ``targets`` can be reached, staying in ``within``."""
    targets = check_vertex_set(g, targets)
    allowed = None if within is None else check_vertex_set(g, within)
    seen = set(t for t in targets if allowed is None or t in allowed)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for b in g.into(u):
            s = b.source
            if s in seen:
                continue
            if allowed is not None and s not in allowed:
                continue
            seen.add(s)
            stack.append(s)
    return frozenset(seen)


def reaches(g: Graph, v: str, targets: Iterable[str]) -> bool:
    """True iff some finite path (length 0 allowed) leads from ``v`` into
    ``targets``."""
    targets = check_vertex_set(g, targets)
    return bool(reachable_from(g, v) & targets) if targets else False


def has_cycle_within(g: Graph, allowed: Iterable[str]) -> bool:
    """True iff the subgraph induced on ``allowed`` contains a cycle."""
    allowed = check_vertex_set(g, allowed)
    color = {}  # 1 = on stack, 2 = done

    def visit(u):
        color[u] = 1
        for b in g.out(u):
            t = b.target
            if t not in allowed:
                continue
            c = color.get(t)
            if c == 1:
                return True
            if c is None and visit(t):
                return True
        color[u] = 2
        return False

    for v in allowed:
        if v not in color and visit(v):
            return True
    return False


# -- hereditary / saturated sets --------------------------------------------

def is_hereditary(g: Graph, h: Iterable[str]) -> bool:
    h = check_vertex_set(g, h)
    return all(b.target in h for b in g.bundles if b.source in h)


def is_saturated(g: Graph, h: Iterable[str]) -> bool:
    """True iff every regular vertex all of whose edges land in ``h`` is in
    ``h``.  Sinks and infinite emitters impose no constraint.

    Raises ContractError when ``h`` is not hereditary; saturation is only
    defined for hereditary sets here.
    """
    h = check_vertex_set(g, h)
    if not is_hereditary(g, h):
        raise ContractError(f"set {sorted(h)} is not hereditary")
    for v in g.vertices:
        if v in h or classify_vertex(g, v) != REGULAR:
            continue
        if all(b.target in h for b in g.out(v)):
            return False
    return True


def hs_closure(g: Graph, seed: Iterable[str]) -> VertexSet:
    """Smallest hereditary and saturated set containing ``seed``."""
    current = set(check_vertex_set(g, seed))
    while True:
        added = False
        for b in g.bundles:
            if b.source in current and b.target not in current:
                current.add(b.target)
                added = True
        for v in g.vertices:
            if v in current or classify_vertex(g, v) != REGULAR:
                continue
            if all(b.target in current for b in g.out(v)):
                current.add(v)
                added = True
        if not added:
            return frozenset(current)


DEFAULT_VERTEX_CAP = 16
DEFAULT_BREAKING_CAP = 16


@lru_cache(maxsize=None)
def _enumerate_hs(g: Graph) -> Tuple[VertexSet, ...]:
    found = []
    verts = g.vertices
    for r in range(len(verts) + 1):
        for combo in itertools.combinations(verts, r):
            h = frozenset(combo)
            if is_hereditary(g, h) and is_saturated(g, h):
                found.append(h)
    found.sort(key=lambda h: subset_key(g, h))
    return tuple(found)


def enumerate_hs(g: Graph, max_vertices: int = DEFAULT_VERTEX_CAP
                 ) -> Tuple[VertexSet, ...]:
    """All hereditary saturated subsets, ordered by size then lexicographic.

    Always contains the empty set and the full vertex set.
    """
    if len(g.vertices) > max_vertices:
        raise ResourceLimitError(
            f"graph has {len(g.vertices)} vertices; the enumeration cap is "
            f"{max_vertices}", cap=max_vertices)
    return _enumerate_hs(g)


@lru_cache(maxsize=None)
def breaking_vertices(g: Graph, h: VertexSet) -> VertexSet:
    """Infinite emitters outside ``h`` with finitely many (at least one)
    edges landing outside ``h``."""
    h = check_vertex_set(g, h)
    if not is_hereditary(g, h) or not is_saturated(g, h):
        raise ContractError(
            f"set {sorted(h)} is not hereditary and saturated")
    outside = frozenset(g.vertices) - h
    result = set()
    for v in outside:
        if not is_infinite_emitter(g, v):
            continue
        n = out_count_into(g, v, outside)
        if isinstance(n, OmegaType) or n == 0:
            continue
        result.add(v)
    return frozenset(result)
