"""The boundary-path space: finite paths ending at sinks or infinite
emitters, plus lassos standing for eventually periodic infinite paths.

Membership of a boundary path in the open invariant set of a pair only
depends on the set of visited vertices plus, for finite paths, the terminal
vertex; this is what makes the finite canonical family below a faithful test
surface.

Text forms (used by the CLI and reports):
  finite   ``u:e,f``       start vertex, comma-separated edges
  lasso    ``u:e|c1,c2``   ``|`` separates stem from cycle
  edges    ``e`` or ``e[3]``; index 0 may be elided
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

from .errors import ContractError, InputError
from .graphs import (INFINITE_EMITTER, OmegaType, Graph, SINK, VertexSet,
                     classify_vertex, has_cycle_within)
from .pairs import (HSPair, INTERSECTION, InvariantOpen, UNION, check_pair,
                    merged_union_sets, union_open)


@dataclass(frozen=True)
class EdgeRef:
    """A single edge inside a bundle: ``(bundle id, index)``.

    Any natural index is permitted for omega bundles; finite bundles require
    ``index < multiplicity``.
    """

    bundle: str
    index: int = 0


@dataclass(frozen=True)
class FinitePath:
    """A finite path: start vertex plus a chained tuple of edge refs.
    An empty tuple is the length-0 path at ``start``."""

    start: str
    edges: Tuple[EdgeRef, ...] = ()

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class BoundaryPath:
    """Either a finite boundary path (``cycle is None``; the stem's terminal
    must be a sink or infinite emitter) or a lasso ``stem . cycle^infinity``."""

    stem: FinitePath
    cycle: Optional[FinitePath] = None

    @property
    def is_lasso(self) -> bool:
        return self.cycle is not None


@dataclass(frozen=True)
class Cylinder:
    """The basis set of boundary paths extending ``base``, minus those whose
    first extension step lies in ``excluded``."""

    base: FinitePath
    excluded: frozenset = frozenset()


# -- path validation and simple operations -----------------------------------

def check_edge_ref(g: Graph, ref: EdgeRef) -> EdgeRef:
    b = g.bundle(ref.bundle)
    if not isinstance(ref.index, int) or ref.index < 0:
        raise InputError(f"edge index must be a natural number: {ref!r}")
    m = b.multiplicity
    if not isinstance(m, OmegaType) and ref.index >= m:
        raise InputError(
            f"edge {ref.bundle}[{ref.index}] exceeds multiplicity {m}")
    return ref


def check_path(g: Graph, p: FinitePath) -> FinitePath:
    at = p.start
    g.index(at)
    for ref in p.edges:
        check_edge_ref(g, ref)
        b = g.bundle(ref.bundle)
        if b.source != at:
            raise InputError(
                f"edge {ref.bundle} starts at {b.source!r}, expected {at!r}")
        at = b.target
    return p


def path_range(g: Graph, p: FinitePath) -> str:
    if not p.edges:
        return p.start
    return g.bundle(p.edges[-1].bundle).target


def path_vertices(g: Graph, p: FinitePath) -> Tuple[str, ...]:
    """Visited vertices in order, the start included."""
    out = [p.start]
    for ref in p.edges:
        out.append(g.bundle(ref.bundle).target)
    return tuple(out)


def extend(g: Graph, p: FinitePath, ref: EdgeRef) -> FinitePath:
    b = g.bundle(ref.bundle)
    if b.source != path_range(g, p):
        raise InputError(
            f"cannot extend a path ending at {path_range(g, p)!r} "
            f"with edge {ref.bundle!r} from {b.source!r}")
    return FinitePath(p.start, p.edges + (ref,))


def concat(g: Graph, p: FinitePath, q: FinitePath) -> FinitePath:
    if q.start != path_range(g, p):
        raise InputError(
            f"paths do not chain: {path_range(g, p)!r} vs {q.start!r}")
    return FinitePath(p.start, p.edges + q.edges)


def finite_boundary(g: Graph, p: FinitePath) -> BoundaryPath:
    check_path(g, p)
    kind = classify_vertex(g, path_range(g, p))
    if kind not in (SINK, INFINITE_EMITTER):
        raise InputError(
            f"finite boundary paths must end at a sink or infinite emitter; "
            f"{path_range(g, p)!r} is {kind}")
    return BoundaryPath(p)


def lasso(g: Graph, stem: FinitePath, cycle: FinitePath) -> BoundaryPath:
    check_path(g, stem)
    check_path(g, cycle)
    if not cycle.edges:
        raise InputError("a lasso needs a nonempty cycle")
    w = path_range(g, stem)
    if cycle.start != w or path_range(g, cycle) != w:
        raise InputError(
            f"cycle must start and end at the stem range {w!r}")
    return BoundaryPath(stem, cycle)


def check_boundary(g: Graph, x: BoundaryPath) -> BoundaryPath:
    if x.is_lasso:
        return lasso(g, x.stem, x.cycle)
    return finite_boundary(g, x.stem)


def vertex_point(g: Graph, v: str) -> BoundaryPath:
    """The length-0 boundary path at ``v`` (``v`` must be a sink or
    infinite emitter)."""
    return finite_boundary(g, FinitePath(v))


def boundary_vertices(g: Graph, x: BoundaryPath) -> VertexSet:
    """All vertices the path visits; for a lasso, stem plus cycle."""
    check_boundary(g, x)
    vs = set(path_vertices(g, x.stem))
    if x.is_lasso:
        vs.update(path_vertices(g, x.cycle))
    return frozenset(vs)


def check_cylinder(g: Graph, c: Cylinder) -> Cylinder:
    check_path(g, c.base)
    r = path_range(g, c.base)
    for ref in c.excluded:
        check_edge_ref(g, ref)
        if g.bundle(ref.bundle).source != r:
            raise InputError(
                f"excluded edge {ref.bundle!r} does not start at the "
                f"cylinder range {r!r}")
    return c


# -- membership ---------------------------------------------------------------

def membership(g: Graph, pair: HSPair, x: BoundaryPath) -> bool:
    """Is ``x`` in the open invariant set of ``pair``?

    True iff some visited vertex lies in ``pair.h`` (the source counts), or
    ``x`` is finite with terminal in ``pair.s``.  Lassos never qualify
    through ``s``.
    """
    check_pair(g, pair)
    if boundary_vertices(g, x) & pair.h:
        return True
    if not x.is_lasso:
        return path_range(g, x.stem) in pair.s
    return False


def open_membership(g: Graph, u: InvariantOpen, x: BoundaryPath) -> bool:
    if u.kind == UNION:
        return any(membership(g, p, x) for p in u.parts)
    return all(membership(g, p, x) for p in u.parts)


def brute_membership(g: Graph, pair: HSPair, x: BoundaryPath,
                     depth: int) -> bool:
    """Independent oracle: literally unroll ``x`` for ``depth`` edges and
    apply the defining conditions to the recorded itinerary.

    Agrees with :func:`membership` whenever ``depth`` covers the stem of a
    lasso or the whole of a finite path; ``depth >= |vertices| + 1`` covers
    every canonical-family point.
    """
    if depth < 1:
        raise ContractError("depth must be at least 1")
    check_pair(g, pair)
    check_boundary(g, x)
    itinerary = [x.stem.start]
    edges = list(x.stem.edges)
    if x.is_lasso:
        while len(edges) < depth:
            edges.extend(x.cycle.edges)
    for ref in edges[:depth]:
        itinerary.append(g.bundle(ref.bundle).target)
    if any(v in pair.h for v in itinerary):
        return True
    if not x.is_lasso:
        return path_range(g, x.stem) in pair.s
    return False


# -- canonical family ---------------------------------------------------------

def _paths_from(g: Graph, v: str, max_len: int):
    """All index-0 finite paths from ``v`` of length <= max_len, shortest
    first; deterministic in bundle declaration order."""
    frontier = [FinitePath(v)]
    yield FinitePath(v)
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for b in g.out(path_range(g, p)):
                q = FinitePath(v, p.edges + (EdgeRef(b.id, 0),))
                nxt.append(q)
                yield q
        frontier = nxt


def _path_sort_key(g: Graph, p: FinitePath):
    return (len(p.edges), g.index(p.start),
            tuple((g.bundle_order(r.bundle), r.index) for r in p.edges))


@lru_cache(maxsize=None)
def _canonical_family(g: Graph, max_len: int) -> Tuple[BoundaryPath, ...]:
    finite = []
    lassos = []
    for v in g.vertices:
        for p in _paths_from(g, v, max_len):
            r = path_range(g, p)
            if classify_vertex(g, r) in (SINK, INFINITE_EMITTER):
                finite.append(BoundaryPath(p))
            for c in _paths_from(g, r, max_len):
                if c.edges and path_range(g, c) == r:
                    lassos.append(BoundaryPath(p, c))
    finite.sort(key=lambda x: _path_sort_key(g, x.stem))
    lassos.sort(key=lambda x: (len(x.stem.edges) + len(x.cycle.edges),
                               _path_sort_key(g, x.stem),
                               _path_sort_key(g, x.cycle)))
    return tuple(finite + lassos)


def canonical_family(g: Graph, max_len: int) -> Tuple[BoundaryPath, ...]:
    """Finite separating test family: every finite boundary path of length
    <= max_len and every lasso with stem and cycle length <= max_len, one
    representative edge (index 0) per bundle.

    Requires ``max_len >= |vertices| + 1``; at that size the family
    distinguishes every two distinct pairs (a separating escape path needs at
    most |vertices| edges before it terminates or closes a cycle).
    """
    if max_len < len(g.vertices) + 1:
        raise ContractError(
            f"max_len={max_len} is below |vertices|+1 = {len(g.vertices) + 1}")
    return _canonical_family(g, max_len)


def default_family(g: Graph) -> Tuple[BoundaryPath, ...]:
    return canonical_family(g, len(g.vertices) + 1)


# -- cylinder decision procedures ---------------------------------------------

def _fully_excluded(c: Cylinder, bundle_id: str, multiplicity) -> bool:
    """True iff every edge of the bundle is excluded at the cylinder mouth."""
    if isinstance(multiplicity, OmegaType):
        return False
    hit = {r.index for r in c.excluded if r.bundle == bundle_id}
    return len(hit) >= multiplicity


def _mouth_sets(g: Graph, c: Cylinder, avoid: VertexSet):
    """Vertices visited by extensions of the cylinder staying outside
    ``avoid``.

    Returns ``(region, mids)``: ``region`` is the mouth vertex plus
    everything reachable through a non-fully-excluded first step followed by
    arbitrary ``avoid``-free steps; ``mids`` is the part reachable after at
    least one step.  Exclusions constrain only the first step, so a revisited
    mouth re-enters through ``mids`` with unrestricted out-edges, and cycle
    detection on ``mids`` alone is exact.
    """
    r0 = path_range(g, c.base)
    mids = set()
    stack = []
    for b in g.out(r0):
        t = b.target
        if t in avoid or t in mids:
            continue
        if _fully_excluded(c, b.id, b.multiplicity):
            continue
        mids.add(t)
        stack.append(t)
    while stack:
        u = stack.pop()
        for b in g.out(u):
            t = b.target
            if t in avoid or t in mids:
                continue
            mids.add(t)
            stack.append(t)
    return frozenset(mids | {r0}), frozenset(mids)


def cylinder_subset(g: Graph, c: Cylinder, u: InvariantOpen) -> bool:
    """Decide whether every boundary path in the cylinder belongs to ``u``.

    For an intersection this is the conjunction over components.  For a
    union with merged sets (h, s): true iff the base touches h, or the
    h-avoiding region reachable from the mouth has no sink, no cycle, and
    every infinite emitter in it (the mouth included) lies in s.
    """
    check_cylinder(g, c)
    if u.kind == INTERSECTION:
        return all(cylinder_subset(g, c, union_open(p)) for p in u.parts)
    h, s = merged_union_sets(u)
    if set(path_vertices(g, c.base)) & h:
        return True
    region, mids = _mouth_sets(g, c, avoid=h)
    for v in region:
        kind = classify_vertex(g, v)
        if kind == SINK:
            return False
        if kind == INFINITE_EMITTER and v not in s:
            return False
    if has_cycle_within(g, mids):
        return False
    return True


def cylinder_in_complement(g: Graph, c: Cylinder, pair: HSPair) -> bool:
    """Decide whether the cylinder misses the open set of ``pair`` entirely:
    no extension may visit ``pair.h`` or stop at an emitter in ``pair.s``."""
    check_cylinder(g, c)
    check_pair(g, pair)
    if set(path_vertices(g, c.base)) & pair.h:
        return False
    region, _ = _mouth_sets(g, c, avoid=frozenset())
    return not (region & (pair.h | pair.s))


# -- text forms ---------------------------------------------------------------

_REF_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?\Z")


def format_edge_ref(ref: EdgeRef) -> str:
    if ref.index == 0:
        return ref.bundle
    return f"{ref.bundle}[{ref.index}]"


def parse_edge_ref(g: Graph, text: str) -> EdgeRef:
    m = _REF_RE.match(text.strip())
    if not m:
        raise InputError(f"bad edge reference {text!r}")
    ref = EdgeRef(m.group(1), int(m.group(2) or 0))
    return check_edge_ref(g, ref)


def format_path(p: FinitePath) -> str:
    return f"{p.start}:" + ",".join(format_edge_ref(r) for r in p.edges)


def parse_path(g: Graph, text: str) -> FinitePath:
    head, sep, rest = text.partition(":")
    if not sep:
        raise InputError(f"bad path {text!r}: missing ':'")
    start = head.strip()
    g.index(start)
    refs = []
    rest = rest.strip()
    if rest:
        refs = [parse_edge_ref(g, tok) for tok in rest.split(",")]
    return check_path(g, FinitePath(start, tuple(refs)))


def format_boundary(x: BoundaryPath) -> str:
    if not x.is_lasso:
        return format_path(x.stem)
    stem = format_path(x.stem)
    cyc = ",".join(format_edge_ref(r) for r in x.cycle.edges)
    return f"{stem}|{cyc}"


def parse_boundary(g: Graph, text: str) -> BoundaryPath:
    if "|" not in text:
        return finite_boundary(g, parse_path(g, text))
    stem_text, _, cyc_text = text.partition("|")
    stem = parse_path(g, stem_text)
    w = path_range(g, stem)
    refs = [parse_edge_ref(g, tok) for tok in cyc_text.strip().split(",")]
    cyc = check_path(g, FinitePath(w, tuple(refs)))
    return lasso(g, stem, cyc)
