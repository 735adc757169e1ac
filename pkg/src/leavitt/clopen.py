"""When is the open invariant set of a pair also closed?

Two graph conditions decide it.  The infinite-path condition reduces, on a
finite bundle graph, to the absence of a simple cycle that avoids H yet
connects to H; the infinite-edge condition reduces to inspecting omega
bundles.  Both reductions are validated against depth-bounded brute force in
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .boundary import (Cylinder, EdgeRef, FinitePath, cylinder_in_complement,
                       membership, path_range, vertex_point)
from .errors import ContractError, InternalInvariantError
from .graphs import (Graph, OmegaType, VertexSet, breaking_vertices,
                     check_vertex_set, is_hereditary, is_infinite_emitter,
                     is_saturated, reaches)
from .pairs import HSPair, check_pair, hs_pair


@dataclass(frozen=True)
class ClopenVerdict:
    clopen: bool
    #: "cond_i" (escaping cycle) or "cond_ii" (unabsorbed omega emitter)
    failing_condition: Optional[str] = None
    witness_cycle: Optional[FinitePath] = None
    witness_vertex: Optional[str] = None


def _check_hs(g: Graph, h) -> VertexSet:
    h = check_vertex_set(g, h)
    if not is_hereditary(g, h) or not is_saturated(g, h):
        raise ContractError(f"H={sorted(h)} must be hereditary and saturated")
    return h


def _simple_cycles_outside(g: Graph, h: VertexSet):
    """Simple cycles avoiding ``h``, each rooted at its first vertex in
    declaration order; deterministic enumeration."""
    verts = [v for v in g.vertices if v not in h]
    pos = {v: i for i, v in enumerate(verts)}
    for root in verts:
        stack = [(root, FinitePath(root))]
        while stack:
            at, path = stack.pop()
            for b in reversed(g.out(at)):
                t = b.target
                if t in h or pos.get(t, -1) < pos[root]:
                    continue
                q = FinitePath(root, path.edges + (EdgeRef(b.id, 0),))
                if t == root:
                    yield q
                elif t not in {g.bundle(r.bundle).source for r in q.edges}:
                    stack.append((t, q))


def cycle_condition(g: Graph, h) -> Tuple[bool, Optional[FinitePath]]:
    """True iff every infinite path avoiding ``h`` eventually loses all
    connection to ``h``; equivalently, no simple cycle outside ``h``
    reaches ``h``.  A failing verdict carries the first such cycle."""
    h = _check_hs(g, h)
    for cycle in _simple_cycles_outside(g, h):
        if reaches(g, cycle.start, h):
            return False, cycle
    return True, None


def emitter_condition(g: Graph, h, s) -> Tuple[bool, Optional[str]]:
    """True iff every vertex emitting infinitely many edges toward
    ``h``-reaching targets lies in ``h`` or ``s``.  Infinitely many such
    edges means an omega bundle whose target reaches ``h``."""
    pair = hs_pair(g, h, s)
    for v in g.vertices:
        if v in pair.h or v in pair.s:
            continue
        for b in g.out(v):
            if isinstance(b.multiplicity, OmegaType) and reaches(g, b.target, pair.h):
                return False, v
    return True, None


def is_clopen(g: Graph, pair: HSPair) -> ClopenVerdict:
    check_pair(g, pair)
    ok_i, cyc = cycle_condition(g, pair.h)
    if not ok_i:
        return ClopenVerdict(False, "cond_i", witness_cycle=cyc)
    ok_ii, v = emitter_condition(g, pair.h, pair.s)
    if not ok_ii:
        return ClopenVerdict(False, "cond_ii", witness_vertex=v)
    return ClopenVerdict(True)


def clopen_forces_full_breaking(g: Graph, pair: HSPair) -> bool:
    """Theorem check: a clopen pair must carry every breaking vertex.
    Expected true on every input; a false return is a library bug."""
    check_pair(g, pair)
    if not is_clopen(g, pair).clopen:
        return True
    return pair.s == breaking_vertices(g, pair.h)


def complement_pair(g: Graph, pair: HSPair) -> HSPair:
    """The pair of the complement of a clopen pair's open set.

    Computed by recovering (H, S) from the complement membership predicate;
    the closed form ``H' = vertices that cannot reach H`` is kept as a
    cross-check.
    """
    check_pair(g, pair)
    if not is_clopen(g, pair).clopen:
        raise ContractError(
            f"complement is only defined for clopen pairs; {pair.label()} "
            f"is not clopen")
    h2 = frozenset(
        v for v in g.vertices
        if cylinder_in_complement(g, Cylinder(FinitePath(v)), pair))
    s2 = frozenset(
        w for w in g.vertices
        if w not in h2 and is_infinite_emitter(g, w)
        and not membership(g, pair, vertex_point(g, w)))
    closed_form = frozenset(
        v for v in g.vertices if not reaches(g, v, pair.h))
    if h2 != closed_form:
        raise InternalInvariantError(
            f"complement of {pair.label()}: predicate route gave "
            f"H'={sorted(h2)}, closed form gave {sorted(closed_form)}")
    try:
        return hs_pair(g, h2, s2)
    except ContractError as exc:
        raise InternalInvariantError(
            f"complement of {pair.label()} is not a valid pair: {exc}"
        ) from exc
