"""Decomposability of the path algebra, decided three ways.

1. Graph conditions: a nonempty proper hereditary saturated H such that no
   cycle outside H connects back to H and every omega emitter toward H is
   absorbed into H or its breaking set.
2. Existence of a nonempty proper clopen pair.
3. Compatible-path counting: disjoint H1, H2 such that every outside vertex
   starts at least one but finitely many compatible paths.

The three verdicts must agree on every graph; the test suite fuzzes that
agreement, and :func:`is_decomposable` hard-checks routes 1 and 2 against
each other on every call.

A *compatible path* for H ends in H and its last edge starts outside
H and the breaking set of H.  Path counting is weighted: a bundle-level
path counts with the product of its bundle multiplicities, omega absorbing,
and a cycle on a live route forces an infinite count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .boundary import EdgeRef, FinitePath, extend, path_range
from .clopen import complement_pair, cycle_condition, emitter_condition, is_clopen
from .errors import ContractError, InternalInvariantError
from .graphs import (Card, Graph, OMEGA, OmegaType, VertexSet,
                     breaking_vertices, check_vertex_set, coreachable_to,
                     enumerate_hs, is_finite, is_hereditary, is_saturated,
                     ordered, reachable_from)
from .lattice import bottom_pair, enumerate_pairs, top_pair
from .pairs import HSPair, hs_pair

DEFAULT_SAMPLE_CAP = 10
OMEGA_SAMPLE_INDICES = 2


@dataclass(frozen=True)
class DecompVerdict:
    decomposable: bool
    witness: Optional[HSPair] = None
    complement: Optional[HSPair] = None
    method: str = "thm53"


@dataclass(frozen=True)
class CompatCount:
    count: Card
    samples: Tuple[FinitePath, ...] = ()


def breaking_emitter_condition(g: Graph, h) -> Tuple[bool, Optional[str]]:
    """The emitter condition with S fixed to all breaking vertices of H."""
    h = check_vertex_set(g, h)
    return emitter_condition(g, h, breaking_vertices(g, h))


def is_decomposable(g: Graph, max_vertices: int = 16) -> DecompVerdict:
    """Search hereditary saturated sets for a witness satisfying both graph
    conditions; cross-check against the existence of a nonempty proper
    clopen pair.  The witness is the first hit in enumeration order."""
    full = frozenset(g.vertices)
    found: Optional[HSPair] = None
    for h in enumerate_hs(g, max_vertices):
        if not h or h == full:
            continue
        if cycle_condition(g, h)[0] and breaking_emitter_condition(g, h)[0]:
            found = hs_pair(g, h, breaking_vertices(g, h))
            break
    clopen_exists = False
    bot, top = bottom_pair(g), top_pair(g)
    for pair in enumerate_pairs(g, max_vertices):
        if pair == bot or pair == top:
            continue
        if is_clopen(g, pair).clopen:
            clopen_exists = True
            break
    if clopen_exists != (found is not None):
        raise InternalInvariantError(
            f"decomposability routes disagree: graph conditions say "
            f"{found is not None}, clopen-pair existence says {clopen_exists}")
    if found is None:
        return DecompVerdict(False)
    return DecompVerdict(True, witness=found,
                         complement=complement_pair(g, found),
                         method="thm53")


# -- weighted path counting ------------------------------------------------------

def _final_weights(g: Graph, allowed: VertexSet, final_sources: Iterable[str],
                   into: VertexSet) -> Dict[str, Card]:
    weights: Dict[str, Card] = {}
    for u in final_sources:
        total = sum(b.multiplicity for b in g.out(u) if b.target in into)
        if total != 0:
            weights[u] = total
    return weights


def _weighted_route_count(g: Graph, start: str, allowed: VertexSet,
                          weights: Dict[str, Card]) -> Card:
    """Total weight of walks start -> u (inside ``allowed``) times the final
    weight at u, summed over u; omega when a live route crosses a cycle or
    an omega bundle."""
    r1 = reachable_from(g, start, within=allowed)
    live = frozenset(u for u in weights if u in r1)
    if not live:
        return 0
    core = r1 & coreachable_to(g, live, within=allowed)
    if any(isinstance(weights[u], OmegaType) for u in live):
        return OMEGA
    for b in g.bundles:
        if (b.source in core and b.target in core
                and isinstance(b.multiplicity, OmegaType)):
            return OMEGA
    # cycle inside the live core => infinitely many walks
    index = {v: i for i, v in enumerate(core)}
    color = {}

    def has_cycle(u):
        color[u] = 1
        for b in g.out(u):
            t = b.target
            if t not in index:
                continue
            c = color.get(t)
            if c == 1 or (c is None and has_cycle(t)):
                return True
        color[u] = 2
        return False

    if any(v not in color and has_cycle(v) for v in core):
        return OMEGA
    # acyclic: count by dynamic programming in topological order
    order: List[str] = []
    seen = set()

    def topo(u):
        seen.add(u)
        for b in g.out(u):
            if b.target in index and b.target not in seen:
                topo(b.target)
        order.append(u)

    for v in core:
        if v not in seen:
            topo(v)
    order.reverse()
    ways = {v: 0 for v in core}
    ways[start] = 1
    for u in order:
        if not ways[u]:
            continue
        for b in g.out(u):
            if b.target in index:
                ways[b.target] += ways[u] * b.multiplicity
    return sum(ways[u] * weights[u] for u in live)


def count_paths_into(g: Graph, v: str, targets) -> Card:
    """Number of nontrivial finite paths from ``v`` whose terminal lies in
    ``targets``; no compatibility restriction, intermediate vertices free."""
    targets = check_vertex_set(g, targets)
    g.index(v)
    allowed = frozenset(g.vertices)
    weights = _final_weights(g, allowed, g.vertices, targets)
    return _weighted_route_count(g, v, allowed, weights)


def _compatible_weights(g: Graph, h: VertexSet) -> Dict[str, Card]:
    barred = h | breaking_vertices(g, h)
    return _final_weights(g, frozenset(g.vertices) - h,
                          (v for v in g.vertices if v not in barred), h)


def _enumerate_compatible(g: Graph, v: str, h: VertexSet, cap: int,
                          finite_total: bool) -> Tuple[FinitePath, ...]:
    """Edge-level compatible paths from ``v``, breadth-first by length.

    When the total count is finite the enumeration is exhaustive (so the
    caller sees min(count, cap) samples); otherwise omega bundles are
    sampled at the first indices and the walk length is capped.
    """
    barred = h | breaking_vertices(g, h)
    outside = frozenset(g.vertices) - h
    max_len = len(outside) + cap + 1
    out: List[FinitePath] = []
    frontier = [FinitePath(v)]
    length = 0
    while frontier and len(out) < cap and length <= max_len:
        nxt: List[FinitePath] = []
        for p in frontier:
            at = path_range(g, p)
            for b in g.out(at):
                if isinstance(b.multiplicity, OmegaType):
                    indices = range(OMEGA_SAMPLE_INDICES)
                else:
                    indices = range(b.multiplicity)
                if b.target in h:
                    if at in barred:
                        continue
                    for i in indices:
                        if len(out) < cap:
                            out.append(extend(g, p, EdgeRef(b.id, i)))
                elif b.target in outside:
                    for i in indices:
                        nxt.append(extend(g, p, EdgeRef(b.id, i)))
        frontier = nxt
        length += 1
    return tuple(out)


def compatible_count(g: Graph, v: str, h, sample_cap: int = DEFAULT_SAMPLE_CAP,
                     want_samples: bool = True) -> CompatCount:
    """Count compatible paths from ``v``: walks through vertices outside H
    followed by one edge into H whose source is neither in H nor a breaking
    vertex.  Returns omega when a cycle or an omega bundle lies on a live
    route."""
    h = check_vertex_set(g, h)
    if not is_hereditary(g, h) or not is_saturated(g, h):
        raise ContractError(f"H={sorted(h)} must be hereditary and saturated")
    if v in h:
        raise ContractError(f"vertex {v!r} must lie outside H")
    g.index(v)
    weights = _compatible_weights(g, h)
    count = _weighted_route_count(g, v, frozenset(g.vertices) - h, weights)
    samples: Tuple[FinitePath, ...] = ()
    if want_samples and count != 0:
        samples = _enumerate_compatible(g, v, h, sample_cap, is_finite(count))
    return CompatCount(count, samples)


def has_infinite_compatible(g: Graph, v: str, h) -> bool:
    """Does ``v`` start infinitely many compatible paths?"""
    return isinstance(
        compatible_count(g, v, h, want_samples=False).count, OmegaType)


def compatible_successor_edge(g: Graph, v: str, h) -> EdgeRef:
    """Step along edges preserving an infinite compatible count.

    Requires the emitter condition for H (with its full breaking set),
    ``v`` outside H, and infinitely many compatible paths from ``v``; then
    some edge leads to a target outside H with the same infinity.  Iterating
    the step must revisit a vertex, exposing the cycle that contradicts the
    cycle condition; the function exists as a hook for that property test.
    """
    h = check_vertex_set(g, h)
    if not is_hereditary(g, h) or not is_saturated(g, h):
        raise ContractError(f"H={sorted(h)} must be hereditary and saturated")
    if v in h:
        raise ContractError(f"vertex {v!r} must lie outside H")
    ok_b, bad = breaking_emitter_condition(g, h)
    if not ok_b:
        raise ContractError(
            f"the emitter condition fails for H={sorted(h)} at {bad!r}")
    if not has_infinite_compatible(g, v, h):
        raise ContractError(
            f"vertex {v!r} does not start infinitely many compatible paths")
    for b in g.out(v):
        if b.target not in h and has_infinite_compatible(g, b.target, h):
            return EdgeRef(b.id, 0)
    raise InternalInvariantError(
        f"no successor edge at {v!r} despite an infinite compatible count")


def split_by_compatible_paths(g: Graph, max_vertices: int = 16
                              ) -> Tuple[bool, Optional[Tuple[VertexSet, VertexSet]]]:
    """Decomposability via compatible-path counting: disjoint nonempty
    hereditary saturated H1, H2 such that every vertex outside both starts
    at least one but finitely many compatible paths (toward either side).
    Returns the first witness pair in enumeration order."""
    sets = [h for h in enumerate_hs(g, max_vertices)
            if h and h != frozenset(g.vertices)]
    memo: Dict[Tuple[str, VertexSet], Card] = {}

    def count(v, h):
        key = (v, h)
        if key not in memo:
            memo[key] = compatible_count(g, v, h, want_samples=False).count
        return memo[key]

    for h1 in sets:
        for h2 in sets:
            if h1 & h2:
                continue
            ok = True
            for v in g.vertices:
                if v in h1 or v in h2:
                    continue
                total = count(v, h1) + count(v, h2)
                if total == 0 or isinstance(total, OmegaType):
                    ok = False
                    break
            if ok:
                return True, (h1, h2)
    return False, None


def naive_path_count_check(g: Graph, h1, h2) -> Tuple[bool, Optional[str]]:
    """The disproved naive criterion, kept for demonstration: every vertex
    outside H1 and H2 has at least one but finitely many paths into their
    union, with no compatibility restriction.  Returns an offending vertex
    on failure.  A graph can be decomposable while this check fails."""
    h1 = check_vertex_set(g, h1)
    h2 = check_vertex_set(g, h2)
    for h in (h1, h2):
        if not is_hereditary(g, h) or not is_saturated(g, h):
            raise ContractError(
                f"H={sorted(h)} must be hereditary and saturated")
    if not h1 or not h2 or h1 & h2:
        raise ContractError("the two sets must be nonempty and disjoint")
    union = h1 | h2
    for v in g.vertices:
        if v in union:
            continue
        n = count_paths_into(g, v, union)
        if n == 0 or isinstance(n, OmegaType):
            return False, v
    return True, None
