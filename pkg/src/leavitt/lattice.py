"""The lattice of pairs (H, S) and its isomorphism with the lattice of open
invariant subsets of the boundary-path space.

The forward map sends a pair to its open set (by membership semantics); the
inverse recovers H as the vertices whose whole cylinder lies inside, and S
as the infinite emitters outside H whose length-0 path is a member.  Joins
and meets are computed by transporting union/intersection through the
inverse map, which sidesteps the awkward explicit join formula on pairs; an
order-theoretic least-upper-bound check cross-validates the result whenever
enumeration is feasible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .boundary import (BoundaryPath, Cylinder, FinitePath, canonical_family,
                       cylinder_subset, membership, open_membership,
                       path_range, path_vertices, vertex_point)
from .errors import ContractError, InputError, InternalInvariantError, ResourceLimitError
from .graphs import (DEFAULT_BREAKING_CAP, DEFAULT_VERTEX_CAP, Graph,
                     breaking_vertices, enumerate_hs, is_infinite_emitter,
                     ordered, subset_key)
from .pairs import (HSPair, InvariantOpen, check_pair, hs_pair,
                    intersection_open, merged_union_sets, union_open)


def pair_leq(a: HSPair, b: HSPair) -> bool:
    """Lattice order: ``a.h`` inside ``b.h`` and ``a.s`` inside
    ``b.s | b.h``."""
    if a.graph != b.graph:
        raise InputError("cannot compare pairs over different graphs")
    return a.h <= b.h and a.s <= (b.s | b.h)


@lru_cache(maxsize=None)
def _enumerate_pairs(g: Graph, max_vertices: int, max_breaking: int
                     ) -> Tuple[HSPair, ...]:
    out = []
    for h in enumerate_hs(g, max_vertices):
        b = breaking_vertices(g, h)
        if len(b) > max_breaking:
            raise ResourceLimitError(
                f"H={sorted(h)} has {len(b)} breaking vertices; the cap is "
                f"{max_breaking}", cap=max_breaking)
        border = ordered(g, b)
        subsets = []
        for r in range(len(border) + 1):
            for combo in itertools.combinations(border, r):
                subsets.append(frozenset(combo))
        subsets.sort(key=lambda s: subset_key(g, s))
        for s in subsets:
            out.append(HSPair(g, h, s))
    return tuple(out)


def enumerate_pairs(g: Graph, max_vertices: int = DEFAULT_VERTEX_CAP,
                    max_breaking: int = DEFAULT_BREAKING_CAP
                    ) -> Tuple[HSPair, ...]:
    """Every pair (H, S): H hereditary saturated, S over subsets of the
    breaking vertices of H.  Deterministic order: H as in
    :func:`enumerate_hs`, then S by size and lexicographic position."""
    return _enumerate_pairs(g, max_vertices, max_breaking)


def bottom_pair(g: Graph) -> HSPair:
    return HSPair(g, frozenset(), frozenset())


def top_pair(g: Graph) -> HSPair:
    return HSPair(g, frozenset(g.vertices), frozenset())


def open_of_pair(pair: HSPair) -> InvariantOpen:
    """The open invariant set with membership semantics of the pair."""
    check_pair(pair.graph, pair)
    return union_open(pair)


def pair_of_open(g: Graph, u: InvariantOpen) -> HSPair:
    """Recover the pair of an invariant open set.

    H collects the vertices whose full cylinder is contained in the set; S
    the infinite emitters outside H whose length-0 path is a member.  The
    result always lands in the pair lattice; if validation fails the library
    itself is wrong, hence the internal error.
    """
    h = frozenset(v for v in g.vertices
                  if cylinder_subset(g, Cylinder(FinitePath(v)), u))
    s = frozenset(
        w for w in g.vertices
        if w not in h and is_infinite_emitter(g, w)
        and open_membership(g, u, vertex_point(g, w)))
    try:
        return hs_pair(g, h, s)
    except (ContractError, InputError) as exc:
        raise InternalInvariantError(
            f"recovered pair (H={sorted(h)}, S={sorted(s)}) is invalid: {exc}"
        ) from exc


# -- join / meet ---------------------------------------------------------------

_JOIN_CHECK_LIMIT = 256


@lru_cache(maxsize=None)
def _join_by_merge(g: Graph, h, s) -> HSPair:
    # Union membership only depends on the merged sets, so the recovered
    # pair can be cached on them.
    probe = HSPair(g, h, s)
    return pair_of_open(g, union_open(probe))


def _order_cross_check(g: Graph, result: HSPair, a: HSPair, b: HSPair,
                       upper: bool):
    try:
        pairs = enumerate_pairs(g)
    except ResourceLimitError:
        return
    if len(pairs) > _JOIN_CHECK_LIMIT:
        return
    if upper:
        bounds = [c for c in pairs if pair_leq(a, c) and pair_leq(b, c)]
        extreme = [c for c in bounds
                   if all(pair_leq(c, d) for d in bounds)]
    else:
        bounds = [c for c in pairs if pair_leq(c, a) and pair_leq(c, b)]
        extreme = [c for c in bounds
                   if all(pair_leq(d, c) for d in bounds)]
    kind = "least upper bound" if upper else "greatest lower bound"
    if extreme != [result]:
        raise InternalInvariantError(
            f"{kind} disagreement for {a.label()} and {b.label()}: "
            f"transport gave {result.label()}, order gave "
            f"{[p.label() for p in extreme]}")


def join(a: HSPair, b: HSPair, check: bool = True) -> HSPair:
    """Least upper bound, computed by recovering the pair of the union."""
    if a.graph != b.graph:
        raise InputError("cannot join pairs over different graphs")
    g = a.graph
    result = _join_by_merge(g, a.h | b.h, a.s | b.s)
    if check:
        _order_cross_check(g, result, a, b, upper=True)
    return result


def meet(a: HSPair, b: HSPair, check: bool = True) -> HSPair:
    """Greatest lower bound, via the pair of the intersection."""
    if a.graph != b.graph:
        raise InputError("cannot meet pairs over different graphs")
    g = a.graph
    result = pair_of_open(g, intersection_open(a, b))
    if check:
        _order_cross_check(g, result, a, b, upper=False)
    return result


# -- verification report --------------------------------------------------------

_ASSOC_FULL_LIMIT = 40
_ASSOC_SAMPLE = 20000


@dataclass
class LatticeReport:
    """Outcome of the four lattice-correspondence checks."""

    pair_count: int
    family_size: int
    roundtrip_ok: bool
    order_ok: bool
    injective_ok: bool
    axioms_ok: bool
    associativity_sampled: bool
    failures: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (self.roundtrip_ok and self.order_ok and self.injective_ok
                and self.axioms_ok)

    def summary(self) -> str:
        parts = [
            f"pairs={self.pair_count}",
            f"family={self.family_size}",
            f"roundtrip={'ok' if self.roundtrip_ok else 'FAIL'}",
            f"order={'ok' if self.order_ok else 'FAIL'}",
            f"injective={'ok' if self.injective_ok else 'FAIL'}",
            f"axioms={'ok' if self.axioms_ok else 'FAIL'}"
            + ("(sampled)" if self.associativity_sampled else ""),
        ]
        return "; ".join(parts)


def _membership_masks(g: Graph, pairs, family):
    """Bit masks of family membership per pair.

    Uses integer bit sets over vertices for speed; the semantics is exactly
    :func:`leavitt.boundary.membership` (visited-set meets H, or finite with
    terminal in S), which the test suite cross-checks.
    """
    vbit = {v: 1 << i for i, v in enumerate(g.vertices)}
    points = []
    for x in family:
        visited = 0
        for v in path_vertices(g, x.stem):
            visited |= vbit[v]
        if x.is_lasso:
            for v in path_vertices(g, x.cycle):
                visited |= vbit[v]
            terminal = -1
        else:
            terminal = g.index(path_range(g, x.stem))
        points.append((visited, terminal))
    masks = []
    for p in pairs:
        hmask = 0
        for v in p.h:
            hmask |= vbit[v]
        sbits = 0
        for v in p.s:
            sbits |= 1 << g.index(v)
        m = 0
        for i, (visited, terminal) in enumerate(points):
            if visited & hmask:
                m |= 1 << i
            elif terminal >= 0 and (sbits >> terminal) & 1:
                m |= 1 << i
        masks.append(m)
    return masks


def check_lattice_correspondence(g: Graph, family_len: Optional[int] = None
                                 ) -> LatticeReport:
    """Verify, over the whole enumerated pair lattice:

    1. recovering the pair of each pair's open set is the identity;
    2. the lattice order coincides with pointwise membership implication on
       the canonical family, in both directions;
    3. distinct pairs have distinct membership vectors;
    4. join/meet satisfy the lattice axioms and are the order-theoretic
       least upper/greatest lower bounds.
    """
    pairs = enumerate_pairs(g)
    n = len(pairs)
    family = canonical_family(g, family_len or (len(g.vertices) + 1))
    failures = []

    # (1) round trip
    roundtrip_ok = True
    for p in pairs:
        back = pair_of_open(g, union_open(p))
        if back != p:
            roundtrip_ok = False
            failures.append(
                f"roundtrip: {p.label()} came back as {back.label()}")

    # membership vectors
    masks = _membership_masks(g, pairs, family)

    # (2) order versus pointwise implication
    order_ok = True
    leq = [[False] * n for _ in range(n)]
    for i, a in enumerate(pairs):
        for j, b in enumerate(pairs):
            lo = pair_leq(a, b)
            leq[i][j] = lo
            implies = (masks[i] & ~masks[j]) == 0
            if lo != implies:
                order_ok = False
                failures.append(
                    f"order: {a.label()} <= {b.label()} is {lo} but "
                    f"family implication is {implies}")

    # (3) injectivity
    injective_ok = len(set(masks)) == n
    if not injective_ok:
        seen = {}
        for i, m in enumerate(masks):
            if m in seen:
                failures.append(
                    f"injectivity: {pairs[seen[m]].label()} and "
                    f"{pairs[i].label()} have equal membership vectors")
            else:
                seen[m] = i

    # (4) lattice axioms on the transported join/meet
    index_of = {p: i for i, p in enumerate(pairs)}
    up_mask = [0] * n
    down_mask = [0] * n
    for i in range(n):
        for j in range(n):
            if leq[i][j]:
                up_mask[i] |= 1 << j
                down_mask[j] |= 1 << i
    jt = [[0] * n for _ in range(n)]
    mt = [[0] * n for _ in range(n)]
    axioms_ok = True
    for i in range(n):
        for j in range(i, n):
            ji = index_of[join(pairs[i], pairs[j], check=False)]
            mi = index_of[meet(pairs[i], pairs[j], check=False)]
            jt[i][j] = jt[j][i] = ji
            mt[i][j] = mt[j][i] = mi
            # least upper bound: an upper bound below every upper bound
            ub = up_mask[i] & up_mask[j]
            if not (ub >> ji) & 1 or (ub & down_mask[ji]) != (1 << ji):
                axioms_ok = False
                failures.append(
                    f"join of {pairs[i].label()} and {pairs[j].label()} "
                    f"is not the least upper bound")
            lb = down_mask[i] & down_mask[j]
            if not (lb >> mi) & 1 or (lb & up_mask[mi]) != (1 << mi):
                axioms_ok = False
                failures.append(
                    f"meet of {pairs[i].label()} and {pairs[j].label()} "
                    f"is not the greatest lower bound")
    # absorption
    for i in range(n):
        for j in range(n):
            if jt[i][mt[i][j]] != i or mt[i][jt[i][j]] != i:
                axioms_ok = False
                failures.append(
                    f"absorption fails at {pairs[i].label()}, "
                    f"{pairs[j].label()}")
    # associativity, sampled above the size limit
    sampled = n > _ASSOC_FULL_LIMIT
    if sampled:
        total = n * n * n
        stride = max(1, total // _ASSOC_SAMPLE)
        triples = ((t // (n * n), (t // n) % n, t % n)
                   for t in range(0, total, stride))
    else:
        triples = itertools.product(range(n), repeat=3)
    for i, j, k in triples:
        if jt[jt[i][j]][k] != jt[i][jt[j][k]]:
            axioms_ok = False
            failures.append(
                f"join associativity fails at indices {(i, j, k)}")
        if mt[mt[i][j]][k] != mt[i][mt[j][k]]:
            axioms_ok = False
            failures.append(
                f"meet associativity fails at indices {(i, j, k)}")

    return LatticeReport(
        pair_count=n, family_size=len(family), roundtrip_ok=roundtrip_ok,
        order_ok=order_ok, injective_ok=injective_ok, axioms_ok=axioms_ok,
        associativity_sampled=sampled, failures=tuple(failures))


# -- Hasse diagram ---------------------------------------------------------------

def covering_relations(g: Graph) -> Tuple[Tuple[HSPair, HSPair], ...]:
    pairs = enumerate_pairs(g)
    n = len(pairs)
    edges = []
    for i, a in enumerate(pairs):
        for j, b in enumerate(pairs):
            if i == j or not pair_leq(a, b):
                continue
            if any(k != i and k != j and pair_leq(a, pairs[k])
                   and pair_leq(pairs[k], b) for k in range(n)):
                continue
            edges.append((a, b))
    return tuple(edges)


def hasse_dot(g: Graph) -> str:
    """DOT rendering of the pair lattice with covering edges."""
    pairs = enumerate_pairs(g)
    lines = ["digraph pair_lattice {", "  rankdir=BT;"]
    for p in pairs:
        lines.append(f'  "{p.label()}";')
    for a, b in covering_relations(g):
        lines.append(f'  "{a.label()}" -> "{b.label()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
