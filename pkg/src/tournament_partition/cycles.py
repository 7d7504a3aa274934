"""Hamilton cycles, two-cycle splits and cycle factors of prescribed lengths."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Sequence

from .connectivity import is_strongly_k_connected, strongly_connected
from .core import Tournament, induced, iter_bits, lowest_bit, mask_of, paley
from .errors import (
    BadLengths,
    CertificateInvalid,
    ConnectivityGateError,
    ExceptionalTournament,
    NotStronglyConnected,
    SearchExhausted,
    StageFailure,
    TooSmall,
)
from .partitioner import PartitionCertificate, PipelineParams, partition_robust

log = logging.getLogger(__name__)


def _three_cycle(t: Tournament, within: int) -> list[int] | None:
    out, inn = t._out, t._in
    for a in iter_bits(within):
        for b in iter_bits(out[a] & within):
            back = out[b] & inn[a] & within
            if back:
                return [a, b, lowest_bit(back)]
    return None


def hamilton_cycle(t: Tournament) -> list[int]:
    """Directed Hamilton cycle of a strongly connected tournament.

    Grows a cycle from a 3-cycle.  An outside vertex with both an in- and
    an out-neighbour on the cycle is inserted between some ``c -> v -> c'``.
    If none exists, every outside vertex dominates or is dominated by the
    whole cycle, and strong connectivity yields an edge ``u -> w`` from the
    dominated side to the dominating side; both are inserted together.
    """
    n = t.n
    if n < 3:
        raise TooSmall(f"no cycle on {n} vertices")
    if not strongly_connected(t):
        raise NotStronglyConnected("Hamilton cycle needs a strongly connected tournament")
    out, inn = t._out, t._in
    cyc = _three_cycle(t, t.full_mask)
    cmask = mask_of(cyc)
    while len(cyc) < n:
        outside = t.full_mask & ~cmask
        mixed = next((v for v in iter_bits(outside) if out[v] & cmask and inn[v] & cmask), None)
        if mixed is not None:
            v = mixed
            L = len(cyc)
            pos = next(i for i in range(L) if inn[v] >> cyc[i] & 1 and out[v] >> cyc[(i + 1) % L] & 1)
            cyc.insert(pos + 1, v)
            cmask |= 1 << v
            continue
        dominated = mask_of(v for v in iter_bits(outside) if inn[v] & cmask == cmask)
        dominating = outside & ~dominated
        u = next(u for u in iter_bits(dominated) if out[u] & dominating)
        w = lowest_bit(out[u] & dominating)
        cyc[1:1] = [u, w]
        cmask |= (1 << u) | (1 << w)
    return cyc


def is_exceptional(t: Tournament) -> bool:
    """Isomorphic to the 7-vertex quadratic-residue tournament (all 7! maps tried)."""
    if t.n != 7 or any(d != 3 for d in t.out_degrees()):
        return False
    ref = paley(7)
    edges = list(t.edges())
    for p in permutations(range(7)):
        if all(ref.has_edge(p[u], p[v]) for u, v in edges):
            return True
    return False


def _strong_set_search(t: Tournament, size: int, accept: Callable[[int], bool], budget: int) -> int:
    """A vertex set of ``size`` inducing a strong tournament that ``accept`` likes.

    Strong sets are grown one vertex at a time from 3-cycles; every strong
    tournament on at least 4 vertices has a vertex whose deletion leaves it
    strong, so this reaches every strong set.  Visited sets are memoised.
    """
    out, inn = t._out, t._in
    full = t.full_mask
    seen: set[int] = set()
    nodes = 0

    def grow(X: int) -> int | None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchExhausted(budget, exhausted=False)
        if X.bit_count() == size:
            return X if accept(X) else None
        for v in iter_bits(full & ~X):
            if out[v] & X and inn[v] & X:
                Y = X | 1 << v
                if Y not in seen:
                    seen.add(Y)
                    hit = grow(Y)
                    if hit is not None:
                        return hit
        return None

    verts = list(range(t.n))
    for a in verts:
        for b in iter_bits(out[a] & ~((1 << (a + 1)) - 1)):
            for c in iter_bits(out[b] & inn[a] & ~((1 << (a + 1)) - 1)):
                X = (1 << a) | (1 << b) | (1 << c)
                if X in seen:
                    continue
                seen.add(X)
                hit = grow(X)
                if hit is not None:
                    return hit
    raise SearchExhausted(budget, exhausted=True)


def two_cycles(t: Tournament, L: int, budget: int = 200_000,
               not_inside: int = 0) -> tuple[list[int], list[int]]:
    """Disjoint cycles of lengths ``L`` and ``n - L`` covering the tournament.

    ``not_inside``: the second cycle may not lie entirely inside this set
    (used by the cycle-factor pipeline to keep a merge vertex available).
    """
    n = t.n
    if is_exceptional(t):
        raise ExceptionalTournament("the 7-vertex tournament without a transitive 4-set has no such split")
    if n < 6 or not 3 <= L <= n - 3:
        raise BadLengths(f"need n >= 6 and 3 <= L <= n-3, got n={n}, L={L}")
    full = t.full_mask

    def accept_first(X: int) -> bool:
        rest = full & ~X
        return (not not_inside or rest & ~not_inside != 0) and strongly_connected(t, rest)

    def accept_second(Y: int) -> bool:
        return (not not_inside or Y & ~not_inside != 0) and strongly_connected(t, full & ~Y)

    if L <= n - L:
        X = _strong_set_search(t, L, accept_first, budget)
    else:
        X = full & ~_strong_set_search(t, n - L, accept_second, budget)
    first = _cycle_on(t, X)
    second = _cycle_on(t, full & ~X)
    return first, second


def _cycle_on(t: Tournament, mask: int) -> list[int]:
    verts = list(iter_bits(mask))
    return [verts[i] for i in hamilton_cycle(induced(t, mask))]


def adjust_lengths(n: int, t: int, lengths: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    """Adjusted lengths, the adjusted index set and the permutation used.

    All three are in permuted order: position ``p`` holds original index
    ``perm[p]``.  Indices are 0-based, so the set never contains 0.
    """
    L = list(lengths)
    if len(L) != t or t < 2:
        raise BadLengths(f"expected {t} >= 2 lengths, got {len(L)}")
    if sum(L) != n:
        raise BadLengths(f"lengths sum to {sum(L)}, not {n}")
    if min(L) < 3:
        raise BadLengths("every length must be at least 3")
    first = max(range(t), key=lambda j: (L[j], -j))
    perm = [first] + [j for j in range(t) if j != first]
    P = [L[j] for j in perm]
    small = [j for j in range(1, t) if 2 * t * t * P[j] < n]
    target = -(-n // (t * t))
    adj = list(P)
    for j in small:
        adj[j] = target
    adj[0] = P[0] - sum(adj[j] - P[j] for j in range(1, t))
    if sum(adj) != n or adj[0] * t * t < n:
        raise BadLengths(f"adjusted first length {adj[0]} is below n/t^2")
    return adj, small, perm


def cycle_threshold(t: int) -> float:
    return 1e10 * t**4 * math.log2(t)


@dataclass
class CycleParams:
    mode: str = "practical"
    m: int | None = None
    spare_paths: int | None = 3
    seed: int = 0
    assume_connectivity: bool = False
    search_budget: int = 200_000
    economical: bool = True


@dataclass
class CyclePlan:
    n: int
    t: int
    lengths: list[int]
    perm: list[int]
    adjusted: list[int]
    J_tilde: list[int]
    classes: list[list[int]]
    extended: list[list[int]]
    cycles: list[list[int]]
    helper_cycles: dict[int, list[int]]
    merge_vertices: dict[int, int]
    merged: list[int]
    partition: PartitionCertificate
    notes: list[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "kind": "cycle-plan",
            "n": self.n, "t": self.t,
            "lengths": self.lengths, "perm": self.perm,
            "adjusted": self.adjusted, "J_tilde": self.J_tilde,
            "classes": self.classes, "extended": self.extended,
            "cycles": self.cycles,
            "helper_cycles": {str(j): c for j, c in sorted(self.helper_cycles.items())},
            "merge_vertices": {str(j): v for j, v in sorted(self.merge_vertices.items())},
            "merged": self.merged,
            "partition": self.partition.to_dict(),
            "notes": self.notes,
        }


def _extend(classes: list[list[int]], targets: list[int], n: int) -> list[list[int]]:
    """Top classes up to their target sizes, largest deficit first, ties by index."""
    ext = [list(c) for c in classes]
    used = set(v for c in classes for v in c)
    for v in (v for v in range(n) if v not in used):
        j = max(range(len(ext)), key=lambda c: (targets[c] - len(ext[c]), -c))
        ext[j].append(v)
    return [sorted(c) for c in ext]


def _fail(stage: str, reason: str, witness: dict) -> StageFailure:
    return StageFailure(stage, reason, witness)


def cycle_factor(T: Tournament, lengths: Sequence[int], params: CycleParams | None = None) -> CyclePlan:
    """``t`` disjoint cycles of the given lengths covering ``T``.

    Pipeline: adjust the lengths, partition with ``k = 2``, extend the
    classes to the adjusted sizes, split each enlarged class into two
    cycles, merge the spare cycles into the first class and take Hamilton
    cycles.  Every intermediate claim is checked; on a check failure the
    raised :class:`StageFailure` names the step.
    """
    params = params or CycleParams()
    n, t = T.n, len(lengths)
    adj, small, perm = adjust_lengths(n, t, lengths)
    P = [lengths[j] for j in perm]
    if params.mode == "strict" and not params.assume_connectivity:
        raise ConnectivityGateError(
            f"strict mode needs strong {cycle_threshold(t):.3g}-connectivity, impossible with n={n}")
    m = params.m if params.m is not None else 2 * t * t
    pp = PipelineParams(k=2, t=t, m=m, mode=params.mode, spare_paths=params.spare_paths,
                        seed=params.seed, economical=params.economical,
                        assume_connectivity=params.assume_connectivity)
    cert = partition_robust(T, pp)
    classes = cert.classes
    for j in range(t):
        if len(classes[j]) > adj[j]:
            raise _fail("Extend", "class larger than its adjusted length", {"class": j + 1, "size": len(classes[j]), "target": adj[j]})
    ext = _extend(classes, adj, n)
    helper: dict[int, list[int]] = {}
    merge_v: dict[int, int] = {}
    cycles: list[list[int] | None] = [None] * t
    for j in small:
        sub = induced(T, mask_of(ext[j]))
        local_class = mask_of(i for i, v in enumerate(sub.labels) if v in set(classes[j]))
        if not is_strongly_k_connected(sub, 2):
            raise _fail("TwoCycles", "extended class is not strongly 2-connected", {"class": j + 1})
        try:
            c1, c2 = two_cycles(sub, P[j], budget=params.search_budget, not_inside=local_class)
        except (SearchExhausted, ExceptionalTournament) as exc:
            exc.position = f"two_cycles on extended class {j + 1}"
            raise
        cycles[j] = sub.to_root(c1)
        helper[j] = sub.to_root(c2)
        outside = sorted(set(helper[j]) - set(classes[j]))
        if not outside:
            raise _fail("Merge", "helper cycle lies inside its class", {"class": j + 1})
        merge_v[j] = outside[0]
    merged = sorted(set(ext[0]).union(*[set(helper[j]) for j in small]))
    if len(merged) != P[0]:
        raise _fail("Merge", "merged class has the wrong size", {"size": len(merged), "expected": P[0]})
    mm = mask_of(merged)
    if not strongly_connected(T, mm):
        raise _fail("Merge", "merged first class is not strongly connected", {"size": len(merged)})
    sub = induced(T, mm)
    cycles[0] = sub.to_root(hamilton_cycle(sub))
    for j in range(1, t):
        if j in small:
            continue
        sm = mask_of(ext[j])
        if not strongly_connected(T, sm):
            raise _fail("Hamilton", "extended class is not strongly connected", {"class": j + 1})
        sub = induced(T, sm)
        cycles[j] = sub.to_root(hamilton_cycle(sub))
    out: list[list[int]] = [[] for _ in range(t)]
    for p, j in enumerate(perm):
        out[j] = cycles[p]
    from .verify import audit_cycle_plan
    rep = audit_cycle_plan(T, out, list(lengths))
    if not rep.passed:
        raise CertificateInvalid(f"cycle plan fails its audit: {rep.failures()[0]}")
    return CyclePlan(
        n=n, t=t, lengths=list(lengths), perm=perm, adjusted=adj, J_tilde=small,
        classes=[list(c) for c in classes], extended=ext, cycles=out,
        helper_cycles=helper, merge_vertices=merge_v, merged=merged, partition=cert,
        notes=[f"m = {m}"] + ([] if params.m is None else ["m overridden"]),
    )
