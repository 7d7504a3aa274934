"""Strong connectivity, pair connectivity and vertex-disjoint path packing.

Pair connectivity is a unit-vertex-capacity max flow on the split graph,
searched with bitset BFS.  Augmenting paths are explored in increasing
vertex-id order, so every result is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

from .core import Tournament, iter_bits, lowest_bit, mask_of
from .errors import PathPackingFailed, SameVertex, TooLarge

DEFAULT_NODE_BUDGET = 10**6


# -- reachability ---------------------------------------------------------------

def reach_forward(t: Tournament, source: int, within: int | None = None) -> int:
    """Bitmask of vertices reachable from ``source`` inside ``within``."""
    within = t.full_mask if within is None else within
    out = t._out
    reached = frontier = 1 << source
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= out[v]
        frontier = nxt & within & ~reached
        reached |= frontier
    return reached


def reach_backward(t: Tournament, target: int, within: int | None = None) -> int:
    within = t.full_mask if within is None else within
    inn = t._in
    reached = frontier = 1 << target
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= inn[v]
        frontier = nxt & within & ~reached
        reached |= frontier
    return reached


def strongly_connected(t: Tournament, within: int | None = None) -> bool:
    """True iff the (sub)tournament on ``within`` has a single strong component."""
    within = t.full_mask if within is None else within
    if not within:
        return False
    v = lowest_bit(within)
    return reach_forward(t, v, within) == within and reach_backward(t, v, within) == within


def strong_components(t: Tournament, within: int | None = None) -> list[int]:
    """Strong components as bitmasks, ordered by their lowest vertex."""
    rest = t.full_mask if within is None else within
    comps = []
    while rest:
        v = lowest_bit(rest)
        comp = reach_forward(t, v, rest) & reach_backward(t, v, rest)
        comps.append(comp)
        rest &= ~comp
    return comps


def bfs_distances(t: Tournament, source: int, within: int, backward: bool = False) -> dict[int, int]:
    adj = t._in if backward else t._out
    dist = {source: 0}
    reached = frontier = 1 << source
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        frontier = nxt & within & ~reached
        reached |= frontier
        for v in iter_bits(frontier):
            dist[v] = d
    return dist


def shortest_path(t: Tournament, x: int, y: int, within: int, max_edges: int | None = None):
    """Lowest-id shortest ``x -> y`` path with interior inside ``within``, or None."""
    if x == y:
        return [x]
    allowed = within | (1 << y)
    parent = {x: None}
    reached = frontier = 1 << x
    depth = 0
    out = t._out
    while frontier:
        depth += 1
        if max_edges is not None and depth > max_edges:
            return None
        nxt_frontier = 0
        for v in iter_bits(frontier):
            new = out[v] & allowed & ~reached & ~nxt_frontier
            for w in iter_bits(new):
                parent[w] = v
            nxt_frontier |= new
        if nxt_frontier >> y & 1:
            path = [y]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        frontier = nxt_frontier & ~(1 << y)
        reached |= nxt_frontier
    return None


# -- max flow with vertex splitting ------------------------------------------------

class _VertexFlow:
    """Internally vertex-disjoint ``x -> y`` paths, excluding the direct edge.

    Every vertex other than ``x`` and ``y`` has capacity one; edges are
    uncapacitated.  ``succ``/``pred`` hold the flow on internal vertices.
    """

    def __init__(self, t: Tournament, x: int, y: int, within: int):
        self.t = t
        self.x, self.y = x, y
        self.within = within & ~(1 << x) & ~(1 << y)
        self.arcs: set[tuple[int, int]] = set()
        self.succ: dict[int, int] = {}
        self.pred: dict[int, int] = {}
        self.value = 0

    def seed_two_paths(self, limit: int) -> None:
        common = self.t._out[self.x] & self.t._in[self.y] & self.within
        for c in iter_bits(common):
            if self.value >= limit:
                break
            self.arcs.add((self.x, c))
            self.arcs.add((c, self.y))
            self.succ[c] = self.y
            self.pred[c] = self.x
            self.value += 1

    def augment(self) -> bool:
        """One shortest augmenting path, found by a layered bitmask BFS.

        Only the layer masks are stored; parents are recovered on the way
        back from ``y``.  Flow vertices are few, so their special moves
        (back along a flow arc, or through a reversed vertex arc) are kept
        in small dicts.
        """
        t, x, y = self.t, self.x, self.y
        out, inn = t._out, t._in
        within = self.within
        pred = self.pred
        flow = 0
        for v in pred:
            flow |= 1 << v
        seen_in = seen_out = 1 << x
        out_layers = [1 << x]
        in_layers = [0]
        back_arc: dict[int, int] = {}   # p_out reached from w_in against arc p -> w
        via_vrev = 0                   # u_in reached from u_out against u's vertex arc
        frontier = 1 << x
        hit = None
        while frontier:
            enters_y = frontier & ~(1 << x) & inn[y]
            if enters_y:
                hit = enters_y
                break
            step = 0
            for u in iter_bits(frontier):
                step |= out[u]
            new_in = step & within & ~seen_in
            seen_in |= new_in
            vr = frontier & flow & ~seen_in
            seen_in |= vr
            via_vrev |= vr
            layer_in = new_in | vr
            new_out = new_in & ~flow & ~seen_out
            seen_out |= new_out
            for w in iter_bits(layer_in & flow):
                p = pred[w]
                if not seen_out >> p & 1:
                    seen_out |= 1 << p
                    back_arc[p] = w
                    new_out |= 1 << p
            in_layers.append(layer_in)
            out_layers.append(new_out)
            frontier = new_out
        if hit is None:
            return False
        layer = len(out_layers) - 1
        u = lowest_bit(hit)
        self.arcs.add((u, y))
        node, side = u, "out"
        while not (node == x and side == "out"):
            if side == "out":
                w = back_arc.get(node)
                if w is not None:
                    self.arcs.discard((node, w))
                    node = w
                side = "in"
            elif via_vrev >> node & 1:
                side = "out"
                layer -= 1
            else:
                u = lowest_bit(out_layers[layer - 1] & inn[node])
                self.arcs.add((u, node))
                node, side = u, "out"
                layer -= 1
        self._rebuild()
        self.value += 1
        return True

    def _rebuild(self) -> None:
        self.succ.clear()
        self.pred.clear()
        for a, b in self.arcs:
            if a != self.x:
                self.succ[a] = b
            if b != self.y:
                self.pred[b] = a

    def run(self, limit: int | None = None) -> int:
        cap = float("inf") if limit is None else limit
        self.seed_two_paths(cap)
        while self.value < cap and self.augment():
            pass
        return self.value

    def paths(self) -> list[list[int]]:
        firsts = sorted(b for a, b in self.arcs if a == self.x)
        result = []
        for b in firsts:
            path = [self.x, b]
            while path[-1] != self.y:
                path.append(self.succ[path[-1]])
            result.append(path)
        return result


def disjoint_xy_paths(t: Tournament, x: int, y: int, within: int | None = None,
                      limit: int | None = None, use_direct: bool = True) -> list[list[int]]:
    """Up to ``limit`` internally disjoint ``x -> y`` paths, interiors in ``within``."""
    if x == y:
        raise SameVertex("pair connectivity needs distinct vertices")
    within = t.full_mask if within is None else within
    paths = []
    if use_direct and t.has_edge(x, y):
        paths.append([x, y])
    rest = None if limit is None else limit - len(paths)
    if rest is None or rest > 0:
        flow = _VertexFlow(t, x, y, within)
        flow.run(rest)
        paths.extend(flow.paths())
    return paths


def pair_connectivity(t: Tournament, x: int, y: int, within: int | None = None,
                      limit: int | None = None) -> int:
    """Maximum number of internally disjoint ``x -> y`` paths (direct edge counts).

    With ``limit`` the count stops early once ``limit`` paths are found.
    """
    if x == y:
        raise SameVertex("pair connectivity needs distinct vertices")
    within = t.full_mask if within is None else within
    direct = 1 if t.has_edge(x, y) else 0
    if limit is not None:
        if direct >= limit:
            return direct
        need = limit - direct
        common = (t._out[x] & t._in[y] & within & ~(1 << x) & ~(1 << y)).bit_count()
        if common >= need:
            return limit
    else:
        need = None
    flow = _VertexFlow(t, x, y, within)
    return direct + flow.run(need)


def _anchors(within: int, k: int) -> list[int]:
    out = []
    for v in iter_bits(within):
        out.append(v)
        if len(out) == k:
            break
    return out


def is_strongly_k_connected(t: Tournament, k: int, within: int | None = None) -> bool:
    """Strong k-connectivity of the (sub)tournament on ``within``.

    If removing some ``S`` with ``|S| < k`` disconnects the tournament, one
    of any ``k`` fixed anchors survives and is separated from some vertex,
    so it suffices to check pairs that contain one of ``k`` anchors.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    within = t.full_mask if within is None else within
    size = within.bit_count()
    if size <= k:
        return False
    if k == 1:
        return strongly_connected(t, within)
    for a in _anchors(within, k):
        for w in iter_bits(within & ~(1 << a)):
            if pair_connectivity(t, a, w, within, limit=k) < k:
                return False
            if pair_connectivity(t, w, a, within, limit=k) < k:
                return False
    return True


def strong_connectivity(t: Tournament, within: int | None = None) -> int:
    """Largest ``k`` for which the tournament is strongly k-connected (0 if none)."""
    within = t.full_mask if within is None else within
    k = 0
    while is_strongly_k_connected(t, k + 1, within):
        k += 1
    return k


# -- disjoint path families -----------------------------------------------------

@dataclass
class PathRequest:
    """Ordered terminal pairs whose paths must be internally disjoint.

    Pairs may repeat (each copy needs its own path) and may have equal
    endpoints (a length-0 path).  Interiors avoid ``forbidden`` and every
    terminal.
    """

    pairs: list[tuple[int, int]]
    forbidden: int = 0
    interior_budget: int | None = None
    node_budget: int = DEFAULT_NODE_BUDGET


@dataclass
class PathFamilyResult:
    paths: list[list[int]]
    total_interior: int
    nodes_explored: int = 0
    method: str = "exact-search"
    notes: list[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "paths": self.paths,
            "total_interior": self.total_interior,
            "nodes_explored": self.nodes_explored,
            "method": self.method,
            "notes": self.notes,
        }


def check_path_family(t: Tournament, req: PathRequest, paths: Sequence[Sequence[int]]) -> str | None:
    """Return None if ``paths`` satisfies ``req``, else a description of the fault."""
    if len(paths) != len(req.pairs):
        return f"expected {len(req.pairs)} paths, got {len(paths)}"
    terminals = set()
    for x, y in req.pairs:
        terminals.update((x, y))
    used: dict[int, int] = {}
    seen_paths = set()
    total = 0
    for i, ((x, y), p) in enumerate(zip(req.pairs, paths)):
        if not p or p[0] != x or p[-1] != y:
            return f"path {i} does not run from {x} to {y}"
        if len(set(p)) != len(p):
            return f"path {i} repeats a vertex"
        if x == y and len(p) != 1:
            return f"path {i} should have length 0"
        for a, b in zip(p, p[1:]):
            if not t.has_edge(a, b):
                return f"path {i} uses missing edge {a}->{b}"
        for v in p[1:-1]:
            if v in terminals:
                return f"path {i} passes through terminal {v}"
            if req.forbidden >> v & 1:
                return f"path {i} uses forbidden vertex {v}"
            if v in used:
                return f"paths {used[v]} and {i} share vertex {v}"
            used[v] = i
            total += 1
        key = tuple(p)
        if key in seen_paths and len(p) > 1:
            return f"path {i} duplicates an earlier path"
        seen_paths.add(key)
    if req.interior_budget is not None and total > req.interior_budget:
        return f"total interior {total} exceeds budget {req.interior_budget}"
    return None


class _BudgetHit(Exception):
    pass


class _PathSearch:
    def __init__(self, t: Tournament, req: PathRequest):
        self.t = t
        self.req = req
        self.nodes = 0
        self.deepest = 0
        terminals = 0
        for x, y in req.pairs:
            terminals |= (1 << x) | (1 << y)
        self.avail0 = t.full_mask & ~terminals & ~req.forbidden
        self.budget = req.interior_budget if req.interior_budget is not None else t.n

    def _order(self) -> list[int]:
        t, avail = self.t, self.avail0
        def short_paths(i):
            x, y = self.req.pairs[i]
            if x == y:
                return -1
            return int(t.has_edge(x, y)) + (t._out[x] & t._in[y] & avail).bit_count()
        groups: dict[tuple[int, int], list[int]] = {}
        for i, pr in enumerate(self.req.pairs):
            groups.setdefault(pr, []).append(i)
        keyed = sorted(groups.values(), key=lambda idx: (short_paths(idx[0]) - len(idx), idx[0]))
        return [i for idx in keyed for i in idx]

    def _lower_bound(self, todo: Sequence[int], avail: int, used_direct: set) -> int | None:
        """Cheap lower bound on the interior still needed, None if some group is infeasible."""
        t = self.t
        counts: dict[tuple[int, int], int] = {}
        for i in todo:
            pr = self.req.pairs[i]
            counts[pr] = counts.get(pr, 0) + 1
        total = 0
        for (x, y), r in counts.items():
            if x == y:
                continue
            direct = 1 if t.has_edge(x, y) and (x, y) not in used_direct else 0
            need = r - direct
            if need <= 0:
                continue
            if pair_connectivity(t, x, y, avail, limit=need) - int(t.has_edge(x, y)) < need:
                return None
            common = (t._out[x] & t._in[y] & avail).bit_count()
            ones = min(common, need)
            total += ones + 2 * (need - ones)
        return total

    def _paths_between(self, x: int, y: int, avail: int, max_interior: int):
        """Simple ``x -> y`` paths through ``avail``, by length then lexicographically."""
        t = self.t
        if max_interior < 0:
            return
        if t.has_edge(x, y):
            yield [x, y]
        dist_to_y = bfs_distances(t, y, avail, backward=True)
        out = t._out
        for edges in range(2, max_interior + 2):
            stack = [x]
            visited = 1 << x
            yield from self._dfs_len(x, y, edges, stack, visited, avail, dist_to_y, out)

    def _dfs_len(self, x, y, edges, stack, visited, avail, dist_to_y, out):
        # iterative would be faster; recursion depth is bounded by the budget
        u = stack[-1]
        left = len(stack)  # vertices on the stack; path has left-1 edges so far
        remaining = edges - (left - 1)
        if remaining == 1:
            if out[u] >> y & 1:
                stack.append(y)
                yield list(stack)
                stack.pop()
            return
        cand = out[u] & avail & ~visited
        for w in iter_bits(cand):
            d = dist_to_y.get(w)
            if d is None or d > remaining - 1:
                continue
            self.nodes += 1
            if self.nodes > self.req.node_budget:
                raise _BudgetHit
            stack.append(w)
            yield from self._dfs_len(x, y, edges, stack, visited | (1 << w), avail, dist_to_y, out)
            stack.pop()

    def solve(self) -> list[list[int]] | None:
        order = self._order()
        chosen: dict[int, list[int]] = {}

        def rec(pos, avail, used, last_key, used_direct):
            self.deepest = max(self.deepest, pos)
            if pos == len(order):
                return True
            i = order[pos]
            x, y = self.req.pairs[i]
            if x == y:
                chosen[i] = [x]
                return rec(pos + 1, avail, used, last_key, used_direct)
            lb = self._lower_bound(order[pos + 1:], avail, used_direct)
            if lb is None:
                return False
            prev = last_key.get((x, y))
            for p in self._paths_between(x, y, avail, self.budget - used - lb):
                self.nodes += 1
                if self.nodes > self.req.node_budget:
                    raise _BudgetHit
                key = (len(p), p)
                if prev is not None and key <= prev:
                    continue
                interior = mask_of(p[1:-1])
                size = len(p) - 2
                rest = order[pos + 1:]
                nd = used_direct | {(x, y)} if len(p) == 2 else used_direct
                lb2 = self._lower_bound(rest, avail & ~interior, nd)
                if lb2 is None or used + size + lb2 > self.budget:
                    continue
                chosen[i] = p
                nk = dict(last_key)
                nk[(x, y)] = key
                if rec(pos + 1, avail & ~interior, used + size, nk, nd):
                    return True
            return False

        if rec(0, self.avail0, 0, {}, frozenset()):
            return [chosen[i] for i in range(len(self.req.pairs))]
        return None


def _greedy_flow_family(t: Tournament, req: PathRequest):
    """Route each group of identical pairs by max flow; None if that fails."""
    terminals = 0
    for x, y in req.pairs:
        terminals |= (1 << x) | (1 << y)
    avail = t.full_mask & ~terminals & ~req.forbidden
    groups: dict[tuple[int, int], list[int]] = {}
    for i, pr in enumerate(req.pairs):
        groups.setdefault(pr, []).append(i)
    result: dict[int, list[int]] = {}
    for (x, y), idx in sorted(groups.items(), key=lambda kv: kv[1][0]):
        if x == y:
            for i in idx:
                result[i] = [x]
            continue
        paths = disjoint_xy_paths(t, x, y, avail, limit=len(idx))
        if len(paths) < len(idx):
            return None
        paths.sort(key=len)
        for i, p in zip(idx, paths):
            result[i] = p
            avail &= ~mask_of(p[1:-1])
    return [result[i] for i in range(len(req.pairs))]


def find_disjoint_paths(t: Tournament, req: PathRequest) -> PathFamilyResult:
    """Internally disjoint paths for every requested pair.

    A max-flow routing of each group of identical pairs is tried first; if
    it violates disjointness across groups or the interior budget, an exact
    backtracking search (hardest pair first, shortest paths first) runs
    until it succeeds, proves infeasibility, or exhausts ``node_budget``.
    """
    greedy = _greedy_flow_family(t, req)
    if greedy is not None and check_path_family(t, req, greedy) is None:
        total = sum(max(len(p) - 2, 0) for p in greedy)
        return PathFamilyResult(greedy, total, 0, method="flow")
    search = _PathSearch(t, req)
    try:
        found = search.solve()
    except _BudgetHit:
        raise PathPackingFailed(_failed_index(search), search.nodes, exhausted=False) from None
    if found is None:
        raise PathPackingFailed(_failed_index(search), search.nodes, exhausted=True)
    total = sum(max(len(p) - 2, 0) for p in found)
    return PathFamilyResult(found, total, search.nodes)


def _failed_index(search: _PathSearch) -> int:
    order = search._order()
    return order[min(search.deepest, len(order) - 1)] if order else 0


def find_short_path_family(t: Tournament, req: PathRequest, s: int) -> PathFamilyResult:
    """Disjoint paths whose interiors total at most ``|T|/s`` vertices.

    Searches directly with interior budget ``floor(|T|/s)`` instead of
    packing ``k*s`` families and keeping the smallest; the result records
    this in its notes.
    """
    if s < 1:
        raise ValueError("s must be at least 1")
    budget = t.n // s
    if req.interior_budget is not None:
        budget = min(budget, req.interior_budget)
    sub = PathRequest(list(req.pairs), req.forbidden, budget, req.node_budget)
    res = find_disjoint_paths(t, sub)
    res.notes.append(
        f"direct search with interior budget floor({t.n}/{s}) = {budget} "
        "in place of selecting the smallest of k*s disjoint families"
    )
    return res


def is_k_linked_bruteforce(t: Tournament, k: int, max_n: int = 10,
                           node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """k-linkedness by enumerating every choice of ``2k`` distinct terminals."""
    if t.n > max_n or k > 3:
        raise TooLarge(f"k-linked brute force limited to n <= {max_n}, k <= 3")
    if t.n < 2 * k:
        return False
    for terms in combinations(range(t.n), 2 * k):
        for perm in permutations(terms):
            pairs = [(perm[2 * i], perm[2 * i + 1]) for i in range(k)]
            # pair order is irrelevant; keep one representative per pairing
            if [p[0] for p in pairs] != sorted(p[0] for p in pairs):
                continue
            try:
                find_disjoint_paths(t, PathRequest(pairs, node_budget=node_budget))
            except PathPackingFailed:
                return False
    return True
