"""Colour a tournament into small classes that stay strongly k-connected.

The pipeline colours vertices with colours ``1..t`` in stages.  A coloured
vertex carries a forward and a backward safety certificate; the ledger
issues certificates as soon as they become derivable and propagates them
to same-colour neighbours, so the certificates always form an acyclic
justification ordered by their sequence numbers.

Certificate kinds, forward direction (backward is the mirror image):

``outside``
    the vertex is not in ``D`` or ``E_B``;
``neighbours``
    at least ``k`` same-colour out-neighbours with earlier forward
    certificates;
``reach``
    the vertex lies in the reach-set structure of its colour, all of whose
    ``U`` vertices already hold forward certificates.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .connectivity import PathRequest, find_short_path_family, shortest_path
from .core import Tournament, induced, iter_bits, mask_of
from .domination import DominationFamily, build_domination_family, domination_bounds
from .errors import (
    CertificateInvalid,
    ConnectivityGateError,
    PathPackingFailed,
    StageFailure,
    TooSmall,
    TournamentError,
)
from .linkage import ReachSets, reach_sets, reduce_to_backwards_transitive

log = logging.getLogger(__name__)

STAGES = ("Seeds", "Domination", "Claim3", "ShortPaths", "Claim4_1",
          "LongPaths", "Claim4_3", "Claim5")


def partition_threshold(k: int, t: int, m: int) -> float:
    return 1e7 * k**6 * t**2 * m * math.log2(k * t * m)


@dataclass
class PipelineParams:
    k: int
    t: int
    m: int
    mode: str = "practical"
    spare_paths: int | None = None
    short_path_bound: int | None = None
    R_samples: int = 64
    path_node_budget: int = 20_000
    seed: int = 0
    economical: bool = True
    assume_connectivity: bool = False
    c: int | None = None

    def __post_init__(self):
        if self.k < 1 or self.t < 2 or self.m < self.t:
            raise ValueError("need k >= 1 and m >= t >= 2")
        if self.mode not in ("strict", "practical"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.spare_paths is None:
            self.spare_paths = 13 * self.k**4 * self.t
        if self.short_path_bound is None:
            self.short_path_bound = self.k + 1
        if self.spare_paths < 1:
            raise ValueError("spare_paths must be positive")

    def to_dict(self):
        return {
            "k": self.k, "t": self.t, "m": self.m, "mode": self.mode,
            "spare_paths": self.spare_paths, "short_path_bound": self.short_path_bound,
            "R_samples": self.R_samples, "path_node_budget": self.path_node_budget,
            "seed": self.seed, "economical": self.economical,
            "assume_connectivity": self.assume_connectivity, "c": self.c,
        }


def stage_budgets(n: int, k: int, t: int, m: int, c: int) -> dict[str, float]:
    """Upper bounds on the number of coloured vertices after each stage."""
    logm = math.log2(m)
    return {
        "Claim3": (k + 1) ** 2 * (2 * k * t * c + 4 * k * k * t),
        "Claim4_1": 54 * k**4 * t**2 * logm,
        "Claim4": 67 * k**4 * t**2 * logm + n / (2 * m),
        "Claim5": n / m,
    }


@dataclass
class PartitionCertificate:
    n: int
    params: PipelineParams
    swapped: bool
    c: int
    classes: list[list[int]]
    paths: dict[int, list[int]]
    short_indices: list[int]
    long_indices: list[int]
    long_families: dict[int, list[list[int]]]
    family: DominationFamily
    reach: dict[int, ReachSets]
    lemma_sets: dict[int, list[int]]
    ledger: dict[int, dict]
    helpers: list[int]
    budgets: list[dict]
    stage_of: dict[int, str]
    notes: list[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def t(self) -> int:
        return self.params.t

    @property
    def m(self) -> int:
        return self.params.m

    def class_masks(self) -> list[int]:
        return [mask_of(c) for c in self.classes]

    def to_dict(self):
        fam = self.family
        return {
            "kind": "partition-certificate",
            "n": self.n,
            "params": self.params.to_dict(),
            "swapped": self.swapped,
            "frame": "reversed" if self.swapped else "input",
            "c": self.c,
            "classes": self.classes,
            "paths": {str(i): p for i, p in sorted(self.paths.items())},
            "short_indices": self.short_indices,
            "long_indices": self.long_indices,
            "long_families": {str(i): f for i, f in sorted(self.long_families.items())},
            "family": fam.to_dict(),
            "E_A": list(iter_bits(fam.E_A)),
            "E_B": list(iter_bits(fam.E_B)),
            "reach": {str(j): r.to_dict() for j, r in sorted(self.reach.items())},
            "lemma_sets": {str(j): s for j, s in sorted(self.lemma_sets.items())},
            "ledger": {str(v): self.ledger[v] for v in sorted(self.ledger)},
            "helpers": self.helpers,
            "budgets": self.budgets,
            "stage_of": {str(v): s for v, s in sorted(self.stage_of.items())},
            "notes": self.notes,
        }


class _State:
    """Mutable colouring plus the incremental safety ledger."""

    def __init__(self, T: Tournament, fam: DominationFamily, params: PipelineParams):
        self.T = T
        self.fam = fam
        self.p = params
        self.k = params.k
        self.t = params.t
        self.n = T.n
        self.colour = [0] * T.n
        self.cls = [0] * (self.t + 1)
        self.coloured = 0
        self.order: list[int] = []
        self.stage_of: dict[int, str] = {}
        self.D = fam.D
        self.E_A = fam.E_A
        self.E_B = fam.E_B
        self.E = self.E_A | self.E_B
        self.seeds = mask_of(fam.xs + fam.ys)
        self.fwd_mask = 0
        self.bwd_mask = 0
        self.fwd: dict[int, dict] = {}
        self.bwd: dict[int, dict] = {}
        self.seq = 0
        # colour -> (ReachSets, lemma vertex mask)
        self.reach: dict[int, tuple[ReachSets, int]] = {}
        self.reach_ready_fwd: set[int] = set()
        self.reach_ready_bwd: set[int] = set()

    # -- colouring -------------------------------------------------------
    def paint(self, v: int, j: int, stage: str) -> None:
        assert self.colour[v] == 0, v
        self.colour[v] = j
        self.cls[j] |= 1 << v
        self.coloured |= 1 << v
        self.order.append(v)
        self.stage_of[v] = stage
        self._settle([(v, "f"), (v, "b")])

    @property
    def uncoloured(self) -> int:
        return self.T.full_mask & ~self.coloured

    def safe(self, v: int) -> bool:
        return bool(self.fwd_mask >> v & 1 and self.bwd_mask >> v & 1)

    def unsafe_coloured(self) -> list[int]:
        return [v for v in self.order if not self.safe(v)]

    # -- ledger ----------------------------------------------------------
    def _issue(self, v: int, side: str, cert: dict) -> None:
        self.seq += 1
        cert["seq"] = self.seq
        if side == "f":
            self.fwd[v] = cert
            self.fwd_mask |= 1 << v
        else:
            self.bwd[v] = cert
            self.bwd_mask |= 1 << v

    def _derive(self, v: int, side: str) -> dict | None:
        T, j, bit = self.T, self.colour[v], 1 << v
        if side == "f":
            if not bit & (self.D | self.E_B):
                return {"kind": "outside"}
            via = T._out[v] & self.cls[j] & self.fwd_mask
            ready = self.reach_ready_fwd
            idx = 0
        else:
            if not bit & (self.D | self.E_A):
                return {"kind": "outside"}
            via = T._in[v] & self.cls[j] & self.bwd_mask
            ready = self.reach_ready_bwd
            idx = 1
        if via.bit_count() >= self.k:
            return {"kind": "neighbours", "via": list(iter_bits(via))}
        if j in ready:
            rs, lemma = self.reach[j]
            core = rs.U if idx == 0 else rs.W
            if lemma & bit and not core & bit:
                return {"kind": "reach", "colour": j}
        return None

    def _settle(self, work: list[tuple[int, str]]) -> None:
        T = self.T
        while work:
            v, side = work.pop()
            done = self.fwd_mask if side == "f" else self.bwd_mask
            if done >> v & 1 or not self.colour[v]:
                continue
            cert = self._derive(v, side)
            if cert is None:
                continue
            self._issue(v, side, cert)
            j = self.colour[v]
            if side == "f":
                for u in iter_bits(T._in[v] & self.cls[j] & ~self.fwd_mask):
                    work.append((u, "f"))
            else:
                for u in iter_bits(T._out[v] & self.cls[j] & ~self.bwd_mask):
                    work.append((u, "b"))
            self._check_reach(j, side, work)

    def _check_reach(self, j: int, side: str, work: list) -> None:
        if j not in self.reach:
            return
        rs, lemma = self.reach[j]
        if side == "f" and j not in self.reach_ready_fwd:
            if rs.U_prime & ~self.cls[j] or rs.U & ~self.fwd_mask:
                return
            self.reach_ready_fwd.add(j)
            work.extend((u, "f") for u in iter_bits(lemma & self.cls[j] & ~self.fwd_mask))
        elif side == "b" and j not in self.reach_ready_bwd:
            if rs.W_prime & ~self.cls[j] or rs.W & ~self.bwd_mask:
                return
            self.reach_ready_bwd.add(j)
            work.extend((u, "b") for u in iter_bits(lemma & self.cls[j] & ~self.bwd_mask))

    def install_reach(self, j: int, rs: ReachSets, lemma: int) -> None:
        self.reach[j] = (rs, lemma)
        work: list = []
        self._check_reach(j, "f", work)
        self._check_reach(j, "b", work)
        self._settle(work)

    def deficit(self, v: int, side: str) -> int:
        j = self.colour[v]
        if side == "f":
            if self.fwd_mask >> v & 1:
                return 0
            have = (self.T._out[v] & self.cls[j] & self.fwd_mask).bit_count()
        else:
            if self.bwd_mask >> v & 1:
                return 0
            have = (self.T._in[v] & self.cls[j] & self.bwd_mask).bit_count()
        return max(self.k - have, 0)

    # -- greedy neighbour choice -----------------------------------------
    def add_neighbours(self, v: int, side: str, avoid: int, stage: str, literal_count: int | None = None) -> list[int]:
        """Colour fresh ``side`` neighbours of ``v`` with ``v``'s colour.

        ``side == "b"`` picks in-neighbours (making ``v`` backwards-safe),
        ``"f"`` out-neighbours.  In literal mode exactly ``k`` are taken; in
        economical mode only the current deficit, preferring vertices
        outside ``E`` (which are safe on arrival).
        """
        T = self.T
        adj = T._in[v] if side == "b" else T._out[v]
        pool = adj & self.uncoloured & ~avoid
        if self.p.economical:
            need = self.deficit(v, side)
            preferred = pool & ~self.E
            pick = list(iter_bits(preferred))[:need]
            if len(pick) < need:
                pick += list(iter_bits(pool & self.E))[: need - len(pick)]
        else:
            need = self.k if literal_count is None else literal_count
            pick = list(iter_bits(pool))[:need]
        if len(pick) < need:
            raise StageFailure(stage, "not enough uncoloured candidate neighbours", {
                "vertex": v, "side": "in" if side == "b" else "out",
                "needed": need, "available": pool.bit_count(),
            })
        j = self.colour[v]
        for w in pick:
            self.paint(w, j, stage)
        return pick


def _colour_of_index(i: int, k: int) -> int:
    return i // k + 1


def _i_path_ends(fam: DominationFamily, i: int) -> tuple[int, int]:
    return fam.B[i].sink, fam.A[i].source


def _budget_check(st: _State, stage: str, key: str, budgets, ledger: list) -> None:
    count = st.coloured.bit_count()
    bound = budgets[key]
    ledger.append({"stage": key, "coloured": count, "bound": bound})
    if count > bound:
        raise StageFailure(stage, "coloured-vertex budget exceeded", {"coloured": count, "bound": bound})


def _require_safe(st: _State, stage: str) -> None:
    bad = st.unsafe_coloured()
    if bad:
        v = bad[0]
        raise StageFailure(stage, "coloured vertex left unsafe", {
            "vertex": v, "forward": bool(st.fwd_mask >> v & 1),
            "backward": bool(st.bwd_mask >> v & 1), "unsafe_count": len(bad),
        })


def _check_family(fam: DominationFamily) -> None:
    b = domination_bounds(fam)
    T = fam.frame
    for i, s in enumerate(fam.A):
        if s.E.bit_count() > b["E_Ai"]:
            raise StageFailure("Domination", "exceptional set above bound", {"set": f"A{i}", "size": s.E.bit_count()})
    for i, s in enumerate(fam.B):
        if s.E.bit_count() > b["E_Bi"]:
            raise StageFailure("Domination", "exceptional set above bound", {"set": f"B{i}", "size": s.E.bit_count()})
    if fam.E_A.bit_count() > fam.E_B.bit_count():
        raise StageFailure("Domination", "|E_A| > |E_B| in the output frame", {})
    del T


def claim3_secure_seeds(st: _State, budgets, ledger) -> None:
    fam = st.fam
    for j in range(1, st.t + 1):
        for v in iter_bits(fam.A_star(j - 1) | fam.B_star(j - 1)):
            st.paint(v, j, "D")
    seeds = fam.xs + fam.ys
    for s in seeds:
        st.add_neighbours(s, "b", 0, "Claim3")
        st.add_neighbours(s, "f", 0, "Claim3")
    for v in [u for u in st.order if not st.seeds >> u & 1]:
        st.add_neighbours(v, "b", st.E_A, "Claim3")
    for v in [u for u in st.order if not st.seeds >> u & 1]:
        st.add_neighbours(v, "f", st.E, "Claim3")
    _require_safe(st, "Claim3")
    _budget_check(st, "Claim3", "Claim3", budgets, ledger)


def claim4_build_paths(st: _State, budgets, ledger, result: dict) -> None:
    fam, k, p = st.fam, st.k, st.p
    kt = k * st.t
    paths: dict[int, list[int]] = {}
    short: list[int] = []
    blocked = 0
    for i in range(kt):
        b, a = _i_path_ends(fam, i)
        path = shortest_path(st.T, b, a, st.uncoloured & ~blocked, max_edges=p.short_path_bound)
        if path is not None:
            paths[i] = path
            short.append(i)
            blocked |= mask_of(path[1:-1])
    for i in short:
        for v in paths[i][1:-1]:
            st.paint(v, _colour_of_index(i, k), "ShortPaths")
    long_idx = [i for i in range(kt) if i not in paths]
    result.update(paths=paths, short=short, long=long_idx, families={}, reach={}, lemma={}, helpers=[])

    # Claim 4.1
    interiors = [v for i in short for v in paths[i][1:-1]]
    added: dict[int, list[int]] = {}
    for v in interiors:
        added[v] = st.add_neighbours(v, "b", st.E_A, "Claim4_1")
    for v in interiors:
        for w in [v] + added[v]:
            st.add_neighbours(w, "f", st.E, "Claim4_1")
    _require_safe(st, "Claim4_1")
    _budget_check(st, "Claim4_1", "Claim4_1", budgets, ledger)

    if not long_idx:
        _budget_check(st, "Claim4_3", "Claim4", budgets, ledger)
        return

    # Claim 4.2
    ends = 0
    pairs = []
    for i in long_idx:
        b, a = _i_path_ends(fam, i)
        ends |= (1 << b) | (1 << a)
        pairs.extend([(b, a)] * p.spare_paths)
    sub_mask = st.uncoloured | ends
    sub = induced(st.T, sub_mask)
    local = {v: idx for idx, v in enumerate(sub.labels)}
    req = PathRequest([(local[b], local[a]) for b, a in pairs], node_budget=p.path_node_budget)
    try:
        res = find_short_path_family(sub, req, 2 * p.m)
    except PathPackingFailed as exc:
        flat = exc.pair_index // p.spare_paths
        raise StageFailure("LongPaths", "no disjoint i-path family within the interior budget", {
            "index": long_idx[min(flat, len(long_idx) - 1)], "nodes_explored": exc.nodes_explored,
            "exhausted": exc.exhausted, "interior_budget": sub.n // (2 * p.m),
        }) from None
    families: dict[int, list[list[int]]] = {i: [] for i in long_idx}
    for q, path in enumerate(res.paths):
        i = long_idx[q // p.spare_paths]
        root_path = [sub.labels[v] for v in path]
        red = reduce_to_backwards_transitive(st.T, root_path)
        if len(red) - 1 < k + 2:
            raise StageFailure("LongPaths", "reduced i-path shorter than k+2", {
                "index": i, "path": red,
            })
        families[i].append(red)
    result["families"] = families
    result["notes"] = list(res.notes)

    # Claim 4.3
    reach: dict[int, ReachSets] = {}
    lemma_sets: dict[int, int] = {}
    for j in range(1, st.t + 1):
        own = [i for i in long_idx if _colour_of_index(i, k) == j]
        if not own:
            continue
        qs = [pth[1:-1] for i in own for pth in families[i]]
        lemma = 0
        for q in qs:
            lemma |= mask_of(q)
        try:
            rs = reach_sets(st.T, qs, k, vertex_set=lemma)
        except TournamentError as exc:
            raise StageFailure("Claim4_3", f"reach sets unavailable: {exc}", {"colour": j}) from None
        reach[j] = rs
        lemma_sets[j] = lemma
    for j, rs in reach.items():
        for v in iter_bits((rs.U_prime | rs.W_prime) & st.uncoloured):
            st.paint(v, j, "Claim4_3")
    before = st.coloured
    helper_in: dict[int, list[int]] = {}
    for j, rs in reach.items():
        for w in iter_bits(rs.W):
            helper_in[w] = st.add_neighbours(w, "b", st.E_A, "Claim4_3")
    for j, rs in reach.items():
        targets = list(iter_bits(rs.U))
        for w in iter_bits(rs.W):
            targets.extend(helper_in[w])
        for u in targets:
            st.add_neighbours(u, "f", st.E, "Claim4_3")
    Z = st.coloured & ~before
    for j, rs in reach.items():
        st.install_reach(j, rs, lemma_sets[j])
    for i in long_idx:
        j = _colour_of_index(i, k)
        choice = next((pth for pth in families[i] if not mask_of(pth[1:-1]) & Z), None)
        if choice is None:
            raise StageFailure("Claim4_3", "every spare i-path meets the helper set Z", {
                "index": i, "Z_size": Z.bit_count(), "spares": len(families[i]),
            })
        paths[i] = choice
    for i in long_idx:
        j = _colour_of_index(i, k)
        for pth in families[i]:
            for v in pth[1:-1]:
                if not st.coloured >> v & 1:
                    st.paint(v, j, "LongPaths")
    for i in long_idx:
        j = _colour_of_index(i, k)
        bad = [v for v in paths[i] if st.colour[v] != j]
        if bad:
            raise StageFailure("Claim4_3", "chosen i-path not monochromatic", {"index": i, "vertex": bad[0]})
    result["reach"] = reach
    result["lemma"] = lemma_sets
    result["helpers"] = list(iter_bits(Z))
    _require_safe(st, "Claim4_3")
    _budget_check(st, "Claim4_3", "Claim4", budgets, ledger)


def _exception_counts(fam: DominationFamily, v: int, colour: int) -> tuple[int, int]:
    idx = fam.indices_of(colour - 1)
    a = sum(1 for i in idx if fam.A[i].E >> v & 1)
    b = sum(1 for i in idx if fam.B[i].E >> v & 1)
    return a, b


def claim5_absorb_exceptional(st: _State, budgets, ledger) -> list[dict]:
    fam, k, T = st.fam, st.k, st.T
    colours = range(1, st.t + 1)
    todo = list(iter_bits(st.E & st.uncoloured))
    cases = {1: [], 2: [], 3: []}
    for v in todo:
        counts = [_exception_counts(fam, v, j) for j in colours]
        if any(a <= b for a, b in counts) and any(a >= b for a, b in counts):
            cases[1].append(v)
        elif all(a < b for a, b in counts):
            cases[2].append(v)
        else:
            cases[3].append(v)
    trail = []

    def fresh(v, side, avoid):
        adj = T._out[v] if side == "f" else T._in[v]
        return list(iter_bits(adj & st.uncoloured & ~avoid))[:k]

    def finish(v, case):
        if not st.safe(v):
            raise StageFailure("Claim5", "exceptional vertex left unsafe", {
                "vertex": v, "case": case, "forward": bool(st.fwd_mask >> v & 1),
                "backward": bool(st.bwd_mask >> v & 1),
            })
        trail.append({"vertex": v, "case": case, "colour": st.colour[v]})

    for v in cases[1]:
        if not st.uncoloured >> v & 1:
            continue
        counts = {j: _exception_counts(fam, v, j) for j in colours}
        j1 = next(j for j in colours if counts[j][0] <= counts[j][1])
        j2 = next(j for j in colours if counts[j][0] >= counts[j][1])
        outs = fresh(v, "f", st.E)
        if len(outs) >= k:
            st.paint(v, j1, "Claim5")
            for w in outs:
                st.paint(w, j1, "Claim5")
            finish(v, "1.1")
            continue
        ins = fresh(v, "b", st.E)
        if len(ins) < k:
            raise StageFailure("Claim5", "no room for fresh neighbours", {"vertex": v, "case": "1.2"})
        st.paint(v, j2, "Claim5")
        for w in ins:
            st.paint(w, j2, "Claim5")
        finish(v, "1.2")

    for v in cases[2]:
        if not st.uncoloured >> v & 1:
            continue
        outs = fresh(v, "f", st.E)
        if len(outs) >= k:
            st.paint(v, 1, "Claim5")
            for w in outs:
                st.paint(w, 1, "Claim5")
            finish(v, "2.1")
            continue
        j = next((j for j in colours
                  if (T._out[v] & st.cls[j] & st.fwd_mask).bit_count() >= k), None)
        if j is None:
            raise StageFailure("Claim5", "no colour offers k safe out-neighbours", {"vertex": v, "case": "2.2"})
        st.paint(v, j, "Claim5")
        finish(v, "2.2")

    for v in cases[3]:
        if not st.uncoloured >> v & 1:
            continue
        ins = fresh(v, "b", st.E_A)
        if len(ins) >= k:
            st.paint(v, 1, "Claim5")
            for w in ins:
                st.paint(w, 1, "Claim5")
            finish(v, "3.1")
            continue
        j = next((j for j in colours
                  if (T._in[v] & st.cls[j] & st.bwd_mask).bit_count() >= k), None)
        if j is None:
            raise StageFailure("Claim5", "no colour offers k safe in-neighbours", {"vertex": v, "case": "3.2"})
        st.paint(v, j, "Claim5")
        finish(v, "3.2")

    if st.E & st.uncoloured:
        v = next(iter_bits(st.E & st.uncoloured))
        raise StageFailure("Claim5", "exceptional vertex left uncoloured", {"vertex": v})
    _require_safe(st, "Claim5")
    _budget_check(st, "Claim5", "Claim5", budgets, ledger)
    return trail


def partition_robust(T: Tournament, params: PipelineParams) -> PartitionCertificate:
    """Disjoint classes ``V_1..V_t`` with ``|V_j| <= n/m`` and certified safety.

    Raises :class:`StageFailure` naming the stage that ran out of room.  The
    returned certificate has passed the structural and ledger checks of
    :mod:`tournament_partition.verify`; the sampled connectivity check is
    :func:`tournament_partition.verify.check_partition`.
    """
    k, t, m = params.k, params.t, params.m
    n = T.n
    if params.mode == "strict" and not params.assume_connectivity:
        need = partition_threshold(k, t, m)
        if n <= need:
            raise ConnectivityGateError(
                f"strict mode needs strong {need:.3g}-connectivity, impossible with n={n}"
            )
        from .connectivity import is_strongly_k_connected
        if not is_strongly_k_connected(T, math.ceil(need)):
            raise ConnectivityGateError(f"input is not strongly {need:.3g}-connected")
    try:
        fam = build_domination_family(T, k, t, m, c=params.c)
    except TooSmall as exc:
        raise StageFailure("Seeds", str(exc), {"n": n, "seeds_needed": 2 * k * t}) from None
    _check_family(fam)
    frame = fam.frame
    st = _State(frame, fam, params)
    budgets = stage_budgets(n, k, t, m, fam.c)
    budget_ledger: list[dict] = []
    claim3_secure_seeds(st, budgets, budget_ledger)
    res: dict = {}
    claim4_build_paths(st, budgets, budget_ledger, res)
    trail = claim5_absorb_exceptional(st, budgets, budget_ledger)

    ledger = {v: {"colour": st.colour[v], "forward": st.fwd[v], "backward": st.bwd[v]}
              for v in st.order}
    notes = list(res.get("notes", []))
    if params.c is not None:
        notes.append(f"c overridden to {params.c}")
    if params.mode == "strict":
        notes.append("connectivity hypothesis assumed by caller" if params.assume_connectivity
                     else "connectivity hypothesis verified")
    notes.extend(f"exceptional vertex {e['vertex']}: case {e['case']} -> colour {e['colour']}" for e in trail)
    cert = PartitionCertificate(
        n=n, params=params, swapped=fam.swapped, c=fam.c,
        classes=[list(iter_bits(st.cls[j])) for j in range(1, t + 1)],
        paths={i: res["paths"][i] for i in sorted(res["paths"])},
        short_indices=res["short"], long_indices=res["long"],
        long_families=res["families"], family=fam,
        reach=res["reach"], lemma_sets={j: list(iter_bits(s)) for j, s in res["lemma"].items()},
        ledger=ledger, helpers=res["helpers"], budgets=budget_ledger,
        stage_of=dict(st.stage_of), notes=notes,
    )
    from .verify import check_structure
    report = check_structure(T, cert)
    if not report.passed:
        raise CertificateInvalid(f"internal certificate check failed: {report.failures()[0]}")
    return cert


def complete_partition(T: Tournament, cert: PartitionCertificate, rule: str = "first") -> list[list[int]]:
    """Distribute the uncoloured vertices over the classes.

    ``first`` puts every leftover into class 1, ``round-robin`` deals them in
    id order, ``balance`` always feeds the currently smallest class.
    """
    classes = [list(c) for c in cert.classes]
    used = set(v for c in classes for v in c)
    leftover = [v for v in range(T.n) if v not in used]
    if rule == "first":
        classes[0].extend(leftover)
    elif rule == "round-robin":
        for idx, v in enumerate(leftover):
            classes[idx % len(classes)].append(v)
    elif rule == "balance":
        for v in leftover:
            j = min(range(len(classes)), key=lambda c: (len(classes[c]), c))
            classes[j].append(v)
    else:
        raise ValueError(f"unknown completion rule {rule!r}")
    return [sorted(c) for c in classes]


def certificate_from_dict(T: Tournament, d: dict) -> PartitionCertificate:
    """Rebuild a certificate written by :meth:`PartitionCertificate.to_dict`."""
    from .core import reverse
    from .domination import DomSet

    if d.get("kind") != "partition-certificate":
        raise ValueError("not a partition certificate")
    if d["n"] != T.n:
        raise ValueError(f"certificate is for n={d['n']}, tournament has n={T.n}")
    params = PipelineParams(**d["params"])
    fd = d["family"]

    def domset(s):
        return DomSet(list(s["chain"]), mask_of(s["E"]), s["anchor"], s["mode"], s["c"], 0, list(s["trace"]))

    frame = reverse(T) if fd["swapped"] else T
    fam = DominationFamily(fd["k"], fd["t"], fd["m"], fd["c"], frame, fd["swapped"],
                           list(fd["x"]), list(fd["y"]),
                           [domset(s) for s in fd["A"]], [domset(s) for s in fd["B"]],
                           fd["delta_in_hat"], fd["delta_out_hat"])
    reach = {int(j): ReachSets(mask_of(r["U"]), mask_of(r["W"]), mask_of(r["U_prime"]),
                               mask_of(r["W_prime"]), r["k"], r["ell"], [], [])
             for j, r in d["reach"].items()}
    return PartitionCertificate(
        n=d["n"], params=params, swapped=d["swapped"], c=d["c"],
        classes=[list(c) for c in d["classes"]],
        paths={int(i): list(p) for i, p in d["paths"].items()},
        short_indices=list(d["short_indices"]), long_indices=list(d["long_indices"]),
        long_families={int(i): [list(p) for p in f] for i, f in d["long_families"].items()},
        family=fam, reach=reach,
        lemma_sets={int(j): list(s) for j, s in d["lemma_sets"].items()},
        ledger={int(v): e for v, e in d["ledger"].items()},
        helpers=list(d["helpers"]), budgets=list(d["budgets"]),
        stage_of={int(v): s for v, s in d["stage_of"].items()},
        notes=list(d["notes"]),
    )
