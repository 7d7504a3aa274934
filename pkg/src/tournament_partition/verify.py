"""Independent audits of certificates and brute-force oracles.

Everything here is written against the raw tournament queries
(``out_mask``, ``in_mask``, ``has_edge``) with its own reachability code,
so a bug in a construction module cannot hide itself by being reused by
its checker.  The one exception is the sampled connectivity check of
:func:`check_partition`, which calls the flow-based connectivity test on
classes far too large for subset enumeration; that test is itself
validated against :func:`brute_strong_k_connectivity`.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Tournament, reverse
from .errors import TooLarge


# -- report plumbing ----------------------------------------------------------

@dataclass
class Check:
    name: str
    scope: str
    passed: bool
    witness: dict | None = None

    def to_dict(self):
        d = {"name": self.name, "scope": self.scope, "passed": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)
    sampling: dict = field(default_factory=dict)
    timing: float = 0.0

    def add(self, name: str, scope: str, passed: bool, witness: dict | None = None) -> bool:
        if not passed and witness is None:
            witness = {"scope": scope}
        self.checks.append(Check(name, scope, bool(passed), None if passed else witness))
        return passed

    def extend(self, other: "AuditReport") -> None:
        self.checks.extend(other.checks)
        self.sampling.update(other.sampling)
        self.timing += other.timing

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, include_timing: bool = False):
        d = {
            "passed": self.passed,
            "checks_run": len(self.checks),
            "failures": [c.to_dict() for c in self.failures()],
            "checks": [c.to_dict() for c in self.checks],
            "sampling": self.sampling,
        }
        if include_timing:
            d["timing_s"] = self.timing
        return d


# -- own graph primitives -----------------------------------------------------

def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _forward_closure(T: Tournament, start: int, allowed: int) -> int:
    """Vertices reachable from the set ``start`` by paths staying in ``allowed``."""
    seen = start & allowed
    frontier = seen
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= T.out_mask(v)
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def _backward_closure(T: Tournament, start: int, allowed: int) -> int:
    seen = start & allowed
    frontier = seen
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= T.in_mask(v)
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def _strong(T: Tournament, allowed: int) -> bool:
    if allowed == 0:
        return False
    root = 1 << _bits(allowed)[0]
    return (_forward_closure(T, root, allowed) == allowed
            and _backward_closure(T, root, allowed) == allowed)


def brute_strong_k_connectivity(T: Tournament, k: int, within: int | None = None) -> bool:
    """Literal definition: more than k vertices and no set of < k vertices disconnects."""
    allowed = T.full_mask if within is None else within
    verts = _bits(allowed)
    n = len(verts)
    if k < 1:
        raise ValueError("k must be at least 1")
    if n > 40 or k > 3:
        raise TooLarge(f"subset enumeration over {n} vertices with k={k} is out of budget")
    if n <= k:
        return False
    for size in range(k):
        for S in itertools.combinations(verts, size):
            if not _strong(T, allowed & ~_mask(S)):
                return False
    return True


def is_transitive_order(T: Tournament, order: Sequence[int]) -> bool:
    return all(T.has_edge(order[a], order[b])
               for a in range(len(order)) for b in range(a + 1, len(order)))


def _transitive_sink_source(T: Tournament, vs: Sequence[int]) -> tuple[int, int] | None:
    """(sink, source) of ``T[vs]`` when it is transitive, else ``None``."""
    m = _mask(vs)
    outs = sorted(((T.out_mask(v) & m).bit_count(), v) for v in vs)
    if [d for d, _ in outs] != list(range(len(vs))):
        return None
    return outs[0][1], outs[-1][1]


# -- domination ----------------------------------------------------------------

def audit_dom_set(T: Tournament, chain: Sequence[int], E: int, v: int, c: int,
                  mode: str = "out") -> AuditReport:
    """Items (i)-(iv) of the out-dominating set lemma (``mode='in'`` mirrors it)."""
    rep = AuditReport()
    frame = T if mode == "out" else reverse(T)
    A = _mask(chain)
    scope = f"{mode}-set anchored at {v}"
    rep.add("size", scope, 1 <= len(set(chain)) == len(chain) <= c, {"size": len(chain), "c": c})
    ss = _transitive_sink_source(frame, list(chain))
    rep.add("transitive", scope, ss is not None, {"chain": list(chain)})
    rep.add("anchor", scope, ss is not None and ss[0] == v, {"anchor": v, "sink": ss and ss[0]})
    rep.add("disjoint", scope, not A & E, {"overlap": _bits(A & E)})
    common = frame.full_mask & ~A
    for a in chain:
        common &= frame.in_mask(a)
    rep.add("E is empty or the common neighbourhood", scope, E == 0 or E == common,
            {"E": _bits(E)[:10], "common": _bits(common)[:10]})
    missing = 0
    for w in _bits(frame.full_mask & ~(A | E)):
        if not frame.in_mask(w) & A:
            missing |= 1 << w
    rep.add("dominates", scope, missing == 0, {"undominated": _bits(missing)[:10]})
    deg = frame.in_mask(v).bit_count()
    rep.add("E bound", scope, E.bit_count() * (1 << (c - 1)) <= deg,
            {"E": E.bit_count(), "bound": deg / (1 << (c - 1))})
    return rep


def audit_domination_family(T: Tournament, fam) -> AuditReport:
    """Properties (i)-(viii), disjointness and the two aggregate E bounds.

    ``T`` is the input tournament; when the family is swapped every check
    runs in the reversed tournament, which is the frame the sets refer to.
    (iii) is audited as ``E_Ai`` lying inside the common in-neighbourhood of
    ``A_i`` and containing all of it outside ``D``: the greedy builds each
    set on what earlier sets left over, so vertices of ``D`` are absent.
    """
    rep = AuditReport()
    F = reverse(T) if fam.swapped else T
    kt = fam.k * fam.t
    A_sets = [list(s.chain) for s in fam.A]
    B_sets = [list(s.chain) for s in fam.B]
    rep.add("count", "family", len(A_sets) == kt == len(B_sets) == len(fam.xs) == len(fam.ys),
            {"A": len(A_sets), "B": len(B_sets), "kt": kt})
    D = 0
    overlap = None
    for name, vs in [(f"A{i}", s) for i, s in enumerate(A_sets)] + [(f"B{i}", s) for i, s in enumerate(B_sets)]:
        m = _mask(vs)
        if D & m and overlap is None:
            overlap = {"set": name, "vertices": _bits(D & m)}
        D |= m
    rep.add("disjoint", "family", overlap is None, overlap)
    xs = set(fam.xs)
    ys = set(fam.ys)
    d_in = min(F.in_mask(v).bit_count() for v in range(F.n) if v not in xs)
    d_out = min(F.out_mask(v).bit_count() for v in range(F.n) if v not in ys)
    c = fam.c
    half = 1 << (c - 1)
    EA = EB = 0
    for i in range(min(kt, len(A_sets))):
        for side, vs, E, anchor in (("A", A_sets[i], fam.A[i].E, fam.xs[i]), ("B", B_sets[i], fam.B[i].E, fam.ys[i])):
            scope = f"{side}{i}"
            ss = _transitive_sink_source(F, vs)
            rep.add("(i)/(ii) size", scope, 1 <= len(vs) <= c, {"size": len(vs)})
            end = None if ss is None else (ss[0] if side == "A" else ss[1])
            rep.add("(i)/(ii) transitive with seed end", scope, end == anchor,
                    {"expected": anchor, "found": end})
            m = _mask(vs)
            common = F.full_mask & ~m
            for a in vs:
                common &= F.in_mask(a) if side == "A" else F.out_mask(a)
            rep.add("(iii)/(iv) exceptional set", scope,
                    E == 0 or (E & ~common == 0 and common & ~D & ~E == 0),
                    {"outside_common": _bits(E & ~common)[:10], "missing": _bits(common & ~D & ~E)[:10]})
            bad = 0
            for w in _bits(F.full_mask & ~(D | E)):
                adj = F.in_mask(w) if side == "A" else F.out_mask(w)
                if not adj & m:
                    bad |= 1 << w
            rep.add("(v)/(vi) domination", scope, bad == 0, {"undominated": _bits(bad)[:10]})
            bound = d_in if side == "A" else d_out
            rep.add("(vii)/(viii) bound", scope, E.bit_count() * half <= bound,
                    {"E": E.bit_count(), "bound": bound / half})
            if side == "A":
                EA |= E
            else:
                EB |= E
    k, m_ = fam.k, fam.m
    rep.add("E_A size", "family", EA.bit_count() * 16 * k * m_ <= d_in, {"E_A": EA.bit_count(), "bound": d_in / (16 * k * m_)})
    rep.add("E_B size", "family", EB.bit_count() * 16 * k * m_ <= d_out, {"E_B": EB.bit_count(), "bound": d_out / (16 * k * m_)})
    rep.add("E size", "family", EA.bit_count() <= EB.bit_count() and (EA | EB).bit_count() * 8 * k * m_ <= d_out,
            {"E_A": EA.bit_count(), "E_B": EB.bit_count(), "E": (EA | EB).bit_count()})
    return rep


# -- backwards-transitive paths and reach sets ------------------------------

def is_bt_path(T: Tournament, q: Sequence[int]) -> bool:
    for a in range(len(q)):
        for b in range(len(q)):
            if a != b and T.has_edge(q[a], q[b]) != (b == a + 1 or a >= b + 2):
                return False
    return True


def _reach_side(T: Tournament, lemma: int, core: int, cover: int, k: int, forward: bool):
    """First (S, v) violating the one-sided reach property, or ``None``.

    Only ``S`` inside ``cover`` can matter: a path lives in
    ``(cover + v) - S`` and ``v`` is never in ``S``.
    """
    for size in range(k):
        for S in itertools.combinations(_bits(cover), size):
            s = _mask(S)
            allowed = cover & ~s
            # vertices of cover - S that reach core - S inside cover - S
            good = (_backward_closure if forward else _forward_closure)(T, core & ~s, allowed)
            for v in _bits(lemma & ~s):
                if good >> v & 1:
                    continue
                if not cover >> v & 1:
                    nbrs = T.out_mask(v) if forward else T.in_mask(v)
                    if nbrs & good:
                        continue
                return {"S": list(S), "v": v, "side": "U" if forward else "W"}
    return None


def audit_reach_sets(T: Tournament, paths: Sequence[Sequence[int]], k: int, rs,
                     vertex_set: int | None = None) -> AuditReport:
    """Exhaustive reach properties plus the size bounds and preconditions."""
    rep = AuditReport()
    lemma = T.full_mask if vertex_set is None else vertex_set
    ell = len(paths)
    union = 0
    ok = True
    for q in paths:
        m = _mask(q)
        ok &= not union & m and len(q) >= k + 1 and len(set(q)) == len(q)
        union |= m
    rep.add("paths partition the vertex set", "reach", ok and union == lemma,
            {"uncovered": _bits(lemma & ~union)[:10], "extra": _bits(union & ~lemma)[:10]})
    bt_bad = next((j for j, q in enumerate(paths) if not is_bt_path(T, q)), None)
    rep.add("paths backwards-transitive", "reach", bt_bad is None, {"path": bt_bad})
    if rs.U_prime.bit_count() > 24 * (k + 1) and k > 2:
        raise TooLarge("reach audit enumeration out of budget")
    rep.add("U subset of U'", "reach", rs.U & ~rs.U_prime == 0, {"extra": _bits(rs.U & ~rs.U_prime)})
    rep.add("W subset of W'", "reach", rs.W & ~rs.W_prime == 0, {"extra": _bits(rs.W & ~rs.W_prime)})
    cap = 2 * k * (k + 1)
    rep.add("|U|,|W| bound", "reach", rs.U.bit_count() <= cap and rs.W.bit_count() <= cap,
            {"U": rs.U.bit_count(), "W": rs.W.bit_count(), "bound": cap})
    want = ell * (k + 1)
    rep.add("|U'|,|W'| size", "reach", rs.U_prime.bit_count() == want == rs.W_prime.bit_count(),
            {"U_prime": rs.U_prime.bit_count(), "W_prime": rs.W_prime.bit_count(), "expected": want})
    w = _reach_side(T, lemma, rs.U, rs.U_prime, k, forward=True)
    rep.add("forward reach property", "reach", w is None, w)
    w = _reach_side(T, lemma, rs.W, rs.W_prime, k, forward=False)
    rep.add("backward reach property", "reach", w is None, w)
    return rep


# -- partition certificates -------------------------------------------------------

def _family_masks(fam):
    D = EA = EB = 0
    for s in fam.A:
        D |= _mask(s.chain)
        EA |= s.E
    for s in fam.B:
        D |= _mask(s.chain)
        EB |= s.E
    return D, EA, EB


def _budget_formulas(n, k, t, m, c):
    logm = np.log2(m)
    return {
        "Claim3": (k + 1) ** 2 * (2 * k * t * c + 4 * k * k * t),
        "Claim4_1": 54 * k ** 4 * t ** 2 * logm,
        "Claim4": 67 * k ** 4 * t ** 2 * logm + n / (2 * m),
        "Claim5": n / m,
    }


def check_structure(T: Tournament, cert) -> AuditReport:
    """Everything in a certificate except the sampled property (ii)."""
    t0 = time.perf_counter()
    rep = AuditReport()
    n, k, t, m = T.n, cert.k, cert.t, cert.m
    F = reverse(T) if cert.swapped else T
    fam = cert.family
    classes = [list(c) for c in cert.classes]
    masks = [_mask(c) for c in classes]
    rep.add("class count", "classes", len(classes) == t, {"classes": len(classes)})
    seen = 0
    clash = None
    for j, c in enumerate(classes):
        if any(not 0 <= v < n for v in c) or len(set(c)) != len(c):
            clash = clash or {"class": j + 1, "reason": "bad vertex ids"}
        if seen & masks[j]:
            clash = clash or {"class": j + 1, "shared": _bits(seen & masks[j])[:10]}
        seen |= masks[j]
    rep.add("classes disjoint", "classes", clash is None, clash)
    for j, c in enumerate(classes):
        rep.add("(i) class size", f"V{j + 1}", len(c) * m <= n, {"class": j + 1, "size": len(c), "bound": n / m})

    # parts consist of
    D, EA, EB = _family_masks(fam)
    kt = k * t
    for i in range(kt):
        j = i // k
        scope = f"i={i}"
        A_i, B_i = list(fam.A[i].chain), list(fam.B[i].chain)
        rep.add("A_i, B_i inside their class", scope, not (_mask(A_i) | _mask(B_i)) & ~masks[j],
                {"index": i, "outside": _bits((_mask(A_i) | _mask(B_i)) & ~masks[j])[:10]})
        ss_a = _transitive_sink_source(F, A_i)
        ss_b = _transitive_sink_source(F, B_i)
        p = cert.paths.get(i)
        good = (p is not None and ss_a is not None and ss_b is not None
                and len(p) >= 2 and p[0] == ss_b[0] and p[-1] == ss_a[1]
                and len(set(p)) == len(p)
                and all(F.has_edge(a, b) for a, b in zip(p, p[1:])))
        rep.add("P_i is an i-path", scope, good, {"index": i, "path": p})
        if p is not None:
            rep.add("P_i inside its class", scope, not _mask(p) & ~masks[j],
                    {"index": i, "outside": _bits(_mask(p) & ~masks[j])})
    interiors = [cert.paths[i][1:-1] for i in sorted(cert.paths)]
    used = 0
    disjoint = True
    for q in interiors:
        disjoint &= not used & _mask(q)
        used |= _mask(q)
    rep.add("i-paths internally disjoint", "paths", disjoint)

    # safety ledger
    colour_of = {v: j + 1 for j, c in enumerate(classes) for v in c}
    ledger = cert.ledger
    rep.add("ledger covers the classes", "ledger", set(ledger) == set(colour_of),
            {"missing": sorted(set(colour_of) - set(ledger))[:10], "extra": sorted(set(ledger) - set(colour_of))[:10]})
    reach_ok: dict[int, bool] = {}
    for j, rs in cert.reach.items():
        lemma = _mask(cert.lemma_sets[j])
        qs = [pth[1:-1] for i in cert.long_indices if i // k + 1 == j for pth in cert.long_families[i]]
        sub = audit_reach_sets(F, qs, k, rs, vertex_set=lemma)
        for ch in sub.checks:
            rep.add(ch.name, f"reach colour {j}", ch.passed, ch.witness)
        reach_ok[j] = sub.passed and not rs.U_prime & ~masks[j - 1] and not rs.W_prime & ~masks[j - 1]
    first_bad = None
    for v in sorted(ledger):
        entry = ledger[v]
        j = entry["colour"]
        if colour_of.get(v) != j:
            first_bad = first_bad or {"vertex": v, "reason": "colour mismatch"}
            continue
        for side, bad_set, adj, key in (("forward", D | EB, F.out_mask, "forward"),
                                         ("backward", D | EA, F.in_mask, "backward")):
            cert_v = entry.get(key)
            why = _validate_cert(F, v, j, cert_v, side, bad_set, adj, ledger, cert, masks, reach_ok, k)
            if why and first_bad is None:
                first_bad = {"vertex": v, "side": side, "reason": why}
    rep.add("safety certificates valid", "ledger", first_bad is None, first_bad)

    # budgets
    c_expected = (32 * k * k * t * m - 1).bit_length()
    rep.add("c matches", "budgets", cert.c == c_expected or cert.params.c == cert.c,
            {"c": cert.c, "expected": c_expected})
    bounds = _budget_formulas(n, k, t, m, cert.c)
    for entry in cert.budgets:
        bound = bounds[entry["stage"]]
        rep.add("budget", entry["stage"], entry["coloured"] <= bound,
                {"stage": entry["stage"], "coloured": entry["coloured"], "bound": float(bound)})
    total = sum(len(c) for c in classes)
    final = cert.budgets[-1]["coloured"] if cert.budgets else None
    rep.add("final count matches classes", "budgets", final == total, {"recorded": final, "actual": total})
    rep.timing = time.perf_counter() - t0
    return rep


def _validate_cert(F, v, j, c, side, bad_set, adj, ledger, cert, masks, reach_ok, k) -> str | None:
    if not c:
        return "no certificate"
    kind = c.get("kind")
    if kind == "outside":
        return None if not bad_set >> v & 1 else "vertex lies in the exceptional region"
    if kind == "neighbours":
        via = c.get("via", [])
        if len(set(via)) < k:
            return "fewer than k neighbours"
        for w in via:
            e = ledger.get(w)
            if e is None or e["colour"] != j:
                return f"neighbour {w} not in the class"
            if not adj(v) >> w & 1:
                return f"{w} is not an {'out' if side == 'forward' else 'in'}-neighbour"
            if e[side]["seq"] >= c["seq"]:
                return f"neighbour {w} certified later"
        return None
    if kind == "reach":
        jj = c.get("colour")
        if jj != j or not reach_ok.get(j):
            return "reach sets of this colour do not validate"
        rs = cert.reach[j]
        core = rs.U if side == "forward" else rs.W
        if not v in cert.lemma_sets[j] or core >> v & 1:
            return "vertex outside the reach structure"
        for u in _bits(core):
            e = ledger.get(u)
            if e is None or e[side]["kind"] == "reach" or e[side]["seq"] >= c["seq"]:
                return f"core vertex {u} not certified first"
        return None
    return f"unknown certificate kind {kind!r}"


def check_partition(T: Tournament, cert, k: int | None = None, samples: int = 64,
                    seed: int = 0) -> AuditReport:
    """(i) exactly and (ii) on R = empty, full complement and random subsets."""
    from .connectivity import is_strongly_k_connected

    t0 = time.perf_counter()
    k = cert.k if k is None else k
    rep = check_structure(T, cert)
    classes = [_mask(c) for c in cert.classes]
    union = 0
    for c in classes:
        union |= c
    comp = T.full_mask & ~union
    comp_vs = _bits(comp)
    Rs = [("empty", 0), ("complement", comp)]
    if len(comp_vs) <= 12:
        for bits in range(1, (1 << len(comp_vs)) - 1):
            Rs.append((f"subset {bits}", _mask(v for i, v in enumerate(comp_vs) if bits >> i & 1)))
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        for s in range(samples):
            pick = rng.integers(0, 2, size=len(comp_vs)).astype(bool)
            Rs.append((f"sample {s}", _mask(v for v, b in zip(comp_vs, pick) if b)))
        mode = "sampled"
    rep.sampling = {"mode": mode, "R_count": len(Rs), "samples": samples, "seed": seed,
                    "complement_size": len(comp_vs)}
    for j, cm in enumerate(classes):
        bad = None
        for label, R in Rs:
            if not is_strongly_k_connected(T, k, within=cm | R):
                bad = {"class": j + 1, "R": label, "R_vertices": _bits(R)[:50], "R_size": R.bit_count()}
                break
        rep.add("(ii) strongly k-connected with R", f"V{j + 1}", bad is None, bad)
    rep.timing = time.perf_counter() - t0
    return rep


def audit_safety(T: Tournament, cert, max_class: int = 400) -> AuditReport:
    """Safety by definition: every (v, S) with |S| <= k-1 inside the class.

    Paths live in ``T[V_j - S]``, so only ``S`` inside ``V_j`` matters.
    """
    rep = AuditReport()
    F = reverse(T) if cert.swapped else T
    k = cert.k
    D, EA, EB = _family_masks(cert.family)
    for j, c in enumerate(cert.classes):
        cm = _mask(c)
        if len(c) > max_class and k > 1:
            raise TooLarge(f"class of size {len(c)} too large for exhaustive safety audit")
        bad = None
        for size in range(k):
            for S in itertools.combinations(c, size):
                s = _mask(S)
                allowed = cm & ~s
                fwd_ok = _backward_closure(F, allowed & ~(D | EB), allowed)
                bwd_ok = _forward_closure(F, allowed & ~(D | EA), allowed)
                miss = allowed & ~(fwd_ok & bwd_ok)
                if miss:
                    v = _bits(miss)[0]
                    bad = {"class": j + 1, "S": list(S), "vertex": v,
                           "forward": bool(fwd_ok >> v & 1), "backward": bool(bwd_ok >> v & 1)}
                    break
            if bad:
                break
        rep.add("every coloured vertex safe", f"V{j + 1}", bad is None, bad)
    return rep


def audit_claim1(T: Tournament, cert, max_pairs: int | None = None, seed: int = 0) -> AuditReport:
    """Ordered pairs x, y of non-exceptional vertices of ``V_j`` plus leftovers
    are joined in ``T[(V_j - S) + {x, y}]`` for every small ``S``."""
    rep = AuditReport()
    F = reverse(T) if cert.swapped else T
    k = cert.k
    D, EA, EB = _family_masks(cert.family)
    union = 0
    for c in cert.classes:
        union |= _mask(c)
    spare = F.full_mask & ~union
    rng = np.random.default_rng(seed)
    for j, c in enumerate(cert.classes):
        cm = _mask(c)
        X = _bits((cm | spare) & ~(D | EB))
        Y = (cm | spare) & ~(D | EA)
        if max_pairs is not None and len(X) > max_pairs:
            X = sorted(rng.choice(X, size=max_pairs, replace=False).tolist())
        bad = None
        for size in range(k):
            for S in itertools.combinations(c, size):
                s = _mask(S)
                base = cm & ~s
                for x in X:
                    if s >> x & 1:
                        continue
                    reach = _forward_closure(F, 1 << x, base | 1 << x)
                    # y outside the class may only be the final vertex
                    hit = reach
                    for w in _bits(reach):
                        hit |= F.out_mask(w) & Y
                    miss = Y & ~s & ~hit & ~(1 << x)
                    if miss:
                        bad = {"class": j + 1, "S": list(S), "x": x, "y": _bits(miss)[0]}
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("Claim-1 pair connectivity", f"V{j + 1}", bad is None, bad)
    return rep


# -- cycles ----------------------------------------------------------------------

def audit_cycle(T: Tournament, cycle: Sequence[int], vertices: int | None = None) -> str | None:
    """Problem description for a directed cycle, or ``None`` if it is valid."""
    cyc = list(cycle)
    if len(cyc) < 3:
        return f"cycle of length {len(cyc)}"
    if len(set(cyc)) != len(cyc):
        return "repeated vertex"
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        if not T.has_edge(a, b):
            return f"missing edge {a}->{b}"
    if vertices is not None and _mask(cyc) != vertices:
        return "cycle does not cover the vertex set"
    return None


def audit_cycle_plan(T: Tournament, cycles: Sequence[Sequence[int]], lengths: Sequence[int]) -> AuditReport:
    rep = AuditReport()
    rep.add("cycle count", "plan", len(cycles) == len(lengths), {"cycles": len(cycles), "lengths": len(lengths)})
    used = 0
    overlap = None
    for j, cyc in enumerate(cycles):
        why = audit_cycle(T, cyc)
        rep.add("cycle valid", f"C{j + 1}", why is None, {"cycle": j + 1, "reason": why})
        if j < len(lengths):
            rep.add("cycle length", f"C{j + 1}", len(cyc) == lengths[j],
                    {"cycle": j + 1, "length": len(cyc), "expected": lengths[j]})
        m = _mask(cyc)
        if used & m and overlap is None:
            overlap = {"cycle": j + 1, "shared": _bits(used & m)[:10]}
        used |= m
    rep.add("cycles disjoint", "plan", overlap is None, overlap)
    rep.add("cycles cover", "plan", used == T.full_mask, {"uncovered": _bits(T.full_mask & ~used)[:10]})
    return rep
