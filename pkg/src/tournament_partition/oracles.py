"""Randomised and exhaustive suites pitting constructions against the oracles.

Each suite returns a JSON-ready summary with a ``failures`` list holding
concrete witnesses; an empty list means the suite passed.
"""
from __future__ import annotations

import time

import numpy as np

from . import verify
from .connectivity import is_strongly_k_connected, strongly_connected
from .core import Tournament, all_tournaments, paley, random_tournament
from .cycles import hamilton_cycle, two_cycles
from .domination import in_dominating_set, out_dominating_set
from .errors import ExceptionalTournament
from .linkage import reach_sets


def bt_fixture(ell: int, k: int, rng: np.random.Generator, max_extra: int = 3):
    """Tournament split into ``ell`` backwards-transitive paths.

    Path lengths are uniform in ``k+1 .. k+1+max_extra``; edges between
    different paths are fair coins and vertex ids are shuffled.
    """
    lens = rng.integers(k + 1, k + 2 + max_extra, size=ell)
    n = int(lens.sum())
    ids = rng.permutation(n)
    paths, pos = [], 0
    for L in lens:
        paths.append([int(v) for v in ids[pos:pos + L]])
        pos += L
    m = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    coin = rng.integers(0, 2, size=len(iu[0])).astype(bool)
    m[iu] = coin
    m[(iu[1], iu[0])] = ~coin
    for q in paths:
        for a in range(len(q)):
            for b in range(len(q)):
                if a != b:
                    m[q[a], q[b]] = b == a + 1 or a >= b + 2
    return Tournament.from_matrix(m), paths


def layered_tournament(size: int, levels: int, seed: int) -> Tournament:
    """Levels ``L_0..L_r`` of ``size`` vertices each; forward edges only go to the next level.

    Every edge between levels two or more apart points back, so each path
    from the last level to the first must climb through every level.  It
    forces long i-paths at small ``n``.
    """
    n = size * (levels + 1)
    rng = np.random.default_rng(seed)
    lvl = np.arange(n) // size
    coin = rng.integers(0, 2, size=(n, n)).astype(bool)
    gap = lvl[None, :] - lvl[:, None]
    upper = np.where(gap == 0, coin, gap == 1)
    m = np.triu(upper, 1)
    m = m | np.triu(~upper, 1).T
    return Tournament.from_matrix(m)


def connectivity_suite(n_max: int = 5, k_max: int = 3, random_count: int = 500,
                       random_n: tuple[int, int] = (6, 7), seed: int = 0) -> dict:
    t0 = time.perf_counter()
    failures, checked = [], 0
    for n in range(1, n_max + 1):
        for idx, T in enumerate(all_tournaments(n)):
            for k in range(1, k_max + 1):
                checked += 1
                if is_strongly_k_connected(T, k) != verify.brute_strong_k_connectivity(T, k):
                    failures.append({"n": n, "index": idx, "k": k})
    rng = np.random.default_rng(seed)
    for r in range(random_count):
        n = int(rng.integers(random_n[0], random_n[1] + 1))
        T = random_tournament(n, int(rng.integers(2**31)))
        for k in range(1, k_max + 1):
            checked += 1
            if is_strongly_k_connected(T, k) != verify.brute_strong_k_connectivity(T, k):
                failures.append({"n": n, "sample": r, "k": k})
    return {"suite": "connectivity", "checked": checked, "failures": failures,
            "seconds": time.perf_counter() - t0}


def domination_suite(count: int = 1000, n_max: int = 200, c_max: int = 10, seed: int = 0) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures = []
    for r in range(count):
        n = int(rng.integers(2, n_max + 1))
        T = random_tournament(n, int(rng.integers(2**31)))
        v = int(rng.integers(n))
        c = int(rng.integers(1, c_max + 1))
        mode = "out" if r % 2 == 0 else "in"
        s = out_dominating_set(T, v, c) if mode == "out" else in_dominating_set(T, v, c)
        chain = s.chain if mode == "out" else s.chain[::-1]
        rep = verify.audit_dom_set(T, chain, s.E, v, c, mode)
        if not rep.passed:
            failures.append({"sample": r, "n": n, "v": v, "c": c, "mode": mode,
                             "check": rep.failures()[0].to_dict()})
    return {"suite": "domination", "checked": count, "failures": failures,
            "seconds": time.perf_counter() - t0}


def reach_suite(count: int = 200, l_max: int = 6, k_max: int = 3, seed: int = 0) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures = []
    for r in range(count):
        ell = int(rng.integers(1, l_max + 1))
        k = int(rng.integers(1, k_max + 1))
        T, paths = bt_fixture(ell, k, rng)
        rs = reach_sets(T, paths, k)
        rep = verify.audit_reach_sets(T, paths, k, rs)
        if not rep.passed:
            failures.append({"sample": r, "ell": ell, "k": k, "check": rep.failures()[0].to_dict()})
    return {"suite": "reach", "checked": count, "failures": failures,
            "seconds": time.perf_counter() - t0}


def camion_suite(n_exhaustive: int = 6, random_count: int = 500, n_max: int = 100,
                 seed: int = 0) -> dict:
    t0 = time.perf_counter()
    failures, checked = [], 0
    for n in range(3, n_exhaustive + 1):
        for idx, T in enumerate(all_tournaments(n)):
            if not strongly_connected(T):
                continue
            checked += 1
            why = verify.audit_cycle(T, hamilton_cycle(T), T.full_mask)
            if why:
                failures.append({"n": n, "index": idx, "reason": why})
    rng = np.random.default_rng(seed)
    sampled = 0
    while sampled < random_count:
        n = int(rng.integers(3, n_max + 1))
        T = random_tournament(n, int(rng.integers(2**31)))
        if not strongly_connected(T):
            continue
        sampled += 1
        checked += 1
        why = verify.audit_cycle(T, hamilton_cycle(T), T.full_mask)
        if why:
            failures.append({"n": n, "sample": sampled, "reason": why})
    return {"suite": "camion", "checked": checked, "failures": failures,
            "seconds": time.perf_counter() - t0}


def song_suite(count: int = 100, n_range: tuple[int, int] = (8, 10), seed: int = 0) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures, tournaments, splits = [], 0, 0
    while tournaments < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        T = random_tournament(n, int(rng.integers(2**31)))
        if not is_strongly_k_connected(T, 2):
            continue
        tournaments += 1
        for L in range(3, n - 2):
            splits += 1
            try:
                a, b = two_cycles(T, L)
            except Exception as exc:  # any failure is a suite failure
                failures.append({"n": n, "L": L, "error": repr(exc)})
                continue
            rep = verify.audit_cycle_plan(T, [a, b], [L, n - L])
            if not rep.passed:
                failures.append({"n": n, "L": L, "check": rep.failures()[0].to_dict()})
    P7 = paley(7)
    for L in range(1, 8):
        try:
            two_cycles(P7, L)
            failures.append({"paley7": L, "error": "no exception raised"})
        except ExceptionalTournament:
            pass
        except Exception as exc:
            failures.append({"paley7": L, "error": repr(exc)})
    return {"suite": "song", "checked": splits, "tournaments": tournaments,
            "failures": failures, "seconds": time.perf_counter() - t0}


SUITES = {
    "connectivity": connectivity_suite,
    "domination": domination_suite,
    "reach": reach_suite,
    "camion": camion_suite,
    "song": song_suite,
}
