"""Backwards-transitive paths and robust reach sets built on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Tournament, iter_bits, mask_of
from .errors import TournamentError


class PathTooShort(TournamentError, ValueError):
    pass


class NotPartition(TournamentError, ValueError):
    pass


def is_backwards_transitive(t: Tournament, path: Sequence[int]) -> bool:
    """``q_a -> q_b`` iff ``b == a + 1`` or ``a >= b + 2``, for all positions."""
    q = list(path)
    for a in range(len(q)):
        for b in range(len(q)):
            if a == b:
                continue
            expected = b == a + 1 or a >= b + 2
            if t.has_edge(q[a], q[b]) != expected:
                return False
    return True


def reduce_to_backwards_transitive(t: Tournament, path: Sequence[int]) -> list[int]:
    """Delete shortcut-bypassed vertices until none remains.

    A vertex is deletable if some ancestor has an edge to some descendant.
    The earliest deletable vertex goes first, repeated to a fixpoint; the
    endpoints are never deletable.
    """
    p = list(path)
    for a, b in zip(p, p[1:]):
        if not t.has_edge(a, b):
            raise ValueError(f"{a}->{b} is not an edge")
    out = t._out
    while True:
        ancestors = 0
        victim = None
        for i in range(1, len(p) - 1):
            ancestors |= 1 << p[i - 1]
            descendants = mask_of(p[i + 1:])
            if any(out[a] & descendants for a in iter_bits(ancestors)):
                victim = i
                break
        if victim is None:
            return p
        del p[victim]


@dataclass
class ReachSets:
    """Small sets ``U``, ``W`` reachable robustly inside ``U'``, ``W'``."""

    U: int
    W: int
    U_prime: int
    W_prime: int
    k: int
    ell: int
    columns_U: list[list[int]]
    columns_W: list[list[int]]

    def to_dict(self):
        return {
            "U": list(iter_bits(self.U)),
            "W": list(iter_bits(self.W)),
            "U_prime": list(iter_bits(self.U_prime)),
            "W_prime": list(iter_bits(self.W_prime)),
            "k": self.k,
            "ell": self.ell,
        }


def _lowest_out_in_column(t: Tournament, column: Sequence[int], count: int, use_in: bool) -> list[int]:
    cmask = mask_of(column)
    adj = t._in if use_in else t._out
    ranked = sorted(column, key=lambda v: ((adj[v] & cmask).bit_count(), v))
    return ranked[:count]


def reach_sets(t: Tournament, paths: Sequence[Sequence[int]], k: int,
               vertex_set: int | None = None) -> ReachSets:
    """Reach sets for a tournament split into backwards-transitive paths.

    Column ``i`` holds the ``i``-th vertex of every path (``i <= k+1``); its
    ``min(2k, ell)`` lowest out-degree vertices form part of ``U``.  The
    ``W`` side is the same construction on the reversed paths in the
    reversed tournament, i.e. the last ``k+1`` vertices and in-degrees.
    ``vertex_set`` is the vertex set the paths must partition (defaults to
    all of ``t``).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    paths = [list(p) for p in paths]
    ell = len(paths)
    if ell == 0:
        raise NotPartition("no paths given")
    union = 0
    for j, p in enumerate(paths):
        if len(p) < k + 1:
            raise PathTooShort(f"path {j} has {len(p)} < {k + 1} vertices")
        pm = mask_of(p)
        if union & pm or len(set(p)) != len(p):
            raise NotPartition(f"path {j} overlaps an earlier path")
        union |= pm
    target = t.full_mask if vertex_set is None else vertex_set
    if union != target:
        raise NotPartition("paths do not cover the vertex set exactly")
    take = min(2 * k, ell)
    cols_u, cols_w = [], []
    U = W = Up = Wp = 0
    for i in range(k + 1):
        col = [p[i] for p in paths]
        sel = _lowest_out_in_column(t, col, take, use_in=False)
        cols_u.append(sel)
        U |= mask_of(sel)
        Up |= mask_of(col)
        rcol = [p[len(p) - 1 - i] for p in paths]
        rsel = _lowest_out_in_column(t, rcol, take, use_in=True)
        cols_w.append(rsel)
        W |= mask_of(rsel)
        Wp |= mask_of(rcol)
    return ReachSets(U, W, Up, Wp, k, ell, cols_u, cols_w)
