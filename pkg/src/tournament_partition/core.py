"""Tournament representation, generators and the text file format.

A tournament on ``n`` vertices is stored as one bit-packed row per vertex:
``out_mask(v)`` has bit ``w`` set iff the edge is directed ``v -> w``.
Python ints are used as bitsets throughout the package, so set algebra on
neighbourhoods is a single machine-level operation per word.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadModulus, DuplicatePair, EmptySet, MissingPair, OrientationError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _row_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


class Tournament:
    """Immutable tournament on vertices ``0..n-1``.

    ``labels`` maps local vertex ids to ids of the tournament this one was
    induced from (identity for a root tournament), so certificates built on
    a subtournament can always be translated back to the input's ids.
    """

    __slots__ = ("n", "_out", "_in", "_matrix", "labels")

    def __init__(self, out_masks: Sequence[int], labels: Sequence[int] | None = None):
        n = len(out_masks)
        full = (1 << n) - 1
        in_masks = [0] * n
        for v, m in enumerate(out_masks):
            for w in iter_bits(m):
                in_masks[w] |= 1 << v
        for v in range(n):
            m = out_masks[v]
            if m >> v & 1:
                raise OrientationError(f"self-loop at {v}")
            if m & in_masks[v]:
                w = lowest_bit(m & in_masks[v])
                raise DuplicatePair(v, w)
            rest = full & ~(m | in_masks[v] | (1 << v))
            if rest:
                raise MissingPair(v, lowest_bit(rest))
        self.n = n
        self._out = tuple(out_masks)
        self._in = tuple(in_masks)
        self._matrix = None
        self.labels = tuple(labels) if labels is not None else tuple(range(n))

    @classmethod
    def from_matrix(cls, matrix, labels=None) -> "Tournament":
        m = np.array(matrix, dtype=bool)
        n = m.shape[0]
        if m.shape != (n, n) or m.diagonal().any():
            raise OrientationError("adjacency matrix must be square with empty diagonal")
        both = m & m.T
        if both.any():
            u, v = map(int, np.argwhere(both)[0])
            raise DuplicatePair(min(u, v), max(u, v))
        neither = ~(m | m.T)
        np.fill_diagonal(neither, False)
        if neither.any():
            u, v = map(int, np.argwhere(neither)[0])
            raise MissingPair(min(u, v), max(u, v))
        t = cls.__new__(cls)
        t.n = n
        t._out = tuple(_row_to_int(row) for row in m)
        t._in = tuple(_row_to_int(row) for row in m.T)
        m.setflags(write=False)
        t._matrix = m
        t.labels = tuple(labels) if labels is not None else tuple(range(n))
        return t

    # -- queries -----------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._out[u] >> v & 1)

    def out_mask(self, v: int) -> int:
        return self._out[v]

    def in_mask(self, v: int) -> int:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return self._out[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self._in[v].bit_count()

    def out_neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self._out[v]))

    def in_neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self._in[v]))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def matrix(self) -> np.ndarray:
        """Boolean adjacency matrix, ``matrix[u, v]`` iff ``u -> v``."""
        if self._matrix is None:
            n = self.n
            nbytes = (n + 7) // 8
            if n:
                raw = b"".join(r.to_bytes(nbytes, "little") for r in self._out)
                bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
                m = bits.reshape(n, nbytes * 8)[:, :n].astype(bool)
            else:
                m = np.zeros((0, 0), dtype=bool)
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def out_degrees(self) -> list[int]:
        return [m.bit_count() for m in self._out]

    def in_degrees(self) -> list[int]:
        return [m.bit_count() for m in self._in]

    def min_semidegree(self) -> int:
        if self.n == 0:
            return 0
        return min(min(self.out_degrees()), min(self.in_degrees()))

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for w in iter_bits(self._out[v]):
                yield v, w

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Tournament) and self._out == other._out

    def __hash__(self) -> int:
        return hash(self._out)

    def __repr__(self) -> str:
        return f"Tournament(n={self.n})"

    def to_root(self, vertices: Iterable[int]) -> list[int]:
        return [self.labels[v] for v in vertices]


def build(n: int, orientation: Iterable[tuple[int, int]]) -> Tournament:
    """Build a tournament from directed edges ``(u, v)`` meaning ``u -> v``.

    Every unordered pair must appear exactly once.
    """
    out = [0] * n
    seen = [0] * n
    for u, v in orientation:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise OrientationError(f"bad edge ({u}, {v}) for n={n}")
        if seen[u] >> v & 1:
            raise DuplicatePair(min(u, v), max(u, v))
        seen[u] |= 1 << v
        seen[v] |= 1 << u
        out[u] |= 1 << v
    full = (1 << n) - 1
    for v in range(n):
        rest = full & ~seen[v] & ~(1 << v)
        if rest:
            raise MissingPair(*sorted((v, lowest_bit(rest))))
    return Tournament(out)


def reverse(t: Tournament) -> Tournament:
    r = Tournament.__new__(Tournament)
    r.n = t.n
    r._out = t._in
    r._in = t._out
    r._matrix = None
    r.labels = t.labels
    return r


def induced(t: Tournament, s) -> Tournament:
    """Subtournament on ``s`` (a bitmask or an iterable of vertices).

    Local vertex ``i`` is the ``i``-th smallest vertex of ``s``; ``labels``
    refers to the root tournament's ids.
    """
    verts = list(iter_bits(s)) if isinstance(s, int) else sorted(set(s))
    if not verts:
        raise EmptySet("induced subtournament of the empty set")
    idx = np.asarray(verts, dtype=np.intp)
    sub = t.matrix[np.ix_(idx, idx)]
    return Tournament.from_matrix(sub, labels=[t.labels[v] for v in verts])


def transitive(n: int) -> Tournament:
    """Transitive tournament with ``i -> j`` for all ``i < j``."""
    full = (1 << n) - 1
    return Tournament([full & ~((1 << (i + 1)) - 1) for i in range(n)])


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def paley(q: int) -> Tournament:
    """Quadratic-residue tournament: ``i -> j`` iff ``j - i`` is a nonzero square mod q."""
    if not _is_prime(q) or q % 4 != 3:
        raise BadModulus(f"{q} is not a prime congruent to 3 mod 4")
    residues = {(x * x) % q for x in range(1, q)}
    out = []
    for i in range(q):
        out.append(mask_of((i + r) % q for r in residues))
    return Tournament(out)


def upper_bits(n: int, bits: Sequence[int] | np.ndarray) -> Tournament:
    """Tournament from the row-major upper-triangle orientation bits."""
    m = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    b = np.asarray(bits, dtype=bool)
    if b.shape != (n * (n - 1) // 2,):
        raise OrientationError(f"expected {n * (n - 1) // 2} orientation bits, got {b.size}")
    m[iu] = b
    m[(iu[1], iu[0])] = ~b
    return Tournament.from_matrix(m)


def random_tournament(n: int, seed: int) -> Tournament:
    """Each pair oriented by an independent fair coin from ``default_rng(seed)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    return upper_bits(n, rng.integers(0, 2, size=n * (n - 1) // 2).astype(bool))


def tournament_from_index(n: int, index: int) -> Tournament:
    """The ``index``-th of the ``2**C(n,2)`` labelled tournaments on ``n`` vertices."""
    e = n * (n - 1) // 2
    return upper_bits(n, [index >> i & 1 for i in range(e)])


def all_tournaments(n: int) -> Iterator[Tournament]:
    for index in range(1 << (n * (n - 1) // 2)):
        yield tournament_from_index(n, index)


def low_degree_counts(t: Tournament, k: int) -> tuple[int, int]:
    """Number of vertices of out-degree < k and of in-degree < k.

    Both counts are always below ``2k``: any ``2k`` vertices span
    ``C(2k, 2) > 2k(k-1)`` edges among themselves.
    """
    return (
        sum(1 for d in t.out_degrees() if d < k),
        sum(1 for d in t.in_degrees() if d < k),
    )


# -- text format -------------------------------------------------------------

def to_text(t: Tournament) -> str:
    lines = [f"tournament {t.n}"]
    for i in range(t.n - 1):
        row = t._out[i] >> (i + 1)
        width = t.n - i - 1
        lines.append("".join("1" if row >> j & 1 else "0" for j in range(width)))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Tournament:
    """Parse the canonical format, or an edge list of ``u v`` lines (u -> v)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise OrientationError("empty tournament file")
    head = lines[0].split()
    if head[0] == "tournament":
        n = int(head[1])
        rows = lines[1:]
        if len(rows) != max(n - 1, 0):
            raise OrientationError(f"expected {max(n - 1, 0)} rows, got {len(rows)}")
        bits = []
        for i, row in enumerate(rows):
            if len(row) != n - i - 1 or set(row) - {"0", "1"}:
                raise OrientationError(f"malformed row {i}: {row!r}")
            bits.extend(ch == "1" for ch in row)
        if n == 1:
            return Tournament([0])
        return upper_bits(n, bits)
    edges = []
    for ln in lines:
        parts = ln.split()
        if len(parts) != 2:
            raise OrientationError(f"malformed edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    n = 1 + max(max(e) for e in edges)
    return build(n, edges)


def read_tournament(path) -> Tournament:
    with open(path) as fh:
        return from_text(fh.read())


def write_tournament(t: Tournament, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(to_text(t))
