"""Transitive dominating sets with small exceptional sets.

``out_dominating_set`` grows a transitive chain ``A`` ending in the anchor
``v``; at each step it adds the vertex of minimum in-degree inside the
current common in-neighbourhood ``E``, which at least halves ``E``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Tournament, iter_bits, reverse
from .errors import TooSmall


@dataclass
class DomSet:
    """A transitive dominating set.

    ``chain`` lists ``A`` from source to sink.  For ``mode == "out"`` the
    sink is ``anchor`` and ``E`` is the common in-neighbourhood of the
    chain; ``mode == "in"`` is the mirror image (source ``anchor``, common
    out-neighbourhood).  ``trace`` holds ``|E_i|`` after every greedy step.
    """

    chain: list[int]
    E: int
    anchor: int
    mode: str
    c: int
    residual: int
    trace: list[int] = field(default_factory=list)

    @property
    def A(self) -> int:
        m = 0
        for v in self.chain:
            m |= 1 << v
        return m

    @property
    def source(self) -> int:
        return self.chain[0]

    @property
    def sink(self) -> int:
        return self.chain[-1]

    def to_dict(self):
        return {
            "chain": self.chain,
            "E": list(iter_bits(self.E)),
            "anchor": self.anchor,
            "mode": self.mode,
            "c": self.c,
            "trace": self.trace,
        }


def _greedy_out(t: Tournament, v: int, c: int, residual: int) -> tuple[list[int], int, list[int]]:
    inn = t._in
    picked = [v]
    E = inn[v] & residual
    trace = [E.bit_count()]
    while E and len(picked) < c:
        best, best_deg = -1, None
        for w in iter_bits(E):
            d = (inn[w] & E).bit_count()
            if best_deg is None or d < best_deg:
                best, best_deg = w, d
        picked.append(best)
        E &= inn[best]
        trace.append(E.bit_count())
    # picked[-1] beats every earlier pick, so source-to-sink order is reversed
    return picked[::-1], E, trace


def out_dominating_set(t: Tournament, v: int, c: int, excluded: int = 0) -> DomSet:
    """Transitive ``A`` with sink ``v`` out-dominating ``V - excluded - (A u E)``."""
    if c < 1:
        raise ValueError("c must be at least 1")
    if excluded >> v & 1:
        raise ValueError(f"anchor {v} is excluded")
    residual = t.full_mask & ~excluded
    chain, E, trace = _greedy_out(t, v, c, residual)
    return DomSet(chain, E, v, "out", c, residual, trace)


def in_dominating_set(t: Tournament, v: int, c: int, excluded: int = 0) -> DomSet:
    """Transitive ``B`` with source ``v`` in-dominating ``V - excluded - (B u E)``."""
    if c < 1:
        raise ValueError("c must be at least 1")
    if excluded >> v & 1:
        raise ValueError(f"anchor {v} is excluded")
    residual = t.full_mask & ~excluded
    chain, E, trace = _greedy_out(reverse(t), v, c, residual)
    return DomSet(chain[::-1], E, v, "in", c, residual, trace)


def family_c(k: int, t: int, m: int) -> int:
    """``ceil(log2(32 k^2 t m))``, computed exactly on integers."""
    x = 32 * k * k * t * m
    return (x - 1).bit_length()


@dataclass
class DominationFamily:
    """Disjoint out/in-dominating sets ``A_i``, ``B_i`` for ``i = 1..kt``.

    Indices are 0-based here: index ``i`` belongs to colour ``i // k``.
    ``frame`` is the tournament all sets refer to; when ``swapped`` is set
    it is the reverse of the input, with the roles of the A- and B-sets
    exchanged so that ``|E_A| <= |E_B|`` holds in the frame.
    """

    k: int
    t: int
    m: int
    c: int
    frame: Tournament
    swapped: bool
    xs: list[int]
    ys: list[int]
    A: list[DomSet]
    B: list[DomSet]
    delta_in_hat: int
    delta_out_hat: int

    @property
    def D(self) -> int:
        m = 0
        for s in self.A + self.B:
            m |= s.A
        return m

    @property
    def E_A(self) -> int:
        m = 0
        for s in self.A:
            m |= s.E
        return m

    @property
    def E_B(self) -> int:
        m = 0
        for s in self.B:
            m |= s.E
        return m

    @property
    def E(self) -> int:
        return self.E_A | self.E_B

    def indices_of(self, colour: int) -> range:
        return range(colour * self.k, colour * self.k + self.k)

    def A_star(self, colour: int) -> int:
        m = 0
        for i in self.indices_of(colour):
            m |= self.A[i].A
        return m

    def B_star(self, colour: int) -> int:
        m = 0
        for i in self.indices_of(colour):
            m |= self.B[i].A
        return m

    def to_dict(self):
        return {
            "k": self.k, "t": self.t, "m": self.m, "c": self.c,
            "swapped": self.swapped,
            "x": self.xs, "y": self.ys,
            "A": [s.to_dict() for s in self.A],
            "B": [s.to_dict() for s in self.B],
            "delta_in_hat": self.delta_in_hat,
            "delta_out_hat": self.delta_out_hat,
        }


def _seeds(t: Tournament, count: int) -> tuple[list[int], list[int]]:
    ind = t.in_degrees()
    outd = t.out_degrees()
    xs = sorted(range(t.n), key=lambda v: (ind[v], v))[:count]
    taken = set(xs)
    rest = [v for v in range(t.n) if v not in taken]
    ys = sorted(rest, key=lambda v: (outd[v], v))[:count]
    return xs, ys


def build_domination_family(t: Tournament, k: int, parts: int, m: int,
                            c: int | None = None) -> DominationFamily:
    """Extract ``k*parts`` A-sets then ``k*parts`` B-sets, each on what is left.

    Unused seeds are kept out of every greedy run so each seed stays the
    sink (source) of its own set.  ``c`` defaults to :func:`family_c`.
    """
    if k < 1 or parts < 2 or m < parts:
        raise ValueError("need k >= 1 and m >= t >= 2")
    kt = k * parts
    if t.n < 2 * kt + 1:
        raise TooSmall(f"{t.n} vertices cannot host {2 * kt} disjoint seeds")
    if c is None:
        c = family_c(k, parts, m)
    elif c < 1:
        raise ValueError("c must be at least 1")
    xs, ys = _seeds(t, kt)
    seeds = 0
    for v in xs + ys:
        seeds |= 1 << v
    used = 0
    A_sets, B_sets = [], []
    for x in xs:
        s = out_dominating_set(t, x, c, (used | seeds) & ~(1 << x))
        A_sets.append(s)
        used |= s.A
    for y in ys:
        s = in_dominating_set(t, y, c, (used | seeds) & ~(1 << y))
        B_sets.append(s)
        used |= s.A
    ind, outd = t.in_degrees(), t.out_degrees()
    xset, yset = set(xs), set(ys)
    d_in_hat = min(ind[v] for v in range(t.n) if v not in xset)
    d_out_hat = min(outd[v] for v in range(t.n) if v not in yset)
    fam = DominationFamily(k, parts, m, c, t, False, xs, ys, A_sets, B_sets, d_in_hat, d_out_hat)
    if fam.E_A.bit_count() > fam.E_B.bit_count():
        fam = _swap(fam)
    return fam


def _mirror(s: DomSet) -> DomSet:
    # reversing every edge turns the source-to-sink order around
    return DomSet(s.chain[::-1], s.E, s.anchor, "in" if s.mode == "out" else "out",
                  s.c, s.residual, s.trace)


def _swap(fam: DominationFamily) -> DominationFamily:
    """The same sets seen in the reversed tournament, with A and B exchanged."""
    return DominationFamily(
        fam.k, fam.t, fam.m, fam.c, reverse(fam.frame), True,
        list(fam.ys), list(fam.xs),
        [_mirror(s) for s in fam.B], [_mirror(s) for s in fam.A],
        fam.delta_out_hat, fam.delta_in_hat,
    )


def domination_bounds(fam: DominationFamily) -> dict[str, float]:
    """The exceptional-set bounds the family is required to meet."""
    k, m = fam.k, fam.m
    return {
        "E_Ai": 0.5 ** (fam.c - 1) * fam.delta_in_hat,
        "E_Bi": 0.5 ** (fam.c - 1) * fam.delta_out_hat,
        "E_A": fam.delta_in_hat / (16 * k * m),
        "E_B": fam.delta_out_hat / (16 * k * m),
        "E": fam.delta_out_hat / (8 * k * m),
    }
