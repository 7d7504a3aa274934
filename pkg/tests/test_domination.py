import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tournament_partition import paley, random_tournament, transitive
from tournament_partition.domination import (
    build_domination_family,
    domination_bounds,
    family_c,
    in_dominating_set,
    out_dominating_set,
)
from tournament_partition.errors import TooSmall
from tournament_partition.verify import audit_dom_set, audit_domination_family


class TestSingleSets:
    def test_three_cycle_out(self, three_cycle):
        s = out_dominating_set(three_cycle, 0, 2)
        assert s.chain == [2, 0] and s.E == 0
        assert s.sink == 0

    def test_three_cycle_in(self, three_cycle):
        s = in_dominating_set(three_cycle, 0, 2)
        assert s.chain == [0, 1] and s.E == 0
        assert s.source == 0

    def test_c1_out_is_in_neighbourhood(self):
        T = random_tournament(40, 1)
        for v in range(0, 40, 7):
            s = out_dominating_set(T, v, 1)
            assert s.chain == [v] and s.E == T.in_mask(v)
            s = in_dominating_set(T, v, 1)
            assert s.chain == [v] and s.E == T.out_mask(v)

    def test_transitive_five(self):
        s = out_dominating_set(transitive(5), 4, 2)
        assert s.chain == [0, 4] and s.E == 0

    def test_excluded_anchor_rejected(self, p7):
        with pytest.raises(ValueError):
            out_dominating_set(p7, 0, 2, excluded=1)
        with pytest.raises(ValueError):
            in_dominating_set(p7, 0, 0)

    def test_halving_trace(self):
        T = random_tournament(500, 2)
        s = out_dominating_set(T, 3, 8)
        for a, b in zip(s.trace, s.trace[1:]):
            assert 2 * b <= a
        assert s.trace[-1] == s.E.bit_count()

    def test_excluded_never_used(self):
        T = random_tournament(100, 3)
        ex = sum(1 << v for v in range(50, 100))
        s = out_dominating_set(T, 0, 6, excluded=ex)
        assert not s.A & ex and not s.E & ex

    @given(n=st.integers(2, 120), seed=st.integers(0, 10**6), c=st.integers(1, 9),
           mode=st.sampled_from(["out", "in"]))
    @settings(max_examples=80, deadline=None)
    def test_lemma_items(self, n, seed, c, mode):
        T = random_tournament(n, seed)
        v = seed % n
        s = out_dominating_set(T, v, c) if mode == "out" else in_dominating_set(T, v, c)
        chain = s.chain if mode == "out" else s.chain[::-1]
        rep = audit_dom_set(T, chain, s.E, v, c, mode)
        assert rep.passed, rep.failures()


class TestFamily:
    def test_family_c(self):
        assert family_c(2, 2, 2) == 9
        assert family_c(1, 2, 2) == 7
        assert family_c(1, 1, 1) == 5

    def test_random_500(self):
        T = random_tournament(500, 0)
        fam = build_domination_family(T, 1, 2, 2)
        assert fam.c == 7
        assert len(fam.A) == len(fam.B) == 2
        rep = audit_domination_family(T, fam)
        assert rep.passed, [f.to_dict() for f in rep.failures()]

    def test_random_300_k2(self):
        T = random_tournament(300, 4)
        fam = build_domination_family(T, 2, 2, 2)
        assert audit_domination_family(T, fam).passed

    def test_paley_family(self):
        T = paley(503)
        fam = build_domination_family(T, 2, 3, 3)
        assert audit_domination_family(T, fam).passed

    def test_transitive_twenty(self):
        T = transitive(20)
        fam = build_domination_family(T, 1, 2, 2)
        rep = audit_domination_family(T, fam)
        names = {f.name for f in rep.failures()}
        # the set-level properties hold; any failure is within the aggregate bounds
        assert not names & {"disjoint", "(i)/(ii) transitive with seed end",
                            "(iii)/(iv) exceptional set", "(v)/(vi) domination"}

    def test_disjointness_and_colours(self):
        T = random_tournament(400, 6)
        fam = build_domination_family(T, 2, 2, 2)
        seen = 0
        for s in fam.A + fam.B:
            assert not seen & s.A
            seen |= s.A
        assert list(fam.indices_of(1)) == [2, 3]
        assert fam.D == seen

    def test_swap_keeps_ea_below_eb(self):
        for seed in range(8):
            T = random_tournament(200, seed)
            fam = build_domination_family(T, 1, 2, 2, c=3)
            assert fam.E_A.bit_count() <= fam.E_B.bit_count()
            assert audit_domination_family(T, fam).to_dict()["checks"]

    def test_c_override(self):
        T = random_tournament(200, 1)
        assert build_domination_family(T, 1, 2, 2, c=3).c == 3
        with pytest.raises(ValueError):
            build_domination_family(T, 1, 2, 2, c=0)

    def test_too_small(self, three_cycle):
        with pytest.raises(TooSmall):
            build_domination_family(three_cycle, 1, 2, 2)

    def test_bounds_keys(self):
        fam = build_domination_family(random_tournament(200, 2), 1, 2, 2)
        assert set(domination_bounds(fam)) == {"E_Ai", "E_Bi", "E_A", "E_B", "E"}


def _mutants(fam):
    """Single-element mutations of the A/B chains."""
    sets = [("A", i) for i in range(len(fam.A))] + [("B", i) for i in range(len(fam.B))]
    rng = np.random.default_rng(0)
    for side, i in sets:
        src = getattr(fam, side)[i]
        if len(src.chain) < 2:
            continue
        for pos in range(len(src.chain)):
            v = src.chain[pos]
            # remove one vertex
            rest = src.chain[:pos] + src.chain[pos + 1:]
            yield _replace(fam, side, i, rest)
            # move it into a different set
            for side2, i2 in sets:
                if (side2, i2) == (side, i):
                    continue
                dst = getattr(fam, side2)[i2]
                at = int(rng.integers(len(dst.chain) + 1))
                moved = _replace(fam, side, i, rest)
                yield _replace(moved, side2, i2, dst.chain[:at] + [v] + dst.chain[at:])
                break


def _replace(fam, side, i, chain):
    sets = list(getattr(fam, side))
    sets[i] = dataclasses.replace(sets[i], chain=list(chain))
    return dataclasses.replace(fam, **{side: sets})


def test_mutation_sensitivity():
    T = random_tournament(300, 9)
    fam = build_domination_family(T, 1, 2, 2)
    assert audit_domination_family(T, fam).passed
    results = [audit_domination_family(T, m) for m in _mutants(fam)]
    assert len(results) >= 20
    caught = sum(not r.passed for r in results)
    assert caught / len(results) >= 0.95
    for r in results:
        for f in r.failures():
            assert f.witness is not None
