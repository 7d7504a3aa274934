import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tournament_partition import induced, paley, random_tournament, transitive
from tournament_partition.connectivity import is_strongly_k_connected, strongly_connected
from tournament_partition.core import all_tournaments, mask_of
from tournament_partition.cycles import (
    CycleParams,
    adjust_lengths,
    cycle_factor,
    cycle_threshold,
    hamilton_cycle,
    is_exceptional,
    two_cycles,
)
from tournament_partition.errors import (
    BadLengths,
    ConnectivityGateError,
    ExceptionalTournament,
    NotStronglyConnected,
    StageFailure,
    TooSmall,
)
from tournament_partition.verify import audit_cycle, audit_cycle_plan


class TestHamilton:
    def test_three_cycle(self, three_cycle):
        cyc = hamilton_cycle(three_cycle)
        assert audit_cycle(three_cycle, cyc, three_cycle.full_mask) is None

    def test_errors(self, t4):
        with pytest.raises(NotStronglyConnected):
            hamilton_cycle(t4)
        with pytest.raises(TooSmall):
            hamilton_cycle(transitive(2))

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_exhaustive_small(self, n):
        for T in all_tournaments(n):
            if strongly_connected(T):
                assert audit_cycle(T, hamilton_cycle(T), T.full_mask) is None

    @given(n=st.integers(3, 80), seed=st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_random(self, n, seed):
        T = random_tournament(n, seed)
        if strongly_connected(T):
            assert audit_cycle(T, hamilton_cycle(T), T.full_mask) is None
        else:
            with pytest.raises(NotStronglyConnected):
                hamilton_cycle(T)


class TestTwoCycles:
    def test_paley7_exceptional(self, p7):
        assert is_exceptional(p7)
        for L in (3, 4):
            with pytest.raises(ExceptionalTournament):
                two_cycles(p7, L)

    def test_relabelled_paley7_exceptional(self, p7):
        perm = [3, 6, 0, 5, 1, 2, 4]
        relabelled = induced(p7, perm)
        assert is_exceptional(relabelled)
        assert not is_exceptional(random_tournament(7, 0))

    def _strong2(self, n, start=0):
        seed = start
        while True:
            T = random_tournament(n, seed)
            if is_strongly_k_connected(T, 2):
                return T
            seed += 1

    def test_n8_L3(self):
        T = self._strong2(8)
        a, b = two_cycles(T, 3)
        assert audit_cycle_plan(T, [a, b], [3, 5]).passed
        # independent existence check over all 3-subsets
        assert any(strongly_connected(T, mask_of(S)) and strongly_connected(T, T.full_mask & ~mask_of(S))
                   for S in itertools.combinations(range(8), 3))

    def test_bad_length(self):
        T = self._strong2(6)
        with pytest.raises(BadLengths):
            two_cycles(T, 4)
        with pytest.raises(BadLengths):
            two_cycles(T, 2)

    def test_all_splits_n10(self):
        T = self._strong2(10, 5)
        for L in range(3, 8):
            a, b = two_cycles(T, L)
            assert audit_cycle_plan(T, [a, b], [L, 10 - L]).passed

    def test_not_inside(self):
        T = self._strong2(10, 9)
        inside = mask_of(range(7))
        a, b = two_cycles(T, 3, not_inside=inside)
        assert set(b) - set(range(7))


class TestAdjust:
    def test_example(self):
        adj, small, perm = adjust_lengths(100, 3, [90, 7, 3])
        assert adj == [81, 7, 12] and small == [2] and perm == [0, 1, 2]

    def test_no_adjustment(self):
        assert adjust_lengths(100, 2, [50, 50]) == ([50, 50], [], [0, 1])

    def test_permutes_largest_first(self):
        adj, small, perm = adjust_lengths(100, 3, [7, 90, 3])
        assert perm == [1, 0, 2] and adj == [81, 7, 12]

    def test_errors(self):
        with pytest.raises(BadLengths):
            adjust_lengths(10, 3, [3, 3, 3])
        with pytest.raises(BadLengths):
            adjust_lengths(10, 2, [8, 2])
        with pytest.raises(BadLengths):
            adjust_lengths(10, 3, [5, 5])

    def test_conservation_10k(self):
        rng = np.random.default_rng(0)
        for _ in range(10_000):
            t = int(rng.integers(2, 6))
            L = rng.integers(3, 200, size=t).tolist()
            n = sum(L)
            adj, small, perm = adjust_lengths(n, t, L)
            assert sum(adj) == n
            assert adj[0] * t * t >= n
            assert sorted(perm) == list(range(t))
            P = [L[j] for j in perm]
            assert P[0] * t >= n
            for j in range(1, t):
                assert adj[j] == (-(-n // (t * t)) if j in small else P[j])


class TestCycleFactor:
    def test_threshold(self):
        assert cycle_threshold(2) == pytest.approx(1.6e11)

    def test_paley7_too_small(self, p7):
        with pytest.raises(StageFailure):
            cycle_factor(p7, [3, 4])

    def test_strict_refused(self):
        with pytest.raises(ConnectivityGateError):
            cycle_factor(random_tournament(600, 0), [300, 300], CycleParams(mode="strict"))

    def test_even_split(self):
        T = random_tournament(600, 0)
        plan = cycle_factor(T, [300, 300])
        assert plan.J_tilde == []
        assert audit_cycle_plan(T, plan.cycles, [300, 300]).passed
        assert plan.to_dict()["kind"] == "cycle-plan"

    @pytest.mark.parametrize("lengths", [(460, 40), (40, 460)])
    def test_small_cycle_uses_helper(self, lengths):
        T = random_tournament(500, 1 if lengths[0] == 460 else 2)
        plan = cycle_factor(T, list(lengths))
        assert plan.J_tilde == [1]
        assert audit_cycle_plan(T, plan.cycles, list(lengths)).passed
        # merge vertex lies on the helper cycle, outside the original class
        v = plan.merge_vertices[1]
        assert v in plan.helper_cycles[1] and v not in plan.classes[1]
        assert len(plan.merged) == plan.lengths[plan.perm[0]]
        assert strongly_connected(T, mask_of(plan.merged))
