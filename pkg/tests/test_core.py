import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tournament_partition import build, induced, paley, random_tournament, reverse, transitive
from tournament_partition.core import (
    Tournament,
    from_text,
    iter_bits,
    low_degree_counts,
    read_tournament,
    to_text,
    write_tournament,
)
from tournament_partition.errors import BadModulus, DuplicatePair, MissingPair, OrientationError


class TestBuild:
    def test_three_cycle_degrees(self, three_cycle):
        assert three_cycle.out_degrees() == [1, 1, 1]
        assert three_cycle.has_edge(2, 0)

    def test_transitive_degrees(self):
        T = build(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
        assert T.out_degrees() == [3, 2, 1, 0]
        assert T == transitive(4)

    def test_missing_pair(self):
        with pytest.raises(MissingPair) as e:
            build(3, [(0, 1), (1, 2)])
        assert e.value.pair == (0, 2)

    def test_duplicate_pair(self):
        with pytest.raises(DuplicatePair):
            build(2, [(0, 1), (1, 0)])

    def test_self_loop(self):
        with pytest.raises(OrientationError):
            build(2, [(0, 0), (0, 1)])

    def test_from_matrix_rejects_both_directions(self):
        m = np.ones((3, 3), dtype=bool)
        np.fill_diagonal(m, False)
        with pytest.raises(DuplicatePair):
            Tournament.from_matrix(m)

    def test_masks_constructor_matches_matrix(self, medium_random):
        again = Tournament(list(medium_random._out))
        assert again == medium_random
        assert (again.matrix == medium_random.matrix).all()


class TestReverseInduced:
    def test_reverse_three_cycle(self, three_cycle):
        r = reverse(three_cycle)
        assert r.has_edge(0, 2) and r.has_edge(2, 1) and r.has_edge(1, 0)

    def test_reverse_involution(self, medium_random):
        assert reverse(reverse(medium_random)) == medium_random

    def test_reverse_transitive(self):
        r = reverse(transitive(4))
        assert r.out_degrees() == [0, 1, 2, 3]

    def test_reverse_swaps_degrees(self, medium_random):
        assert reverse(medium_random).out_degrees() == medium_random.in_degrees()

    def test_induced_edge(self, three_cycle):
        s = induced(three_cycle, [0, 1])
        assert s.n == 2 and s.has_edge(0, 1)

    def test_induced_transitive_hereditary(self):
        for S in itertools.combinations(range(5), 3):
            assert induced(transitive(5), S) == transitive(3)

    def test_induced_matches_parent(self):
        T = random_tournament(20, 4)
        S = [1, 3, 4, 8, 11, 15, 17, 19]
        sub = induced(T, S)
        assert sub.labels == tuple(S)
        for a, b in itertools.permutations(range(8), 2):
            assert sub.has_edge(a, b) == T.has_edge(S[a], S[b])

    def test_induced_labels_compose(self):
        T = random_tournament(30, 2)
        sub = induced(T, range(10, 30))
        subsub = induced(sub, [0, 5, 7])
        assert subsub.labels == (10, 15, 17)


class TestGenerators:
    def test_paley3_is_cycle(self, three_cycle):
        assert paley(3) == three_cycle

    def test_paley7_regular_no_transitive_four(self, p7):
        assert p7.out_degrees() == [3] * 7
        for quad in itertools.combinations(range(7), 4):
            outs = sorted(sum(p7.has_edge(a, b) for b in quad) for a in quad)
            assert outs != [0, 1, 2, 3]

    @pytest.mark.parametrize("q", [2, 5, 8, 9, 13])
    def test_bad_modulus(self, q):
        with pytest.raises(BadModulus):
            paley(q)

    def test_random_single_vertex(self):
        T = random_tournament(1, 0)
        assert T.n == 1 and list(T.edges()) == []

    def test_random_deterministic(self):
        assert random_tournament(50, 9) == random_tournament(50, 9)
        assert random_tournament(50, 9) != random_tournament(50, 10)

    def test_degree_identity(self):
        T = random_tournament(200, 3)
        assert sum(T.out_degrees()) == 19900


@given(n=st.integers(1, 40), seed=st.integers(0, 2**31), k=st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_low_degree_counts_below_2k(n, seed, k):
    T = random_tournament(n, seed)
    low_out, low_in = low_degree_counts(T, k)
    assert low_out < 2 * k and low_in < 2 * k
    assert sum(T.out_degrees()) == n * (n - 1) // 2


def test_low_degree_counts_transitive():
    # the transitive order is the extreme case
    for k in range(1, 6):
        assert low_degree_counts(transitive(20), k) == (k, k)


class TestText:
    def test_paley7_format(self, p7):
        lines = to_text(p7).splitlines()
        assert lines[0] == "tournament 7"
        assert sum(len(x) for x in lines[1:]) == 21

    @given(n=st.integers(1, 30), seed=st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, n, seed):
        T = random_tournament(n, seed)
        assert from_text(to_text(T)) == T

    def test_file_round_trip(self, tmp_path, medium_random):
        p = tmp_path / "t.txt"
        write_tournament(medium_random, p)
        first = p.read_bytes()
        assert read_tournament(p) == medium_random
        write_tournament(read_tournament(p), p)
        assert p.read_bytes() == first

    def test_edge_list(self, three_cycle):
        assert from_text("0 1\n1 2\n2 0\n") == three_cycle

    def test_edge_list_must_be_total(self):
        with pytest.raises(MissingPair):
            from_text("0 1\n1 2\n")

    def test_malformed_row(self):
        with pytest.raises(OrientationError):
            from_text("tournament 3\n10\n")


def test_iter_bits_order():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
