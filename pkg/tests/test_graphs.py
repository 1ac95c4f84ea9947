"""Graph core: exact copy counting, cycle spectrum, kcol round-trips."""

import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseykit.errors import KcolParseError, PreconditionError
from ramseykit.graphs import (
    PatternGraph,
    SimpleGraph,
    TwoColoring,
    count_copies,
    cycle_spectrum,
    decode,
    encode,
    mono_counts,
    pair_index,
    pair_iter,
)
from ramseykit.graphs import _count_cycles_backtrack, _count_paths_backtrack

from .helpers import naive_count_copies, random_simple_graph


@st.composite
def colorings(draw, max_n=7):
    n = draw(st.integers(min_value=2, max_value=max_n))
    mask = draw(st.integers(min_value=0, max_value=(1 << comb(n, 2)) - 1))
    return TwoColoring(n, mask)


class TestClosedForms:
    def test_cycles_in_complete_graphs(self):
        assert count_copies(SimpleGraph.complete(5), PatternGraph.cycle(5)) == 12
        assert count_copies(SimpleGraph.complete(9), PatternGraph.cycle(5)) == comb(9, 5) * 12

    def test_no_odd_cycle_in_bipartite(self):
        g = SimpleGraph.complete_bipartite(5, 4)
        assert count_copies(g, PatternGraph.cycle(5)) == 0

    def test_paths_in_k4(self):
        assert count_copies(SimpleGraph.complete(4), PatternGraph.path(3)) == 12

    def test_pattern_larger_than_host_is_zero(self):
        assert count_copies(SimpleGraph.complete(4), PatternGraph.cycle(5)) == 0

    def test_star_equals_path_on_three_vertices(self):
        rng = random.Random(5)
        for _ in range(20):
            g = random_simple_graph(6, 0.5, rng)
            assert count_copies(g, PatternGraph.star(2)) == count_copies(
                g, PatternGraph.path(3)
            )

    def test_explicit_pattern_cap(self):
        with pytest.raises(PreconditionError):
            PatternGraph.explicit(SimpleGraph.complete(9))


class TestOracleEquivalence:
    PATTERNS = [
        PatternGraph.path(3),
        PatternGraph.path(4),
        PatternGraph.cycle(3),
        PatternGraph.cycle(4),
        PatternGraph.cycle(5),
        PatternGraph.star(2),
        PatternGraph.star(3),
        PatternGraph.complete(3),
        PatternGraph.complete(4),
        PatternGraph.explicit(SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])),
    ]

    def test_matches_naive_enumeration_up_to_seven_vertices(self):
        rng = random.Random(17)
        for n in range(3, 8):
            for _ in range(6):
                g = random_simple_graph(n, rng.choice([0.3, 0.5, 0.8]), rng)
                for h in self.PATTERNS:
                    assert count_copies(g, h) == naive_count_copies(g, h), (n, h)

    def test_dp_and_backtracking_agree(self):
        rng = random.Random(23)
        for _ in range(10):
            g = random_simple_graph(9, 0.5, rng)
            for k in range(3, 8):
                assert count_copies(g, PatternGraph.cycle(k)) == _count_cycles_backtrack(g, k)
                assert count_copies(g, PatternGraph.path(k)) == _count_paths_backtrack(g, k)


class TestMonoCounts:
    def test_all_red_k6_triangles(self):
        c = TwoColoring(6, (1 << 15) - 1)
        assert mono_counts(c, PatternGraph.complete(3)) == (20, 0)

    @settings(max_examples=60, deadline=None)
    @given(colorings())
    def test_color_swap_swaps_components(self, c):
        h = PatternGraph.path(3)
        red, blue = mono_counts(c, h)
        assert mono_counts(c.swapped(), h) == (blue, red)

    @settings(max_examples=40, deadline=None)
    @given(colorings(max_n=6), st.randoms(use_true_random=False))
    def test_permutation_invariance(self, c, rnd):
        perm = list(range(c.n))
        rnd.shuffle(perm)
        for h in (PatternGraph.path(4), PatternGraph.cycle(4), PatternGraph.complete(3)):
            assert mono_counts(c, h) == mono_counts(c.permuted(perm), h)


class TestCycleSpectrum:
    def test_complete_graph_is_pancyclic(self):
        assert sorted(cycle_spectrum(SimpleGraph.complete(5), 5)) == [3, 4, 5]

    def test_bipartite_has_even_lengths_only(self):
        assert sorted(cycle_spectrum(SimpleGraph.complete_bipartite(3, 3), 6)) == [4, 6]

    def test_plain_cycle_has_one_length(self):
        assert sorted(cycle_spectrum(SimpleGraph.cycle(7), 7)) == [7]

    def test_witnesses_are_real_cycles(self):
        rng = random.Random(3)
        g = random_simple_graph(9, 0.4, rng)
        for t, wit in cycle_spectrum(g, 9).items():
            assert len(wit) == t and len(set(wit)) == t
            ring = list(wit) + [wit[0]]
            assert all(g.has_edge(u, v) for u, v in zip(ring, ring[1:]))


class TestKcol:
    def test_spec_examples(self):
        assert encode(TwoColoring(3, 7)) == "3\n7\n"
        assert encode(TwoColoring(3, 0)) == "3\n0\n"

    @settings(max_examples=80, deadline=None)
    @given(colorings(max_n=12))
    def test_round_trip_identity(self, c):
        assert decode(encode(c)) == c

    def test_bad_header(self):
        with pytest.raises(KcolParseError) as err:
            decode("x3\n7\n")
        assert err.value.offset == 0

    def test_non_hex_character_offset(self):
        with pytest.raises(KcolParseError) as err:
            decode("3\nzz\n")
        assert err.value.offset == 2

    def test_wrong_bit_length(self):
        with pytest.raises(KcolParseError) as err:
            decode("10\nabc\n")  # C(10,2)=45 bits -> 12 hex digits
        assert "expected 12" in str(err.value)

    def test_mask_beyond_pair_bits(self):
        with pytest.raises(KcolParseError):
            decode("3\n9\n")  # only 3 pair bits; 0x9 needs bit 3

    def test_trailing_bytes(self):
        with pytest.raises(KcolParseError):
            decode("3\n7\nextra\n")

    def test_missing_newline(self):
        with pytest.raises(KcolParseError):
            decode("3")


class TestRepresentation:
    def test_pair_index_row_major(self):
        assert [pair_index(i, j, 4) for i, j in pair_iter(4)] == list(range(6))

    def test_red_blue_partition_edges(self):
        rng = random.Random(9)
        c = TwoColoring(7, rng.randrange(1 << comb(7, 2)))
        red, blue = c.red_graph(), c.blue_graph()
        assert red.num_edges() + blue.num_edges() == comb(7, 2)
        for i, j in pair_iter(7):
            assert red.has_edge(i, j) != blue.has_edge(i, j)

    def test_adjacency_must_be_symmetric(self):
        with pytest.raises(PreconditionError):
            SimpleGraph(2, (2, 0))

    def test_no_self_loops(self):
        with pytest.raises(PreconditionError):
            SimpleGraph.from_edges(3, [(1, 1)])

    def test_pattern_parse(self):
        assert PatternGraph.parse("C5").kind == "cycle"
        assert PatternGraph.parse("p4").k == 4
        assert PatternGraph.parse("K1,3") == PatternGraph.star(3)
        with pytest.raises(PreconditionError):
            PatternGraph.parse("X9")
