"""Regularity checking, transversal path oracles, and the bound evaluators."""

import math
import random

import pytest

from ramseykit.errors import BudgetExceededError, PreconditionError
from ramseykit.graphs import PatternGraph, SimpleGraph, count_copies
from ramseykit.regular import (
    GridSpec,
    PairSystem,
    RegimeParams,
    check_regularity,
    complete_minus_matching_ring,
    complete_ring,
    count_transversal_paths,
    count_transversal_paths_between,
    degree_exception_counts,
    density,
    quasirandom_ring,
    regularity_defect,
    ring_cycle_bound,
    slice_params,
    transversal_path_bound_fixed_start,
    transversal_path_bound_fixed_ends,
    verify_counting_lemma,
)

from .helpers import definitional_regularity


class TestDensity:
    def test_complete_bipartite(self):
        g = SimpleGraph.complete_bipartite(4, 4)
        assert density(g, range(4), range(4, 8)) == 1.0

    def test_empty_bipartite(self):
        g = SimpleGraph.from_edges(8, [])
        assert density(g, range(4), range(4, 8)) == 0.0

    def test_same_set_form(self):
        assert density(SimpleGraph.complete(4), range(4), range(4)) == 0.75

    def test_overlapping_sets_rejected(self):
        with pytest.raises(PreconditionError):
            density(SimpleGraph.complete(4), [0, 1], [1, 2])

    def test_empty_set_rejected(self):
        with pytest.raises(PreconditionError):
            density(SimpleGraph.complete(4), [], [0])


class TestRegularityChecker:
    def test_complete_bipartite_regular_at_any_eps(self):
        g = SimpleGraph.complete_bipartite(5, 5)
        for eps in (0.1, 0.3, 0.9):
            assert check_regularity(g, range(5), range(5, 10), eps).verdict == "regular"

    def test_empty_pair_regular(self):
        g = SimpleGraph.from_edges(8, [])
        assert check_regularity(g, range(4), range(4, 8), 0.5).verdict == "regular"

    def test_half_loaded_pair_irregular_with_witness(self):
        g = SimpleGraph.from_edges(8, [(i, j) for i in range(2) for j in range(4, 8)])
        res = check_regularity(g, range(4), range(4, 8), 0.3)
        assert res.verdict == "irregular"
        u, v = res.witness
        assert res.deviation > 0.3
        assert set(u) <= set(range(4)) and set(v) <= set(range(4, 8))

    def test_matches_definitional_evaluation_exhaustively_3x3(self):
        for code in range(1 << 9):
            g = SimpleGraph.from_edges(
                6, [(i, 3 + j) for i in range(3) for j in range(3) if code >> (3 * i + j) & 1]
            )
            for eps in (0.2, 0.5):
                res = check_regularity(g, range(3), range(3, 6), eps)
                direct = definitional_regularity(g, range(3), range(3, 6), eps)
                assert (res.verdict == "regular") == (direct is None), (code, eps)

    def test_randomized_mode_finds_gross_violations(self):
        g = SimpleGraph.from_edges(8, [(i, j) for i in range(2) for j in range(4, 8)])
        res = check_regularity(g, range(4), range(4, 8), 0.3, mode="randomized",
                               samples=400, seed=5)
        assert res.verdict == "irregular"

    def test_randomized_never_says_regular(self):
        g = SimpleGraph.complete_bipartite(4, 4)
        res = check_regularity(g, range(4), range(4, 8), 0.3, mode="randomized",
                               samples=50, seed=5)
        assert res.verdict == "unknown"

    def test_randomized_requires_seed(self):
        g = SimpleGraph.complete_bipartite(4, 4)
        with pytest.raises(PreconditionError):
            check_regularity(g, range(4), range(4, 8), 0.3, mode="randomized")


class TestDefect:
    def test_complete_is_zero(self):
        g = SimpleGraph.complete_bipartite(5, 5)
        assert regularity_defect(g, range(5), range(5, 10)) == 0.0

    def test_minus_matching_quarter(self):
        sys = complete_minus_matching_ring([8, 8])
        assert abs(regularity_defect(sys.graph, sys.classes[0], sys.classes[1]) - 0.25) < 1e-9

    def test_defect_certifies(self):
        rng = random.Random(11)
        for _ in range(5):
            g = SimpleGraph.from_edges(
                10, [(i, j) for i in range(5) for j in range(5, 10) if rng.random() < 0.5]
            )
            eps_hat = regularity_defect(g, range(5), range(5, 10))
            res = check_regularity(g, range(5), range(5, 10), min(0.999, eps_hat + 1e-6))
            assert res.verdict == "regular"


class TestDegreeExceptions:
    def test_complete_bipartite_no_exceptions(self):
        g = SimpleGraph.complete_bipartite(4, 4)
        assert degree_exception_counts(g, range(4), range(4, 8), 1.0, 0.1) == (0, 0)

    def test_exception_bound_on_certified_pairs(self):
        rng = random.Random(13)
        for _ in range(10):
            g = SimpleGraph.from_edges(
                12, [(i, j) for i in range(6) for j in range(6, 12) if rng.random() < 0.6]
            )
            xs, ys = list(range(6)), list(range(6, 12))
            eps = max(regularity_defect(g, xs, ys) + 1e-9, 0.05)
            if eps >= 1:
                continue
            d = density(g, xs, ys)
            for _ in range(8):
                m = rng.randint(max(1, math.ceil(eps * 6)), 6)
                y_sub = rng.sample(ys, m)
                hi, lo = degree_exception_counts(g, xs, y_sub, d, eps)
                assert hi < eps * len(xs)
                assert lo < eps * len(xs)


class TestSliceParams:
    def test_values(self):
        assert slice_params(0.1, 0.5) == 0.2
        assert slice_params(0.1, 0.25) == pytest.approx(0.4)
        assert slice_params(0.01, 1.0) == 0.02

    def test_zero_alpha_rejected(self):
        with pytest.raises(PreconditionError):
            slice_params(0.1, 0.0)


class TestPairSystem:
    def test_non_consecutive_edges_rejected(self):
        with pytest.raises(PreconditionError, match="non-consecutive"):
            PairSystem.build([2, 2, 2, 2], [(0, 4)])  # class 0 to class 2

    def test_within_class_edges_rejected(self):
        with pytest.raises(PreconditionError):
            PairSystem.build([2, 2], [(0, 1)])

    def test_t2_ring_is_one_bipartite_graph(self):
        sys = complete_ring([3, 3])
        assert sys.consecutive_pairs() == [(0, 1)]


class TestTransversalOracles:
    def test_complete_bipartite_counts(self):
        sys = complete_ring([3, 3])
        assert count_transversal_paths(sys, 0, 3) == 12

    def test_isolated_start_counts_zero(self):
        sys = PairSystem.build([2, 2], [(1, 2), (1, 3)])
        assert count_transversal_paths(sys, 0, 2) == 0

    def test_three_ring(self):
        sys = complete_ring([2, 2, 2])
        assert count_transversal_paths(sys, 0, 2) == 4

    def test_between_open(self):
        sys = complete_ring([3, 3])
        assert count_transversal_paths_between(sys, 0, 1, 2) == 3

    def test_between_requires_divisibility(self):
        sys = complete_ring([3, 3])
        with pytest.raises(PreconditionError):
            count_transversal_paths_between(sys, 0, 1, 3)

    def test_closed_sequences_from_one_start(self):
        # derived by hand and frozen: w1 in V1 (3) x w2 in V0-w0 (2) x w3 in V1-w1 (2)
        sys = complete_ring([3, 3])
        assert count_transversal_paths_between(sys, 0, 0, 4) == 12

    def test_closed_sequence_cycle_ratio(self):
        # t = 2: each aligned p-cycle is seen p times (p/2 starts x 2 directions)
        sys = complete_ring([3, 3])
        total = sum(count_transversal_paths_between(sys, w, w, 4) for w in sys.classes[0])
        assert total == 4 * count_copies(sys.graph, PatternGraph.cycle(4))

    def test_closed_sequence_cycle_ratio_t3(self):
        # t >= 3: only the forward direction is class-aligned: p/t per cycle
        rng = random.Random(5)
        sys = quasirandom_ring([3, 3, 3], 0.8, rng)
        p = 6
        total = sum(count_transversal_paths_between(sys, w, w, p) for w in sys.classes[0])
        aligned = set()
        for w in sys.classes[0]:
            aligned |= _aligned_cycles(sys, w, p)
        assert total == (p // sys.t) * len(aligned)

    def test_budget_error(self):
        sys = complete_ring([8, 8])
        with pytest.raises(BudgetExceededError):
            count_transversal_paths(sys, 0, 9, budget=50)


def _aligned_cycles(sys, w0, p):
    """Edge sets of class-aligned p-cycles through w0 (test-local oracle)."""
    out = set()
    adj = sys.graph.adj
    t = sys.t

    def rec(v, used, depth, path):
        if depth == p - 1:
            if adj[v] >> w0 & 1:
                ring = path + [w0]
                out.add(frozenset(frozenset(e) for e in zip(ring, ring[1:])))
            return
        for w in sys.classes[(depth + 1) % t]:
            if not used >> w & 1 and adj[v] >> w & 1:
                rec(w, used | (1 << w), depth + 1, path + [w])

    rec(w0, 1 << w0, 0, [w0])
    return out


class TestBounds:
    def test_fixed_start_matches_complete_bipartite(self):
        p = RegimeParams(eps=0.0, d=1.0, t=2, mode="explorer")
        ev = transversal_path_bound_fixed_start(p, 3, 3)
        assert ev.met
        assert 11.9 < ev.value <= 12.0
        sys = complete_ring([3, 3])
        assert count_transversal_paths(sys, 0, 3) >= ev.value

    def test_fixed_start_flags_short_length(self):
        p = RegimeParams(eps=0.0, d=1.0, t=2, mode="explorer")
        ev = transversal_path_bound_fixed_start(p, 3, 1)
        assert not ev.met

    def test_fixed_ends_degenerates_at_zero_eps(self):
        p = RegimeParams(eps=0.0, d=1.0, t=2, mode="explorer")
        assert transversal_path_bound_fixed_ends(p, 3, 4).value == 0.0

    def test_fixed_ends_explicit_product(self):
        eps, d, t, n, ell = 1e-4, 0.9, 2, 10**8, 4
        p = RegimeParams(eps=eps, d=d, t=t, mode="explorer")
        ev = transversal_path_bound_fixed_ends(p, n, ell)
        se = math.sqrt(eps)
        manual = (d - 5 * se) ** 3 * (1 - 2 * se) ** 2 * (eps * n) * (n * (n - 1))
        assert ev.value == pytest.approx(manual, rel=1e-9)
        assert ev.value <= manual  # downward rounding never overshoots

    def test_fixed_ends_divisibility_flag(self):
        p = RegimeParams(eps=1e-6, d=0.5, t=2, mode="explorer")
        ev = transversal_path_bound_fixed_ends(p, 100, 5)
        assert dict(ev.hypotheses)["t divides ell"] is False

    def test_cycle_bound_parity_flag(self):
        p = RegimeParams(eps=1e-6, d=0.5, t=3, mode="explorer")
        assert dict(ring_cycle_bound(p, 100, 12).hypotheses)["p odd"] is False

    def test_cycle_bound_finite_value(self):
        p = RegimeParams(eps=1e-6, d=0.5, t=3, mode="explorer")
        ev = ring_cycle_bound(p, 10**13, 13)
        assert ev.met and ev.value > 0

    def test_monotone_in_parameters(self):
        n, ell, t = 50, 5, 2
        eps_grid = [0.0, 1e-6, 1e-4, 1e-2]
        d_grid = [0.2, 0.5, 0.8, 1.0]
        for d in d_grid:
            vals = [
                transversal_path_bound_fixed_start(
                    RegimeParams(eps=e, d=d, t=t, mode="explorer"), n, ell
                ).value
                for e in eps_grid
            ]
            assert vals == sorted(vals, reverse=True)
        for e in eps_grid:
            vals = [
                transversal_path_bound_fixed_start(
                    RegimeParams(eps=e, d=d, t=t, mode="explorer"), n, ell
                ).value
                for d in d_grid
            ]
            assert vals == sorted(vals)
        for n_val in (10, 20, 40):
            prev = transversal_path_bound_fixed_start(
                RegimeParams(eps=1e-6, d=0.5, t=t, mode="explorer"), n_val, ell
            ).value
            nxt = transversal_path_bound_fixed_start(
                RegimeParams(eps=1e-6, d=0.5, t=t, mode="explorer"), n_val * 2, ell
            ).value
            assert nxt >= prev

    def test_paper_mode_locks_derived_parameters(self):
        p = RegimeParams(eps=1e-6, d=0.5, t=2)
        assert p.alpha == pytest.approx(20 * math.sqrt(1e-6))
        assert p.lam == pytest.approx(300 * math.sqrt(p.alpha))


class TestHarness:
    def test_small_grids_have_no_failures(self):
        for lemma in ("countpath2-p1", "countpath2-p2", "countcycle1"):
            base = GridSpec.default(lemma)
            spec = GridSpec(lemma, base.t_values, base.size_lo, base.size_hi,
                            instances_per_cell=5, count_budget=base.count_budget)
            rep = verify_counting_lemma(lemma, seed=3, spec=spec)
            tally = rep.tally()
            assert tally.get("FAIL", 0) == 0, tally
            assert tally.get("undecided-budget", 0) == 0, tally

    def test_complete_family_passes_nonvacuously(self):
        base = GridSpec.default("countpath2-p1")
        spec = GridSpec("countpath2-p1", (2,), 4, 6, families=("complete",),
                        instances_per_cell=10)
        rep = verify_counting_lemma("countpath2-p1", seed=1, spec=spec)
        assert rep.tally() == {"pass": 10}

    def test_deterministic_given_seed(self):
        spec = GridSpec("countpath2-p1", (2,), 4, 6, instances_per_cell=3)
        a = verify_counting_lemma("countpath2-p1", seed=9, spec=spec)
        b = verify_counting_lemma("countpath2-p1", seed=9, spec=spec)
        assert [r.as_dict() for r in a.rows] == [r.as_dict() for r in b.rows]
