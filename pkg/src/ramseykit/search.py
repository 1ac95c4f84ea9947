"""Exact Ramsey multiplicity by pruned exhaustive search over 2-colorings.

The search walks edge assignments of K_n in colex order, so the first
C(v,2) decisions form a complete coloring of K_v and every copy of the
pattern becomes fully decided the moment its last colex edge is assigned.
Branches are cut when the decided monochromatic copies already reach the
incumbent, and when the partial assignment is provably not the lex-minimal
member of its orbit under a precomputed set of vertex permutations
(transpositions by default; any subset of S_n is sound because the global
lex-min representative of an orbit survives every such constraint).

Red is assigned before blue and the first edge is forced red: swapping the
two colors preserves the total monochromatic count, so only the all-blue
coloring is lost, and its color swap is explored.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from .errors import PreconditionError
from .graphs import PatternGraph, TwoColoring, pair_index

DEFAULT_NODE_BUDGET = 400_000_000


@dataclass(frozen=True)
class SearchBudget:
    """Node and wall-clock caps; hitting either yields a flagged partial report."""

    max_nodes: Optional[int] = DEFAULT_NODE_BUDGET
    max_seconds: Optional[float] = None

    @staticmethod
    def from_env() -> "SearchBudget":
        nodes = os.environ.get("RAMSEY_BUDGET_NODES")
        return SearchBudget(max_nodes=int(nodes) if nodes else DEFAULT_NODE_BUDGET)


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    pruned_bound: int = 0
    pruned_symmetry: int = 0
    elapsed_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "pruned_bound": self.pruned_bound,
            "pruned_symmetry": self.pruned_symmetry,
            "elapsed_seconds": round(self.elapsed_seconds, 6),
        }


@dataclass
class MultiplicityReport:
    """Result of a multiplicity search at one board size."""

    pattern: PatternGraph
    n: int
    value: int
    witness: TwoColoring
    stats: SearchStats
    exact: bool
    resume_token: Optional[str] = None

    def as_dict(self) -> dict:
        from .graphs import encode

        return {
            "pattern": self.pattern.label(),
            "n": self.n,
            "value": self.value,
            "exact": self.exact,
            "witness_kcol": encode(self.witness),
            "resume_token": self.resume_token,
            "stats": self.stats.as_dict(),
        }


@dataclass
class RamseyNumberReport:
    pattern: PatternGraph
    value: Optional[int]
    n_max: int
    exact: bool
    witness_below: Optional[TwoColoring]
    per_n: list = field(default_factory=list)

    def as_dict(self) -> dict:
        from .graphs import encode

        return {
            "pattern": self.pattern.label(),
            "value": self.value,
            "exceeds_n_max": self.value is None,
            "n_max": self.n_max,
            "exact": self.exact,
            "witness_below_kcol": encode(self.witness_below) if self.witness_below else None,
            "per_n": self.per_n,
        }


# ---------------------------------------------------------------------------
# Copy tables in colex edge order
# ---------------------------------------------------------------------------


def _colex_index(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def _colex_edges(n: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(n) for i in range(j)]


def enumerate_copy_masks(h: PatternGraph, n: int) -> list[int]:
    """Every copy of h inside K_n as a bitmask over colex edge indices."""
    k = h.order
    if k > n:
        return []
    masks: set[int] = set()

    def edge_mask(edges) -> int:
        m = 0
        for u, v in edges:
            m |= 1 << _colex_index(u, v)
        return m

    for sub in itertools.combinations(range(n), k):
        if h.kind == "complete":
            masks.add(edge_mask(itertools.combinations(sub, 2)))
        elif h.kind == "star":
            for center in sub:
                leaves = [v for v in sub if v != center]
                masks.add(edge_mask((center, leaf) for leaf in leaves))
        elif h.kind == "path":
            # perm[0] < perm[-1] picks one of the two directions
            for perm in itertools.permutations(sub):
                if perm[0] > perm[-1]:
                    continue
                masks.add(edge_mask(zip(perm, perm[1:])))
        elif h.kind == "cycle":
            a = sub[0]
            for perm in itertools.permutations(sub[1:]):
                if perm[0] > perm[-1]:
                    continue
                cycle = (a,) + perm
                masks.add(edge_mask(list(zip(cycle, cycle[1:])) + [(cycle[-1], a)]))
        else:  # explicit
            pat = h.graph
            for perm in itertools.permutations(sub):
                masks.add(edge_mask((perm[u], perm[v]) for u, v in pat.edges()))
    return sorted(masks)


def _group_by_last(masks: list[int], num_edges: int) -> list[list[int]]:
    by_last: list[list[int]] = [[] for _ in range(num_edges)]
    for m in masks:
        by_last[m.bit_length() - 1].append(m)
    return by_last


def _transposition_sigmas(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Edge-index permutations for all vertex transpositions.

    Returns (mismatch_positions, sigma) per permutation, mismatch positions
    ascending; identity positions are skipped during canonicity checks.
    """
    edges = _colex_edges(n)
    out = []
    for u in range(n):
        for v in range(u + 1, n):
            perm = list(range(n))
            perm[u], perm[v] = v, u
            sigma = tuple(_colex_index(perm[i], perm[j]) for i, j in edges)
            mism = tuple(e for e, s in enumerate(sigma) if s != e)
            if mism:
                out.append((mism, sigma))
    return out


# ---------------------------------------------------------------------------
# Core DFS engine
# ---------------------------------------------------------------------------


class _Exhausted(Exception):
    pass


class _Engine:
    """One branch-and-bound run over colorings of K_n (0 = red, 1 = blue)."""

    def __init__(
        self,
        h: PatternGraph,
        n: int,
        budget: SearchBudget,
        incumbent: int,
        incumbent_bits: Optional[list[int]],
        use_symmetry: bool = True,
        prefix: Optional[list[int]] = None,
        resume: Optional[list[int]] = None,
    ):
        self.n = n
        self.E = comb(n, 2)
        self.by_last = _group_by_last(enumerate_copy_masks(h, n), self.E)
        self.sigmas = _transposition_sigmas(n) if use_symmetry else []
        self.budget = budget
        self.stats = SearchStats()
        self.best = incumbent
        self.best_bits = list(incumbent_bits) if incumbent_bits else None
        self.x = [0] * self.E
        self.red = 0
        self.blue = 0
        self.prefix = prefix or []
        self.resume = resume
        self.deadline = (
            time.monotonic() + budget.max_seconds if budget.max_seconds else None
        )
        self.stopped_at: Optional[list[int]] = None

    def run(self) -> None:
        t0 = time.monotonic()
        try:
            self._dfs(0, 0, bool(self.resume))
        except _Exhausted:
            pass
        self.stats.elapsed_seconds = time.monotonic() - t0

    def _check_budget(self, depth: int) -> None:
        self.stats.nodes += 1
        if self.budget.max_nodes is not None and self.stats.nodes > self.budget.max_nodes:
            self.stopped_at = self.x[:depth]
            raise _Exhausted
        if self.deadline is not None and self.stats.nodes % 4096 == 0:
            if time.monotonic() > self.deadline:
                self.stopped_at = self.x[:depth]
                raise _Exhausted

    def _canonical_violated(self, depth: int) -> bool:
        x = self.x
        for mism, sigma in self.sigmas:
            for e in mism:
                if e >= depth:
                    break
                je = sigma[e]
                if je >= depth:
                    break
                a = x[e]
                b = x[je]
                if b != a:
                    if b < a:
                        return True
                    break
        return False

    def _dfs(self, depth: int, decided_mono: int, on_spine: bool) -> None:
        if depth == self.E:
            self.stats.leaves += 1
            if decided_mono < self.best:
                self.best = decided_mono
                self.best_bits = self.x.copy()
            return
        if depth < len(self.prefix):
            branches = (self.prefix[depth],)
        elif depth == 0 and self.E > 0:
            branches = (0,)  # color swap: first edge red WLOG
        else:
            branches = (0, 1)
        spine_bit = self.resume[depth] if on_spine and self.resume and depth < len(self.resume) else None
        for b in branches:
            if spine_bit is not None and b < spine_bit:
                continue
            child_spine = spine_bit is not None and b == spine_bit
            self._check_budget(depth)
            self.x[depth] = b
            bit = 1 << depth
            if b == 0:
                self.red |= bit
            else:
                self.blue |= bit
            new_mono = 0
            red, blue = self.red, self.blue
            for cm in self.by_last[depth]:
                if cm & red == cm or cm & blue == cm:
                    new_mono += 1
                    if decided_mono + new_mono >= self.best:
                        break
            total = decided_mono + new_mono
            if total >= self.best:
                self.stats.pruned_bound += 1
            elif self.sigmas and self._canonical_violated(depth + 1):
                self.stats.pruned_symmetry += 1
            else:
                self._dfs(depth + 1, total, child_spine)
            if b == 0:
                self.red ^= bit
            else:
                self.blue ^= bit


def _bits_to_coloring(n: int, bits: list[int]) -> TwoColoring:
    edges = _colex_edges(n)
    mask = 0
    for e, b in enumerate(bits):
        if b == 0:
            i, j = edges[e]
            mask |= 1 << pair_index(i, j, n)
    return TwoColoring(n, mask)


def _coloring_to_bits(c: TwoColoring) -> list[int]:
    edges = _colex_edges(c.n)
    return [0 if c.is_red(i, j) else 1 for i, j in edges]


def _seed_colorings(h: PatternGraph, n: int) -> list[TwoColoring]:
    """Cheap candidate colorings whose counts seed the incumbent."""
    from .extremal import chi

    out = [TwoColoring(n, 0)]  # all blue
    for a in range(1, n // 2 + 1):
        out.append(chi(a, n - a))
    return out


def multiplicity(
    h: PatternGraph,
    n: int,
    budget: Optional[SearchBudget] = None,
    threads: int = 1,
    use_symmetry: bool = True,
    resume_token: Optional[str] = None,
    incumbent: Optional[MultiplicityReport] = None,
) -> MultiplicityReport:
    """Exact minimum number of monochromatic copies of h over colorings of K_n.

    Exhaustive up to the symmetry reductions described in the module
    docstring. A board smaller than the pattern trivially has value 0. On
    budget exhaustion the report is flagged non-exact and carries a resume
    token accepted by a later call.
    """
    from .graphs import mono_counts

    budget = budget or SearchBudget.from_env()
    if n < 1:
        raise PreconditionError("board size must be >= 1")
    if h.order < 2:
        raise PreconditionError("search needs a pattern with at least one edge")
    if n < h.order:
        report = MultiplicityReport(
            h, n, 0, TwoColoring(n, 0), SearchStats(leaves=1), exact=True
        )
        return report

    best_bits = None
    best_val = None
    for cand in _seed_colorings(h, n):
        val = sum(mono_counts(cand, h))
        if best_val is None or val < best_val:
            best_val = val
            best_bits = _coloring_to_bits(cand)
    if incumbent is not None and incumbent.value <= best_val:
        best_val = incumbent.value
        best_bits = _coloring_to_bits(incumbent.witness)
    resume = [int(ch) for ch in resume_token] if resume_token else None

    if threads > 1 and resume is None:
        return _multiplicity_parallel(h, n, budget, threads, use_symmetry, best_val, best_bits)

    eng = _Engine(h, n, budget, best_val + 1, best_bits, use_symmetry, resume=resume)
    eng.run()
    exact = eng.stopped_at is None
    token = "".join(map(str, eng.stopped_at)) if eng.stopped_at is not None else None
    witness = _bits_to_coloring(n, eng.best_bits)
    value = eng.best if eng.best <= best_val else best_val
    return MultiplicityReport(h, n, value, witness, eng.stats, exact, token)


def _subtree_prefixes(depth: int) -> list[list[int]]:
    out = []
    for bits in itertools.product((0, 1), repeat=depth):
        if bits[0] == 1:  # first edge forced red
            continue
        out.append(list(bits))
    return out


def _run_prefix(args):
    h_label, explicit_edges, n, budget, use_symmetry, cap, cap_bits, prefix = args
    if explicit_edges is None:
        h = PatternGraph.parse(h_label)
    else:
        from .graphs import SimpleGraph

        k, edges = explicit_edges
        h = PatternGraph.explicit(SimpleGraph.from_edges(k, edges))
    eng = _Engine(h, n, budget, cap, cap_bits, use_symmetry, prefix=prefix)
    eng.run()
    return (
        eng.best,
        eng.best_bits,
        eng.stats.as_dict(),
        eng.stopped_at is None,
    )


def _multiplicity_parallel(h, n, budget, threads, use_symmetry, best_val, best_bits):
    import multiprocessing as mp

    depth = max(2, (threads - 1).bit_length() + 1)
    depth = min(depth, comb(n, 2))
    prefixes = _subtree_prefixes(depth)
    if h.kind == "explicit":
        spec = (None, (h.graph.n, list(h.graph.edges())))
    else:
        spec = (h.label(), None)
    per = SearchBudget(
        max_nodes=None if budget.max_nodes is None else budget.max_nodes // len(prefixes),
        max_seconds=budget.max_seconds,
    )
    args = [
        (spec[0], spec[1], n, per, use_symmetry, best_val + 1, best_bits, p)
        for p in prefixes
    ]
    ctx = mp.get_context("fork")
    with ctx.Pool(threads) as pool:
        results = pool.map(_run_prefix, args)
    stats = SearchStats()
    value, bits, exact = best_val, best_bits, True
    for val, vbits, st, ex in results:
        stats.nodes += st["nodes"]
        stats.leaves += st["leaves"]
        stats.pruned_bound += st["pruned_bound"]
        stats.pruned_symmetry += st["pruned_symmetry"]
        stats.elapsed_seconds = max(stats.elapsed_seconds, st["elapsed_seconds"])
        exact &= ex
        if val < value:
            value, bits = val, vbits
    return MultiplicityReport(h, n, value, _bits_to_coloring(n, bits), stats, exact)


def find_zero_coloring(
    h: PatternGraph, n: int, budget: Optional[SearchBudget] = None, use_symmetry: bool = True
) -> tuple[Optional[TwoColoring], SearchStats, bool]:
    """Search for a coloring of K_n with no monochromatic copy of h.

    Returns (witness or None, stats, exhaustive). When exhaustive is False
    the budget ran out before the question was settled.
    """
    budget = budget or SearchBudget.from_env()
    if h.order < 2:
        raise PreconditionError("search needs a pattern with at least one edge")
    if n < h.order:
        return TwoColoring(n, 0), SearchStats(leaves=1), True
    # quick win: chi-style candidates avoid many patterns outright
    from .graphs import mono_counts

    for cand in _seed_colorings(h, n):
        if sum(mono_counts(cand, h)) == 0:
            return cand, SearchStats(leaves=1), True
    eng = _Engine(h, n, budget, 1, None, use_symmetry)
    eng.run()
    if eng.best_bits is not None and eng.best == 0:
        return _bits_to_coloring(n, eng.best_bits), eng.stats, True
    return None, eng.stats, eng.stopped_at is None


def ramsey_number(
    h: PatternGraph,
    n_max: int = 12,
    budget: Optional[SearchBudget] = None,
    use_symmetry: bool = True,
) -> RamseyNumberReport:
    """Smallest n <= n_max forcing a monochromatic copy of h, by search.

    The returned report carries a zero-copy witness for n-1 and per-board
    statistics. A board below the pattern order is trivially zero-free.
    """
    budget = budget or SearchBudget.from_env()
    witness_prev: Optional[TwoColoring] = None
    per_n = []
    for n in range(1, n_max + 1):
        w, stats, exhaustive = find_zero_coloring(h, n, budget, use_symmetry)
        per_n.append(
            {"n": n, "zero_coloring_exists": w is not None, "settled": exhaustive,
             "nodes": stats.nodes}
        )
        if not exhaustive:
            return RamseyNumberReport(h, None, n_max, False, witness_prev, per_n)
        if w is None:
            return RamseyNumberReport(h, n, n_max, True, witness_prev, per_n)
        witness_prev = w
    return RamseyNumberReport(h, None, n_max, True, witness_prev, per_n)


def threshold_multiplicity(
    h: PatternGraph,
    budget: Optional[SearchBudget] = None,
    n_max: int = 12,
    threads: int = 1,
) -> MultiplicityReport:
    """m(h): the multiplicity at the first board where it is positive."""
    rn = ramsey_number(h, n_max, budget)
    if rn.value is None:
        raise PreconditionError(
            f"ramsey number of {h.label()} exceeds n_max={n_max}; raise n_max"
        )
    return multiplicity(h, rn.value, budget, threads=threads)


def multiplicity_bruteforce(h: PatternGraph, n: int) -> tuple[int, TwoColoring]:
    """Unpruned enumeration of all 2^C(n,2) colorings (soundness oracle)."""
    E = comb(n, 2)
    masks = enumerate_copy_masks(h, n)
    full = (1 << E) - 1
    best, best_mask = None, 0
    for red in range(1 << E):
        blue = full ^ red
        cnt = 0
        for cm in masks:
            if cm & red == cm or cm & blue == cm:
                cnt += 1
        if best is None or cnt < best:
            best, best_mask = cnt, red
    # colex mask -> row-major coloring
    bits = [(0 if best_mask >> e & 1 else 1) for e in range(E)]
    return best, _bits_to_coloring(n, bits)
