"""Regular-pair machinery: density, exact regularity checking, transversal
path/cycle oracles, and closed-form count lower bounds with a verification
harness.

The counting bounds assume parameter regimes (eps below 1e-5, classes of
size eps^-2) that no desk-scale instance reaches. The harness therefore
measures the actual regularity defect of each concrete instance with the
exact checker, evaluates the bounds at the measured parameters, and
records an honest verdict: "pass" when the hypotheses hold and the exact
count clears the bound, "vacuous" when the measured parameters violate
the hypotheses, "FAIL" only when a met bound is beaten by the count.
Bounds are evaluated with downward-rounded float arithmetic so a pass is
never an artifact of rounding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import rounding
from .errors import BudgetExceededError, PreconditionError
from .graphs import SimpleGraph

EXACT_REGULARITY_CAP = 14

DEFAULT_PATH_BUDGET = 10**9


# ---------------------------------------------------------------------------
# Density and regularity
# ---------------------------------------------------------------------------


def _as_tuple(vertices: Iterable[int], n: int, name: str) -> tuple[int, ...]:
    vs = tuple(sorted(set(vertices)))
    if not vs:
        raise PreconditionError(f"{name} must be nonempty")
    if vs[0] < 0 or vs[-1] >= n:
        raise PreconditionError(f"{name} has vertices outside 0..{n-1}")
    return vs


def density(g: SimpleGraph, xs: Iterable[int], ys: Iterable[int]) -> float:
    """Edge density d(X, Y) = e(X,Y)/|X||Y|; for X = Y, 2e(X)/|X|^2.

    X and Y must be either disjoint or identical.
    """
    vx = _as_tuple(xs, g.n, "X")
    vy = _as_tuple(ys, g.n, "Y")
    if vx == vy:
        mask = sum(1 << v for v in vx)
        e2 = sum((g.adj[v] & mask).bit_count() for v in vx)  # = 2 e(X)
        return float(Fraction(e2, len(vx) ** 2))
    if set(vx) & set(vy):
        raise PreconditionError("X and Y must be disjoint or identical")
    my = sum(1 << v for v in vy)
    e = sum((g.adj[v] & my).bit_count() for v in vx)
    return float(Fraction(e, len(vx) * len(vy)))


@dataclass(frozen=True)
class RegularityResult:
    verdict: str  # "regular" | "irregular" | "unknown"
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    deviation: Optional[float] = None


def _degrees_into(g: SimpleGraph, umask: int, ys: Sequence[int]) -> list[int]:
    return [(g.adj[y] & umask).bit_count() for y in ys]


def check_regularity(
    g: SimpleGraph,
    xs: Iterable[int],
    ys: Iterable[int],
    eps: float,
    mode: str = "exact",
    samples: int = 200,
    seed: Optional[int] = None,
) -> RegularityResult:
    """Decide eps-regularity of the disjoint pair (X, Y) in g.

    Exact mode enumerates every U subset X above the size floor and, for
    each, the extremal V of every admissible size (the densest/sparsest V
    of size m consists of the m largest/smallest degrees into U), so it is
    a full decision procedure for |X|, |Y| <= 14. Randomized mode samples
    floor-size subset pairs and can only answer "irregular" (with witness)
    or "unknown".
    """
    vx = _as_tuple(xs, g.n, "X")
    vy = _as_tuple(ys, g.n, "Y")
    if set(vx) & set(vy):
        raise PreconditionError("X and Y must be disjoint")
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    d = Fraction(
        sum((g.adj[x] & sum(1 << y for y in vy)).bit_count() for x in vx),
        len(vx) * len(vy),
    )
    u0 = max(1, math.ceil(eps * len(vx) - 1e-12))
    v0 = max(1, math.ceil(eps * len(vy) - 1e-12))
    if mode == "randomized":
        if seed is None:
            raise PreconditionError("randomized mode requires a seed")
        rng = random.Random(seed)
        for _ in range(samples):
            u = tuple(sorted(rng.sample(vx, u0)))
            v = tuple(sorted(rng.sample(vy, v0)))
            mv = sum(1 << w for w in v)
            e = sum((g.adj[x] & mv).bit_count() for x in u)
            dev = abs(float(Fraction(e, len(u) * len(v)) - d))
            if dev > eps + 1e-15:
                return RegularityResult("irregular", (u, v), dev)
        return RegularityResult("unknown")
    if mode != "exact":
        raise PreconditionError(f"unknown mode {mode!r}")
    if len(vx) > EXACT_REGULARITY_CAP or len(vy) > EXACT_REGULARITY_CAP:
        raise PreconditionError(
            f"exact mode supports side sizes <= {EXACT_REGULARITY_CAP}"
        )
    for umask_bits in range(1, 1 << len(vx)):
        usize = umask_bits.bit_count()
        if usize < u0:
            continue
        umask = 0
        for b in range(len(vx)):
            if umask_bits >> b & 1:
                umask |= 1 << vx[b]
        degs = _degrees_into(g, umask, vy)
        order = sorted(range(len(vy)), key=lambda idx: degs[idx])
        sorted_degs = [degs[idx] for idx in order]
        prefix = [0]
        for dg in sorted_degs:
            prefix.append(prefix[-1] + dg)
        total = prefix[-1]
        for m in range(v0, len(vy) + 1):
            lo_e = prefix[m]
            hi_e = total - prefix[len(vy) - m]
            denom = usize * m
            for e_val, pick in ((hi_e, order[len(vy) - m :]), (lo_e, order[:m])):
                dev = abs(Fraction(e_val, denom) - d)
                if float(dev) > eps + 1e-15:
                    u = tuple(vx[b] for b in range(len(vx)) if umask_bits >> b & 1)
                    v = tuple(sorted(vy[idx] for idx in pick))
                    return RegularityResult("irregular", (u, v), float(dev))
    return RegularityResult("regular")


def regularity_defect(g: SimpleGraph, xs: Iterable[int], ys: Iterable[int]) -> float:
    """The infimum eps for which (X, Y) is eps-regular (may be unattained).

    Built from the full table of worst deviations by subset-size pair,
    intersected with the size-floor geometry ceil(eps|X|), ceil(eps|Y|).
    """
    vx = _as_tuple(xs, g.n, "X")
    vy = _as_tuple(ys, g.n, "Y")
    if set(vx) & set(vy):
        raise PreconditionError("X and Y must be disjoint")
    if len(vx) > EXACT_REGULARITY_CAP or len(vy) > EXACT_REGULARITY_CAP:
        raise PreconditionError(f"defect supports side sizes <= {EXACT_REGULARITY_CAP}")
    nx, ny = len(vx), len(vy)
    d = Fraction(
        sum((g.adj[x] & sum(1 << y for y in vy)).bit_count() for x in vx), nx * ny
    )
    worst = [[0.0] * (ny + 1) for _ in range(nx + 1)]
    for umask_bits in range(1, 1 << nx):
        usize = umask_bits.bit_count()
        umask = 0
        for b in range(nx):
            if umask_bits >> b & 1:
                umask |= 1 << vx[b]
        degs = sorted(_degrees_into(g, umask, vy))
        prefix = [0]
        for dg in degs:
            prefix.append(prefix[-1] + dg)
        total = prefix[-1]
        for m in range(1, ny + 1):
            lo_e = prefix[m]
            hi_e = total - prefix[ny - m]
            dev = max(
                abs(float(Fraction(hi_e, usize * m) - d)),
                abs(float(Fraction(lo_e, usize * m) - d)),
            )
            if dev > worst[usize][m]:
                worst[usize][m] = dev
    # suffix maxima: S[i][j] = worst deviation over sizes >= (i, j)
    suffix = [[0.0] * (ny + 2) for _ in range(nx + 2)]
    for i in range(nx, 0, -1):
        for j in range(ny, 0, -1):
            suffix[i][j] = max(
                worst[i][j], suffix[i + 1][j], suffix[i][j + 1]
            )
    best = 1.0
    for u0 in range(1, nx + 1):
        for v0 in range(1, ny + 1):
            lo = max((u0 - 1) / nx, (v0 - 1) / ny)
            hi = min(u0 / nx, v0 / ny)
            if lo >= hi:
                continue
            cand = max(suffix[u0][v0], lo)
            if cand <= hi and cand < best:
                best = cand
    return best


def degree_exception_counts(
    g: SimpleGraph, xs: Iterable[int], y_sub: Iterable[int], d: float, eps: float
) -> tuple[int, int]:
    """Vertices of X with degree into Y' above (d+eps)|Y'| / below (d-eps)|Y'|."""
    vx = _as_tuple(xs, g.n, "X")
    vy = _as_tuple(y_sub, g.n, "Y'")
    my = sum(1 << y for y in vy)
    hi = lo = 0
    for x in vx:
        deg = (g.adj[x] & my).bit_count()
        if deg > (d + eps) * len(vy) + 1e-12:
            hi += 1
        if deg < (d - eps) * len(vy) - 1e-12:
            lo += 1
    return hi, lo


def slice_params(eps: float, alpha: float) -> float:
    """Regularity parameter after restricting to alpha-fraction subsets."""
    if not 0 < alpha <= 1:
        raise PreconditionError("alpha must lie in (0, 1]")
    return max(eps / alpha, 2 * eps)


# ---------------------------------------------------------------------------
# Pair systems and transversal path oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairSystem:
    """t disjoint classes in a ring, with bipartite graphs between
    cyclically consecutive classes; indices live in Z/tZ."""

    classes: tuple[tuple[int, ...], ...]
    graph: SimpleGraph

    def __post_init__(self):
        t = len(self.classes)
        if t < 2:
            raise PreconditionError("a pair system needs at least 2 classes")
        seen: set[int] = set()
        for cls in self.classes:
            if set(cls) & seen:
                raise PreconditionError("classes must be pairwise disjoint")
            seen.update(cls)
        cls_of = self.class_of
        for u, v in self.graph.edges():
            cu, cv = cls_of.get(u), cls_of.get(v)
            if cu is None or cv is None:
                raise PreconditionError(f"edge ({u},{v}) touches a vertex in no class")
            if (cu - cv) % t not in (1, t - 1):
                raise PreconditionError(
                    f"edge ({u},{v}) joins non-consecutive classes {cu},{cv}"
                )

    @property
    def t(self) -> int:
        return len(self.classes)

    @property
    def class_of(self) -> dict[int, int]:
        return {v: i for i, cls in enumerate(self.classes) for v in cls}

    @staticmethod
    def build(sizes: Sequence[int], edges: Iterable[tuple[int, int]]) -> "PairSystem":
        classes = []
        v = 0
        for s in sizes:
            classes.append(tuple(range(v, v + s)))
            v += s
        g = SimpleGraph.from_edges(v, edges)
        return PairSystem(tuple(classes), g)

    def consecutive_pairs(self) -> list[tuple[int, int]]:
        t = self.t
        if t == 2:
            return [(0, 1)]
        return [(i, (i + 1) % t) for i in range(t)]

    def min_class_size(self) -> int:
        return min(len(c) for c in self.classes)


def complete_ring(sizes: Sequence[int]) -> PairSystem:
    t = len(sizes)
    edges = []
    offs = [sum(sizes[:i]) for i in range(t)]
    for i in range(1 if t == 2 else t):
        j = (i + 1) % t
        for a in range(sizes[i]):
            for b in range(sizes[j]):
                edges.append((offs[i] + a, offs[j] + b))
    return PairSystem.build(sizes, edges)


def complete_minus_matching_ring(sizes: Sequence[int]) -> PairSystem:
    t = len(sizes)
    edges = []
    offs = [sum(sizes[:i]) for i in range(t)]
    for i in range(1 if t == 2 else t):
        j = (i + 1) % t
        for a in range(sizes[i]):
            for b in range(sizes[j]):
                if a != b:  # drop the natural matching
                    edges.append((offs[i] + a, offs[j] + b))
    return PairSystem.build(sizes, edges)


def quasirandom_ring(sizes: Sequence[int], d: float, rng: random.Random) -> PairSystem:
    t = len(sizes)
    edges = []
    offs = [sum(sizes[:i]) for i in range(t)]
    for i in range(1 if t == 2 else t):
        j = (i + 1) % t
        for a in range(sizes[i]):
            for b in range(sizes[j]):
                if rng.random() < d:
                    edges.append((offs[i] + a, offs[j] + b))
    return PairSystem.build(sizes, edges)


class _Budget:
    __slots__ = ("left",)

    def __init__(self, budget: Optional[int]):
        self.left = budget if budget is not None else DEFAULT_PATH_BUDGET

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError("transversal path budget exhausted")


def count_transversal_paths(
    sys: PairSystem, w0: int, ell: int, budget: Optional[int] = None
) -> int:
    """Paths w_0 w_1 ... w_ell with w_i in V_{i mod t}, all vertices distinct.

    Counts vertex sequences anchored at w0 (for open paths this equals the
    subgraph count, the start pins the direction).
    """
    if ell < 1:
        raise PreconditionError("path length must be >= 1")
    if w0 not in sys.classes[0]:
        raise PreconditionError("w0 must lie in class V_0")
    counter = _Budget(budget)
    t = sys.t
    adj = sys.graph.adj

    def rec(v: int, used: int, depth: int) -> int:
        counter.spend()
        if depth == ell:
            return 1
        cls = sys.classes[(depth + 1) % t]
        total = 0
        for w in cls:
            if used >> w & 1:
                continue
            if adj[v] >> w & 1:
                total += rec(w, used | (1 << w), depth + 1)
        return total

    return rec(w0, 1 << w0, 0)


def count_transversal_paths_between(
    sys: PairSystem, w0: int, w0_prime: int, ell: int, budget: Optional[int] = None
) -> int:
    """Transversal sequences of length ell from w0 to w0_prime, both in V_0.

    ell must be divisible by t. Counts anchored sequences: interior
    vertices are distinct and avoid both endpoints. With w0 = w0_prime the
    sequences close into cycles through w0; each class-aligned cycle is
    then seen once per direction whose class pattern matches (twice when
    t = 2, once for t >= 3).
    """
    if ell % sys.t != 0:
        raise PreconditionError(f"ell={ell} not divisible by t={sys.t}")
    if ell < 2:
        raise PreconditionError("ell must be >= 2")
    if w0 not in sys.classes[0] or w0_prime not in sys.classes[0]:
        raise PreconditionError("both endpoints must lie in V_0")
    counter = _Budget(budget)
    t = sys.t
    adj = sys.graph.adj
    target = w0_prime
    blocked = (1 << w0) | (1 << target)

    def rec(v: int, used: int, depth: int) -> int:
        counter.spend()
        if depth == ell - 1:
            return 1 if adj[v] >> target & 1 else 0
        cls = sys.classes[(depth + 1) % t]
        total = 0
        for w in cls:
            if (used | blocked) >> w & 1:
                continue
            if adj[v] >> w & 1:
                total += rec(w, used | (1 << w), depth + 1)
        return total

    return rec(w0, 0, 0)


# ---------------------------------------------------------------------------
# Closed-form count lower bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegimeParams:
    """Parameter bundle tying the bound evaluators together.

    In "paper" mode alpha and lam are locked to 20 sqrt(eps) and
    300 sqrt(alpha); "explorer" mode accepts free-standing values and is
    flagged as such in reports.
    """

    eps: float
    d: float
    t: int
    M: int = 0
    alpha: float = 0.0
    lam: float = 0.0
    mode: str = "paper"

    def __post_init__(self):
        if not 0 <= self.eps < 1:
            raise PreconditionError("eps must lie in [0, 1)")
        if self.mode == "paper":
            object.__setattr__(self, "alpha", 20 * math.sqrt(self.eps))
            object.__setattr__(self, "lam", 300 * math.sqrt(self.alpha))
        elif self.mode != "explorer":
            raise PreconditionError("mode must be 'paper' or 'explorer'")


@dataclass(frozen=True)
class BoundEvaluation:
    value: float
    hypotheses: tuple[tuple[str, bool], ...]

    @property
    def met(self) -> bool:
        return all(ok for _, ok in self.hypotheses)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "hypotheses_met": self.met,
            "hypotheses": [{"name": n, "ok": ok} for n, ok in self.hypotheses],
        }


def _size_hyp(eps: float, n: int, t_factor: int = 1) -> bool:
    # n >= t * eps^-2; the eps -> 0 limit is treated as satisfied
    return eps == 0.0 or n * eps * eps >= t_factor - 1e-12


def _falling_product_down(n: int, t: int, upper: int) -> float:
    out = 1.0
    for i in range(1, upper + 1):
        factor = n - i // t
        if factor <= 0:
            return 0.0
        out = rounding.mul_down(out, float(factor))
    return out


def transversal_path_bound_fixed_start(p: RegimeParams, n: int, ell: int) -> BoundEvaluation:
    """(d - eps - sqrt(eps))^ell * prod_{i=1}^{ell} (n - floor(i/t)).

    Lower-bounds the transversal paths of length ell from a well-connected
    start vertex. CLI name: countpath2-p1.
    """
    eps, d, t = p.eps, p.d, p.t
    root = rounding.sqrt_up(eps)
    hyps = (
        ("eps < 1e-5", eps < 1e-5),
        ("t >= 2", t >= 2),
        ("n >= eps^-2", _size_hyp(eps, n)),
        ("d >= 5 sqrt(eps)", d >= 5 * math.sqrt(eps) - 1e-12),
        ("2 <= ell <= t(1-sqrt(eps))n", 2 <= ell <= t * (1 - math.sqrt(eps)) * n),
    )
    base = d - eps - root
    value = 0.0
    if base > 0:
        value = rounding.mul_down(
            rounding.pow_down(base, ell), _falling_product_down(n, t, ell)
        )
    return BoundEvaluation(value, hyps)


def transversal_path_bound_fixed_ends(p: RegimeParams, n: int, ell: int) -> BoundEvaluation:
    """(d-5se)^(ell-1) (1-2se)^(ell-2) (eps n) prod_{i=1}^{ell-2} (n - floor(i/t)),
    se = sqrt(eps); paths with both end vertices pinned in V_0.

    CLI name: countpath2-p2.
    """
    eps, d, t = p.eps, p.d, p.t
    root = rounding.sqrt_up(eps)
    hyps = (
        ("eps < 1e-5", eps < 1e-5),
        ("t >= 2", t >= 2),
        ("n >= eps^-2", _size_hyp(eps, n)),
        ("d >= 5 sqrt(eps)", d >= 5 * math.sqrt(eps) - 1e-12),
        ("4 <= ell <= t(1-3 sqrt(eps))n", 4 <= ell <= t * (1 - 3 * math.sqrt(eps)) * n),
        ("t divides ell", ell % t == 0),
    )
    base1 = d - 5 * root
    base2 = 1 - 2 * root
    value = 0.0
    if base1 > 0 and base2 > 0:
        value = rounding.pow_down(base1, ell - 1)
        value = rounding.mul_down(value, rounding.pow_down(base2, ell - 2))
        value = rounding.mul_down(value, rounding.down(eps * n))
        value = rounding.mul_down(value, _falling_product_down(n, t, ell - 2))
    return BoundEvaluation(value, hyps)


def ring_cycle_bound(p: RegimeParams, n: int, cycle_len: int) -> BoundEvaluation:
    """(eps^2/4) n^4 (d-10se)^(p-2) (1-3se)^(2p) prod_{i=1}^{p-4} (n-floor(i/t)).

    Lower-bounds the cycles of odd length p in the ring system. CLI name:
    countcycle1.
    """
    eps, d, t = p.eps, p.d, p.t
    q = cycle_len
    root = rounding.sqrt_up(eps)
    hyps = (
        ("eps < 1e-5", eps < 1e-5),
        ("t odd >= 3", t >= 3 and t % 2 == 1),
        ("n >= t eps^-2", _size_hyp(eps, n, t)),
        ("d >= 10 sqrt(eps)", d >= 10 * math.sqrt(eps) - 1e-12),
        ("p odd", q % 2 == 1),
        ("2t+6 <= p <= t(1-5 sqrt(eps))n", 2 * t + 6 <= q <= t * (1 - 5 * math.sqrt(eps)) * n),
    )
    base1 = d - 10 * root
    base2 = 1 - 3 * root
    value = 0.0
    if base1 > 0 and base2 > 0:
        value = rounding.mul_down(rounding.down(eps * eps / 4), float(n) ** 4)
        value = rounding.mul_down(value, rounding.pow_down(base1, q - 2))
        value = rounding.mul_down(value, rounding.pow_down(base2, 2 * q))
        value = rounding.mul_down(value, _falling_product_down(n, t, q - 4))
    return BoundEvaluation(value, hyps)


# ---------------------------------------------------------------------------
# Verification harness
# ---------------------------------------------------------------------------

LEMMA_NAMES = {
    "countpath2-p1": "fixed-start transversal paths",
    "countpath2-p2": "fixed-ends transversal paths",
    "countcycle1": "ring cycles",
}

FAMILIES = ("complete", "complete-minus-matching", "quasirandom")


@dataclass(frozen=True)
class GridSpec:
    """Instance generator grid for one lemma verification run."""

    lemma: str
    t_values: tuple[int, ...]
    size_lo: int
    size_hi: int
    families: tuple[str, ...] = FAMILIES
    instances_per_cell: int = 100
    count_budget: int = 300_000
    random_density: tuple[float, ...] = (0.3, 0.5, 0.7)

    @staticmethod
    def default(lemma: str) -> "GridSpec":
        if lemma == "countpath2-p1":
            return GridSpec(lemma, (2, 3), 4, 10)
        if lemma == "countpath2-p2":
            return GridSpec(lemma, (2, 3), 4, 10)
        if lemma == "countcycle1":
            return GridSpec(lemma, (3,), 4, 6)
        raise PreconditionError(f"unknown lemma {lemma!r}")


@dataclass
class LemmaRow:
    family: str
    t: int
    sizes: tuple[int, ...]
    eps_hat: float
    d: float
    n: int
    length: int
    bound: float
    hypotheses_met: bool
    exact: Optional[int]
    count_complete: bool
    verdict: str  # pass | vacuous | FAIL | undecided-budget
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "t": self.t,
            "sizes": list(self.sizes),
            "eps_hat": round(self.eps_hat, 9),
            "d": round(self.d, 9),
            "n": self.n,
            "length": self.length,
            "bound": self.bound,
            "hypotheses_met": self.hypotheses_met,
            "exact": self.exact,
            "count_complete": self.count_complete,
            "verdict": self.verdict,
            "note": self.note,
        }


@dataclass
class LemmaVerificationReport:
    lemma: str
    seed: int
    rows: list[LemmaRow] = field(default_factory=list)

    def tally(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.rows:
            out[row.verdict] = out.get(row.verdict, 0) + 1
        return out

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "seed": self.seed,
            "tally": self.tally(),
            "rows": [r.as_dict() for r in self.rows],
        }


def _make_instance(family: str, sizes, rng: random.Random, spec: GridSpec) -> PairSystem:
    if family == "complete":
        return complete_ring(sizes)
    if family == "complete-minus-matching":
        return complete_minus_matching_ring(sizes)
    if family == "quasirandom":
        return quasirandom_ring(sizes, rng.choice(spec.random_density), rng)
    raise PreconditionError(f"unknown family {family!r}")


def _measure(sys: PairSystem) -> tuple[float, float]:
    """Worst regularity defect and least density over consecutive pairs."""
    eps_hat = 0.0
    d_min = 1.0
    for i, j in sys.consecutive_pairs():
        xs, ys = sys.classes[i], sys.classes[j]
        eps_hat = max(eps_hat, regularity_defect(sys.graph, xs, ys))
        d_min = min(d_min, density(sys.graph, xs, ys))
    return eps_hat, d_min


def _qualifying_vertex(sys: PairSystem, cls_idx: int, nbr_cls: int, floor: float):
    cls = sys.classes[cls_idx]
    nbrs = sys.classes[nbr_cls]
    mask = sum(1 << v for v in nbrs)
    best, best_deg = None, -1
    for v in cls:
        deg = (sys.graph.adj[v] & mask).bit_count()
        if deg > best_deg:
            best, best_deg = v, deg
    return (best, best_deg >= floor - 1e-12)


def _count_cycles_capped(g: SimpleGraph, p: int, budget: int) -> tuple[Optional[int], bool]:
    if p > g.n:
        return 0, True
    try:
        from .graphs import _count_cycles_backtrack

        return _count_cycles_backtrack(g, p, budget), True
    except BudgetExceededError:
        return None, False


def verify_counting_lemma(
    lemma: str,
    seed: int,
    spec: Optional[GridSpec] = None,
) -> LemmaVerificationReport:
    """Run one lemma's bound against exact counts over a seeded instance grid.

    Every row records the measured defect, the bound at measured
    parameters, the exact count (possibly budget-truncated), and a verdict;
    FAIL rows are the test signal.
    """
    if lemma not in LEMMA_NAMES:
        raise PreconditionError(f"unknown lemma {lemma!r}; expected {sorted(LEMMA_NAMES)}")
    spec = spec or GridSpec.default(lemma)
    report = LemmaVerificationReport(lemma, seed)
    for family in spec.families:
        for t in spec.t_values:
            rng = random.Random((seed, lemma, family, t).__repr__())
            for _ in range(spec.instances_per_cell):
                sizes = tuple(
                    rng.randint(spec.size_lo, spec.size_hi) for _ in range(t)
                )
                sys = _make_instance(family, sizes, rng, spec)
                report.rows.append(_verify_one(lemma, sys, family, rng, spec))
    return report


def _verify_one(
    lemma: str, sys: PairSystem, family: str, rng: random.Random, spec: GridSpec
) -> LemmaRow:
    t = sys.t
    eps_hat, d_min = _measure(sys)
    n = sys.min_class_size()
    params = RegimeParams(eps=eps_hat, d=d_min, t=t, mode="explorer")
    note = ""
    if lemma == "countpath2-p1":
        ell = rng.randint(2, 5)
        ev = transversal_path_bound_fixed_start(params, n, ell)
        w0, ok = _qualifying_vertex(sys, 0, 1 % t, (d_min - eps_hat) * len(sys.classes[1 % t]))
        if not ok:
            return LemmaRow(
                family, t, tuple(map(len, sys.classes)), eps_hat, d_min, n, ell,
                ev.value, False, None, True, "vacuous", "no qualifying start vertex",
            )
        exact = count_transversal_paths(sys, w0, ell, budget=spec.count_budget * 10)
        verdict = ("pass" if exact >= ev.value else "FAIL") if ev.met else "vacuous"
        return LemmaRow(
            family, t, tuple(map(len, sys.classes)), eps_hat, d_min, n, ell,
            ev.value, ev.met, exact, True, verdict, note,
        )
    if lemma == "countpath2-p2":
        ell = t * rng.choice((2, 3)) if t == 2 else 2 * t
        ev = transversal_path_bound_fixed_ends(params, n, ell)
        w0, ok0 = _qualifying_vertex(sys, 0, 1 % t, (d_min - eps_hat) * len(sys.classes[1 % t]))
        cls0 = [v for v in sys.classes[0] if v != w0]
        w0p = rng.choice(cls0) if cls0 else w0
        mask_last = sum(1 << v for v in sys.classes[t - 1])
        degp = (sys.graph.adj[w0p] & mask_last).bit_count()
        ok1 = degp >= (d_min - eps_hat) * len(sys.classes[t - 1]) - 1e-12
        if not (ok0 and ok1):
            return LemmaRow(
                family, t, tuple(map(len, sys.classes)), eps_hat, d_min, n, ell,
                ev.value, False, None, True, "vacuous", "no qualifying end vertices",
            )
        exact = count_transversal_paths_between(sys, w0, w0p, ell, budget=spec.count_budget * 10)
        verdict = ("pass" if exact >= ev.value else "FAIL") if ev.met else "vacuous"
        return LemmaRow(
            family, t, tuple(map(len, sys.classes)), eps_hat, d_min, n, ell,
            ev.value, ev.met, exact, True, verdict, note,
        )
    # countcycle1
    p_candidates = [p for p in (2 * t + 7, 2 * t + 9) if p % 2 == 1]
    p = rng.choice(p_candidates) if p_candidates else 2 * t + 7
    ev = ring_cycle_bound(params, n, p)
    exact, complete = _count_cycles_capped(sys.graph, p, spec.count_budget)
    if ev.met:
        if exact is not None and complete:
            verdict = "pass" if exact >= ev.value else "FAIL"
        elif ev.value <= 0.0:
            verdict = "pass"  # a count is always >= 0
            note = "count budget-truncated; bound is zero"
        else:
            verdict = "undecided-budget"
    else:
        verdict = "vacuous"
        if not complete:
            note = "count budget-truncated"
    return LemmaRow(
        family, t, tuple(map(len, sys.classes)), eps_hat, d_min, n, p,
        ev.value, ev.met, exact, complete, verdict, note,
    )
