"""Seeded G(n, p) experiments: threshold sweeps, dense-set counts, dense-subset search.

Logarithms are natural throughout. Per-trial seeds are derived from
``(master_seed, n, c, trial)`` alone, so results do not depend on the
order or process in which trials run.
"""

from __future__ import annotations

import csv
import io
import json
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .thickness import thickness_order

GEOMETRIC_SKIP_MAX_P = 0.1

CSV_FIELDS = ("n", "c", "p", "trial", "seed", "order", "rel_hyp", "max_t1_comp", "max_supp1")


def _float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def trial_seed(master_seed: int, n: int, c: float, trial: int) -> int:
    """64-bit stream seed for one trial."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(n, _float_bits(c), trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def pair_from_index(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the colex pair order (0,1), (0,2), (1,2), (0,3), ..."""
    idx = np.asarray(idx, dtype=np.int64)
    v = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) / 2).astype(np.int64)
    v -= (v * (v - 1) // 2 > idx)
    v += ((v + 1) * v // 2 <= idx)
    u = idx - v * (v - 1) // 2
    return u, v


def _edge_indices(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    total = n * (n - 1) // 2
    if total == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    if p <= GEOMETRIC_SKIP_MAX_P:
        pos = -1
        mean = total * p
        batch = int(mean + 6 * math.sqrt(mean) + 64)
        while True:
            gaps = rng.geometric(p, size=batch)
            idx = pos + np.cumsum(gaps, dtype=np.int64)
            keep = idx[idx < total]
            chunks.append(keep)
            if len(keep) < len(idx):
                break
            pos = int(idx[-1])
    else:
        step = 1 << 22
        for lo in range(0, total, step):
            hi = min(total, lo + step)
            chunks.append(lo + np.flatnonzero(rng.random(hi - lo) < p))
    return np.concatenate(chunks)


def graph_from_edge_arrays(n: int, u: np.ndarray, v: np.ndarray) -> Graph:
    a = np.concatenate([u, v])
    b = np.concatenate([v, u])
    order = np.lexsort((b, a))
    a, b = a[order], b[order]
    bounds = np.searchsorted(a, np.arange(n + 1))
    bl = b.tolist()
    nbrs = [bl[bounds[i]:bounds[i + 1]] for i in range(n)]
    return Graph(n, nbrs, _trusted=True)


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi graph, deterministic in ``(n, p, seed)``.

    Geometric skipping over the pair sequence for ``p <= 0.1``, one coin
    per pair otherwise.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    idx = _edge_indices(n, p, make_rng(seed))
    u, v = pair_from_index(idx)
    return graph_from_edge_arrays(n, u, v)


# -- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class GridPoint:
    n: int
    c: float
    p: float

    @classmethod
    def from_c(cls, n: int, c: float) -> "GridPoint":
        return cls(n, float(c), min(1.0, float(c) / math.sqrt(n)))

    @classmethod
    def from_p(cls, n: int, p: float) -> "GridPoint":
        return cls(n, float(p) * math.sqrt(n), float(p))


def rel_hyp_p(n: int) -> float:
    """The edge probability ``1 / (4 sqrt(n log n))``."""
    return 1.0 / (4.0 * math.sqrt(n * math.log(n)))


@dataclass
class ExperimentConfig:
    grid: list[GridPoint]
    trials: int
    master_seed: int = 0
    level_cap: int | None = None

    def __post_init__(self):
        if not self.grid:
            raise ValueError("grid must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for gp in self.grid:
            if not 0.0 <= gp.p <= 1.0:
                raise ValueError(f"p out of range at {gp}")
            if gp.n < 1:
                raise ValueError(f"n must be positive at {gp}")


@dataclass
class SweepRow:
    n: int
    c: float
    p: float
    trial: int
    seed: int
    order: str
    rel_hyp: str
    max_t1_comp: int
    max_supp1: int

    def as_tuple(self) -> tuple:
        return (self.n, repr(self.c), repr(self.p), self.trial, self.seed, self.order,
                self.rel_hyp, self.max_t1_comp, self.max_supp1)


def run_trial(args: tuple[GridPoint, int, int, int | None]) -> SweepRow:
    gp, trial, master_seed, cap = args
    seed = trial_seed(master_seed, gp.n, gp.c, trial)
    g = sample_gnp(gp.n, gp.p, seed)
    rep = thickness_order(g, max_level=cap)
    rh = rep.rel_hyperbolic
    st = rep.t1_stats
    return SweepRow(gp.n, gp.c, gp.p, trial, seed, rep.order_str(),
                    "" if rh is None else str(rh).lower(), st.max_component, st.max_supp)


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def points(self) -> list[tuple[int, float, float]]:
        seen = {}
        for r in self.rows:
            seen.setdefault((r.n, r.c, r.p), None)
        return list(seen)

    def aggregates(self) -> list[dict]:
        out = []
        for n, c, p in self.points():
            rows = [r for r in self.rows if (r.n, r.c, r.p) == (n, c, p)]
            t = len(rows)
            orders = [int(r.order) for r in rows if r.order not in ("inf", "cap")]
            out.append({
                "n": n, "c": c, "p": p, "trials": t,
                "frac_rel_hyp": sum(r.rel_hyp == "true" for r in rows) / t,
                "frac_order_le_0": sum(o <= 0 for o in orders) / t,
                "frac_order_le_1": sum(o <= 1 for o in orders) / t,
                "frac_order_le_2": sum(o <= 2 for o in orders) / t,
                "cap_count": sum(r.order == "cap" for r in rows),
                "mean_max_t1_comp": sum(r.max_t1_comp for r in rows) / t,
                "mean_max_supp1": sum(r.max_supp1 for r in rows) / t,
                "max_max_supp1": max(r.max_supp1 for r in rows),
            })
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow(r.as_tuple())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"aggregates": self.aggregates()}, indent=2)


def threshold_sweep(cfg: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """Run every trial at every grid point; rows come back in (grid, trial) order."""
    tasks = [(gp, t, cfg.master_seed, cfg.level_cap) for gp in cfg.grid for t in range(cfg.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(run_trial, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [run_trial(t) for t in tasks]
    return SweepResult(rows)


# -- first-moment count of dense sets ---------------------------------------------


def _log_binom(a: float, b: float) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def log_expected_dense_sets(n: int, p: float) -> float:
    """Natural log of the expected number of ``m``-sets spanning at least ``2m - 4`` edges,
    summed over ``ceil(log n) <= m <= floor(2 log n)``.

    Each term is the union-bound estimate
    ``C(n, m) * C(C(m, 2), 2m - 4) * p^(2m - 4)``.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    lo, hi = math.ceil(math.log(n)), math.floor(2 * math.log(n))
    terms = []
    for m in range(lo, hi + 1):
        k = 2 * m - 4
        pairs = m * (m - 1) // 2
        if m > n or k < 0 or k > pairs:
            continue
        terms.append(_log_binom(n, m) + _log_binom(pairs, k) + k * math.log(p))
    if not terms:
        return -math.inf
    top = max(terms)
    return top + math.log(sum(math.exp(t - top) for t in terms))


def expected_dense_sets(n: int, p: float) -> float:
    if p <= 0.0:
        return 0.0
    return math.exp(log_expected_dense_sets(n, p))


# -- dense subset search -------------------------------------------------------


@dataclass
class DenseProbeResult:
    m: int
    edges: int
    vertices: list[int]
    by_size: dict[int, int]

    @property
    def excess(self) -> int:
        """``edges - (2m - 4)``; non-negative values are certified dense subsets."""
        return self.edges - (2 * self.m - 4)

    @property
    def is_counter_witness(self) -> bool:
        return self.excess >= 0


def _peel(g: Graph, start: set[int], sizes: range, best: dict) -> None:
    """Strip minimum-degree vertices from ``start`` and record each size in ``sizes``."""
    s = set(start)
    deg = {v: sum(1 for w in g.neighbor_set(v) if w in s) for v in s}
    e = sum(deg.values()) // 2
    while s:
        k = len(s)
        if k in sizes:
            cur = best.get(k)
            if cur is None or e > cur[0]:
                best[k] = (e, sorted(s))
        if k <= sizes.start:
            break
        v = min(s, key=lambda x: (deg[x], x))
        s.remove(v)
        e -= deg.pop(v)
        for w in g.neighbor_set(v):
            if w in s:
                deg[w] -= 1


def dense_subset_probe(g: Graph, m_range: range, restarts: int = 20, seed: int = 0) -> DenseProbeResult:
    """Greedy peeling from the whole graph and from random neighbourhood balls.

    Maximises ``e(S) - (2|S| - 4)`` over the sizes in ``m_range``. A
    non-negative excess is a certificate; a negative one is only evidence.
    """
    if g.n == 0 or not m_range:
        return DenseProbeResult(0, 0, [], {})
    sizes = range(max(1, m_range.start), min(m_range.stop, g.n + 1))
    if not sizes:
        return DenseProbeResult(0, 0, [], {})
    best: dict[int, tuple[int, list[int]]] = {}
    _peel(g, set(range(g.n)), sizes, best)
    rng = make_rng(seed)
    target = 3 * sizes[-1]
    for _ in range(restarts):
        root = int(rng.integers(g.n))
        ball = {root}
        frontier = [root]
        while frontier and len(ball) < target:
            nxt = []
            for v in frontier:
                for w in g.neighbors(v):
                    if w not in ball:
                        ball.add(w)
                        nxt.append(w)
            frontier = nxt
        if len(ball) < sizes.start:
            extra = rng.permutation(g.n)
            for v in extra.tolist():
                if len(ball) >= sizes.start:
                    break
                ball.add(v)
        _peel(g, ball, sizes, best)
    m, (e, vs) = max(best.items(), key=lambda kv: (kv[1][0] - (2 * kv[0] - 4), -kv[0]))
    return DenseProbeResult(m, e, vs, {k: v[0] for k, v in sorted(best.items())})


__all__ = [
    "trial_seed", "sample_gnp", "GridPoint", "rel_hyp_p", "ExperimentConfig", "SweepRow",
    "SweepResult", "threshold_sweep", "log_expected_dense_sets", "expected_dense_sets",
    "DenseProbeResult", "dense_subset_probe", "pair_from_index",
]
