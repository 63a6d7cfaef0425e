"""Square-component exploration on concrete graphs and its branching-process idealisation.

The explorer only asks a graph for ``neighbor_set`` and ``is_non_edge``,
so it runs on a materialised :class:`Graph` or on a :class:`LazyGnp`
that reveals ``G(n, p)`` one neighbourhood at a time.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Protocol

import numpy as np

from .random_lab import make_rng, trial_seed

LARGE_STOP = "LARGE_STOP"
EXTINCTION_STOP = "EXTINCTION_STOP"

Pair = tuple[int, int]


class Adjacency(Protocol):
    n: int

    def neighbor_set(self, v: int) -> frozenset[int]: ...

    def is_non_edge(self, u: int, v: int) -> bool: ...


class LazyGnp:
    """``G(n, p)`` revealed on demand.

    Revealing ``v`` fixes its edges to every other vertex: edges to
    already revealed vertices were decided when those were revealed, the
    rest are fresh independent coins. The law of the revealed part is
    exactly that of ``G(n, p)``.
    """

    def __init__(self, n: int, p: float, seed: int):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability must lie in [0, 1], got {p}")
        self.n = n
        self.p = p
        self._rng = make_rng(seed)
        self._adj: dict[int, frozenset[int]] = {}
        self._known_in: dict[int, set[int]] = {}

    @property
    def num_revealed(self) -> int:
        return len(self._adj)

    def neighbor_set(self, v: int) -> frozenset[int]:
        s = self._adj.get(v)
        if s is not None:
            return s
        revealed = self._adj
        free = self.n - 1 - len(revealed)
        k = int(self._rng.binomial(free, self.p)) if free > 0 else 0
        new: set[int] = set()
        while len(new) < k:
            for w in self._rng.integers(self.n, size=2 * (k - len(new)) + 8).tolist():
                if w != v and w not in revealed and w not in new:
                    new.add(w)
                    if len(new) == k:
                        break
        for w in new:
            self._known_in.setdefault(w, set()).add(v)
        s = frozenset(new | self._known_in.pop(v, set()))
        revealed[v] = s
        return s

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if u not in self._adj and v in self._adj:
            u, v = v, u
        return v in self.neighbor_set(u)

    def is_non_edge(self, u: int, v: int) -> bool:
        return u != v and not self.has_edge(u, v)


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


def is_induced_square(g: Adjacency, f: Pair, h: Pair) -> bool:
    """Whether the non-edges ``f`` and ``h`` are the diagonals of an induced 4-cycle."""
    (a, b), (c, d) = f, h
    if len({a, b, c, d}) < 4 or not g.is_non_edge(a, b) or not g.is_non_edge(c, d):
        return False
    na, nb = g.neighbor_set(a), g.neighbor_set(b)
    return c in na and d in na and c in nb and d in nb


@dataclass
class ExplorationOutcome:
    verdict: str
    steps: int
    size: int
    discovered: int
    active: list[Pair]
    reached: list[Pair]
    bridge_pairs: int = 0
    trace: list[dict] | None = None

    @property
    def explored_pairs(self) -> list[Pair]:
        return self.reached + self.active

    def to_dict(self, with_pairs: bool = False) -> dict:
        d = {"verdict": self.verdict, "steps": self.steps, "size": self.size,
             "discovered": self.discovered, "bridge_pairs": self.bridge_pairs}
        if with_pairs:
            d["reached"] = [list(p) for p in self.reached]
            d["active"] = [list(p) for p in self.active]
        if self.trace is not None:
            d["trace"] = self.trace
        return d


def default_cap(n: int) -> int:
    return math.ceil(math.log(n) ** 4) if n > 1 else 2


def _bridge_pairs(g: Adjacency, x1: int, y1: int, nx: frozenset[int], ny: frozenset[int],
                  excluded: set[int]) -> list[tuple[Pair, Pair]]:
    """Pairs ``(x2x3, y2y3)`` completing an induced ``K_{3,3}`` minus ``x1y1`` outside ``excluded``."""
    xc = ny - nx - excluded
    yc = nx - ny - excluded
    if len(xc) < 2 or len(yc) < 2:
        return []
    by_xpair: dict[Pair, list[int]] = {}
    for y in sorted(yc):
        s = sorted(g.neighbor_set(y) & xc)
        for x2, x3 in combinations(s, 2):
            if g.is_non_edge(x2, x3):
                by_xpair.setdefault((x2, x3), []).append(y)
    out = []
    for xp in sorted(by_xpair):
        for y2, y3 in combinations(by_xpair[xp], 2):
            if g.is_non_edge(y2, y3):
                out.append((xp, (y2, y3)))
    return out


def _explore(g: Adjacency, seed_square: tuple[Pair, Pair], cap: int | None, bridges: bool,
             keep_trace: bool, validate: bool) -> ExplorationOutcome:
    f0, f1 = (_pair(*f) for f in seed_square)
    if not is_induced_square(g, f0, f1):
        raise ValueError(f"{f0} and {f1} are not the diagonals of an induced square")
    if cap is None:
        cap = default_cap(g.n)
    if cap < 2:
        raise ValueError("cap must be at least 2")
    discovered = set(f0) | set(f1)
    active: deque[Pair] = deque(sorted((f0, f1)))
    partner = {f0: f1, f1: f0}
    reached: list[Pair] = []
    trace: list[dict] | None = [] if keep_trace else None
    steps = 0
    n_bridge = 0
    while True:
        if len(active) + len(reached) > cap:
            verdict = LARGE_STOP
            break
        if not active:
            verdict = EXTINCTION_STOP
            break
        sel = active.popleft()
        f = partner[sel]
        if validate and not is_induced_square(g, sel, f):
            raise AssertionError(f"partner {f} of {sel} does not form a square")
        x1, y1 = sel
        nx, ny = g.neighbor_set(x1), g.neighbor_set(y1)
        z = sorted((nx & ny) - discovered)
        new: dict[Pair, Pair] = {}
        for zi in z:
            for a in f:
                if g.is_non_edge(a, zi):
                    new.setdefault(_pair(a, zi), sel)
        for a, b in combinations(z, 2):
            if g.is_non_edge(a, b):
                new.setdefault((a, b), sel)
        found = []
        if bridges:
            found = _bridge_pairs(g, x1, y1, nx, ny, discovered | set(z))
            for xp, yp in found:
                new.setdefault(xp, yp)
                new.setdefault(yp, xp)
        discovered.update(z)
        added = []
        for p in sorted(new):
            if p not in partner:
                partner[p] = new[p]
                active.append(p)
                added.append(p)
        reached.append(sel)
        steps += 1
        n_bridge += len(found)
        if trace is not None:
            trace.append({"step": steps, "selected": list(sel), "partner": list(f), "z": z,
                          "added": [list(p) for p in added],
                          "bridges": [[list(a), list(b)] for a, b in found]})
    return ExplorationOutcome(verdict, steps, len(active) + len(reached), len(discovered),
                              list(active), reached, n_bridge, trace)


def explore_square_component(g: Adjacency, seed_square: tuple[Pair, Pair], cap: int | None = None,
                             trace: bool = False, validate: bool = False) -> ExplorationOutcome:
    """Explore the square-graph component of a seed square, FIFO over active non-edges.

    ``cap`` defaults to ``ceil(log(n)^4)``.
    """
    return _explore(g, seed_square, cap, False, trace, validate)


def explore_order2(g: Adjacency, seed_square: tuple[Pair, Pair], cap: int | None = None,
                   trace: bool = False, validate: bool = False) -> ExplorationOutcome:
    """As :func:`explore_square_component`, also activating bridge pairs at each step."""
    return _explore(g, seed_square, cap, True, trace, validate)


def find_seed_square(g: Adjacency, start: int = 0, max_probes: int | None = None) -> tuple[Pair, Pair] | None:
    """First induced square through vertices ``start, start + 1, ...`` (scanned in order)."""
    n = g.n
    probes = n if max_probes is None else min(n, max_probes)
    for i in range(probes):
        a = (start + i) % n
        na = g.neighbor_set(a)
        for b, d in combinations(sorted(na), 2):
            if not g.is_non_edge(b, d):
                continue
            for c in sorted((g.neighbor_set(b) & g.neighbor_set(d)) - {a}):
                if c not in na:
                    return (_pair(a, c), (b, d))
    return None


# -- idealised branching process -----------------------------------------------


@dataclass(frozen=True)
class OffspringModel:
    lam: float
    modified: bool = False

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


def offspring_mean(lam: float, modified: bool = False) -> float:
    """``lam^4/2 + 2 lam^2``, plus ``lam^8/8`` for the bridge variant."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    x = lam * lam
    m = x * x / 2 + 2 * x
    if modified:
        m += x ** 4 / 8
    return m


def critical_lambda(modified: bool = False) -> float:
    """Root of ``offspring_mean = 1`` on ``[0, 2]`` by bisection."""
    lo, hi = 0.0, 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if offspring_mean(mid, modified) < 1.0:
            lo = mid
        else:
            hi = mid
    return lo if abs(offspring_mean(lo, modified) - 1) <= abs(offspring_mean(hi, modified) - 1) else hi


def _offspring(rng: np.random.Generator, lam: float, n: int, size: int) -> np.ndarray:
    z = rng.binomial(n, min(1.0, lam * lam / n), size=size).astype(np.int64)
    return (z + 2) * (z + 1) // 2 - 1


def sample_offspring(lam: float, n: int, size: int, seed: int) -> np.ndarray:
    """Draws of ``C(Z + 2, 2) - 1`` with ``Z ~ Binomial(n, lam^2 / n)``."""
    return _offspring(make_rng(seed), lam, n, size)


def offspring_mc_mean(lam: float, n: int, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo mean and its standard error."""
    x = sample_offspring(lam, n, samples, seed).astype(np.float64)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf


@dataclass
class BGWResult:
    lam: float
    n: int
    trials: int
    survived: int
    generations_cap: int
    population_cap: int
    extinct_by_generation: list[int] = field(default_factory=list)

    @property
    def survival(self) -> float:
        return self.survived / self.trials

    @property
    def stderr(self) -> float:
        q = self.survival
        return math.sqrt(q * (1 - q) / self.trials)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "n": self.n, "trials": self.trials, "survived": self.survived,
                "survival": self.survival, "stderr": self.stderr,
                "generations_cap": self.generations_cap, "population_cap": self.population_cap}


def bgw_simulate(lam: float, n: int, trials: int, seed: int, generations_cap: int = 50,
                 population_cap: int = 10_000) -> BGWResult:
    """Galton-Watson trees from one ancestor; a tree survives if it is alive at the
    generation cap or reaches the population cap.

    All trials advance together; each individual draws its own offspring count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(seed)
    pop = np.ones(trials, dtype=np.int64)
    survived = 0
    extinct_at = []
    for _ in range(generations_cap):
        total = int(pop.sum())
        kids = _offspring(rng, lam, n, total)
        owner = np.repeat(np.arange(len(pop)), pop)
        pop = np.bincount(owner, weights=kids, minlength=len(pop)).astype(np.int64)
        big = pop >= population_cap
        survived += int(big.sum())
        extinct_at.append(int((pop == 0).sum()))
        pop = pop[(pop > 0) & ~big]
        if not len(pop):
            break
    survived += len(pop)
    return BGWResult(lam, n, trials, survived, generations_cap, population_cap, extinct_at)


# -- seeded exploration trials --------------------------------------------------


@dataclass
class ExploreTrial:
    trial: int
    seed: int
    verdict: str
    steps: int
    size: int
    discovered: int
    bridge_pairs: int
    revealed: int

    def as_tuple(self) -> tuple:
        return (self.trial, self.seed, self.verdict, self.steps, self.size, self.discovered,
                self.bridge_pairs, self.revealed)


EXPLORE_FIELDS = ("trial", "seed", "verdict", "steps", "size", "discovered", "bridge_pairs", "revealed")
NO_SEED = "NO_SEED"


def run_explore_trial(args: tuple[int, float, str, int, int, int | None]) -> ExploreTrial:
    n, lam, variant, master_seed, trial, cap = args
    seed = trial_seed(master_seed, n, lam, trial)
    g = LazyGnp(n, min(1.0, lam / math.sqrt(n)), seed)
    sq = find_seed_square(g)
    if sq is None:
        return ExploreTrial(trial, seed, NO_SEED, 0, 0, 0, 0, g.num_revealed)
    fn = explore_order2 if variant == "order2" else explore_square_component
    out = fn(g, sq, cap)
    return ExploreTrial(trial, seed, out.verdict, out.steps, out.size, out.discovered,
                        out.bridge_pairs, g.num_revealed)


def explore_trials(n: int, lam: float, variant: str, trials: int, seed: int,
                   cap: int | None = None, jobs: int = 1) -> list[ExploreTrial]:
    """Independent explorations on fresh lazily sampled ``G(n, lam / sqrt(n))``.

    Each trial starts from the first square found scanning vertices from 0.
    """
    if variant not in ("order1", "order2"):
        raise ValueError(f"unknown variant {variant!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tasks = [(n, float(lam), variant, seed, t, cap) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(run_explore_trial, tasks))
    return [run_explore_trial(t) for t in tasks]
