import math
import random
from itertools import combinations

import numpy as np
import pytest

from racglab.exploration import (EXTINCTION_STOP, LARGE_STOP, LazyGnp, OffspringModel, bgw_simulate, critical_lambda,
                                 default_cap, explore_order2, explore_square_component, explore_trials,
                                 find_seed_square, is_induced_square, offspring_mc_mean, offspring_mean,
                                 sample_offspring)
from racglab.extremal import complete_bipartite, path_of_squares
from racglab.graph import Graph
from racglab.random_lab import sample_gnp
from racglab.thickness import iter_levels

LAMBDA1 = math.sqrt(math.sqrt(6) - 2)


def random_graph(n, p, rng):
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def planted_bridge_graph():
    # x = 0, 1, 2 and y = 3, 4, 5 span K_{3,3} minus 0-3; 6 and 7 close a square on 0-3
    edges = [(i, j) for i in (0, 1, 2) for j in (3, 4, 5) if (i, j) != (0, 3)]
    edges += [(0, 6), (0, 7), (3, 6), (3, 7)]
    return Graph.from_edges(8, edges)


# -- the process on hand-checked graphs -------------------------------------------


def test_c4_goes_extinct():
    g = path_of_squares(4)
    out = explore_square_component(g, ((0, 1), (2, 3)), cap=100)
    assert out.verdict == EXTINCTION_STOP
    assert out.steps == 2 and out.size == 2 and out.discovered == 4


def test_k23_finds_all_four_non_edges():
    g = complete_bipartite(2, 3)
    out = explore_square_component(g, ((0, 1), (2, 3)), cap=100)
    assert out.verdict == EXTINCTION_STOP
    assert sorted(out.explored_pairs) == [(0, 1), (2, 3), (2, 4), (3, 4)]


def test_seed_must_be_square():
    with pytest.raises(ValueError):
        explore_square_component(path_of_squares(4), ((0, 1), (0, 2)))
    with pytest.raises(ValueError):
        explore_square_component(Graph.empty(4), ((0, 1), (2, 3)))


def test_cap_gives_large_stop():
    g = path_of_squares(12)
    sq = find_seed_square(g)
    assert explore_square_component(g, sq, cap=3).verdict == LARGE_STOP
    out = explore_square_component(g, sq, cap=10 ** 6)
    assert out.verdict == EXTINCTION_STOP


def test_default_cap():
    assert default_cap(10 ** 5) == math.ceil(math.log(10 ** 5) ** 4)


def test_bridge_pairs_planted():
    g = planted_bridge_graph()
    plain = explore_square_component(g, ((0, 3), (6, 7)), cap=100, trace=True)
    out = explore_order2(g, ((0, 3), (6, 7)), cap=100, trace=True)
    assert out.trace[0]["bridges"] == [[[1, 2], [4, 5]]]
    assert {(1, 2), (4, 5)} <= set(out.explored_pairs)
    assert not {(1, 2), (4, 5)} & set(plain.explored_pairs)
    levels = iter_levels(g)
    next(levels)
    t2 = next(levels)
    assert len({t2.component_of(g.non_edge_key(*p)) for p in out.explored_pairs}) == 1


def test_no_bridges_on_seven_vertices():
    rng = random.Random(1)
    for _ in range(300):
        g = random_graph(7, rng.uniform(0.3, 0.8), rng)
        sq = find_seed_square(g)
        if sq is None:
            continue
        a = explore_square_component(g, sq, cap=1000)
        b = explore_order2(g, sq, cap=1000)
        assert (a.verdict, a.reached, a.active) == (b.verdict, b.reached, b.active)


def test_trace_invariants():
    rng = random.Random(2)
    for _ in range(40):
        g = sample_gnp(60, 1.0 / math.sqrt(60), rng.randrange(10 ** 6))
        sq = find_seed_square(g)
        if sq is None:
            continue
        for fn in (explore_square_component, explore_order2):
            out = fn(g, sq, cap=10 ** 6, trace=True, validate=True)
            pairs = out.explored_pairs
            assert len(pairs) == len(set(pairs)) == out.size
            assert out.steps == len(out.reached) == len(out.trace)
            assert all(g.is_non_edge(*p) for p in pairs)
            assert not set(out.active) & set(out.reached)
            for row in out.trace:
                assert is_induced_square(g, tuple(row["selected"]), tuple(row["partner"]))


def test_soundness_small():
    for s in range(30):
        g = sample_gnp(40, 0.9 / math.sqrt(40), s)
        sq = find_seed_square(g)
        if sq is None:
            continue
        levels = iter_levels(g)
        t1, t2 = next(levels), next(levels)
        for fn, lvl in ((explore_square_component, t1), (explore_order2, t2)):
            out = fn(g, sq, cap=10 ** 6)
            assert len({lvl.component_of(g.non_edge_key(*p)) for p in out.explored_pairs}) == 1


# -- lazily revealed random graphs -----------------------------------------------------


def test_lazy_gnp_is_symmetric_and_binomial():
    n, p = 300, 0.1
    counts = []
    for s in range(20):
        g = LazyGnp(n, p, s)
        order = list(range(n))
        random.Random(s).shuffle(order)
        nb = {v: g.neighbor_set(v) for v in order}
        assert all(u in nb[v] for u in range(n) for v in nb[u])
        assert all(u not in nb[u] for u in range(n))
        counts.append(sum(len(x) for x in nb.values()) // 2)
    total = n * (n - 1) / 2
    sd = math.sqrt(total * p * (1 - p) / len(counts))
    assert abs(np.mean(counts) - total * p) < 4 * sd


def test_lazy_gnp_deterministic():
    a, b = LazyGnp(1000, 0.05, 3), LazyGnp(1000, 0.05, 3)
    assert [a.neighbor_set(v) for v in (5, 9, 5, 100)] == [b.neighbor_set(v) for v in (5, 9, 5, 100)]
    assert a.has_edge(5, 9) == (9 in a.neighbor_set(5))


def test_explore_trials_deterministic():
    a = explore_trials(3000, 0.9, "order1", 4, seed=2)
    b = explore_trials(3000, 0.9, "order1", 4, seed=2)
    c = explore_trials(3000, 0.9, "order1", 4, seed=2, jobs=2)
    assert a == b == c
    with pytest.raises(ValueError):
        explore_trials(3000, 0.9, "order3", 1, seed=2)


def test_supercritical_exploration_often_large():
    rows = explore_trials(10 ** 5, 0.75, "order1", 50, seed=7)
    assert sum(r.verdict == LARGE_STOP for r in rows) / len(rows) >= 0.05


# -- branching process --------------------------------------------------------------


def test_offspring_mean_values():
    assert offspring_mean(0.0) == 0.0
    assert offspring_mean(LAMBDA1) == pytest.approx(1.0, abs=1e-12)
    assert offspring_mean(LAMBDA1, modified=True) == pytest.approx(1 + (math.sqrt(6) - 2) ** 4 / 8, abs=1e-12)
    with pytest.raises(ValueError):
        offspring_mean(-1.0)
    with pytest.raises(ValueError):
        OffspringModel(-0.1)


def test_critical_lambda():
    assert critical_lambda() == pytest.approx(LAMBDA1, abs=1e-12)
    assert offspring_mean(critical_lambda()) == pytest.approx(1.0, abs=1e-12)
    m = critical_lambda(modified=True)
    assert m < critical_lambda()
    assert offspring_mean(m, modified=True) == pytest.approx(1.0, abs=1e-12)


def test_offspring_sampler_exact_mean():
    # E[C(Z+2,2) - 1] = (E[Z^2] + 3 E[Z]) / 2 for Z ~ Binomial(n, q)
    n, lam = 50, 0.9
    q = lam * lam / n
    mu = n * q
    exact = (mu * (1 - q) + mu * mu + 3 * mu) / 2
    mean, se = offspring_mc_mean(lam, n, 200_000, 3)
    assert abs(mean - exact) < 4 * se
    assert (sample_offspring(lam, n, 10, 1) == sample_offspring(lam, n, 10, 1)).all()


def test_bgw_basic():
    assert bgw_simulate(0.0, 1000, 100, 1).survived == 0
    a = bgw_simulate(0.8, 10 ** 5, 2000, 4)
    assert a.to_dict() == bgw_simulate(0.8, 10 ** 5, 2000, 4).to_dict()
    assert a.survival > 0
    with pytest.raises(ValueError):
        bgw_simulate(0.8, 10, 0, 1)


def test_bgw_just_supercritical():
    r = bgw_simulate(0.671, 10 ** 5, 10 ** 4, 11)
    assert r.survival > 5 * r.stderr > 0
