import random
from itertools import combinations

import pytest

from racglab.extremal import complete_bipartite, order2_gluing, k2m, path_of_squares
from racglab.graph import Graph, all_graphs
from racglab.thickness import (build_square_graph, enumerate_induced_squares, is_thick_order0, iter_levels,
                               largest_component_stats, order0_partition, thickness_order)

CHERRY = Graph.from_edges(3, [(0, 1), (0, 2)])


def random_graph(n, p, rng):
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def relabel(g, perm):
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


# -- naive oracles ----------------------------------------------------------------


def brute_order0(g):
    """Search every bipartition for a join of two non-cliques."""
    vs = list(range(g.n))
    for r in range(2, g.n - 1):
        for a in combinations(vs, r):
            b = [v for v in vs if v not in a]
            if not all(g.has_edge(x, y) for x in a for y in b):
                continue
            if any(g.is_non_edge(*p) for p in combinations(a, 2)) and \
                    any(g.is_non_edge(*p) for p in combinations(b, 2)):
                return True
    return False


def brute_squares(g):
    out = set()
    for quad in combinations(range(g.n), 4):
        for a, b, c, d in ((quad[0], quad[1], quad[2], quad[3]), (quad[0], quad[2], quad[1], quad[3]),
                           (quad[0], quad[3], quad[1], quad[2])):
            # diagonals ab and cd, all four sides present
            if g.is_non_edge(a, b) and g.is_non_edge(c, d) and all(
                    g.has_edge(x, y) for x in (a, b) for y in (c, d)):
                out.add(tuple(sorted([(a, b), (c, d)])))
    return sorted(out)


def components(nodes, adj):
    seen, out = set(), []
    for s in nodes:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(comp)
    return out


def naive_order(g, max_k=10):
    """Level graphs built literally: vertices are all non-edges, edges from squares or shared latches."""
    if brute_order0(g):
        return 0
    ne = list(g.non_edges())
    sqs = brute_squares(g)
    if not sqs:
        return None
    adj = {}
    for f, h in sqs:
        adj.setdefault(f, set()).add(h)
        adj.setdefault(h, set()).add(f)
    comps = components(ne, adj)
    all_ne = set(ne)
    prev_count = None
    for k in range(1, max_k + 1):
        latches = []
        for c in comps:
            supp = set()
            for u, v in c:
                supp |= {u, v}
                if k >= 2:
                    supp |= g.common_neighbors(u, v)
            latch = {p for p in ne if p[0] in supp and p[1] in supp}
            if latch == all_ne:
                return k
            latches.append(latch)
        if prev_count == len(comps) and k >= 2:
            return None
        prev_count = len(comps)
        adj = {}
        for latch in latches:
            lst = sorted(latch)
            for a, b in zip(lst, lst[1:]):
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
        comps = components(ne, adj)
    raise AssertionError("naive oracle did not settle")


# -- fixtures --------------------------------------------------------------------


@pytest.mark.parametrize("g,order,label", [
    (path_of_squares(4), 0, "poly_degree_1"),
    (k2m(7), 0, "poly_degree_1"),
    (path_of_squares(6), 0, "poly_degree_1"),
    (path_of_squares(8), 1, "poly_degree_2"),
    (path_of_squares(12), 1, "poly_degree_2"),
    (order2_gluing(), 2, "poly_degree_3"),
    (order2_gluing(crossed=True), 2, "poly_degree_3"),
    (Graph.complete(5), None, "exponential"),
    (CHERRY, None, "exponential"),
    (Graph.empty(5), None, "exponential"),
])
def test_fixture_orders(g, order, label):
    r = thickness_order(g)
    assert r.order == order
    assert r.divergence_label == label
    assert r.rel_hyperbolic is (order is None)


def test_order0_witness_partition():
    r = thickness_order(k2m(7))
    a, b = r.witness.partition
    assert sorted(a + b) == list(range(7))
    assert {len(a), len(b)} == {2, 5}


def test_level1_witness_pos8():
    r = thickness_order(path_of_squares(8))
    assert r.witness.level == 1
    assert r.witness.supp_size == 8


def test_order2_gluing_merges_two_level1_pieces():
    r = thickness_order(order2_gluing())
    assert r.witness.level == 2
    assert len(r.witness.pieces) >= 2


def test_cap_is_indeterminate():
    r = thickness_order(order2_gluing(), max_level=1)
    assert r.indeterminate and r.order is None
    assert r.rel_hyperbolic is None
    assert r.divergence_label == "indeterminate"
    assert r.to_dict()["indeterminate_cap"] == 1


def test_report_dict():
    d = thickness_order(path_of_squares(12)).to_dict()
    assert d["order"] == 1 and d["divergence"] == "poly_degree_2" and d["rel_hyperbolic"] is False
    assert thickness_order(CHERRY).to_dict()["order"] == "inf"


# -- order 0 against bipartition search -------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_order0_matches_bipartitions(n):
    for _, g in all_graphs(n):
        assert is_thick_order0(g) == brute_order0(g)


def test_order0_partition_is_a_join():
    g = complete_bipartite(3, 3)
    a, b = order0_partition(g)
    assert all(g.has_edge(x, y) for x in a for y in b)
    assert order0_partition(CHERRY) is None


# -- squares ----------------------------------------------------------------------


def test_squares_match_brute_force():
    rng = random.Random(3)
    for _ in range(200):
        g = random_graph(rng.randint(4, 9), rng.random(), rng)
        got = [tuple(sorted(s)) for s in enumerate_induced_squares(g)]
        assert sorted(got) == brute_squares(g)


def test_pos6_squares_share_one_diagonal():
    sq = enumerate_induced_squares(path_of_squares(6))
    assert len(sq) == 6
    assert all((2, 3) in s for s in sq)


def test_square_graph_components():
    sg = build_square_graph(path_of_squares(8))
    # two K_{2,4} blocks of 6 squares sharing the square on {2,3} and {4,5}
    assert sg.num_squares == 11 == len(brute_squares(path_of_squares(8)))
    assert sg.component_of(0, 1) == sg.component_of(6, 7)


def test_largest_component_stats():
    assert largest_component_stats(Graph.complete(5)) == (0, 0, None)
    assert largest_component_stats(CHERRY) == (1, 2, None)
    comp, supp, order = largest_component_stats(path_of_squares(8))
    assert supp == 8 and order == 1


# -- the engine against the literal construction ------------------------------------


@pytest.mark.parametrize("n", [4, 5, 6])
def test_engine_matches_naive_levels_exhaustive(n):
    for mask, g in all_graphs(n):
        assert thickness_order(g).order == naive_order(g), mask


def test_engine_matches_naive_levels_random():
    rng = random.Random(11)
    for _ in range(300):
        g = random_graph(rng.randint(7, 10), rng.uniform(0.3, 0.8), rng)
        assert thickness_order(g).order == naive_order(g)


# -- invariants -------------------------------------------------------------------


def test_relabelling_invariance():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(5, 11)
        g = random_graph(n, rng.uniform(0.3, 0.8), rng)
        perm = list(range(n))
        rng.shuffle(perm)
        assert thickness_order(g).order == thickness_order(relabel(g, perm)).order


def test_levels_coarsen():
    rng = random.Random(9)
    for _ in range(50):
        g = random_graph(10, 0.55, rng)
        levels = iter_levels(g)
        prev = next(levels)
        for _ in range(3):
            cur = next(levels)
            for keys in prev.members.values():
                assert len({cur.component_of(k) for k in keys}) == 1
            prev = cur


def test_order0_edge_bound():
    for _, g in all_graphs(6):
        r = thickness_order(g)
        if r.order == 0:
            a = len(r.witness.partition[0])
            assert g.num_edges >= a * (g.n - a)
