"""Extremal thick graphs (exactly ``2m - 4`` edges) and a scan over small graphs."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .graph import Graph, emit_graph6, graph_from_mask
from .thickness import order0_mask, thickness_order

MAX_EXHAUSTIVE_M = 7


def path_of_squares(m: int) -> Graph:
    """Vertices ``i, j`` are adjacent iff their pair indices ``i // 2`` differ by one."""
    if m < 4 or m % 2:
        raise ValueError(f"path of squares needs an even m >= 4, got {m}")
    return Graph.from_edges(m, [(i, j) for i, j in combinations(range(m), 2)
                                if abs(i // 2 - j // 2) == 1])


def complete_bipartite(a: int, b: int) -> Graph:
    """``K_{a,b}`` with parts ``0..a-1`` and ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise ValueError("both parts must be non-empty")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def k2m(m: int) -> Graph:
    """``K_{2, m-2}``; the 2-side is ``{0, 1}``."""
    if m < 3:
        raise ValueError("k2m needs m >= 3")
    return complete_bipartite(2, m - 2)


def glue_along_nonedges(g1: Graph, f1: tuple[int, int], g2: Graph, f2: tuple[int, int],
                        crossed: bool = False) -> Graph:
    """Identify the non-edge ``f2`` of ``g2`` with the non-edge ``f1`` of ``g1``.

    ``g1`` keeps its labels. By default the smaller endpoint of ``f2`` goes
    to the smaller endpoint of ``f1``; ``crossed`` swaps that. The remaining
    vertices of ``g2`` follow in order as ``g1.n, g1.n + 1, ...``.
    """
    for g, f in ((g1, f1), (g2, f2)):
        if not g.is_non_edge(*f):
            raise ValueError(f"{f} is not a non-edge of {g!r}")
    a1, b1 = sorted(f1)
    a2, b2 = sorted(f2)
    relabel = {a2: b1 if crossed else a1, b2: a1 if crossed else b1}
    nxt = g1.n
    for v in range(g2.n):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    edges = list(g1.edges()) + [(relabel[u], relabel[v]) for u, v in g2.edges()]
    return Graph.from_edges(g1.n + g2.n - 2, edges)


def order2_gluing(crossed: bool = False) -> Graph:
    """17-vertex order-2 example: a 12-vertex path of squares glued to ``K_{2,5}``.

    The glued non-edge joins the first and last pairs of the path.
    """
    return glue_along_nonedges(path_of_squares(12), (1, 11), k2m(7), (0, 1), crossed=crossed)


# -- isomorphism dedup (tiny graphs only) -------------------------------------


def canonical_graph6(g: Graph) -> bytes:
    """Lexicographically least graph6 over degree-respecting relabellings.

    Brute force, meant for the handful of vertices seen in scans.
    """
    n = g.n
    order = sorted(range(n), key=lambda v: (g.degree(v), v))
    classes: list[list[int]] = []
    for v in order:
        if classes and g.degree(classes[-1][0]) == g.degree(v):
            classes[-1].append(v)
        else:
            classes.append([v])
    best = None
    edges = list(g.edges())

    def rec(i: int, prefix: list[int]):
        nonlocal best
        if i == len(classes):
            pos = {v: k for k, v in enumerate(prefix)}
            h = Graph.from_edges(n, [(pos[u], pos[v]) for u, v in edges])
            code = emit_graph6(h)
            if best is None or code < best:
                best = code
            return
        for perm in permutations(classes[i]):
            rec(i + 1, prefix + list(perm))

    rec(0, [])
    return best if best is not None else emit_graph6(g)


# -- scan ---------------------------------------------------------------------


@dataclass
class ExtremalScanReport:
    m: int
    mode: str
    graphs_scanned: int = 0
    thick_count: int = 0
    min_edges_among_thick: int | None = None
    extremal_labeled_count: int = 0
    extremal_witnesses: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    join_bound_violations: list[str] = field(default_factory=list)
    order_counts: dict[str, int] = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return 2 * self.m - 4

    @property
    def holds(self) -> bool:
        return not self.violations and not self.join_bound_violations

    def merge(self, other: "ExtremalScanReport") -> "ExtremalScanReport":
        mins = [x for x in (self.min_edges_among_thick, other.min_edges_among_thick) if x is not None]
        counts = dict(self.order_counts)
        for k, v in other.order_counts.items():
            counts[k] = counts.get(k, 0) + v
        return ExtremalScanReport(
            self.m, self.mode,
            self.graphs_scanned + other.graphs_scanned,
            self.thick_count + other.thick_count,
            min(mins) if mins else None,
            self.extremal_labeled_count + other.extremal_labeled_count,
            sorted(set(self.extremal_witnesses) | set(other.extremal_witnesses)),
            self.violations + other.violations,
            self.join_bound_violations + other.join_bound_violations,
            dict(sorted(counts.items())),
        )

    def to_dict(self) -> dict:
        return {
            "m": self.m, "mode": self.mode, "bound": self.bound,
            "graphs_scanned": self.graphs_scanned, "thick_count": self.thick_count,
            "min_edges_among_thick": self.min_edges_among_thick,
            "extremal_labeled_count": self.extremal_labeled_count,
            "extremal_witnesses": self.extremal_witnesses,
            "violations": self.violations,
            "join_bound_violations": self.join_bound_violations,
            "order_counts": self.order_counts,
            "holds": self.holds,
        }


def _scan_graphs(m: int, mode: str, graphs, witnesses: dict) -> ExtremalScanReport:
    rep = ExtremalScanReport(m, mode)
    bound = 2 * m - 4
    full = (1 << m) - 1
    counts: dict[str, int] = {}
    for g in graphs:
        rep.graphs_scanned += 1
        r = thickness_order(g)
        key = r.order_str()
        counts[key] = counts.get(key, 0) + 1
        e = g.num_edges
        if r.order is None:
            continue
        rep.thick_count += 1
        if rep.min_edges_among_thick is None or e < rep.min_edges_among_thick:
            rep.min_edges_among_thick = e
        if e < bound:
            rep.violations.append(emit_graph6(g).decode())
        elif e == bound:
            rep.extremal_labeled_count += 1
            witnesses.setdefault(canonical_graph6(g), None)
        if r.order == 0:
            a = order0_mask(g.adjacency_bits(), full).bit_count()
            if e < a * (m - a):
                rep.join_bound_violations.append(emit_graph6(g).decode())
    rep.order_counts = dict(sorted(counts.items()))
    return rep


def _scan_chunk(args: tuple[int, int, int]) -> ExtremalScanReport:
    m, lo, hi = args
    pairs = list(combinations(range(m), 2))
    witnesses: dict = {}
    rep = _scan_graphs(m, "exhaustive", (graph_from_mask(m, mask, pairs) for mask in range(lo, hi)),
                       witnesses)
    rep.extremal_witnesses = sorted(w.decode() for w in witnesses)
    return rep


def extremal_scan(m: int, mode: str = "exhaustive", samples: int = 10000, seed: int = 0,
                  jobs: int = 1) -> ExtremalScanReport:
    """Check that no thick graph on ``m`` vertices has fewer than ``2m - 4`` edges.

    ``exhaustive`` walks every labelled graph (``m <= 7``); ``sampled`` draws
    ``samples`` graphs with edge probability tuned so the mean edge count is
    ``2m - 4``. Witnesses are deduplicated up to isomorphism.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if mode == "exhaustive":
        if m > MAX_EXHAUSTIVE_M:
            raise ValueError(f"exhaustive scan refused for m = {m} > {MAX_EXHAUSTIVE_M}")
        total = 1 << (m * (m - 1) // 2)
        nchunks = max(1, min(64, total // 1024)) if jobs > 1 else 1
        step = -(-total // nchunks)
        chunks = [(m, lo, min(total, lo + step)) for lo in range(0, total, step)]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as ex:
                parts = list(ex.map(_scan_chunk, chunks))
        else:
            parts = [_scan_chunk(c) for c in chunks]
        rep = parts[0]
        for p in parts[1:]:
            rep = rep.merge(p)
        return rep
    if mode == "sampled":
        rng = random.Random(seed)
        npairs = m * (m - 1) // 2
        p = min(1.0, (2 * m - 4) / npairs) if npairs else 0.0
        pairs = list(combinations(range(m), 2))

        def gen():
            for _ in range(samples):
                mask = 0
                for i in range(npairs):
                    if rng.random() < p:
                        mask |= 1 << i
                yield graph_from_mask(m, mask, pairs)

        witnesses: dict = {}
        rep = _scan_graphs(m, "sampled", gen(), witnesses)
        rep.extremal_witnesses = sorted(w.decode() for w in witnesses)
        return rep
    raise ValueError(f"unknown scan mode {mode!r}")


def order0_join_bound_holds(g: Graph) -> bool:
    """For the join split found, ``e >= |A| * (m - |A|)``; vacuous if not order 0."""
    a = order0_mask(g.adjacency_bits(), (1 << g.n) - 1)
    if not a:
        return True
    k = a.bit_count()
    return g.num_edges >= k * (g.n - k) >= 2 * (g.n - 2)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.num_edges == h.num_edges and canonical_graph6(g) == canonical_graph6(h)

