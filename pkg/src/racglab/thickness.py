"""Thickness order of a graph via the square graph and its level graphs.

Non-edges are identified by packed keys ``u * n + v`` (``u < v``). Only
non-edges that lie on an induced square are materialised; every other
non-edge is an implicit singleton component whose latch set is just
itself (its suspension is a clique, or it would lie on a square), so it
can be absorbed by a larger latch but never causes a merge on its own.

A graph is thick of order ``k >= 1`` when some component of ``T_k`` has
a latch set equal to all non-edges, provided the graph has an induced
square at all. Order 0 is the join test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .graph import Graph, complement_component_masks, iter_bits, mask_of
from .unionfind import UnionFind

DIVERGENCE_EXPONENTIAL = "exponential"


# -- order 0 ----------------------------------------------------------------


def order0_mask(bits: Sequence[int], smask: int) -> int:
    """Return one side ``A`` (as a mask) of a non-clique join split of ``smask``, or 0.

    The complement of a join has no edges across the two sides, so a split
    exists iff the complement of ``g[s]`` has two components that each
    contain a complement edge.
    """
    found = 0
    for comp in complement_component_masks(bits, smask):
        if comp & (comp - 1):
            if found:
                return found
            found = comp
    return 0


def order0_partition(g: Graph, s=None) -> tuple[frozenset[int], frozenset[int]] | None:
    """Witness ``(A, B)`` that ``g[s]`` is thick of order 0, or ``None``."""
    smask = (1 << g.n) - 1 if s is None else mask_of(s)
    a = order0_mask(g.adjacency_bits(), smask)
    if not a:
        return None
    return frozenset(iter_bits(a)), frozenset(iter_bits(smask & ~a))


def is_thick_order0(g: Graph, s=None) -> bool:
    smask = (1 << g.n) - 1 if s is None else mask_of(s)
    return bool(order0_mask(g.adjacency_bits(), smask))


# -- squares ----------------------------------------------------------------


def _square_diagonal_quads(g: Graph) -> Iterator[tuple[int, int, int, int]]:
    """Yield ``(u, v, x, y)`` for each induced square with diagonals uv, xy.

    Every square is produced twice, once from each diagonal.
    """
    bits = g.adjacency_bits()
    n = g.n
    full = (1 << n) - 1
    for u in range(n):
        bu = bits[u]
        if bu & (bu - 1) == 0:
            continue
        for v in iter_bits(full & ~bu & ~((2 << u) - 1)):
            z = bu & bits[v]
            if z & (z - 1):
                for x in iter_bits(z):
                    for y in iter_bits(z & ~bits[x] & ~((2 << x) - 1)):
                        yield u, v, x, y


def enumerate_induced_squares(g: Graph) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """All induced 4-cycles as diagonal pairs, smaller diagonal key first, sorted."""
    n = g.n
    out = [((u, v), (x, y)) for u, v, x, y in _square_diagonal_quads(g)
           if u * n + v < x * n + y]
    out.sort()
    return out


@dataclass
class SquareGraph:
    """The square graph on non-edge keys, as a disjoint-set partition."""

    n: int
    num_non_edges: int
    num_squares: int
    uf: UnionFind

    def component_of(self, u: int, v: int) -> int:
        key = u * self.n + v if u < v else v * self.n + u
        return self.uf.find(key) if key in self.uf else key

    def components(self) -> list[list[int]]:
        """Non-singleton components as sorted key lists."""
        return sorted(sorted(c) for c in self.uf.groups().values())

    @property
    def num_components(self) -> int:
        groups = self.uf.groups()
        return len(groups) + self.num_non_edges - len(self.uf)


def build_square_graph(g: Graph) -> SquareGraph:
    n = g.n
    uf = UnionFind()
    count = 0
    for u, v, x, y in _square_diagonal_quads(g):
        a, b = u * n + v, x * n + y
        if a < b:
            count += 1
            uf.union(a, b)
    return SquareGraph(n, g.num_non_edges(), count, uf)


# -- level states -------------------------------------------------------------


@dataclass
class LevelState:
    """Components of ``T_k`` that contain more than one non-edge.

    Components are named by their smallest member key. ``pieces`` lists the
    level-1 components merged into each component.
    """

    k: int
    members: dict[int, list[int]]
    supp: dict[int, int]
    pieces: dict[int, list[int]]
    root_of: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.root_of:
            self.root_of = {key: r for r, keys in self.members.items() for key in keys}

    def component_of(self, key: int) -> int:
        return self.root_of.get(key, key)

    def num_tracked(self) -> int:
        return len(self.root_of)

    def supp_of(self, g: Graph, key: int) -> int:
        """Support mask of the component containing ``key`` (singletons included)."""
        r = self.root_of.get(key)
        if r is not None:
            return self.supp[r]
        u, v = divmod(key, g.n)
        s = (1 << u) | (1 << v)
        if self.k >= 2:
            bits = g.adjacency_bits()
            s |= bits[u] & bits[v]
        return s

    def latch_keys(self, g: Graph, root: int) -> list[int]:
        return latch_keys(g.adjacency_bits(), g.n, self.supp[root])


def latch_keys(bits: Sequence[int], n: int, smask: int) -> list[int]:
    """Keys of all non-edges with both endpoints in ``smask``."""
    out = []
    for u in iter_bits(smask):
        base = u * n
        out.extend(base + v for v in iter_bits(smask & ~bits[u] & ~((2 << u) - 1)))
    return out


def _support(bits: Sequence[int], n: int, keys: Sequence[int], with_suspensions: bool) -> int:
    s = 0
    if with_suspensions:
        for key in keys:
            u, v = divmod(key, n)
            s |= (1 << u) | (1 << v) | (bits[u] & bits[v])
    else:
        for key in keys:
            u, v = divmod(key, n)
            s |= (1 << u) | (1 << v)
    return s


def level_state_from_squares(g: Graph, sq: SquareGraph) -> LevelState:
    bits = g.adjacency_bits()
    members, supp, pieces = {}, {}, {}
    for keys in sq.uf.groups().values():
        keys.sort()
        r = keys[0]
        members[r] = keys
        supp[r] = _support(bits, g.n, keys, False)
        pieces[r] = [r]
    return LevelState(1, members, supp, pieces)


def next_level(g: Graph, state: LevelState) -> LevelState:
    """Build ``T_{k+1}`` from ``T_k``.

    Each latch set is merged into one block (this covers both the
    ``C1 = C2`` case and chaining through shared latch non-edges).
    """
    bits = g.adjacency_bits()
    n = g.n
    uf = UnionFind()
    for r, s in state.supp.items():
        uf.union_all(latch_keys(bits, n, s))
    members, supp, pieces = {}, {}, {}
    for keys in uf.groups().values():
        keys.sort()
        r = keys[0]
        members[r] = keys
        supp[r] = _support(bits, n, keys, True)
        pieces[r] = []
    canon = {uf.find(m[0]): m[0] for m in members.values()}
    for old, p in state.pieces.items():
        pieces[canon[uf.find(old)]].extend(p)
    for p in pieces.values():
        p.sort()
    return LevelState(state.k + 1, members, supp, pieces)


def iter_levels(g: Graph, sq: SquareGraph | None = None) -> Iterator[LevelState]:
    """Yield ``T_1, T_2, ...`` indefinitely (callers decide when to stop)."""
    state = level_state_from_squares(g, sq if sq is not None else build_square_graph(g))
    while True:
        yield state
        state = next_level(g, state)


def same_partition(a: LevelState, b: LevelState) -> bool:
    # b coarsens a and tracks a superset of its keys, so equal counts mean equal partitions
    return len(a.members) == len(b.members) and a.num_tracked() == b.num_tracked()


# -- reports ------------------------------------------------------------------


@dataclass
class Witness:
    level: int
    component: tuple[int, int] | None = None
    component_size: int = 0
    supp_size: int = 0
    pieces: list[tuple[int, int]] = field(default_factory=list)
    partition: tuple[list[int], list[int]] | None = None

    def to_dict(self) -> dict:
        d = {"level": self.level, "component_size": self.component_size,
             "supp_size": self.supp_size}
        if self.component is not None:
            d["component"] = list(self.component)
            d["pieces"] = [list(p) for p in self.pieces]
        if self.partition is not None:
            d["partition"] = [list(self.partition[0]), list(self.partition[1])]
        return d


@dataclass
class T1Stats:
    num_squares: int
    num_components: int
    max_component: int
    max_supp: int

    def to_dict(self) -> dict:
        return {"num_squares": self.num_squares, "num_components": self.num_components,
                "max_component": self.max_component, "max_supp": self.max_supp}


@dataclass
class ThicknessReport:
    """``order`` is ``None`` when the graph is not thick or the level cap was hit."""

    order: int | None
    indeterminate: bool = False
    level_cap: int | None = None
    levels_computed: int = 0
    witness: Witness | None = None
    t1_stats: T1Stats | None = None

    @property
    def is_thick(self) -> bool:
        return self.order is not None

    @property
    def rel_hyperbolic(self) -> bool | None:
        if self.indeterminate:
            return None
        return self.order is None

    @property
    def divergence_label(self) -> str:
        if self.indeterminate:
            return "indeterminate"
        if self.order is None:
            return DIVERGENCE_EXPONENTIAL
        return f"poly_degree_{self.order + 1}"

    def order_str(self) -> str:
        if self.indeterminate:
            return "cap"
        return "inf" if self.order is None else str(self.order)

    def to_dict(self) -> dict:
        d: dict = {"order": self.order if self.order is not None else "inf"}
        if self.indeterminate:
            d["order"] = None
            d["indeterminate_cap"] = self.level_cap
        d["witness"] = self.witness.to_dict() if self.witness else None
        d["rel_hyperbolic"] = self.rel_hyperbolic
        d["divergence"] = self.divergence_label
        d["levels_computed"] = self.levels_computed
        d["t1_stats"] = self.t1_stats.to_dict() if self.t1_stats else None
        return d


def _t1_stats(g: Graph, sq: SquareGraph, state: LevelState | None) -> T1Stats:
    if state is None or not state.members:
        has_ne = sq.num_non_edges > 0
        return T1Stats(sq.num_squares, sq.num_non_edges, int(has_ne), 2 * has_ne)
    return T1Stats(sq.num_squares, sq.num_components,
                   max(len(m) for m in state.members.values()),
                   max(s.bit_count() for s in state.supp.values()))


def default_level_cap(g: Graph) -> int:
    return g.num_non_edges() + g.n + 2


def thickness_order(g: Graph, max_level: int | None = None) -> ThicknessReport:
    """Thickness order with witness; see the module docstring for the rule."""
    cap = default_level_cap(g) if max_level is None else max_level
    bits = g.adjacency_bits()
    n = g.n
    full = (1 << n) - 1
    sq = build_square_graph(g)
    a = order0_mask(bits, full)
    if a:
        state1 = level_state_from_squares(g, sq)
        w = Witness(0, component_size=g.num_non_edges(), supp_size=n,
                    partition=(list(iter_bits(a)), list(iter_bits(full & ~a))))
        return ThicknessReport(0, level_cap=cap, witness=w, t1_stats=_t1_stats(g, sq, state1))
    if sq.num_squares == 0:
        return ThicknessReport(None, level_cap=cap, t1_stats=_t1_stats(g, sq, None))

    non_cone = 0
    for v in range(n):
        if bits[v] != full & ~(1 << v):
            non_cone |= 1 << v

    prev = None
    stats = None
    for state in iter_levels(g, sq):
        if stats is None:
            stats = _t1_stats(g, sq, state)
        for r, s in state.supp.items():
            if s & non_cone == non_cone:
                w = Witness(state.k, g.unpack_key(r), len(state.members[r]), s.bit_count(),
                            [g.unpack_key(p) for p in state.pieces[r]])
                return ThicknessReport(state.k, level_cap=cap, levels_computed=state.k,
                                       witness=w, t1_stats=stats)
        if prev is not None and prev.k >= 2 and same_partition(prev, state):
            return ThicknessReport(None, level_cap=cap, levels_computed=state.k, t1_stats=stats)
        if state.k >= cap:
            return ThicknessReport(None, indeterminate=True, level_cap=cap,
                                   levels_computed=state.k, t1_stats=stats)
        prev = state
    raise AssertionError("unreachable")


def largest_component_stats(g: Graph) -> tuple[int, int, int | None]:
    """(largest ``T_1`` component, largest level-1 support, thickness order)."""
    rep = thickness_order(g)
    st = rep.t1_stats
    return st.max_component, st.max_supp, rep.order
