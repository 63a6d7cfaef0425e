"""Hypergraph index of a small graph, by direct construction.

Level 0 hyperedges are the maximal thick-of-order-0 vertex sets together
with the strips (a non-edge joined to a non-empty clique). Each later
level replaces every chain-equivalence class of hyperedges by its union,
where two hyperedges are related when their intersection contains a
non-edge. The index is the first level at which the whole vertex set is a
hyperedge. This is deliberately brute force: it exists to check the
thickness engine, not to compete with it.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .graph import Graph, iter_bits
from .thickness import order0_mask
from .unionfind import UnionFind

MAX_ORACLE_N = 16


class OracleSizeError(ValueError):
    pass


def _guard(g: Graph, max_n: int) -> None:
    if g.n > max_n:
        raise OracleSizeError(f"oracle limited to n <= {max_n} vertices, got n = {g.n}")


@lru_cache(maxsize=None)
def _masks_by_size_desc(n: int) -> tuple[int, ...]:
    return tuple(sorted((m for m in range(1 << n) if m.bit_count() >= 4),
                        key=lambda m: (-m.bit_count(), m)))


def _has_non_edge(bits: Sequence[int], mask: int) -> bool:
    for u in iter_bits(mask):
        if mask & ~bits[u] & ~(1 << u):
            return True
    return False


def _is_clique(bits: Sequence[int], mask: int) -> bool:
    return not _has_non_edge(bits, mask)


def _square_masks(bits: Sequence[int], n: int) -> list[int]:
    """Vertex masks of induced 4-cycles, by brute force over 4-sets."""
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            if bits[a] >> b & 1:
                continue
            common = bits[a] & bits[b] & ~((2 << a) - 1)
            for c in iter_bits(common):
                for d in iter_bits(common & ~bits[c] & ~((2 << c) - 1)):
                    out.append((1 << a) | (1 << b) | (1 << c) | (1 << d))
    return out


def maximal_order0_subsets(g: Graph, max_n: int = MAX_ORACLE_N) -> list[frozenset[int]]:
    """All inclusion-maximal vertex sets inducing a thick-of-order-0 subgraph."""
    _guard(g, max_n)
    return [frozenset(iter_bits(m)) for m in _maximal_order0_masks(g.adjacency_bits(), g.n)]


def _maximal_order0_masks(bits: Sequence[int], n: int) -> list[int]:
    squares = _square_masks(bits, n)
    if not squares:
        return []
    found: list[int] = []
    for m in _masks_by_size_desc(n):
        if any(m & f == m for f in found):
            continue
        # an order-0 set contains an induced square
        if not any(q & m == q for q in squares):
            continue
        if order0_mask(bits, m):
            found.append(m)
    return sorted(found)


def _maximal_cliques(bits: Sequence[int], cand: int) -> list[int]:
    """Bron-Kerbosch with pivoting over bitmask candidate sets."""
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(iter_bits(p | x), key=lambda u: (p & bits[u]).bit_count())
        for v in iter_bits(p & ~bits[pivot]):
            expand(r | (1 << v), p & bits[v], x & bits[v])
            p &= ~(1 << v)
            x |= 1 << v

    if cand:
        expand(0, cand, 0)
    return out


def strips(g: Graph, *, maximal: bool = True, allow_empty: bool = False,
           max_n: int = MAX_ORACLE_N) -> list[frozenset[int]]:
    """Vertex sets inducing strips.

    With ``maximal`` only the largest strip on each clique of each suspension
    is kept; otherwise every clique of every suspension contributes.
    """
    _guard(g, max_n)
    return [frozenset(iter_bits(m)) for m in _strip_masks(g.adjacency_bits(), g.n, maximal, allow_empty)]


def _strip_masks(bits: Sequence[int], n: int, maximal: bool, allow_empty: bool) -> list[int]:
    out = set()
    for u in range(n):
        for v in iter_bits(((1 << n) - 1) & ~bits[u] & ~((2 << u) - 1)):
            f = (1 << u) | (1 << v)
            susp = bits[u] & bits[v]
            if maximal:
                cliques = _maximal_cliques(bits, susp)
                if not cliques and allow_empty:
                    cliques = [0]
            else:
                cliques = [k for k in _submasks(susp) if _is_clique(bits, k)]
                if not allow_empty:
                    cliques = [k for k in cliques if k]
            out.update(f | k for k in cliques)
    return sorted(out)


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def maximal_strips(g: Graph, allow_empty: bool = False, max_n: int = MAX_ORACLE_N) -> list[frozenset[int]]:
    return strips(g, maximal=True, allow_empty=allow_empty, max_n=max_n)


def _all_order0_masks(bits: Sequence[int], n: int) -> list[int]:
    return [m for m in range(1 << n) if m.bit_count() >= 4 and order0_mask(bits, m)]


def hypergraph_levels(g: Graph, *, allow_empty: bool = False, maximal: bool = True,
                      max_n: int = MAX_ORACLE_N) -> list[list[int]]:
    """Hyperedge masks of each level until the sequence stabilises or covers V."""
    _guard(g, max_n)
    bits, n = g.adjacency_bits(), g.n
    full = (1 << n) - 1
    t0 = _maximal_order0_masks(bits, n) if maximal else _all_order0_masks(bits, n)
    if not t0:
        return []
    level = sorted(set(t0) | set(_strip_masks(bits, n, maximal, allow_empty)))
    levels = [level]
    while full not in level:
        uf = UnionFind(range(len(level)))
        for i in range(len(level)):
            for j in range(i + 1, len(level)):
                if _has_non_edge(bits, level[i] & level[j]):
                    uf.union(i, j)
        nxt = set()
        for members in uf.groups().values():
            u = 0
            for i in members:
                u |= level[i]
            nxt.add(u)
        nxt = sorted(nxt)
        if nxt == level:
            break
        level = nxt
        levels.append(level)
    return levels


def hypergraph_index(g: Graph, *, allow_empty: bool = False, maximal: bool = True,
                     max_n: int = MAX_ORACLE_N) -> int | None:
    """Least level whose hyperedges include ``V``; ``None`` means infinite."""
    _guard(g, max_n)
    bits, n = g.adjacency_bits(), g.n
    full = (1 << n) - 1
    if maximal and not _square_masks(bits, n):
        return None
    if maximal and order0_mask(bits, full):
        return 0
    levels = hypergraph_levels(g, allow_empty=allow_empty, maximal=maximal, max_n=max_n)
    if levels and full in levels[-1]:
        return len(levels) - 1
    return None
