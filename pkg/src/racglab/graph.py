"""Immutable simple graphs, graph6 and edge-list I/O.

Vertices are ``0..n-1``. A non-edge ``(u, v)`` is always stored with
``u < v`` and packed into the integer key ``u * n + v`` wherever a
structure is indexed by non-edges.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Iterable, Iterator, Sequence

DENSE_THRESHOLD = 512

GRAPH6_HEADER = b">>graph6<<"


class GraphFormatError(ValueError):
    """Malformed graph input; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Undirected simple graph on ``n`` vertices.

    Neighbourhoods are kept as sorted tuples and frozensets; neighbour
    bitmasks (Python ints) are built eagerly when ``n <= dense_threshold``
    and lazily on request otherwise.
    """

    __slots__ = ("n", "_nbrs", "_sets", "_bits", "_m", "dense_threshold")

    def __init__(self, n: int, neighbors: Sequence[Sequence[int]], *,
                 dense_threshold: int = DENSE_THRESHOLD, _trusted: bool = False):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(neighbors) != n:
            raise ValueError("need one neighbour sequence per vertex")
        self.n = n
        self.dense_threshold = dense_threshold
        if _trusted:
            self._nbrs = tuple(tuple(nb) for nb in neighbors)
        else:
            sets = [set() for _ in range(n)]
            for u, nb in enumerate(neighbors):
                for v in nb:
                    _check_pair(n, u, v)
                    sets[u].add(v)
                    sets[v].add(u)
            self._nbrs = tuple(tuple(sorted(s)) for s in sets)
        self._sets = tuple(frozenset(nb) for nb in self._nbrs)
        self._m = sum(len(nb) for nb in self._nbrs) // 2
        self._bits = self._make_bits() if n <= dense_threshold else None

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        """Build a graph from an edge list; duplicates collapse, loops are rejected."""
        sets = [set() for _ in range(n)]
        for u, v in edges:
            _check_pair(n, u, v)
            sets[u].add(v)
            sets[v].add(u)
        return cls(n, [sorted(s) for s in sets], _trusted=True, **kw)

    @classmethod
    def from_adjacency_bits(cls, n: int, bits: Sequence[int], **kw) -> "Graph":
        """Build from neighbour bitmasks; symmetry and loop-freeness are checked."""
        full = (1 << n) - 1
        for u, b in enumerate(bits):
            if b & ~full:
                raise ValueError(f"vertex {u}: neighbour outside 0..{n - 1}")
            if b >> u & 1:
                raise ValueError(f"self-loop at vertex {u}")
            for v in iter_bits(b):
                if not bits[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
        g = cls(n, [list(iter_bits(b)) for b in bits], _trusted=True, **kw)
        if g._bits is None:
            g._bits = tuple(bits)
        return g

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [()] * n, _trusted=True)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, [[v for v in range(n) if v != u] for u in range(n)], _trusted=True)

    def _make_bits(self) -> tuple[int, ...]:
        out = []
        for nb in self._nbrs:
            b = 0
            for v in nb:
                b |= 1 << v
            out.append(b)
        return tuple(out)

    # -- queries ------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self.n

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._sets[v]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def adjacency_bits(self) -> tuple[int, ...]:
        """Neighbour bitmasks, built on first use above the dense threshold."""
        if self._bits is None:
            self._bits = self._make_bits()
        return self._bits

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nb in enumerate(self._nbrs):
            for v in nb:
                if v > u:
                    yield (u, v)

    def non_edges(self) -> Iterator[tuple[int, int]]:
        """Lazily yield all non-edges ``(u, v)``, ``u < v``, lexicographically."""
        n = self.n
        for u in range(n):
            s = self._sets[u]
            for v in range(u + 1, n):
                if v not in s:
                    yield (u, v)

    def num_non_edges(self) -> int:
        return self.n * (self.n - 1) // 2 - self._m

    def is_non_edge(self, u: int, v: int) -> bool:
        return u != v and v not in self._sets[u]

    def non_edge_key(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return u * self.n + v

    def unpack_key(self, key: int) -> tuple[int, int]:
        return divmod(key, self.n)

    def common_neighbors(self, u: int, v: int) -> frozenset[int]:
        """Suspension of the non-edge ``(u, v)``: vertices adjacent to both ends."""
        if not self.is_non_edge(u, v):
            raise ValueError(f"({u}, {v}) is not a non-edge")
        if self._bits is not None:
            return frozenset(iter_bits(self._bits[u] & self._bits[v]))
        a, b = self._sets[u], self._sets[v]
        return a & b if len(a) <= len(b) else b & a

    def cone_vertices(self) -> list[int]:
        """Vertices adjacent to every other vertex (they lie in no non-edge)."""
        return [v for v in range(self.n) if len(self._nbrs[v]) == self.n - 1]

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled ``0..k-1``; also returns the old labels."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        nbrs = [[pos[w] for w in self._nbrs[v] if w in pos] for v in vs]
        return Graph(len(vs), nbrs, _trusted=True), vs

    def edge_count_within(self, vertices: Iterable[int]) -> int:
        s = set(vertices)
        return sum(1 for v in s for w in self._nbrs[v] if w in s) // 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._nbrs == other._nbrs

    def __hash__(self) -> int:
        return hash((self.n, self._nbrs))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self._m})"

    # -- serialisation ------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "adjacency": [list(nb) for nb in self._nbrs]})

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        data = json.loads(text)
        return cls(int(data["n"]), data["adjacency"])

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self._m}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"


def _check_pair(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")


def complement_components(g: Graph, s: Iterable[int] | None = None) -> list[tuple[frozenset[int], bool]]:
    """Components of the complement of ``g[s]``, each flagged if it contains a complement edge."""
    bits = g.adjacency_bits()
    smask = (1 << g.n) - 1 if s is None else mask_of(s)
    return [(frozenset(iter_bits(c)), bool(c & (c - 1)))
            for c in complement_component_masks(bits, smask)]


def complement_component_masks(bits: Sequence[int], smask: int) -> list[int]:
    """Bitmask form of :func:`complement_components`."""
    comps = []
    rem = smask
    while rem:
        comp = frontier = rem & -rem
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            u = low.bit_length() - 1
            new = smask & ~bits[u] & ~comp & ~low
            comp |= new
            frontier |= new
        rem &= ~comp
        comps.append(comp)
    return comps


# -- graph6 -------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 1 << 36:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("graph too large for graph6")


def emit_graph6(g: Graph, header: bool = False) -> bytes:
    """Encode ``g`` as graph6 (no trailing newline)."""
    out = bytearray(GRAPH6_HEADER if header else b"")
    out += _encode_n(g.n)
    acc = nacc = 0
    sets = g._sets
    for v in range(1, g.n):
        sv = sets[v]
        for u in range(v):
            acc = (acc << 1) | (u in sv)
            nacc += 1
            if nacc == 6:
                out.append(acc + 63)
                acc = nacc = 0
    if nacc:
        out.append((acc << (6 - nacc)) + 63)
    return bytes(out)


def parse_graph6(data: bytes | str) -> Graph:
    """Decode one graph6 record. A single trailing newline is tolerated."""
    if isinstance(data, str):
        data = data.encode("ascii", errors="strict")
    if data.endswith(b"\r\n"):
        data = data[:-2]
    elif data.endswith(b"\n"):
        data = data[:-1]
    pos = len(GRAPH6_HEADER) if data.startswith(GRAPH6_HEADER) else 0
    for i in range(pos, len(data)):
        if not 63 <= data[i] <= 126:
            raise GraphFormatError(f"byte {data[i]!r} outside 63..126", i)
    if pos >= len(data):
        raise GraphFormatError("missing vertex count", pos)
    if data[pos] != 126:
        n, pos = data[pos] - 63, pos + 1
    elif pos + 1 < len(data) and data[pos + 1] == 126:
        if pos + 8 > len(data):
            raise GraphFormatError("truncated 8-byte vertex count", len(data))
        n = 0
        for b in data[pos + 2:pos + 8]:
            n = (n << 6) | (b - 63)
        pos += 8
    else:
        if pos + 4 > len(data):
            raise GraphFormatError("truncated 4-byte vertex count", len(data))
        n = 0
        for b in data[pos + 1:pos + 4]:
            n = (n << 6) | (b - 63)
        pos += 4
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos < need:
        raise GraphFormatError(f"expected {need} adjacency bytes, found {len(data) - pos}", len(data))
    if len(data) - pos > need:
        raise GraphFormatError("trailing bytes after adjacency data", pos + need)
    if nbits % 6 and (data[pos + need - 1] - 63) & ((1 << (6 - nbits % 6)) - 1):
        raise GraphFormatError("non-zero padding bits", pos + need - 1)
    sets: list[list[int]] = [[] for _ in range(n)]
    k = 0
    for v in range(1, n):
        for u in range(v):
            b = data[pos + k // 6] - 63
            if b >> (5 - k % 6) & 1:
                sets[u].append(v)
                sets[v].append(u)
            k += 1
    return Graph(n, [sorted(s) for s in sets], _trusted=True)


def iter_graph6_lines(text: bytes | str) -> Iterator[Graph]:
    """Parse a stream with one graph6 record per non-blank line."""
    if isinstance(text, str):
        text = text.encode("ascii")
    for line in text.splitlines():
        if line.strip():
            yield parse_graph6(line.strip())


# -- edge-list text -------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (0-based)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphFormatError("first line must be 'n m'", 0)
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"non-integer field: {exc}") from None
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def all_graphs(n: int) -> Iterator[tuple[int, Graph]]:
    """Every labelled graph on ``n`` vertices, keyed by its edge mask.

    Bit ``i`` of the mask is the ``i``-th pair of ``combinations(range(n), 2)``.
    """
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield mask, graph_from_mask(n, mask, pairs)


def graph_from_mask(n: int, mask: int, pairs: Sequence[tuple[int, int]] | None = None) -> Graph:
    if pairs is None:
        pairs = list(combinations(range(n), 2))
    bits = [0] * n
    for i in iter_bits(mask):
        u, v = pairs[i]
        bits[u] |= 1 << v
        bits[v] |= 1 << u
    return Graph.from_adjacency_bits(n, bits)
