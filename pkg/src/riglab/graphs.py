"""Simple undirected graphs on dense integer node ids.

The :class:`Graph` is the one object every sampler produces and every
property checker consumes: nodes are ``0..n-1``, edges are an immutable
deduplicated set of unordered pairs with no self-loops. Adjacency is kept
in CSR-style sorted arrays for iteration plus a lazily built key set for
O(1) membership tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EdgeListFormatError, ParameterError


def _canonical_edge_keys(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Sorted unique keys ``min*n+max`` for validated endpoint arrays."""
    if u.size == 0:
        return np.empty(0, dtype=np.int64)
    lo = np.minimum(u, v).astype(np.int64)
    hi = np.maximum(u, v).astype(np.int64)
    if lo.min() < 0 or hi.max() >= n:
        raise ParameterError("edge endpoint out of range [0, n)")
    if np.any(lo == hi):
        raise ParameterError("self-loops are not allowed")
    return np.unique(lo * n + hi)


class Graph:
    """Immutable simple undirected graph; build via the ``from_*`` constructors."""

    __slots__ = ("n", "m", "_keys", "_nbr", "_off", "_cache")

    def __init__(self, n: int, keys: np.ndarray):
        if n < 1:
            raise ParameterError("graph needs at least one node")
        self.n = int(n)
        self._keys = keys  # sorted unique int64 keys u*n+v with u<v
        self.m = int(keys.size)
        u = keys // n
        v = keys % n
        ends = np.concatenate([u, v])
        nbrs = np.concatenate([v, u])
        order = np.lexsort((nbrs, ends))
        self._nbr = nbrs[order]
        counts = np.bincount(ends, minlength=n)
        self._off = np.concatenate([[0], np.cumsum(counts)])
        self._cache: dict = {}

    # -- constructors -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        pairs = list(edges)
        if not pairs:
            return cls(n, np.empty(0, dtype=np.int64))
        arr = np.asarray(pairs, dtype=np.int64)
        return cls(n, _canonical_edge_keys(n, arr[:, 0], arr[:, 1]))

    @classmethod
    def from_edge_arrays(cls, n: int, u: np.ndarray, v: np.ndarray) -> "Graph":
        return cls(n, _canonical_edge_keys(n, np.asarray(u), np.asarray(v)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.empty(0, dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        u, v = np.triu_indices(n, k=1)
        return cls.from_edge_arrays(n, u, v)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ParameterError("cycle needs n >= 3")
        u = np.arange(n)
        return cls.from_edge_arrays(n, u, (u + 1) % n)

    @classmethod
    def path(cls, n: int) -> "Graph":
        u = np.arange(n - 1)
        return cls.from_edge_arrays(n, u, u + 1)

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        v = np.arange(1, leaves + 1)
        return cls.from_edge_arrays(leaves + 1, np.zeros(leaves, dtype=np.int64), v)

    # -- queries -------------------------------------------------------

    def neighbors(self, u: int) -> np.ndarray:
        return self._nbr[self._off[u]:self._off[u + 1]]

    def degree(self, u: int) -> int:
        return int(self._off[u + 1] - self._off[u])

    def degrees(self) -> np.ndarray:
        return np.diff(self._off)

    def min_degree(self) -> int:
        return int(np.min(np.diff(self._off)))

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        lo, hi = (u, v) if u < v else (v, u)
        return lo * self.n + hi in self.edge_key_set()

    def edge_keys(self) -> np.ndarray:
        return self._keys

    def edge_key_set(self) -> set:
        ks = self._cache.get("keyset")
        if ks is None:
            ks = set(self._keys.tolist())
            self._cache["keyset"] = ks
        return ks

    def edges(self) -> Iterator[tuple[int, int]]:
        for k in self._keys.tolist():
            yield k // self.n, k % self.n

    def adjacency_lists(self) -> list[list[int]]:
        """Neighbor lists as plain Python lists (sorted), cached."""
        adj = self._cache.get("adj")
        if adj is None:
            nbr = self._nbr.tolist()
            off = self._off.tolist()
            adj = [nbr[off[i]:off[i + 1]] for i in range(self.n)]
            self._cache["adj"] = adj
        return adj

    def adjacency_masks(self) -> list[int]:
        """Neighbor sets as int bitmasks, for subset-enumeration checkers."""
        rows = self._cache.get("masks")
        if rows is None:
            rows = [0] * self.n
            for u, v in self.edges():
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            self._cache["masks"] = rows
        return rows

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._keys, other._keys)

    def __hash__(self) -> int:
        return hash((self.n, self._keys.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class NodeSubset:
    """A subset of ``0..n-1`` stored as a bitmask; used for cut witnesses."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.n):
            raise ParameterError("subset mask out of range for universe size")

    @classmethod
    def from_nodes(cls, n: int, nodes: Iterable[int]) -> "NodeSubset":
        mask = 0
        for v in nodes:
            if not 0 <= v < n:
                raise ParameterError("subset member out of range")
            mask |= 1 << v
        return cls(n, mask)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    def complement(self) -> "NodeSubset":
        return NodeSubset(self.n, self.mask ^ ((1 << self.n) - 1))

    def __len__(self) -> int:
        return self.mask.bit_count()


def min_degree(g: Graph) -> int:
    return g.min_degree()


def intersect_graphs(g1: Graph, g2: Graph) -> Graph:
    """Edge-wise intersection of two graphs on the same node set."""
    if g1.n != g2.n:
        raise ParameterError(
            f"cannot intersect graphs with different node counts ({g1.n} vs {g2.n})"
        )
    keys = np.intersect1d(g1.edge_keys(), g2.edge_keys(), assume_unique=True)
    return Graph(g1.n, keys)


def connected_components(g: Graph) -> list[list[int]]:
    """Partition of nodes into maximal connected blocks (BFS)."""
    adj = g.adjacency_lists()
    seen = bytearray(g.n)
    blocks: list[list[int]] = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = 1
        queue = [s]
        block = [s]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = 1
                    queue.append(y)
                    block.append(y)
        blocks.append(sorted(block))
    return blocks


def is_connected(g: Graph) -> bool:
    """Single-node graphs count as connected."""
    adj = g.adjacency_lists()
    seen = bytearray(g.n)
    seen[0] = 1
    queue = [0]
    count = 1
    while queue:
        x = queue.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = 1
                count += 1
                queue.append(y)
    return count == g.n


# -- edge-list text format -------------------------------------------


def to_edge_list_text(g: Graph) -> str:
    """Canonical text form: ``n m`` header then ``u v`` lines with u<v."""
    lines = [f"{g.n} {g.m}\n"]
    n = g.n
    for k in g.edge_keys().tolist():
        lines.append(f"{k // n} {k % n}\n")
    return "".join(lines)


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(to_edge_list_text(g))


def from_edge_list_text(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EdgeListFormatError("empty edge-list document")
    head = lines[0].split()
    if len(head) != 2:
        raise EdgeListFormatError(f"bad header line: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise EdgeListFormatError(f"non-integer header: {lines[0]!r}") from exc
    if n < 1 or m < 0:
        raise EdgeListFormatError("header requires n >= 1 and m >= 0")
    if len(lines) - 1 != m:
        raise EdgeListFormatError(
            f"header promises {m} edges but document has {len(lines) - 1} edge lines"
        )
    us = np.empty(m, dtype=np.int64)
    vs = np.empty(m, dtype=np.int64)
    for i, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(f"bad edge line: {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise EdgeListFormatError(f"non-integer edge line: {line!r}") from exc
        if not 0 <= u < v < n:
            raise EdgeListFormatError(f"edge line requires 0 <= u < v < n: {line!r}")
        us[i], vs[i] = u, v
    keys = us * n + vs
    uniq = np.unique(keys)
    if uniq.size != keys.size:
        raise EdgeListFormatError("duplicate edge in document")
    return Graph(n, uniq)


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        return from_edge_list_text(fh.read())
