"""Sparse undirected simple graphs and edge-list I/O.

A graph is a node count plus a canonical edge set: every edge is stored once
as a pair (i, j) with i < j, rows sorted lexicographically.  Degree sequences
are plain integer arrays and node masks are boolean arrays; no wrapper types.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import GraphFormatError


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on nodes 0..n-1.

    edge_array has shape (E, 2) with i < j per row, rows lexicographically
    sorted and unique.  Construct via :meth:`from_edges` unless the input is
    already canonical.
    """

    n: int
    edge_array: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if np.any(arr[:, 0] == arr[:, 1]):
                raise GraphFormatError("self-loops are not allowed")
            if arr.min() < 0 or arr.max() >= n:
                raise GraphFormatError(f"edge endpoint out of range for n={n}")
            lo = arr.min(axis=1)
            hi = arr.max(axis=1)
            keys = np.unique(lo * n + hi)
            arr = np.column_stack((keys // n, keys % n))
        return cls(n=int(n), edge_array=arr)

    @classmethod
    def _from_canonical(cls, n: int, arr: np.ndarray) -> "Graph":
        # fast path: caller guarantees i<j, sorted, unique
        return cls(n=int(n), edge_array=arr)

    @property
    def num_edges(self) -> int:
        return len(self.edge_array)

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Edges encoded as i*n + j, sorted ascending."""
        if self.num_edges == 0:
            return np.empty(0, dtype=np.int64)
        return self.edge_array[:, 0] * self.n + self.edge_array[:, 1]

    @cached_property
    def edge_key_set(self) -> frozenset:
        return frozenset(self.edge_keys.tolist())

    @cached_property
    def adjacency(self) -> list:
        """Sorted neighbor array per node."""
        neigh: list = [[] for _ in range(self.n)]
        for u, v in self.edge_array.tolist():
            neigh[u].append(v)
            neigh[v].append(u)
        return [np.array(sorted(a), dtype=np.int64) for a in neigh]

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        lo, hi = (i, j) if i < j else (j, i)
        return lo * self.n + hi in self.edge_key_set

    def degrees(self) -> np.ndarray:
        return degree_sequence(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edge_array, other.edge_array)

    def __hash__(self) -> int:
        return hash((self.n, self.edge_array.tobytes()))


def degree_sequence(g: Graph) -> np.ndarray:
    """Degree of every node; sums to 2E."""
    d = np.zeros(g.n, dtype=np.int64)
    if g.num_edges:
        np.add.at(d, g.edge_array[:, 0], 1)
        np.add.at(d, g.edge_array[:, 1], 1)
    return d


def edge_overlap(generated: Graph, reference: Graph) -> float:
    """Fraction of the reference graph's edges present in `generated`.

    Denominator is the reference edge count, so a perfect copy scores 1.0.
    """
    if generated.n != reference.n:
        raise ValueError(
            f"node-count mismatch: generated n={generated.n}, reference n={reference.n}"
        )
    if reference.num_edges == 0:
        return 0.0
    shared = np.intersect1d(generated.edge_keys, reference.edge_keys, assume_unique=True)
    return len(shared) / reference.num_edges


def active_subgraph_edge_count(g: Graph, s: np.ndarray) -> int:
    """Number of edges with both endpoints flagged in the boolean mask `s`."""
    s = np.asarray(s, dtype=bool)
    if len(s) != g.n:
        raise ValueError(f"mask length {len(s)} != node count {g.n}")
    if g.num_edges == 0:
        return 0
    both = s[g.edge_array[:, 0]] & s[g.edge_array[:, 1]]
    return int(np.count_nonzero(both))


def active_mask(prev: Graph, cur: Graph) -> np.ndarray:
    """Nodes whose degree differs between two snapshots of the same node set."""
    if prev.n != cur.n:
        raise ValueError("graphs must share the node set")
    return degree_sequence(prev) != degree_sequence(cur)


def load_edge_list(text: str) -> Graph:
    """Parse whitespace-separated `u v` pairs into a canonical Graph.

    Lines starting with `#` and blank lines are ignored.  An optional first
    non-comment line `N <n>` fixes the node count (needed to keep trailing
    isolated nodes); otherwise n = 1 + max index.  Duplicate pairs and both
    orientations collapse to one canonical edge.
    """
    declared_n: int | None = None
    pairs: list[tuple[int, int]] = []
    seen_pair_line = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if not seen_pair_line and declared_n is None and parts[0] in ("N", "n"):
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}")
            try:
                declared_n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer node count {parts[1]!r}") from None
            if declared_n < 0:
                raise GraphFormatError(f"line {lineno}: negative node count")
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two tokens, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token in {line!r}") from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop {u}")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative node index")
        if declared_n is not None and (u >= declared_n or v >= declared_n):
            raise GraphFormatError(f"line {lineno}: index >= declared n={declared_n}")
        seen_pair_line = True
        pairs.append((u, v) if u < v else (v, u))

    if declared_n is not None:
        n = declared_n
    elif pairs:
        n = 1 + max(max(p) for p in pairs)
    else:
        n = 0
    return Graph.from_edges(n, pairs)


def dump_edge_list(g: Graph) -> str:
    """Serialize a graph in the format load_edge_list reads back.

    Emits LF newlines and lexicographically ordered pairs.  A `N <n>` header
    is written when some node is isolated, so the node count round-trips.
    """
    lines = []
    degrees = degree_sequence(g)
    if g.n > 0 and (g.num_edges == 0 or np.any(degrees == 0)):
        lines.append(f"N {g.n}")
    lines.extend(f"{u} {v}" for u, v in g.edge_array.tolist())
    return "\n".join(lines) + ("\n" if lines else "")


def read_edge_list(path: str | Path) -> Graph:
    return load_edge_list(Path(path).read_text(encoding="utf-8"))


def write_edge_list(path: str | Path, g: Graph) -> None:
    Path(path).write_text(dump_edge_list(g), encoding="utf-8", newline="\n")
