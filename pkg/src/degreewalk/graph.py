"""Compact immutable graph storage and the deterministic top-k baseline.

Graphs are undirected and simple: ingestion collapses duplicate edges,
drops self-loops and enforces symmetry. Node ids are remapped to a dense
0..n-1 range; the original ids are kept for reporting.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list input, with a 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class DegreeRecord:
    node: int
    degree: int


class Graph:
    """Undirected simple graph in CSR form.

    Attributes:
        n: number of nodes.
        offsets: int64 array of length n+1; node i's neighbors live in
            neighbors[offsets[i]:offsets[i+1]], sorted ascending.
        neighbors: flattened adjacency (each undirected edge appears twice).
        degrees: per-node degree, degrees[i] == offsets[i+1]-offsets[i].
        m_edges: number of undirected edges, sum(degrees) == 2*m_edges.
        original_ids: mapping from dense node id back to the input id.
    """

    __slots__ = ("n", "offsets", "neighbors", "degrees", "m_edges", "original_ids")

    def __init__(self, offsets: np.ndarray, neighbors: np.ndarray,
                 original_ids: np.ndarray | None = None):
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.neighbors = np.ascontiguousarray(neighbors, dtype=np.int64)
        self.n = len(self.offsets) - 1
        self.degrees = np.diff(self.offsets)
        self.m_edges = int(len(self.neighbors) // 2)
        if original_ids is None:
            original_ids = np.arange(self.n, dtype=np.int64)
        self.original_ids = np.asarray(original_ids, dtype=np.int64)
        for arr in (self.offsets, self.neighbors, self.degrees, self.original_ids):
            arr.setflags(write=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: np.ndarray, n: int | None = None,
                   original_ids: np.ndarray | None = None) -> "Graph":
        """Build a simple graph from an array of (u, v) pairs.

        Self-loops are dropped and duplicate/reversed edges collapsed. Node
        ids must already be dense in 0..n-1; pass `n` when isolated trailing
        nodes should be kept.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(edges.max()) + 1 if len(edges) else 0
        if len(edges):
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            keep = lo != hi
            lo, hi = lo[keep], hi[keep]
            # collapse duplicates via a unique key; n fits in int64 comfortably
            key = lo * np.int64(n) + hi
            key = np.unique(key)
            lo, hi = key // n, key % n
            src = np.concatenate([lo, hi])
            dst = np.concatenate([hi, lo])
        else:
            src = dst = np.empty(0, dtype=np.int64)
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.add.at(offsets, src + 1, 1)
        np.cumsum(offsets, out=offsets)
        return cls(offsets, dst, original_ids)

    # -- queries -----------------------------------------------------------

    def degree(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"node {i} out of range [0, {self.n})")
        return int(self.degrees[i])

    def neighbors_of(self, i: int) -> np.ndarray:
        if not 0 <= i < self.n:
            raise IndexError(f"node {i} out of range [0, {self.n})")
        return self.neighbors[self.offsets[i]:self.offsets[i + 1]]

    def average_degree(self) -> float:
        return 2.0 * self.m_edges / self.n if self.n else 0.0

    def edge_iter(self) -> Iterator[tuple[int, int]]:
        """Yield each undirected edge once as (u, v) with u < v, dense ids."""
        for u in range(self.n):
            for v in self.neighbors_of(u):
                if u < v:
                    yield u, int(v)

    def to_edge_lines(self, original_ids: bool = True) -> Iterator[str]:
        """Render the edge list in the text format accepted by ingestion."""
        ids = self.original_ids if original_ids else np.arange(self.n)
        for u, v in self.edge_iter():
            yield f"{ids[u]} {ids[v]}"

    # -- binary cache ------------------------------------------------------

    def save_npz(self, path) -> None:
        np.savez_compressed(path, offsets=self.offsets, neighbors=self.neighbors,
                            original_ids=self.original_ids)

    @classmethod
    def load_npz(cls, path) -> "Graph":
        with np.load(path) as data:
            return cls(data["offsets"], data["neighbors"], data["original_ids"])


def ingest_edge_list(lines: Iterable[str], symmetrize: bool = False) -> Graph:
    """Parse an edge-list text stream into a Graph.

    One edge per line as two whitespace-separated non-negative integers;
    lines starting with '#' are comments. Input ids may be sparse; they are
    remapped densely and retained in Graph.original_ids. The stored graph
    is always undirected and simple, so `symmetrize` (treat lines as
    directed arcs and add reverses) does not change the result; the flag is
    accepted for CLI compatibility with directed sources.

    Raises:
        EdgeListParseError: malformed line (with its line number).
        ValueError: no edges in the input.
    """
    if isinstance(lines, str):
        lines = io.StringIO(lines)
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected two node ids, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer node id in {line!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(lineno, f"negative node id in {line!r}")
        us.append(u)
        vs.append(v)
    if not us:
        raise ValueError("empty edge list: no edges found in input")
    raw_edges = np.array([us, vs], dtype=np.int64).T
    original_ids, dense = np.unique(raw_edges, return_inverse=True)
    dense_edges = dense.reshape(raw_edges.shape)
    return Graph.from_edges(dense_edges, n=len(original_ids), original_ids=original_ids)


def load_edge_list(path, symmetrize: bool = False) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return ingest_edge_list(fh, symmetrize=symmetrize)


def exact_top_k(g: Graph, k: int, method: str = "select") -> list[DegreeRecord]:
    """Deterministic top-k nodes by degree, ties broken by ascending id.

    `method="select"` uses a size-k partial selection; `method="sort"`
    sorts the full degree array (kept for benchmark comparisons).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > g.n:
        raise ValueError(f"k={k} exceeds node count n={g.n}")
    # composite key: larger degree first, then smaller id; strictly ordered
    key = g.degrees.astype(np.int64) * np.int64(g.n) - np.arange(g.n, dtype=np.int64)
    if method == "select":
        if k < g.n:
            cand = np.argpartition(-key, k - 1)[:k]
        else:
            cand = np.arange(g.n)
        top = cand[np.argsort(-key[cand], kind="stable")]
    elif method == "sort":
        top = np.argsort(-key, kind="stable")[:k]
    else:
        raise ValueError(f"unknown method {method!r}")
    return [DegreeRecord(int(i), int(g.degrees[i])) for i in top]


def degree(g: Graph, i: int) -> int:
    return g.degree(i)
