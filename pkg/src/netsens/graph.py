"""Undirected simple graphs, random-graph generators and edge-list I/O.

A :class:`Graph` is immutable.  Nodes are the dense integers ``0..n-1``; each
node also carries a string label which is its identity across graphs.  Node
removal re-densifies ids but keeps labels, so two graphs are compared on the
labels they share.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .rng import SeedLike, make_rng

logger = logging.getLogger(__name__)

#: Graphs up to this many nodes use dense adjacency matrices in the numeric kernels.
DENSE_LIMIT = 600

COMMENT_PREFIXES = ("#", "%")


class GraphFormatError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@lru_cache(maxsize=64)
def upper_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached ``np.triu_indices(n, 1)``; the arrays are read-only."""
    iu, ju = np.triu_indices(n, 1)
    iu.setflags(write=False)
    ju.setflags(write=False)
    return iu, ju


def _normalize_edges(n: int, pairs) -> np.ndarray:
    e = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if e.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if e.min() < 0 or e.max() >= n:
        raise ValueError(f"edge endpoint out of range for n={n}")
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    if np.any(lo == hi):
        raise ValueError("self-loops are not allowed")
    keys = np.unique(lo * n + hi)
    return np.column_stack([keys // n, keys % n])


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected, unweighted, simple graph.

    Attributes:
        n: number of nodes.
        edges: ``(m, 2)`` int array, one row ``(u, v)`` with ``u < v`` per edge,
            rows in lexicographic order.
        labels: one string label per node.
    """

    n: int
    edges: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) != self.n:
            raise ValueError(f"expected {self.n} labels, got {len(self.labels)}")
        self.edges.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, pairs=(), labels: Sequence[str] | None = None) -> Graph:
        """Build a graph from node count and ``(u, v)`` pairs.

        Duplicate pairs collapse to one edge; self-loops raise ``ValueError``.
        Without ``labels`` nodes are labelled by their decimal ids.
        """
        n = int(n)
        if n < 0:
            raise ValueError("n must be non-negative")
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(set(labels)) != len(labels):
                raise ValueError("node labels must be unique")
        return cls(n, _normalize_edges(n, pairs), labels)

    # -- basic queries ---------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels == other.labels
            and np.array_equal(self.edges, other.edges)
        )

    __hash__ = None

    @cached_property
    def index(self) -> dict[str, int]:
        """Label to node id."""
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.bincount(self.edges.ravel(), minlength=self.n)
        d.setflags(write=False)
        return d

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix in CSR form (float64)."""
        e = self.edges
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(rows.size, dtype=np.float64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def dense(self) -> np.ndarray:
        """Symmetric 0/1 adjacency matrix as a dense float64 array."""
        a = np.zeros((self.n, self.n))
        a[self.edges[:, 0], self.edges[:, 1]] = 1.0
        a[self.edges[:, 1], self.edges[:, 0]] = 1.0
        a.setflags(write=False)
        return a

    def adjacency(self):
        """Adjacency matrix in whichever layout suits the graph size."""
        return self.dense if self.n <= DENSE_LIMIT else self.csr

    @cached_property
    def neighbors(self) -> tuple[np.ndarray, ...]:
        a = self.csr
        return tuple(a.indices[a.indptr[i]:a.indptr[i + 1]] for i in range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.csr[u, v])

    def edge_set(self) -> set[frozenset[str]]:
        """Edges as unordered label pairs; handy for comparing graphs."""
        lab = self.labels
        return {frozenset((lab[u], lab[v])) for u, v in self.edges}

    def non_edges(self) -> np.ndarray:
        """All ``(u, v)`` with ``u < v`` that are not edges, lexicographic order."""
        iu, ju = upper_pairs(self.n)
        if self.n <= DENSE_LIMIT:
            absent = self.dense[iu, ju] == 0
        else:
            keys = self.edges[:, 0] * self.n + self.edges[:, 1]
            absent = ~np.isin(iu * self.n + ju, keys)
        return np.column_stack([iu[absent], ju[absent]])

    def non_edge_count(self) -> int:
        return comb(self.n, 2) - self.m

    # -- derived graphs ----------------------------------------------------

    def subgraph(self, keep: Iterable[int]) -> Graph:
        """Induced subgraph on ``keep``; ids are re-densified in ascending order."""
        keep = np.unique(np.asarray(list(keep) if not isinstance(keep, np.ndarray) else keep,
                                    dtype=np.int64))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        e = remap[self.edges]
        e = e[(e >= 0).all(axis=1)]
        labels = tuple(self.labels[i] for i in keep)
        return Graph(int(keep.size), e, labels)

    def without_nodes(self, drop: Iterable[int]) -> Graph:
        mask = np.ones(self.n, dtype=bool)
        mask[np.asarray(list(drop), dtype=np.int64)] = False
        return self.subgraph(np.flatnonzero(mask))

    def without_edges(self, rows: np.ndarray) -> Graph:
        """Drop edges by their row positions in :attr:`edges`."""
        mask = np.ones(self.m, dtype=bool)
        mask[np.asarray(rows, dtype=np.int64)] = False
        return Graph(self.n, np.ascontiguousarray(self.edges[mask]), self.labels)

    def with_edges(self, pairs) -> Graph:
        """Add edges given as id pairs; they must be new non-loop pairs."""
        extra = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        merged = _normalize_edges(self.n, np.concatenate([self.edges, extra]))
        if merged.shape[0] != self.m + extra.shape[0]:
            raise ValueError("added edges overlap existing edges or each other")
        return Graph(self.n, merged, self.labels)


# -- edge-list I/O ----------------------------------------------------------


@dataclass(frozen=True)
class EdgeListStats:
    lines: int
    duplicates: int
    self_loops: int


def parse_edge_list(text: str) -> tuple[Graph, EdgeListStats]:
    """Parse an edge-list document, also returning what was dropped.

    Each non-blank line not starting with ``#`` or ``%`` must hold exactly two
    whitespace-separated labels.  Labels become ids in order of first
    appearance.  Repeated edges (either orientation) and self-loops are
    dropped and counted.
    """
    index: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    dup = loops = lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"expected 2 labels, found {len(tokens)}", lineno)
        lines += 1
        u = index.setdefault(tokens[0], len(index))
        v = index.setdefault(tokens[1], len(index))
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dup += 1
            continue
        seen.add(key)
        pairs.append(key)
    if lines == 0:
        raise GraphFormatError("edge list is empty")
    stats = EdgeListStats(lines, dup, loops)
    if dup or loops:
        logger.info("edge list: dropped %d duplicate edges and %d self-loops", dup, loops)
    return Graph.from_edges(len(index), pairs, labels=list(index)), stats


def from_edge_list(text: str) -> Graph:
    return parse_edge_list(text)[0]


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(fh.read())


def to_edge_list(g: Graph) -> str:
    """Serialize ``g`` as one ``label label`` line per edge.

    An isolated node is written as a self-loop line ``label label``; readers
    drop the loop but keep the node.
    """
    lab = g.labels
    lines = [f"{lab[u]} {lab[v]}\n" for u, v in g.edges]
    lines += [f"{lab[u]} {lab[u]}\n" for u in np.flatnonzero(g.degrees == 0)]
    return "".join(lines)


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_edge_list(g))


# -- structure ----------------------------------------------------------------


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Equal-sized components are resolved in favour of the one containing the
    smallest node id.  Labels are preserved.
    """
    if g.n == 0:
        return g
    _, comp = csgraph.connected_components(g.csr, directed=False)
    sizes = np.bincount(comp)
    first = np.full(sizes.size, g.n)
    np.minimum.at(first, comp, np.arange(g.n))
    best = min(range(sizes.size), key=lambda c: (-sizes[c], first[c]))
    if sizes[best] == g.n:
        return g
    return g.subgraph(np.flatnonzero(comp == best))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return csgraph.connected_components(g.csr, directed=False)[0] == 1


# -- generators ---------------------------------------------------------------


def erdos_renyi(n: int, p: float, seed: SeedLike = None) -> Graph:
    """G(n, p): each of the ``C(n, 2)`` pairs is an edge independently with probability ``p``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    iu, ju = upper_pairs(n)
    hit = rng.random(iu.size) < p
    return Graph(n, np.column_stack([iu[hit], ju[hit]]).astype(np.int64),
                 tuple(str(i) for i in range(n)))


def barabasi_albert(n: int, m: int, seed: SeedLike = None) -> Graph:
    """Preferential-attachment graph grown from an ``m``-clique.

    Every node ``t >= m`` links to ``m`` distinct earlier nodes, drawn without
    replacement with probability proportional to their current degree (uniform
    while all degrees are zero, which only happens for ``m = 1``).  The result
    has ``C(m, 2) + (n - m) * m`` edges and is connected.
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(m, 1)
    edges = [np.column_stack([iu, ju])]
    deg = np.zeros(n, dtype=np.float64)
    deg[:m] = m - 1
    for t in range(m, n):
        w = deg[:t]
        total = w.sum()
        p = w / total if total > 0 else None
        targets = rng.choice(t, size=m, replace=False, p=p)
        edges.append(np.column_stack([targets, np.full(m, t)]))
        deg[targets] += 1
        deg[t] = m
    return Graph.from_edges(n, np.concatenate(edges))


def non_edge_sample(g: Graph, k: int, seed: SeedLike = None) -> np.ndarray:
    """``k`` distinct non-edges of ``g``, uniformly without replacement.

    Returns a ``(k, 2)`` array of ``(u, v)`` id pairs with ``u < v``.
    """
    avail = g.non_edge_count()
    if not 0 <= k <= avail:
        raise ValueError(f"cannot sample {k} non-edges, only {avail} available")
    if k == 0:
        return np.empty((0, 2), dtype=np.int64)
    rng = make_rng(seed)
    pool = g.non_edges()
    pick = rng.choice(pool.shape[0], size=k, replace=False)
    return pool[pick]
