"""Degree, closeness, betweenness, eigenvector and PageRank centrality.

Closeness and betweenness share one batched breadth-first search: all sources
advance together, one adjacency-matrix product per BFS level, which keeps the
per-graph cost low enough for Monte-Carlo loops over thousands of graphs.

Conventions worth knowing:

* closeness charges an unreachable pair distance ``n``; an isolated node scores 0.
* betweenness is unnormalized and counts each unordered source/target pair once.
* eigenvector centrality runs power iteration on ``A + I`` (same eigenvectors as
  ``A``, but no oscillation on bipartite graphs) and scales the maximum to 1.
* PageRank walks every edge in both directions; isolated nodes teleport uniformly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph

#: Scores closer than this (relative) are the same score when ranking.
TIE_RTOL = 1e-12


class CentralityError(ValueError):
    pass


class Measure(str, Enum):
    """The five centrality measures; values are the short tokens used in files."""

    BETWEENNESS = "bc"
    CLOSENESS = "cc"
    DEGREE = "dc"
    EIGENVECTOR = "ec"
    PAGERANK = "pr"

    @classmethod
    def parse(cls, token: str | Measure) -> Measure:
        if isinstance(token, Measure):
            return token
        t = token.strip().lower()
        for m in cls:
            if t in (m.value, m.name.lower()):
                return m
        raise ValueError(f"unknown centrality measure {token!r}")

    @property
    def long_name(self) -> str:
        return self.name.lower()


ALL_MEASURES = (Measure.BETWEENNESS, Measure.CLOSENESS, Measure.DEGREE,
                Measure.EIGENVECTOR, Measure.PAGERANK)


@dataclass(frozen=True)
class CentralityMeasure:
    """A measure plus the numeric settings of the iterative ones.

    ``tolerance`` and ``max_iterations`` default per measure: PageRank stops on
    L1 change below 1e-10 or after 200 sweeps, eigenvector centrality on a
    max-abs change below 1e-10 or after 1000 sweeps.
    """

    kind: Measure
    damping: float = 0.85
    tolerance: float | None = None
    max_iterations: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Measure.parse(self.kind))
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.tolerance is None:
            object.__setattr__(self, "tolerance", 1e-10)
        if self.max_iterations is None:
            object.__setattr__(self, "max_iterations",
                               200 if self.kind is Measure.PAGERANK else 1000)
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


def as_measure(m: CentralityMeasure | Measure | str) -> CentralityMeasure:
    if isinstance(m, CentralityMeasure):
        return m
    return CentralityMeasure(Measure.parse(m))


@dataclass(frozen=True, eq=False)
class CentralityVector:
    """Scores of one measure on one graph, aligned with ``labels``."""

    measure: Measure
    scores: np.ndarray
    labels: tuple[str, ...]
    converged: bool = True
    iterations: int = 0

    @property
    def graph_n(self) -> int:
        return len(self.labels)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.scores.tolist()))

    def __getitem__(self, label: str) -> float:
        return float(self.scores[self.labels.index(label)])


# -- kernels ------------------------------------------------------------------


@dataclass
class _BFS:
    dist: np.ndarray    # dist[v, s]; -1 when unreachable
    sigma: np.ndarray   # number of shortest s-v paths
    depth: int
    adj: object = field(repr=False)


def _bfs_all_sources(g: Graph) -> _BFS:
    n = g.n
    a = g.adjacency()
    dist = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    unseen = dist < 0
    sigma = np.eye(n)
    frontier = np.eye(n)
    depth = 0
    while True:
        reach = np.asarray(a @ frontier)
        new = reach > 0
        new &= unseen
        if not new.any():
            break
        depth += 1
        unseen &= ~new
        dist[new] = depth
        frontier = np.multiply(reach, new, out=reach)
        sigma += frontier
    return _BFS(dist, sigma, depth, a)


def _closeness_from(bfs: _BFS, n: int) -> np.ndarray:
    if n <= 1:
        return np.zeros(n)
    d = np.where(bfs.dist < 0, n, bfs.dist)
    total = d.sum(axis=0).astype(np.float64)
    score = (n - 1) / total
    isolated = (bfs.dist >= 0).sum(axis=0) == 1
    score[isolated] = 0.0
    return score


def _betweenness_from(bfs: _BFS) -> np.ndarray:
    n = bfs.dist.shape[0]
    delta = np.zeros((n, n))
    sigma = bfs.sigma
    for level in range(bfs.depth, 1, -1):
        at = bfs.dist == level
        coeff = np.where(at, (1.0 + delta) / np.where(at, sigma, 1.0), 0.0)
        pulled = np.asarray(bfs.adj @ coeff)
        delta += np.where(bfs.dist == level - 1, sigma * pulled, 0.0)
    return delta.sum(axis=1) / 2.0


# -- public measures ------------------------------------------------------------


def degree(g: Graph) -> CentralityVector:
    return CentralityVector(Measure.DEGREE, g.degrees.astype(np.float64), g.labels)


def closeness(g: Graph) -> CentralityVector:
    """``(n - 1) / sum of distances``, unreachable nodes counted at distance ``n``."""
    return CentralityVector(Measure.CLOSENESS, _closeness_from(_bfs_all_sources(g), g.n), g.labels)


def betweenness(g: Graph) -> CentralityVector:
    """Unnormalized shortest-path betweenness via Brandes' dependency accumulation.

    All sources are processed at once: the forward pass counts shortest paths
    level by level, the backward pass accumulates
    ``delta[v] += sigma[v] / sigma[w] * (1 + delta[w])`` over successors ``w``.
    """
    return CentralityVector(Measure.BETWEENNESS, _betweenness_from(_bfs_all_sources(g)), g.labels)


def eigenvector(g: Graph, cfg: CentralityMeasure | None = None) -> CentralityVector:
    """Principal adjacency eigenvector by shifted power iteration, max entry 1.

    Raises:
        CentralityError: the graph has no edges.
    """
    cfg = cfg or CentralityMeasure(Measure.EIGENVECTOR)
    if g.m == 0:
        raise CentralityError("eigenvector centrality is undefined on an edgeless graph")
    a = g.adjacency()
    x = np.ones(g.n)
    converged = False
    it = 0
    while it < cfg.max_iterations:
        it += 1
        y = a @ x + x
        y /= y.max()
        diff = np.abs(y - x).max()
        x = y
        if diff < cfg.tolerance:
            converged = True
            break
    return CentralityVector(Measure.EIGENVECTOR, x, g.labels, converged, it)


def pagerank(g: Graph, cfg: CentralityMeasure | None = None) -> CentralityVector:
    """Stationary distribution of the damped random walk, by power iteration."""
    cfg = cfg or CentralityMeasure(Measure.PAGERANK)
    n = g.n
    if n == 0:
        return CentralityVector(Measure.PAGERANK, np.zeros(0), g.labels)
    d = cfg.damping
    a = g.adjacency()
    deg = g.degrees.astype(np.float64)
    dangling = deg == 0
    inv_deg = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, deg))
    x = np.full(n, 1.0 / n)
    converged = False
    it = 0
    while it < cfg.max_iterations:
        it += 1
        y = d * (a @ (x * inv_deg))
        y += (d * x[dangling].sum() + 1.0 - d) / n
        y /= y.sum()
        diff = np.abs(y - x).sum()
        x = y
        if diff < cfg.tolerance:
            converged = True
            break
    return CentralityVector(Measure.PAGERANK, x, g.labels, converged, it)


def compute(g: Graph, measure: CentralityMeasure | Measure | str) -> CentralityVector:
    cfg = as_measure(measure)
    kind = cfg.kind
    if kind is Measure.DEGREE:
        return degree(g)
    if kind is Measure.CLOSENESS:
        return closeness(g)
    if kind is Measure.BETWEENNESS:
        return betweenness(g)
    if kind is Measure.EIGENVECTOR:
        return eigenvector(g, cfg)
    return pagerank(g, cfg)


def compute_many(g: Graph, measures: Iterable[CentralityMeasure | Measure | str]
                 ) -> dict[Measure, CentralityVector | CentralityError]:
    """All requested measures on ``g``, sharing one BFS between closeness and betweenness.

    A measure that is undefined on ``g`` maps to its :class:`CentralityError`
    instead of raising, so callers can count it and move on.
    """
    cfgs = [as_measure(m) for m in measures]
    out: dict[Measure, CentralityVector | CentralityError] = {}
    bfs = None
    for cfg in cfgs:
        kind = cfg.kind
        if kind in (Measure.CLOSENESS, Measure.BETWEENNESS):
            if bfs is None:
                bfs = _bfs_all_sources(g)
            scores = _closeness_from(bfs, g.n) if kind is Measure.CLOSENESS else _betweenness_from(bfs)
            out[kind] = CentralityVector(kind, scores, g.labels)
            continue
        try:
            out[kind] = compute(g, cfg)
        except CentralityError as exc:
            out[kind] = exc
    return out


def to_csv(vectors: Sequence[CentralityVector]) -> str:
    """CSV with columns ``node_label, score, measure``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_label", "score", "measure"])
    for vec in vectors:
        for lab, s in zip(vec.labels, vec.scores.tolist()):
            w.writerow([lab, repr(s), vec.measure.value])
    return buf.getvalue()
