"""Measurement-error mechanisms and the imputations that try to undo them.

An :class:`ErrorMechanism` turns a graph into a random graph; each call of
:func:`apply_error` draws one outcome.  The error level ``alpha`` is the
affected fraction of nodes or edges and the number of affected items is
``round(alpha * count)``, rounding halves up.

Mechanism tokens (``kind:level``) are the text form used on the command line,
in experiment files and in CSV output::

    rm_nodes:0.1  rm_edges_unif:0.3  rm_edges_prop:0.1  add_edges:0.3
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import floor

import numpy as np

from .graph import Graph, non_edge_sample
from .rng import SeedLike, make_rng


class InfeasibleError(ValueError):
    """The requested perturbation cannot be carried out on this graph."""


class ErrorKind(str, Enum):
    REMOVE_NODES = "rm_nodes"
    REMOVE_EDGES_UNIFORM = "rm_edges_unif"
    REMOVE_EDGES_PROPORTIONAL = "rm_edges_prop"
    ADD_EDGES = "add_edges"


class ImputationKind(str, Enum):
    ADD_NON_EDGES = "add_uniform_non_edges"
    REMOVE_EDGES = "remove_uniform_edges"
    ADD_NODES = "add_nodes_degree_sampled"


def round_half_up(x: float) -> int:
    # the epsilon absorbs products such as 0.3 * 5 landing just below .5
    return int(floor(x + 0.5 + 1e-9))


@dataclass(frozen=True)
class ErrorMechanism:
    kind: ErrorKind
    level: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ErrorKind(self.kind))
        object.__setattr__(self, "level", float(self.level))
        if not 0.0 <= self.level < 1.0:
            raise ValueError(f"error level must lie in [0, 1), got {self.level}")

    @classmethod
    def parse(cls, token: str) -> ErrorMechanism:
        """Parse ``kind:level``, e.g. ``rm_edges_unif:0.3``."""
        kind, sep, level = token.strip().partition(":")
        if not sep:
            raise ValueError(f"mechanism token {token!r} lacks ':level'")
        try:
            k = ErrorKind(kind)
        except ValueError:
            names = ", ".join(e.value for e in ErrorKind)
            raise ValueError(f"unknown mechanism {kind!r}; expected one of {names}") from None
        try:
            lv = float(level)
        except ValueError:
            raise ValueError(f"bad error level in {token!r}") from None
        return cls(k, lv)

    @property
    def token(self) -> str:
        return f"{self.kind.value}:{self.level:g}"

    def __str__(self) -> str:
        return self.token

    def count(self, g: Graph) -> int:
        """Number of nodes or edges this mechanism touches on ``g``."""
        pop = g.n if self.kind is ErrorKind.REMOVE_NODES else g.m
        return round_half_up(self.level * pop)


@dataclass(frozen=True)
class ImputationMechanism:
    kind: ImputationKind
    k: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ImputationKind(self.kind))
        if self.k < 0:
            raise ValueError("imputation magnitude must be non-negative")


# -- error mechanisms -------------------------------------------------------


def _removal_count(phi: ErrorMechanism, population: int, what: str) -> int:
    k = round_half_up(phi.level * population)
    if k > 0 and k >= population:
        raise InfeasibleError(f"{phi.token} would remove all {population} {what}")
    return k


def weighted_sample_without_replacement(weights: np.ndarray, k: int,
                                        rng: np.random.Generator) -> np.ndarray:
    """Indices of ``k`` items drawn one after another, each with probability
    proportional to its weight among the items still left.

    Uses exponential races: item ``i`` finishes at ``Exp(1) / w_i`` and the
    ``k`` earliest finishers win, which has exactly the sequential-draw law.
    """
    w = np.asarray(weights, dtype=np.float64)
    if k > np.count_nonzero(w > 0):
        raise InfeasibleError("fewer positive-weight items than requested draws")
    with np.errstate(divide="ignore"):
        keys = rng.exponential(size=w.size) / w
    if k == 0:
        return np.empty(0, dtype=np.int64)
    return np.argpartition(keys, k - 1)[:k]


def apply_error(g: Graph, phi: ErrorMechanism, seed: SeedLike = None) -> Graph:
    """Draw one observed graph from ``phi(g)``.

    Raises:
        InfeasibleError: too few non-edges to add, or a removal that would
            empty the graph.
    """
    rng = make_rng(seed)
    kind = phi.kind
    if kind is ErrorKind.REMOVE_NODES:
        k = _removal_count(phi, g.n, "nodes")
        if k == 0:
            return g
        return g.without_nodes(rng.choice(g.n, size=k, replace=False))
    if kind is ErrorKind.ADD_EDGES:
        k = round_half_up(phi.level * g.m)
        if k > g.non_edge_count():
            raise InfeasibleError(f"{phi.token} needs {k} non-edges, graph has {g.non_edge_count()}")
        if k == 0:
            return g
        return g.with_edges(non_edge_sample(g, k, rng))
    k = _removal_count(phi, g.m, "edges")
    if k == 0:
        return g
    if kind is ErrorKind.REMOVE_EDGES_UNIFORM:
        rows = rng.choice(g.m, size=k, replace=False)
    else:
        w = g.degrees[g.edges].sum(axis=1)
        rows = weighted_sample_without_replacement(w, k, rng)
    return g.without_edges(rows)


# -- imputation ---------------------------------------------------------------


def invert_error(phi: ErrorMechanism, observed: Graph) -> ImputationMechanism:
    """The imputation matched to ``phi``, sized from the observed graph.

    If a fraction ``alpha`` went missing, the observed count is ``(1 - alpha)``
    of the hidden one, so ``count * alpha / (1 - alpha)`` items are put back;
    spurious edges make it ``(1 + alpha)`` and ``m * alpha / (1 + alpha)`` are
    taken out.
    """
    a = phi.level
    if phi.kind is ErrorKind.ADD_EDGES:
        return ImputationMechanism(ImputationKind.REMOVE_EDGES,
                                   round_half_up(observed.m * a / (1 + a)))
    if phi.kind is ErrorKind.REMOVE_NODES:
        return ImputationMechanism(ImputationKind.ADD_NODES,
                                   round_half_up(observed.n * a / (1 - a)))
    return ImputationMechanism(ImputationKind.ADD_NON_EDGES,
                               round_half_up(observed.m * a / (1 - a)))


def _fresh_labels(g: Graph, k: int) -> list[str]:
    taken = g.index
    out = []
    i = 0
    while len(out) < k:
        lab = f"imputed-{i}"
        if lab not in taken:
            out.append(lab)
        i += 1
    return out


def _add_degree_sampled_nodes(g: Graph, k: int, rng: np.random.Generator) -> Graph:
    deg = list(g.degrees.tolist())
    new_edges = []
    for _ in range(k):
        cur = len(deg)
        d = 0
        if cur:
            d = deg[rng.integers(cur)]
            while d > cur:
                d = deg[rng.integers(cur)]
        targets = rng.choice(cur, size=d, replace=False) if d else ()
        for t in targets:
            new_edges.append((int(t), cur))
            deg[t] += 1
        deg.append(d)
    edges = np.concatenate([g.edges, np.asarray(new_edges, dtype=np.int64).reshape(-1, 2)])
    return Graph.from_edges(g.n + k, edges, g.labels + tuple(_fresh_labels(g, k)))


def apply_imputation(g: Graph, psi: ImputationMechanism,
                     seed: SeedLike = None) -> Graph:
    """Draw one reconstruction from ``psi(g)``.

    New nodes from degree-sampled imputation take a degree drawn from the
    current degree distribution (earlier new nodes included) and link to that
    many distinct existing nodes chosen uniformly.  They get labels
    ``imputed-<i>`` so they never match a node of another graph.

    Raises:
        InfeasibleError: ``k`` exceeds the available non-edges or edges.
    """
    rng = make_rng(seed)
    k = psi.k
    if k == 0:
        return g
    if psi.kind is ImputationKind.ADD_NON_EDGES:
        if k > g.non_edge_count():
            raise InfeasibleError(f"cannot add {k} edges, only {g.non_edge_count()} non-edges")
        return g.with_edges(non_edge_sample(g, k, rng))
    if psi.kind is ImputationKind.REMOVE_EDGES:
        if k > g.m:
            raise InfeasibleError(f"cannot remove {k} of {g.m} edges")
        return g.without_edges(rng.choice(g.m, size=k, replace=False))
    return _add_degree_sampled_nodes(g, k, rng)
