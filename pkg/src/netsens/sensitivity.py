"""Concordance-based sensitivity between two centrality rankings.

For two score vectors over (partly) shared nodes, every unordered pair of
shared nodes is concordant, discordant or tied.  The sensitivity is the share
of concordant pairs among the untied ones,

    rho = n_c / (n_c + n_d) = (gamma + 1) / 2,

with ``gamma`` Goodman and Kruskal's rank correlation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .centrality import TIE_RTOL, CentralityVector
from .graph import upper_pairs


class UndefinedSensitivityError(ValueError):
    """Every compared pair is tied in at least one ranking."""


@dataclass(frozen=True)
class PairClassification:
    concordant: int
    discordant: int
    ties: int
    compared_nodes: int

    def __post_init__(self):
        if self.concordant + self.discordant + self.ties != comb(self.compared_nodes, 2):
            raise ValueError("pair counts do not add up to C(compared_nodes, 2)")


def _scores(v) -> tuple[np.ndarray, tuple]:
    if isinstance(v, CentralityVector):
        return v.scores, v.labels
    x = np.asarray(v, dtype=np.float64)
    return x, tuple(range(x.size))


def align(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Scores of ``a`` and ``b`` restricted to their common labels, in ``a``'s order.

    Plain sequences are treated as vectors over positions ``0..len-1``.
    """
    xa, la = _scores(a)
    xb, lb = _scores(b)
    if la is lb or la == lb:
        return xa, xb
    pos_b = {lab: i for i, lab in enumerate(lb)}
    ia, ib = [], []
    for i, lab in enumerate(la):
        j = pos_b.get(lab)
        if j is not None:
            ia.append(i)
            ib.append(j)
    return xa[ia], xb[ib]


def pair_signs(x: np.ndarray) -> np.ndarray:
    """Order of every pair ``i < j`` as -1/0/+1, flattened upper triangle.

    Scores within :data:`TIE_RTOL` (relative) of each other count as tied.
    """
    x = np.asarray(x, dtype=np.float64)
    iu, ju = upper_pairs(x.size)
    xi, xj = x[iu], x[ju]
    diff = xj - xi
    tol = TIE_RTOL * np.maximum(np.abs(xi), np.abs(xj))
    return (diff > tol).view(np.int8) - (diff < -tol).view(np.int8)


def classify_signs(sa: np.ndarray, sb: np.ndarray, nodes: int) -> PairClassification:
    prod = sa.astype(np.int16) * sb
    nc = int(np.count_nonzero(prod > 0))
    nd = int(np.count_nonzero(prod < 0))
    return PairClassification(nc, nd, prod.size - nc - nd, nodes)


def classify_pairs(a, b) -> PairClassification:
    """Count concordant, discordant and tied pairs over the nodes both vectors score.

    Raises:
        ValueError: fewer than two common nodes.
    """
    xa, xb = align(a, b)
    if xa.size < 2:
        raise ValueError(f"need at least 2 common nodes, got {xa.size}")
    return classify_signs(pair_signs(xa), pair_signs(xb), xa.size)


def gamma(pc: PairClassification) -> float:
    """Goodman-Kruskal gamma, ``(n_c - n_d) / (n_c + n_d)``."""
    untied = pc.concordant + pc.discordant
    if untied == 0:
        raise UndefinedSensitivityError("all pairs are tied")
    return (pc.concordant - pc.discordant) / untied


def rho(pc: PairClassification) -> float:
    untied = pc.concordant + pc.discordant
    if untied == 0:
        raise UndefinedSensitivityError("all pairs are tied")
    return pc.concordant / untied


def sensitivity(a, b) -> float:
    """Probability that a random untied pair is ordered the same way by ``a`` and ``b``."""
    return rho(classify_pairs(a, b))
