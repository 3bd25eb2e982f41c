"""Estimating the true sensitivity from the observed graph alone.

Both estimators average ``rho(c(O), c(X))`` over random graphs ``X`` derived
from the observed graph ``O``:

* iterative: ``X`` is a fresh draw of the assumed error mechanism applied to
  ``O`` itself, relying on the network being self-similar under that error;
* imputation: ``X`` is a draw of the imputation that inverts the error
  mechanism, i.e. an attempted reconstruction of the hidden graph.

The expectation is approximated by the plain mean over ``inner_samples``
independent draws.  Draws whose sensitivity is undefined (all pairs tied) are
left out of the mean and counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .centrality import (CentralityError, CentralityMeasure, CentralityVector, Measure,
                         as_measure, compute_many)
from .graph import Graph
from .perturb import ErrorMechanism, apply_error, apply_imputation, invert_error
from .rng import RngSeed, as_seed
from .sensitivity import UndefinedSensitivityError, classify_pairs, classify_signs, pair_signs

DEFAULT_INNER_SAMPLES = 50


@dataclass(frozen=True)
class EstimatorConfig:
    inner_samples: int = DEFAULT_INNER_SAMPLES
    seed: RngSeed = field(default_factory=lambda: as_seed(None))
    measure: CentralityMeasure = field(default_factory=lambda: CentralityMeasure(Measure.DEGREE))

    def __post_init__(self):
        if self.inner_samples < 1:
            raise ValueError("inner_samples must be at least 1")
        object.__setattr__(self, "seed", as_seed(self.seed))
        object.__setattr__(self, "measure", as_measure(self.measure))


@dataclass(frozen=True)
class Estimate:
    """Sample mean of the inner sensitivities with its diagnostics.

    ``value`` and ``stderr`` are ``None`` when no draw was defined.
    """

    value: float | None
    stderr: float | None
    defined: int
    undefined: int

    @classmethod
    def from_draws(cls, draws: list[float], undefined: int) -> Estimate:
        if not draws:
            return cls(None, None, 0, undefined)
        x = np.asarray(draws)
        se = float(x.std(ddof=1) / np.sqrt(x.size)) if x.size > 1 else 0.0
        return cls(float(x.mean()), se, x.size, undefined)


class _Reference:
    """Centrality of the observed graph, with pair orders cached for reuse."""

    def __init__(self, vec: CentralityVector | CentralityError):
        self.vec = vec
        self.signs = None if isinstance(vec, CentralityError) else pair_signs(vec.scores)

    def rho(self, other: CentralityVector | CentralityError) -> float:
        if isinstance(self.vec, CentralityError) or isinstance(other, CentralityError):
            raise UndefinedSensitivityError("centrality undefined on one of the graphs")
        if other.labels is self.vec.labels or other.labels == self.vec.labels:
            pc = classify_signs(self.signs, pair_signs(other.scores), len(other.labels))
        else:
            pc = classify_pairs(self.vec, other)
        untied = pc.concordant + pc.discordant
        if untied == 0:
            raise UndefinedSensitivityError("all pairs are tied")
        return pc.concordant / untied


def _monte_carlo(observed: Graph, draw: Callable[[Graph, RngSeed], Graph],
                 measures: Iterable, inner_samples: int, seed: RngSeed,
                 reference: Mapping[Measure, CentralityVector | CentralityError] | None
                 ) -> dict[Measure, Estimate]:
    cfgs = [as_measure(m) for m in measures]
    if reference is None:
        reference = compute_many(observed, cfgs)
    refs = {c.kind: _Reference(reference[c.kind]) for c in cfgs}
    draws: dict[Measure, list[float]] = {c.kind: [] for c in cfgs}
    undefined = dict.fromkeys(draws, 0)
    for r in range(inner_samples):
        sample = draw(observed, seed.child(r))
        scores = compute_many(sample, cfgs)
        for kind, ref in refs.items():
            try:
                draws[kind].append(ref.rho(scores[kind]))
            except (UndefinedSensitivityError, ValueError):
                undefined[kind] += 1
    return {k: Estimate.from_draws(draws[k], undefined[k]) for k in draws}


def iterative_estimates(observed: Graph, phi: ErrorMechanism, measures: Iterable,
                        inner_samples: int = DEFAULT_INNER_SAMPLES, seed=None,
                        reference=None) -> dict[Measure, Estimate]:
    """Iterative estimates for several measures sharing the same inner draws.

    ``reference`` may carry precomputed centralities of ``observed``.

    Raises:
        InfeasibleError: ``phi`` cannot be applied to ``observed``.
    """
    return _monte_carlo(observed, lambda g, s: apply_error(g, phi, s), measures,
                        inner_samples, as_seed(seed), reference)


def imputation_estimates(observed: Graph, phi: ErrorMechanism, measures: Iterable,
                         inner_samples: int = DEFAULT_INNER_SAMPLES, seed=None,
                         reference=None) -> dict[Measure, Estimate]:
    """Imputation estimates for several measures sharing the same inner draws.

    Raises:
        InfeasibleError: the inverting imputation cannot be applied.
    """
    psi = invert_error(phi, observed)
    return _monte_carlo(observed, lambda g, s: apply_imputation(g, psi, s), measures,
                        inner_samples, as_seed(seed), reference)


def _single(result: dict[Measure, Estimate], cfg: EstimatorConfig) -> float:
    est = result[cfg.measure.kind]
    if est.value is None:
        raise UndefinedSensitivityError(
            f"all {est.undefined} inner draws had undefined sensitivity")
    return est.value


def iterative_estimate(observed: Graph, phi: ErrorMechanism, cfg: EstimatorConfig) -> float:
    """Mean of ``rho(c(O), c(phi(O)))`` over ``cfg.inner_samples`` draws."""
    return _single(iterative_estimates(observed, phi, [cfg.measure], cfg.inner_samples,
                                       cfg.seed), cfg)


def imputation_estimate(observed: Graph, phi: ErrorMechanism, cfg: EstimatorConfig) -> float:
    """Mean of ``rho(c(O), c(psi(O)))`` with ``psi`` the imputation inverting ``phi``."""
    return _single(imputation_estimates(observed, phi, [cfg.measure], cfg.inner_samples,
                                        cfg.seed), cfg)
