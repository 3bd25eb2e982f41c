"""How far can a centrality ranking be trusted when the network was measured with errors?

The package perturbs graphs with measurement-error mechanisms, scores the
agreement of two centrality rankings by their concordant-pair share (the
*sensitivity*), and estimates the sensitivity of an observed network towards
its unknown error-free original.

Typical use::

    from netsens import (ErrorMechanism, apply_error, centrality, erdos_renyi,
                         iterative_estimates, sensitivity)

    hidden = erdos_renyi(100, 0.2, seed=1)
    phi = ErrorMechanism.parse("rm_edges_unif:0.3")
    observed = apply_error(hidden, phi, seed=2)
    s = sensitivity(centrality.pagerank(hidden), centrality.pagerank(observed))
    s_hat = iterative_estimates(observed, phi, ["pr"], seed=3)
"""

from . import centrality
from .centrality import CentralityMeasure, CentralityVector, Measure
from .estimators import (EstimatorConfig, imputation_estimate, imputation_estimates,
                         iterative_estimate, iterative_estimates)
from .evaluation import (ExperimentSpec, aggregate, load_preset, run_experiment, success,
                         weighted_error)
from .graph import (Graph, barabasi_albert, erdos_renyi, from_edge_list,
                    largest_connected_component, non_edge_sample, read_edge_list,
                    to_edge_list, write_edge_list)
from .perturb import (ErrorMechanism, ImputationMechanism, InfeasibleError, apply_error,
                      apply_imputation, invert_error)
from .rng import RngSeed
from .sensitivity import (PairClassification, UndefinedSensitivityError, classify_pairs, gamma,
                          sensitivity)

__version__ = "0.1.0"
