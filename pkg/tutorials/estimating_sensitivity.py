"""
Estimating sensitivity from the observed graph
===============================================

In practice only the observed graph is available.  The iterative estimate
perturbs it once more; the imputation estimate tries to repair it.  Here we
keep the hidden graph around to see how close both get.
"""

from netsens import (ErrorMechanism, RngSeed, apply_error, erdos_renyi, imputation_estimates,
                     iterative_estimates, sensitivity, success)
from netsens.centrality import ALL_MEASURES, compute_many

seed = RngSeed(3)
hidden = erdos_renyi(100, 0.2, seed.child(0))
phi = ErrorMechanism.parse("rm_edges_unif:0.3")
observed = apply_error(hidden, phi, seed.child(1))

# the true sensitivity needs the hidden graph
before = compute_many(hidden, ALL_MEASURES)
after = compute_many(observed, ALL_MEASURES)
truth = {m: sensitivity(before[m], after[m]) for m in ALL_MEASURES}

# both estimates see only the observed graph and the mechanism
it = iterative_estimates(observed, phi, ALL_MEASURES, 50, seed.child(2))
imp = imputation_estimates(observed, phi, ALL_MEASURES, 50, seed.child(3))

print(f"{'measure':>12} {'true':>6} {'iter':>6} {'imp':>6}  success(iter, imp)")
for m in ALL_MEASURES:
    s = truth[m]
    print(f"{m.long_name:>12} {s:6.3f} {it[m].value:6.3f} {imp[m].value:6.3f}  "
          f"{success(s, it[m].value)!s:>5} {success(s, imp[m].value)!s:>5}")

# the Monte-Carlo standard error says whether 50 draws were enough
print(f"\nstandard error of the PageRank estimates: iter {it[ALL_MEASURES[-1]].stderr:.4f}, "
      f"imp {imp[ALL_MEASURES[-1]].stderr:.4f}")
