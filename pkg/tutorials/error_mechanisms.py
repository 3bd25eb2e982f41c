"""
Error mechanisms and their inverses
===================================

Each error mechanism turns a graph into a random observed graph.  The
matching imputation tries to undo the damage using only the observed graph.
"""

from netsens import (ErrorMechanism, RngSeed, apply_error, apply_imputation, erdos_renyi,
                     invert_error)

hidden = erdos_renyi(100, 0.2, RngSeed(1))
print(f"hidden: n={hidden.n} edges={hidden.m}")

for token in ("rm_nodes:0.1", "rm_edges_unif:0.1", "rm_edges_prop:0.1", "add_edges:0.1"):
    phi = ErrorMechanism.parse(token)
    observed = apply_error(hidden, phi, RngSeed(1, (1,)))
    psi = invert_error(phi, observed)
    repaired = apply_imputation(observed, psi, RngSeed(1, (2,)))
    print(f"{token:>18}: observed n={observed.n:3d} m={observed.m:4d} -> "
          f"{psi.kind.value}({psi.k}) -> n={repaired.n:3d} m={repaired.m:4d}")

# proportional removal favours edges between high-degree nodes
phi = ErrorMechanism.parse("rm_edges_prop:0.3")
observed = apply_error(hidden, phi, RngSeed(2))
lost = hidden.edge_set() - observed.edge_set()
deg = dict(zip(hidden.labels, hidden.degrees.tolist()))
mean_lost = sum(deg[u] + deg[v] for u, v in map(tuple, lost)) / len(lost)
mean_all = 2 * sum(deg[u] ** 2 for u in deg) / (2 * hidden.m)
print(f"\nmean endpoint degree sum: removed edges {mean_lost:.1f}, all edges {mean_all:.1f}")
