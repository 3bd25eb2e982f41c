"""
Ranking sensitivity on a five-node graph
=========================================

A hidden graph loses half of its edges.  How well does the degree ranking of
what we observe agree with the ranking we would have seen without errors?
"""

from itertools import combinations

import numpy as np

from netsens import Graph, classify_pairs
from netsens.centrality import degree
from netsens.sensitivity import rho

# a star-like graph: c is the hub, a hangs off b
hidden = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (2, 4)], labels=list("abcde"))
print("hidden degrees:", degree(hidden).as_dict())

# drop the two pendant edges of c; d and e stay in the graph as isolated nodes
observed = hidden.without_edges([2, 3])
pc = classify_pairs(degree(hidden), degree(observed))
print(f"concordant={pc.concordant} discordant={pc.discordant} ties={pc.ties}")
print(f"sensitivity = {rho(pc):.4f}")

# every way of losing two of the four edges is equally likely, so the
# expected sensitivity is a plain average over the six outcomes
values = []
for drop in combinations(range(hidden.m), 2):
    o = hidden.without_edges(list(drop))
    values.append(rho(classify_pairs(degree(hidden), degree(o))))
    kept = sorted("".join(sorted(e)) for e in o.edge_set())
    print(f"  kept {kept}: {values[-1]:.3f}")
print(f"expected sensitivity over all outcomes: {np.mean(values):.4f}")
