"""
Five centrality measures on one graph
======================================

Computes betweenness, closeness, degree, eigenvector and PageRank centrality
on a preferential-attachment graph and shows how much the rankings agree.
"""

from netsens import RngSeed, barabasi_albert, sensitivity
from netsens.centrality import ALL_MEASURES, compute_many

g = barabasi_albert(100, 3, RngSeed(7))
print(f"graph: n={g.n} edges={g.m}")

scores = compute_many(g, ALL_MEASURES)
for measure, vec in scores.items():
    top = sorted(vec.as_dict().items(), key=lambda kv: -kv[1])[:5]
    print(f"{measure.long_name:>12}: top nodes {[lab for lab, _ in top]}")

# pairwise agreement of the rankings; early nodes dominate all of them
print()
names = [m.value for m in ALL_MEASURES]
print("      " + "  ".join(f"{n:>5}" for n in names))
for a in ALL_MEASURES:
    row = [sensitivity(scores[a], scores[b]) for b in ALL_MEASURES]
    print(f"{a.value:>5} " + "  ".join(f"{v:5.3f}" for v in row))
