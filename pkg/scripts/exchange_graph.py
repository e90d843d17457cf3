"""Explore the exchange graph of maximal collections from a starting one and
print its size and degree distribution."""
import argparse
from collections import Counter

from plabic_dimer.collection import build_maximal_collection
from plabic_dimer.moves import exchange_graph

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("k", type=int)
ap.add_argument("n", type=int)
ap.add_argument("--max-nodes", type=int, default=2000)
args = ap.parse_args()

nodes, edges = exchange_graph(build_maximal_collection(args.k, args.n), max_nodes=args.max_nodes)
deg = Counter()
for a, b in edges:
    deg[a] += 1
    deg[b] += 1
print(f"Gr({args.k},{args.n}): {len(nodes)} collections, {len(edges)} exchanges")
for d, c in sorted(Counter(deg[i] for i in range(len(nodes))).items()):
    print(f"  degree {d}: {c}")
