"""The query subroutines: predicates, forest recovery, halving search.

Run with: python demos/02_primitives_tour.py
"""

import numpy as np

from ccquery import (
    CcOracle,
    InstanceSpec,
    binary_search_reconstruct,
    find_adjacent_to_set,
    find_high_degree,
    generate,
    has_cross_edge,
    has_neighbor,
    reconstruct_forest,
    star_graph,
)

forest = generate(InstanceSpec("forest", n=40, m=32, seed=3))
oracle = CcOracle(forest)

# Neighbor predicates cost two queries (four for set-vs-set).
print("0 has neighbor in {1..10}:", has_neighbor(oracle, 0, range(1, 11)))
print("cross edge {0..4}x{5..12}:", has_cross_edge(oracle, range(5), range(5, 13)))

# Forests reconstruct through the components/edges identity.
found = reconstruct_forest(oracle, range(40), known=set())
print(f"forest recovered exactly: {found == forest.edges} ({oracle.ledger.total_queries} queries)")

# Partial knowledge shrinks the budget: only unknown edges are paid for.
half = set(sorted(forest.edges)[:16])
oracle = CcOracle(forest)
rest = reconstruct_forest(oracle, range(40), known=half)
print(f"other half recovered: {rest == forest.edges - half} ({oracle.ledger.total_queries} queries)")

# The halving search reconstructs arbitrary graphs exactly.
dense = generate(InstanceSpec("gnm", n=48, m=100, seed=5))
oracle = CcOracle(dense)
edges = binary_search_reconstruct(oracle, range(48), set())
print(f"halving search exact: {edges == set(dense.edges)} ({oracle.ledger.total_queries} queries)")

# High-degree detection votes over random low-rate samples.
star = star_graph(64, 63)
oracle = CcOracle(star)
hubs = find_high_degree(oracle, m=63, t=10, delta=0.1, rng=np.random.default_rng(1))
print("detected hubs of the star:", hubs)
print("neighbors of the hub set:", len(find_adjacent_to_set(oracle, hubs)))
