"""Lower-bound instance families and their property harnesses.

Run with: python demos/05_lower_bounds.py
"""

import numpy as np

from ccquery import (
    AdaptiveLbAdapter,
    cc_count,
    distinguishing_pairs,
    materialize_lb_instance,
    two_path_pair,
)

# Non-adaptive hardness: fixed query families can only separate the gadget
# pairs they query bare, so each family distinguishes at most |Q| pairs.
n = 64
rng = np.random.default_rng(0)
for q_size in (10, 100, 1000):
    queries = [
        rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist()
        for _ in range(q_size)
    ]
    print(f"|Q|={q_size:5d}: distinguishes {distinguishing_pairs(queries, n):4d} pairs")

g0, g1 = two_path_pair(8, 0, 1)
print("pair query answers:", cc_count(g0, [0, 1]), "vs", cc_count(g1, [0, 1]))
print("any larger set:    ", cc_count(g0, [0, 1, 5]), "vs", cc_count(g1, [0, 1, 5]))

# Adaptive hardness: answering queries on the near-clique family needs the
# hidden array only when a query meets the clique in exactly two vertices.
n0 = 12
m = n0 * (n0 - 1) // 2 - 1
array = [1] * (m + 1)
array[40] = 0
adapter = AdaptiveLbAdapter(array, n0, m)
hidden = materialize_lb_instance(array, n0, m)
mismatches = 0
for _ in range(2000):
    q = rng.choice(n0, size=int(rng.integers(1, n0 + 1)), replace=False).tolist()
    mismatches += adapter.answer(q) != cc_count(hidden, q)
print(f"2000 replayed queries, {mismatches} mismatches, {adapter.probes} array probes")
