"""Two rounds of adaptivity: degree estimates, then group testing.

Run with: python demos/04_two_round.py
"""

import numpy as np

from ccquery import (
    CcOracle,
    InstanceSpec,
    degree_repetitions,
    estimate_degree,
    generate,
    star_graph,
    two_round_reconstruct,
)

hidden = generate(InstanceSpec("gnm", n=64, m=128, seed=21))
oracle = CcOracle(hidden, mode="batched", max_rounds=2)
stats = {}
report = two_round_reconstruct(oracle, hidden.m, np.random.default_rng(2), stats_out=stats)
print(
    f"gnm(64,128): success={report.success} rounds={report.rounds} "
    f"queries={report.total_queries}"
)
print(
    "round sizes:", oracle.ledger.batch_sizes,
    "| degree-estimate sum:", round(sum(stats["degree_estimates"]), 1),
)

# The estimator alone: a batched probe plan whose answers bracket the degree
# within a factor of four.
print("repetitions per scale at 5% failure:", degree_repetitions(0.05))
star = star_graph(64, 16)
for u, deg in ((0, 16), (1, 1), (20, 0)):
    est = estimate_degree(CcOracle(star, mode="batched"), u, 0.05, np.random.default_rng(u))
    print(f"deg({u})={deg}: estimate {est:.2f}")

# Too small an edge bound trips the degree gate: explicit failure, still two rounds.
tiny = CcOracle(hidden, mode="batched", max_rounds=2)
report = two_round_reconstruct(tiny, 1, np.random.default_rng(3))
print(f"with edge bound 1: success={report.success} rounds={report.rounds} (gate tripped)")
