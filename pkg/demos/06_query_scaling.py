"""Query-count scaling sweep with CSV output.

Run with: python demos/06_query_scaling.py
"""

import math
import tempfile
from pathlib import Path

from ccquery import ExperimentConfig, run_experiment

out = Path(tempfile.gettempdir()) / "ccquery_scaling.csv"
rows = []
for n in (64, 128, 256):
    cfg = ExperimentConfig(
        algorithm="adaptive", family="gnm", n=n, m=4 * n, trials=5, seed=1,
        csv_path=str(out),
    )
    reports = run_experiment(cfg)
    mean_q = sum(r.total_queries for r in reports) / len(reports)
    rows.append((n, mean_q, mean_q / (4 * n * math.log2(n))))

print(f"{'n':>6} {'mean queries':>14} {'per m*log2(n)':>14}")
for n, mean_q, ratio in rows:
    print(f"{n:>6} {mean_q:>14.0f} {ratio:>14.2f}")
print(f"last sweep's CSV written to {out}")
print(out.read_text().splitlines()[0])
