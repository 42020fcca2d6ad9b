# THE EXPERIMENT REGISTRY AND ITS ANALYSES ----
#
# Ten published search outcomes (A..J) ship as a frozen registry: the GA
# budget that produced each one, the tuned settings, the selected
# columns, and the reported search GMean. This script prints the table,
# mines the feature-selection frequencies, and reruns one entry's
# validation at desk scale on synthetic data (pass a real CSV as
# argv[1] to validate against the published numbers instead).

import sys

import numpy as np

from teleboost.data import SCHEMA, encoded_from_arrays, load_bank_csv, one_hot_encode
from teleboost.experiments import REGISTRY, registry_analysis, reproduce_experiment

# 1. THE TABLE ----
print(f"{'id':>2} {'frac':>5} {'pop':>4} {'xover':>5} {'gens':>4} {'cost':>4} "
      f"{'gmean%':>7} {'#feat':>5}")
for entry in REGISTRY.values():
    print(f"{entry.id:>2} {entry.feature_fraction:>5.2f} {entry.population:>4} "
          f"{entry.crossover_ratio:>5.2f} {entry.generations:>4} {entry.lambda_fn:>4.0f} "
          f"{entry.search_gmean_pct:>7.2f} {entry.feature_count:>5}")

# 2. WHICH COLUMNS KEEP WINNING ----
analysis = registry_analysis()
ever = [i for i, c in analysis.frequencies.items() if c == len(REGISTRY)]
never = [i for i, c in analysis.frequencies.items() if c == 0]
print(f"\nselected in all 10 runs: {[f'{i}:{SCHEMA.name_of(i)}' for i in ever]}")
print(f"never selected: {len(never)} columns, e.g. "
      f"{[f'{i}:{SCHEMA.name_of(i)}' for i in never[:4]]}")

print("\nmost-selected columns (sign: inclusion vs run gmean, rank correlation):")
ranked = sorted(analysis.frequencies, key=lambda i: (-analysis.frequencies[i], i))
for idx in ranked[:8]:
    r = analysis.correlations[idx]
    sign = "n/a" if np.isnan(r) else f"{r:+.2f}"
    print(f"  {idx:>2} {SCHEMA.name_of(idx):<22} {analysis.frequencies[idx]:>2}/10  {sign}")

# 3. RERUN ONE ENTRY'S VALIDATION ----
exp_id = "J"
if len(sys.argv) > 1:
    data = one_hot_encode(load_bank_csv(sys.argv[1]))
    repeats, k = 5, 10
else:
    # stand-in with the right shape; the published gmean needs the real data
    rng = np.random.default_rng(1)
    n = 1200
    y = (rng.random(n) < 0.2).astype(np.int64)
    X = rng.normal(size=(n, 63))
    for col in REGISTRY[exp_id].features:
        X[:, col] += 0.5 * y
    data = encoded_from_arrays(X, y)
    repeats, k = 2, 5
    print(f"\nno CSV given, validating {exp_id} on a {n}-row synthetic stand-in")

report = reproduce_experiment(exp_id, data, repeats=repeats, k=k)
g = report.aggregates["gmean"]
print(f"experiment {exp_id}: {report.model_count} models, "
      f"gmean {g['avg']:.4f} (min {g['min']:.4f}, max {g['max']:.4f})")
print(f"published search gmean: {REGISTRY[exp_id].search_gmean_pct / 100:.4f} "
      "(reachable only on the real dataset)")
