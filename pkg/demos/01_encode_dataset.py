# ENCODING A CAMPAIGN EXPORT ----
#
# Walk through the CSV -> matrix pipeline: parse a semicolon-delimited
# export, one-hot the categoricals, and inspect the 63-column layout.
# Pass a real bank-marketing CSV as argv[1] to run on the full data;
# without one the script fabricates a small valid export first.

import csv
import os
import sys
import tempfile

import numpy as np

from teleboost.data import (CATEGORICAL_LEVELS, LABEL_COLUMN, NUMERIC_COLUMNS, SCHEMA,
                            class_distribution_inverse, load_bank_csv, one_hot_encode)


def fabricate_export(path, n=500, seed=7):
    # numeric fields drawn inside realistic ranges, categories uniform
    rng = np.random.default_rng(seed)
    header = list(NUMERIC_COLUMNS) + [name for name, _ in CATEGORICAL_LEVELS] + [LABEL_COLUMN]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=";", quoting=csv.QUOTE_ALL)
        writer.writerow(header)
        for _ in range(n):
            duration = int(rng.integers(0, 2000))
            numeric = [str(int(rng.integers(18, 90))), str(duration),
                       str(int(rng.integers(1, 12))), "999", "0",
                       f"{rng.uniform(-3.4, 1.4):.1f}", f"{rng.uniform(92.2, 94.8):.3f}",
                       f"{rng.uniform(-50.8, -26.9):.1f}", f"{rng.uniform(0.6, 5.1):.3f}",
                       f"{rng.uniform(4963.6, 5228.1):.1f}"]
            cats = [levels[rng.integers(0, len(levels))] for _, levels in CATEGORICAL_LEVELS]
            label = "yes" if duration > 1400 else "no"
            writer.writerow(numeric + cats + [label])


if len(sys.argv) > 1:
    csv_path = sys.argv[1]
else:
    csv_path = os.path.join(tempfile.gettempdir(), "demo_campaign_export.csv")
    fabricate_export(csv_path)
    print(f"no CSV given, fabricated {csv_path}")

# 1. PARSE ----
raw = load_bank_csv(csv_path)
print(f"parsed {len(raw.labels)} rows: "
      f"{raw.numeric.shape[1]} numeric columns, {raw.categorical.shape[1]} categorical")

# 2. ENCODE ----
data = one_hot_encode(raw)
print(f"encoded matrix: {data.matrix.shape[0]} x {data.matrix.shape[1]}")
print(f"positives: {int(data.labels.sum())}  "
      f"negatives/positives: {class_distribution_inverse(data.labels):.3f}")

# 3. COLUMN LAYOUT ----
# numerics keep their position, each categorical expands to one column per level
print("\nindex  column")
for entry in SCHEMA.entries[:12]:
    print(f"{entry.index:>5}  {entry.name}")
print("  ...")
for entry in SCHEMA.entries[-3:]:
    print(f"{entry.index:>5}  {entry.name}")

# every one-hot group is exactly one-of-k on every row
for source in ("job", "marital", "poutcome"):
    cols = SCHEMA.group(source)
    assert np.all(data.matrix[:, cols].sum(axis=1) == 1.0)
    print(f"group {source!r}: columns {cols[0]}..{cols[-1]}, rows sum to 1")
