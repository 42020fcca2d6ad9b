# EVALUATION METRICS, ROC AND LIFT ----
#
# One scored test set, every number the validation harness reports:
# thresholded confusion metrics, tie-aware AUC, the lift table a
# campaign planner would read, and the asymmetric cost total.

import numpy as np

from teleboost.gbt import HyperParams, train
from teleboost.metrics import CostSpec, DECILES, compute_report, lift_curve, roc_auc

rng = np.random.default_rng(3)

n = 3000
y = (rng.random(n) < 0.12).astype(np.int64)
X = rng.normal(size=(n, 5))
X[:, 1] += 1.3 * y

model = train(X[:2000], y[:2000], HyperParams(n_estimators=80, max_depth=3,
                                              scale_pos_weight=6.0), seed=0)
scores = model.predict_proba(X[2000:])
y_te = y[2000:]

# 1. THE FULL REPORT ----
# lambda_fn prices a missed positive at 6 false alarms
report = compute_report(y_te, scores, CostSpec(lambda_fn=6.0), threshold=0.5)
c = report.counts
print(f"confusion: tp={c.tp} fp={c.fp} tn={c.tn} fn={c.fn}")
for name, value in report.scalars().items():
    if name not in ("tp", "fp", "tn", "fn"):
        print(f"{name:>10}: {value:.4f}")

# 2. RANKING QUALITY ----
points, auc = roc_auc(y_te, scores)
print(f"\nROC curve: {len(points)} vertices from (0,0) to (1,1), area {auc:.4f}")
# tied scores become diagonal segments, so equal scores get half credit;
# shuffling rows never changes the area
perm = rng.permutation(len(y_te))
_, auc_shuffled = roc_auc(y_te[perm], scores[perm])
assert auc_shuffled == auc

# 3. LIFT TABLE ----
# "call the top decile only" concentrates this many times the base rate
print(f"\n{'fraction':>8} {'lift':>6}")
for frac, lift in lift_curve(y_te, scores, DECILES):
    print(f"{frac:>8.1f} {lift:>6.2f}")
print("(1.0 is always exactly 1: the whole list has the base rate)")
