"""Stratified resampling and repeated cross-validation with aggregation.

Fold dealing: within each class the rows are shuffled by the seed,
classes are concatenated (positives first), and the whole sequence is
dealt round-robin to folds with one continuing cursor. That makes both
balance invariants true by construction: fold sizes differ by at most
one, and per-fold class counts differ by at most one.
"""

import json
import time
from dataclasses import dataclass, asdict

import numpy as np

from . import gbt
from .metrics import DECILES, CostSpec, compute_report

AGGREGATE_METRICS = ("accuracy", "tpr", "tnr", "gmean", "type_i", "type_ii",
                     "auc", "total_cost", "train_seconds", "test_seconds")


@dataclass(frozen=True)
class FoldAssignment:
    fold_of_row: np.ndarray  # (n,) int64, values in [0, k)
    k: int
    seed: int

    def test_rows(self, fold):
        return np.nonzero(self.fold_of_row == fold)[0]

    def train_rows(self, fold):
        return np.nonzero(self.fold_of_row != fold)[0]


def child_seed(*parts):
    """Collapse an integer path like (seed, repeat, fold) into one derived seed.

    The path length is folded into the entropy because SeedSequence pads
    with zeros: without it (s, 0) and (s, 0, 0) would alias.
    """
    ints = [int(p) for p in parts]
    ss = np.random.SeedSequence(entropy=[len(ints), *ints])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stratified_kfold(labels, k, seed):
    """Deterministic stratified fold assignment.

    A class with fewer than k rows is legal; some folds then see none of
    it. Callers that need both classes in every fold must check the
    assignment (repeated_cv does).
    """
    y = np.asarray(labels)
    n = y.size
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must contain only 0/1")
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of rows ({n})")

    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed)))
    chunks = [rng.permutation(np.nonzero(y == cls)[0]) for cls in (1, 0)]
    sequence = np.concatenate(chunks)
    fold_of_row = np.empty(n, dtype=np.int64)
    fold_of_row[sequence] = np.arange(n, dtype=np.int64) % k
    return FoldAssignment(fold_of_row=fold_of_row, k=int(k), seed=int(seed))


def stratified_holdout(labels, fraction, seed):
    """Single stratified split; returns (train_rows, held_out_rows), both ascending.

    Each class contributes round(fraction * class_size) rows to the
    held-out side, clamped so both sides keep at least one row of it.
    """
    y = np.asarray(labels)
    if not 0 < fraction < 1:
        raise ValueError(f"holdout fraction must lie in (0, 1), got {fraction!r}")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(101,)))
    held = []
    kept = []
    for cls in (1, 0):
        ids = np.nonzero(y == cls)[0]
        if ids.size < 2:
            raise ValueError(f"class {cls} has {ids.size} rows; cannot split it across both sides")
        m = int(round(fraction * ids.size))
        m = min(max(m, 1), ids.size - 1)
        shuffled = rng.permutation(ids)
        held.append(shuffled[:m])
        kept.append(shuffled[m:])
    return np.sort(np.concatenate(kept)), np.sort(np.concatenate(held))


def stratified_subsample(labels, n_rows, seed):
    """Ascending row indices of a class-proportional subsample of size n_rows."""
    y = np.asarray(labels)
    n = y.size
    if not 1 <= n_rows <= n:
        raise ValueError(f"n_rows must lie in [1, {n}], got {n_rows!r}")
    pos_ids = np.nonzero(y == 1)[0]
    neg_ids = np.nonzero(y == 0)[0]
    m_pos = int(round(n_rows * pos_ids.size / n))
    m_pos = min(max(m_pos, 1 if pos_ids.size else 0), pos_ids.size, n_rows)
    m_neg = n_rows - m_pos
    if m_neg > neg_ids.size:
        m_neg = neg_ids.size
        m_pos = n_rows - m_neg
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(102,)))
    take = []
    if m_pos:
        take.append(rng.choice(pos_ids, size=m_pos, replace=False))
    if m_neg:
        take.append(rng.choice(neg_ids, size=m_neg, replace=False))
    return np.sort(np.concatenate(take))


@dataclass
class ModelEval:
    """One trained/evaluated model inside a repeated-CV run."""

    repeat: int
    fold: int
    counts: "ConfusionCounts"
    report: "MetricsReport"
    train_seconds: float
    test_seconds: float

    def value_of(self, name):
        if name == "train_seconds":
            return self.train_seconds
        if name == "test_seconds":
            return self.test_seconds
        return getattr(self.report, name)


@dataclass
class CvReport:
    k: int
    repeats: int
    seed: int
    params: gbt.HyperParams
    features: list
    per_model: list
    aggregates: dict

    @property
    def model_count(self):
        return len(self.per_model)


def aggregate_evals(per_model):
    """min/avg/max/sample-SD per metric over the per-model rows, in row order."""
    out = {}
    for name in AGGREGATE_METRICS:
        values = np.array([ev.value_of(name) for ev in per_model], dtype=np.float64)
        out[name] = {
            "min": float(values.min()),
            "avg": float(values.mean()),
            "max": float(values.max()),
            "sd": float(values.std(ddof=1)) if values.size > 1 else 0.0,
        }
    return out


def repeated_cv(data, features, params, k=10, repeats=5, seed=723, fractions=DECILES):
    """Repeats x k-fold stratified CV of one fixed configuration.

    Folds for repeat r derive from (seed, r); the model for (r, fold)
    trains with seed (seed, r, fold) on the other k-1 folds and is
    scored on the held-out fold at threshold 0.5. total_cost uses
    lambda = params.scale_pos_weight, mu = 1.

    Args:
        data: EncodedDataset (or anything with .matrix/.labels).
        features: encoded column indices the model may use.
    """
    feats = _check_features(features, data.matrix.shape[1])
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats!r}")
    X = np.ascontiguousarray(data.matrix[:, feats])
    y = np.asarray(data.labels)
    cost = CostSpec(lambda_fn=params.scale_pos_weight)

    per_model = []
    for r in range(repeats):
        folds = stratified_kfold(y, k, child_seed(seed, r))
        for fold in range(k):
            test_rows = folds.test_rows(fold)
            train_rows = folds.train_rows(fold)
            for side, rows in (("test", test_rows), ("training", train_rows)):
                if len(np.unique(y[rows])) < 2:
                    raise ValueError(f"repeat {r} fold {fold}: {side} rows lack one class")
            t0 = time.perf_counter()
            model = gbt.train(X[train_rows], y[train_rows], params, seed=child_seed(seed, r, fold))
            t1 = time.perf_counter()
            scores = model.predict_proba(X[test_rows])
            t2 = time.perf_counter()
            report = compute_report(y[test_rows], scores, cost, threshold=0.5, fractions=fractions)
            per_model.append(ModelEval(repeat=r, fold=fold, counts=report.counts, report=report,
                                       train_seconds=t1 - t0, test_seconds=t2 - t1))
    return CvReport(k=int(k), repeats=int(repeats), seed=int(seed), params=params,
                    features=[int(f) for f in feats], per_model=per_model,
                    aggregates=aggregate_evals(per_model))


def _check_features(features, width):
    feats = sorted(int(f) for f in features)
    if not feats:
        raise ValueError("features list is empty")
    if len(set(feats)) != len(feats):
        raise ValueError(f"features contain duplicates: {feats}")
    if feats[0] < 0 or feats[-1] >= width:
        raise ValueError(f"feature indices must lie in [0, {width}), got {feats}")
    return feats


def write_cv_rows(report, path, delimiter="\t"):
    """One delimited row per trained model: counts, scalar metrics, decile lifts, times."""
    lift_names = [f"lift_{frac:g}" for frac, _ in report.per_model[0].report.lift_points]
    header = ["repeat", "fold", "tp", "fp", "tn", "fn",
              "accuracy", "tpr", "tnr", "gmean", "type_i", "type_ii", "auc", "total_cost",
              *lift_names, "train_seconds", "test_seconds"]
    with open(path, "w") as fh:
        fh.write(delimiter.join(header) + "\n")
        for ev in report.per_model:
            s = ev.report.scalars()
            row = [ev.repeat, ev.fold, s["tp"], s["fp"], s["tn"], s["fn"],
                   s["accuracy"], s["tpr"], s["tnr"], s["gmean"], s["type_i"], s["type_ii"],
                   s["auc"], s["total_cost"],
                   *[lift for _, lift in ev.report.lift_points],
                   ev.train_seconds, ev.test_seconds]
            fh.write(delimiter.join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def write_cv_summary(report, path, extra=None):
    payload = {
        "k": report.k,
        "repeats": report.repeats,
        "seed": report.seed,
        "model_count": report.model_count,
        "params": asdict(report.params),
        "features": report.features,
        "aggregates": report.aggregates,
    }
    if extra:
        payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
