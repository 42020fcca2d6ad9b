"""Binary-classification metrics for imbalanced, cost-sensitive problems.

All scalar metrics are derived from hard confusion counts at a fixed
decision threshold. Ranking quality is covered by a tie-aware ROC/AUC
and by lift at configurable list fractions. The type I / type II
convention here is campaign-oriented: type I is the rate of missed
subscribers (1 - TPR), type II the rate of bothered non-subscribers
(1 - TNR).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

DECILES = tuple((i + 1) / 10 for i in range(10))


@dataclass(frozen=True)
class ConfusionCounts:
    """Hard-prediction outcome counts. fn = actual 1 predicted 0."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"confusion count {name} must be a non-negative integer, got {v!r}")

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class CostSpec:
    """Misclassification prices: lambda_fn per missed positive, mu per false alarm."""

    lambda_fn: float
    mu: float = 1.0

    def __post_init__(self):
        if not self.lambda_fn > 0:
            raise ValueError(f"lambda_fn must be positive, got {self.lambda_fn!r}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu!r}")


def _as_binary(values, what):
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    arr = arr.astype(np.int64, copy=False) if arr.dtype != np.int64 else arr
    bad = ~np.isin(arr, (0, 1))
    if bad.any():
        first = int(np.argmax(bad))
        raise ValueError(f"{what} must contain only 0/1, found {values[first]!r} at position {first}")
    return arr


def confusion(y_true, y_pred):
    """Count tp/fp/tn/fn between two equal-length 0/1 vectors."""
    t = _as_binary(y_true, "labels")
    p = _as_binary(y_pred, "predictions")
    if t.size != p.size:
        raise ValueError(f"labels and predictions differ in length: {t.size} vs {p.size}")
    tp = int(np.sum((t == 1) & (p == 1)))
    fp = int(np.sum((t == 0) & (p == 1)))
    tn = int(np.sum((t == 0) & (p == 0)))
    fn = int(np.sum((t == 1) & (p == 0)))
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def accuracy(counts):
    """(tp + tn) / total."""
    if counts.total == 0:
        raise ValueError("accuracy undefined: confusion counts are all zero")
    return (counts.tp + counts.tn) / counts.total


def tpr(counts):
    """Sensitivity tp / (tp + fn)."""
    denom = counts.tp + counts.fn
    if denom == 0:
        raise ValueError("tpr undefined: no actual positives (tp + fn == 0)")
    return counts.tp / denom


def tnr(counts):
    """Specificity tn / (tn + fp)."""
    denom = counts.tn + counts.fp
    if denom == 0:
        raise ValueError("tnr undefined: no actual negatives (tn + fp == 0)")
    return counts.tn / denom


def gmean(counts):
    """Geometric mean of sensitivity and specificity."""
    return math.sqrt(tpr(counts) * tnr(counts))


def type_i(counts):
    """Missed-positive rate fn / (tp + fn), i.e. 1 - TPR."""
    denom = counts.tp + counts.fn
    if denom == 0:
        raise ValueError("type_i undefined: no actual positives (tp + fn == 0)")
    return counts.fn / denom


def type_ii(counts):
    """False-alarm rate fp / (tn + fp), i.e. 1 - TNR."""
    denom = counts.tn + counts.fp
    if denom == 0:
        raise ValueError("type_ii undefined: no actual negatives (tn + fp == 0)")
    return counts.fp / denom


def total_cost(counts, cost):
    """Weighted error price lambda_fn * fn + mu * fp."""
    return cost.lambda_fn * counts.fn + cost.mu * counts.fp


def roc_auc(y_true, scores):
    """ROC points and area for real-valued scores.

    Rows sharing a score form one threshold group, so ties contribute
    diagonal segments (half credit), matching the pairwise-ranking
    statistic exactly. The returned point list is ordered from (0, 0)
    to (1, 1) as (fpr, tpr) pairs.

    Returns:
        (points, auc) where points is a list of (fpr, tpr) floats.
    """
    y = _as_binary(y_true, "labels")
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 1 or s.size != y.size:
        raise ValueError(f"scores must be one-dimensional with length {y.size}, got shape {s.shape}")
    pos = int(y.sum())
    neg = y.size - pos
    if pos == 0 or neg == 0:
        raise ValueError("roc_auc undefined: labels contain a single class")

    order = np.argsort(-s, kind="stable")
    ys = y[order]
    ss = s[order]
    # cumulative counts at the end of each distinct-score group
    ends = np.append(np.nonzero(np.diff(ss))[0], ss.size - 1)
    tp = np.concatenate(([0], np.cumsum(ys)[ends]))
    fp = np.concatenate(([0], (ends + 1) - np.cumsum(ys)[ends]))
    # integer-valued trapezoid numerator; divide once to keep fp error at one rounding
    num = float(np.sum((fp[1:] - fp[:-1]) * (tp[1:] + tp[:-1])))
    auc = num / (2.0 * pos * neg)
    points = [(f / neg, t / pos) for f, t in zip(fp.tolist(), tp.tolist())]
    return points, auc


def lift_curve(y_true, scores, fractions=DECILES):
    """Lift over random targeting at each contacted fraction.

    For fraction s the top ceil(s * n) rows by descending score are
    taken (score ties resolved toward the lower row index), and lift is
    the recall within that slice divided by s. At s = 1.0 the slice is
    the whole set, so lift is exactly 1.0.

    Returns:
        list of (fraction, lift) pairs in the order given.
    """
    y = _as_binary(y_true, "labels")
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 1 or s.size != y.size:
        raise ValueError(f"scores must be one-dimensional with length {y.size}, got shape {s.shape}")
    if y.size == 0:
        raise ValueError("lift_curve undefined: empty inputs")
    pos = int(y.sum())
    if pos == 0:
        raise ValueError("lift_curve undefined: no positive labels")

    order = np.lexsort((np.arange(y.size), -s))
    captured = np.cumsum(y[order])
    points = []
    for frac in fractions:
        if not 0.0 < frac <= 1.0:
            raise ValueError(f"lift fraction must lie in (0, 1], got {frac!r}")
        top = math.ceil(frac * y.size)
        recall_at_top = captured[top - 1] / pos
        points.append((float(frac), float(recall_at_top / frac)))
    return points


def spearman_rank_corr(x, y):
    """Spearman correlation via Pearson on average ranks.

    Returns nan (the explicit undefined marker) when either input is
    constant, since rank variance is zero there; callers must treat nan
    as "no ordering information", never as zero correlation.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1 or xa.size != ya.size:
        raise ValueError(f"spearman inputs must be equal-length vectors, got {xa.shape} and {ya.shape}")
    if xa.size < 2:
        raise ValueError("spearman undefined: need at least two observations")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        return math.nan
    rx = rankdata(xa)
    ry = rankdata(ya)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    return float(np.dot(rx, ry) / math.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))


@dataclass
class MetricsReport:
    """Full evaluation of one labeled, scored set at a fixed threshold."""

    counts: ConfusionCounts
    accuracy: float
    tpr: float
    tnr: float
    gmean: float
    type_i: float
    type_ii: float
    auc: float
    total_cost: float
    roc_points: list = field(repr=False)
    lift_points: list = field(repr=False)

    def scalars(self):
        """Flat name -> value view of counts and scalar metrics."""
        out = {"tp": self.counts.tp, "fp": self.counts.fp, "tn": self.counts.tn, "fn": self.counts.fn}
        for name in ("accuracy", "tpr", "tnr", "gmean", "type_i", "type_ii", "auc", "total_cost"):
            out[name] = getattr(self, name)
        return out


def compute_report(y_true, scores, cost, threshold=0.5, fractions=DECILES):
    """Score a labeled set: thresholded confusion metrics plus ranking metrics."""
    s = np.asarray(scores, dtype=np.float64)
    preds = (s >= threshold).astype(np.int64)
    counts = confusion(y_true, preds)
    roc_points, auc = roc_auc(y_true, s)
    return MetricsReport(
        counts=counts,
        accuracy=accuracy(counts),
        tpr=tpr(counts),
        tnr=tnr(counts),
        gmean=gmean(counts),
        type_i=type_i(counts),
        type_ii=type_ii(counts),
        auc=auc,
        total_cost=total_cost(counts, cost),
        roc_points=roc_points,
        lift_points=lift_curve(y_true, s, fractions),
    )


def write_report_text(report, path, delimiter="\t"):
    # one metric per line: name <delim> value
    with open(path, "w") as fh:
        for name, value in report.scalars().items():
            fh.write(f"{name}{delimiter}{value!r}\n")


def write_report_json(report, path):
    import json

    payload = report.scalars()
    payload["roc_points"] = report.roc_points
    payload["lift_points"] = report.lift_points
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_roc_points(points, path, delimiter="\t"):
    with open(path, "w") as fh:
        fh.write(f"fpr{delimiter}tpr\n")
        for fpr_v, tpr_v in points:
            fh.write(f"{fpr_v!r}{delimiter}{tpr_v!r}\n")


def write_lift_points(points, path, delimiter="\t"):
    with open(path, "w") as fh:
        fh.write(f"fraction{delimiter}lift\n")
        for frac, lift in points:
            fh.write(f"{frac!r}{delimiter}{lift!r}\n")
