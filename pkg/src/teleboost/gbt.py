"""Cost-weighted gradient-boosted trees for binary logistic loss.

Second-order boosting: each round fits a regression tree to the
gradient/hessian of the weighted logistic loss at the current margin,
using exact greedy split search over midpoint thresholds. Positive rows
carry weight scale_pos_weight, folded into both gradient and hessian,
which makes an integer weight k behave exactly like physically
repeating each positive row k times.

Determinism contract: everything is a pure function of (data, params,
seed). Per-tree randomness (row/column subsampling) derives from
(seed, tree_index) only, so retraining reproduces the same model
bit for bit.
"""

import math
import statistics
import time
from dataclasses import dataclass, fields

import numpy as np
from scipy.special import expit


@dataclass(frozen=True)
class HyperParams:
    """Trainer knobs. reg_lambda is the leaf L2 term; scale_pos_weight the positive-class weight."""

    learning_rate: float = 0.3
    n_estimators: int = 100
    max_depth: int = 6
    min_child_weight: float = 1.0
    gamma: float = 0.0
    subsample: float = 1.0
    colsample_bytree: float = 1.0
    scale_pos_weight: float = 1.0
    reg_lambda: float = 1.0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate!r}")
        if not isinstance(self.n_estimators, (int, np.integer)) or self.n_estimators < 1:
            raise ValueError(f"n_estimators must be a positive integer, got {self.n_estimators!r}")
        if not isinstance(self.max_depth, (int, np.integer)) or self.max_depth < 1:
            raise ValueError(f"max_depth must be a positive integer, got {self.max_depth!r}")
        if self.min_child_weight < 0:
            raise ValueError(f"min_child_weight must be non-negative, got {self.min_child_weight!r}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma!r}")
        if not 0 < self.subsample <= 1:
            raise ValueError(f"subsample must lie in (0, 1], got {self.subsample!r}")
        if not 0 < self.colsample_bytree <= 1:
            raise ValueError(f"colsample_bytree must lie in (0, 1], got {self.colsample_bytree!r}")
        if not self.scale_pos_weight > 0:
            raise ValueError(f"scale_pos_weight must be positive, got {self.scale_pos_weight!r}")
        if self.reg_lambda < 0:
            raise ValueError(f"reg_lambda must be non-negative, got {self.reg_lambda!r}")


@dataclass
class TreeNode:
    """Internal node (feature/threshold/children) or leaf (weight)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    weight: float | None = None

    @property
    def is_leaf(self):
        return self.weight is not None


@dataclass
class GbtModel:
    trees: list
    params: HyperParams
    seed: int
    feature_count: int
    base_score_logit: float = 0.0

    def predict_margin(self, X):
        X = _as_matrix(X, self.feature_count)
        margin = np.full(X.shape[0], self.base_score_logit, dtype=np.float64)
        idx = np.arange(X.shape[0])
        out = np.empty(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            _route(tree, lambda f: X[:, f], idx, out)
            margin += self.params.learning_rate * out
        return margin

    def predict_proba(self, row_or_matrix):
        """Positive-class probability; a single row gives a float, a matrix a vector."""
        arr = np.asarray(row_or_matrix, dtype=np.float64)
        if arr.ndim == 1:
            return float(expit(self.predict_margin(arr[None, :]))[0])
        return expit(self.predict_margin(arr))

    def predict_label(self, row_or_matrix, threshold=0.5):
        proba = self.predict_proba(row_or_matrix)
        if np.isscalar(proba):
            return int(proba >= threshold)
        return (proba >= threshold).astype(np.int64)

    def node_count(self):
        return sum(_count_nodes(t) for t in self.trees)


def _as_matrix(X, feature_count):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    if X.shape[1] != feature_count:
        raise ValueError(f"row width {X.shape[1]} does not match model feature_count {feature_count}")
    return X


def _count_nodes(node):
    if node.is_leaf:
        return 1
    return 1 + _count_nodes(node.left) + _count_nodes(node.right)


def _route(node, column, idx, out):
    # writes each row's leaf weight into out[idx]
    if node.is_leaf:
        out[idx] = node.weight
        return
    mask = column(node.feature)[idx] < node.threshold
    _route(node.left, column, idx[mask], out)
    _route(node.right, column, idx[~mask], out)


def _tree_rng(seed, tree_index):
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(tree_index,)))


def train(X, y, params, seed=0):
    """Fit n_estimators trees by exact greedy second-order boosting.

    Args:
        X: (n, f) float matrix.
        y: length-n 0/1 labels.
        params: HyperParams; scale_pos_weight multiplies gradient and
            hessian of every positive row.
        seed: non-negative int; per-tree sampling streams derive from
            (seed, tree_index).

    Returns:
        GbtModel. Always runs the full n_estimators rounds.
    """
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if not np.isfinite(X).all():
        bad = np.argwhere(~np.isfinite(X))[0]
        raise ValueError(f"X contains a non-finite value at row {bad[0]}, column {bad[1]}")
    y = np.asarray(y)
    if y.shape != (X.shape[0],):
        raise ValueError(f"y length {y.shape} does not match X rows {X.shape[0]}")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("y must contain only 0/1")
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    n, f = X.shape
    if n == 0:
        raise ValueError("cannot train on an empty matrix")

    y64 = y.astype(np.float64)
    w = np.where(y == 1, params.scale_pos_weight, 1.0)
    n_rows = int(math.floor(params.subsample * n))
    if n_rows < 1:
        raise ValueError(f"subsample {params.subsample} keeps zero of {n} rows")
    n_cols = int(math.ceil(params.colsample_bytree * f))

    margin = np.zeros(n, dtype=np.float64)
    scratch = np.empty(n, dtype=np.float64)
    all_idx = np.arange(n)
    trees = []
    for t in range(params.n_estimators):
        p = expit(margin)
        g = (p - y64) * w
        h = p * (1.0 - p) * w
        rng = _tree_rng(int(seed), t)
        rows = all_idx if n_rows == n else np.sort(rng.choice(n, size=n_rows, replace=False))
        cols = np.arange(f) if n_cols == f else np.sort(rng.choice(f, size=n_cols, replace=False))
        tree = _grow_tree(X, g, h, rows, cols, params, n)
        trees.append(tree)
        _route(tree, lambda c: X[:, c], all_idx, scratch)
        margin += params.learning_rate * scratch
    return GbtModel(trees=trees, params=params, seed=int(seed), feature_count=f)


def _grow_tree(X, g, h, rows, cols, params, n_total):
    columns = {int(c): np.ascontiguousarray(X[:, c]) for c in cols}
    # one sort per column per tree; children partition these lists instead of re-sorting
    sorted_ids = [rows[np.argsort(columns[int(c)][rows], kind="stable")] for c in cols]
    return _build(columns, g, h, rows, sorted_ids, [int(c) for c in cols], params, 0, n_total)


def _build(columns, g, h, rows, sorted_ids, cols, params, depth, n_total):
    if depth >= params.max_depth or rows.size < 2:
        return _leaf(g, h, rows, params)
    best = _best_split(columns, g, h, sorted_ids, cols, params)
    if best is None:
        return _leaf(g, h, rows, params)
    feature, threshold = best
    goes_left = columns[feature][rows] < threshold
    is_left = np.zeros(n_total, dtype=bool)
    is_left[rows] = goes_left
    rows_left = rows[goes_left]
    rows_right = rows[~goes_left]
    left_ids = [sid[is_left[sid]] for sid in sorted_ids]
    right_ids = [sid[~is_left[sid]] for sid in sorted_ids]
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_build(columns, g, h, rows_left, left_ids, cols, params, depth + 1, n_total),
        right=_build(columns, g, h, rows_right, right_ids, cols, params, depth + 1, n_total),
    )


def _leaf(g, h, rows, params):
    # rows stay in ascending order, so this sum is reproducible from the routed rows
    g_sum = float(np.sum(g[rows]))
    h_sum = float(np.sum(h[rows]))
    return TreeNode(weight=-g_sum / (h_sum + params.reg_lambda))


def _best_split(columns, g, h, sorted_ids, cols, params):
    """Exact greedy scan; ties prefer the lowest feature index, then lowest threshold."""
    lam = params.reg_lambda
    best_gain = 0.0  # a usable split must beat zero
    best = None
    for ci, c in enumerate(cols):
        sid = sorted_ids[ci]
        vals = columns[c][sid]
        gl = np.cumsum(g[sid])
        hl = np.cumsum(h[sid])
        g_tot = gl[-1]
        h_tot = hl[-1]
        cuts = np.nonzero(vals[1:] > vals[:-1])[0]  # thresholds sit between distinct values
        if cuts.size == 0:
            continue
        G_l = gl[cuts]
        H_l = hl[cuts]
        G_r = g_tot - G_l
        H_r = h_tot - H_l
        feasible = (H_l >= params.min_child_weight) & (H_r >= params.min_child_weight)
        if not feasible.any():
            continue
        gains = 0.5 * (G_l * G_l / (H_l + lam) + G_r * G_r / (H_r + lam)
                       - g_tot * g_tot / (h_tot + lam)) - params.gamma
        gains[~feasible] = -np.inf
        k = int(np.argmax(gains))  # first maximum = lowest threshold
        if gains[k] > best_gain:
            best_gain = float(gains[k])
            i = int(cuts[k])
            best = (c, float((vals[i] + vals[i + 1]) / 2.0))
    return best


MODEL_FORMAT_TAG = "teleboost-gbt v1"


def save_model(model, path):
    """Write a self-describing text dump; floats use repr so reload is exact."""
    lines = [MODEL_FORMAT_TAG]
    for fld in fields(HyperParams):
        lines.append(f"param {fld.name} {getattr(model.params, fld.name)!r}")
    lines.append(f"seed {model.seed}")
    lines.append(f"feature_count {model.feature_count}")
    lines.append(f"base_score_logit {model.base_score_logit!r}")
    lines.append(f"n_trees {len(model.trees)}")
    for t, tree in enumerate(model.trees):
        nodes = []
        _flatten(tree, nodes)
        ids = {id(node): node_id for node_id, node in enumerate(nodes)}
        lines.append(f"tree {t} nodes {len(nodes)}")
        for node_id, node in enumerate(nodes):
            if node.is_leaf:
                lines.append(f"{node_id} leaf {node.weight!r}")
            else:
                lines.append(f"{node_id} split {node.feature} {node.threshold!r} "
                             f"{ids[id(node.left)]} {ids[id(node.right)]}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _flatten(node, acc):
    acc.append(node)
    if not node.is_leaf:
        _flatten(node.left, acc)
        _flatten(node.right, acc)


def load_model(path):
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != MODEL_FORMAT_TAG:
        raise ValueError(f"{path}: not a recognized model file")
    int_fields = {"n_estimators", "max_depth"}
    params_kw = {}
    pos = 1
    while lines[pos].startswith("param "):
        _, name, value = lines[pos].split(" ", 2)
        params_kw[name] = int(value) if name in int_fields else float(value)
        pos += 1
    seed = int(lines[pos].split()[1]); pos += 1
    feature_count = int(lines[pos].split()[1]); pos += 1
    base = float(lines[pos].split()[1]); pos += 1
    n_trees = int(lines[pos].split()[1]); pos += 1
    trees = []
    for _ in range(n_trees):
        head = lines[pos].split(); pos += 1
        if head[0] != "tree":
            raise ValueError(f"{path}: expected a tree header at line {pos}, got {head!r}")
        n_nodes = int(head[3])
        raw = {}
        for _ in range(n_nodes):
            parts = lines[pos].split(); pos += 1
            node_id = int(parts[0])
            raw[node_id] = parts[1:]
        trees.append(_link(raw, 0))
    return GbtModel(trees=trees, params=HyperParams(**params_kw), seed=seed,
                    feature_count=feature_count, base_score_logit=base)


def _link(raw, node_id):
    parts = raw[node_id]
    if parts[0] == "leaf":
        return TreeNode(weight=float(parts[1]))
    return TreeNode(feature=int(parts[1]), threshold=float(parts[2]),
                    left=_link(raw, int(parts[3])), right=_link(raw, int(parts[4])))


def time_inference(model, X, repetitions=3):
    """Wall-clock full-pass prediction timings: per-repetition samples plus min/median/mean."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions!r}")
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        model.predict_proba(X)
        samples.append(time.perf_counter() - start)
    return {"samples": samples, "min": min(samples),
            "median": statistics.median(samples), "mean": statistics.fmean(samples)}
