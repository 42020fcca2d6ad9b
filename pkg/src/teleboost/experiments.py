"""Scripted experiment grid: named tuning runs, sensitivity sweeps,
the ablation matrix, and feature-selection analysis.

The registry below pins ten named configurations (A..J): the GA budget
that produced each one, the winning hyperparameters, the selected
feature indices, and the search fitness each reported. They serve as
reproducible, citable inputs for cross-validation and feature analysis
without re-running the search.
"""

import json
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from . import gbt
from .data import EncodedDataset
from .ga import (Chromosome, GaConfig, GaResult, encode_params, fitness, run_ga,
                 write_manifest)
from .metrics import DECILES, spearman_rank_corr
from .validation import repeated_cv, stratified_subsample

COST_GRID = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 15, 20, 50, 100, 150, 200)
CROSSOVER_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
ABLATION_ARMS = ("FS-PO-C6", "PO-C6", "C6", "FS-PO-C1", "FS-C1", "FS-C6", "PO-C1", "C1")


@dataclass(frozen=True)
class RegistryEntry:
    """One pinned tuning outcome: search budget, winning point, search fitness."""

    id: str
    feature_fraction: float
    population: int
    crossover_ratio: float
    generations: int
    lambda_fn: float
    search_gmean_pct: float
    params: gbt.HyperParams
    features: tuple

    @property
    def feature_count(self):
        return len(self.features)

    def to_ga_config(self, seed=723, fitness_split=0.2):
        return GaConfig(feature_fraction=self.feature_fraction, population=self.population,
                        crossover_ratio=self.crossover_ratio, generations=self.generations,
                        lambda_fn=self.lambda_fn, seed=seed, fitness_split=fitness_split)


def _entry(exp_id, frac, pop, cx, gens, lam, gm, lr, n_est, depth, mcw, gamma_v, sub, col, feats):
    return RegistryEntry(
        id=exp_id, feature_fraction=frac, population=pop, crossover_ratio=cx,
        generations=gens, lambda_fn=lam, search_gmean_pct=gm,
        params=gbt.HyperParams(learning_rate=lr, n_estimators=n_est, max_depth=depth,
                               min_child_weight=mcw, gamma=gamma_v, subsample=sub,
                               colsample_bytree=col),
        features=feats)


REGISTRY = {e.id: e for e in (
    _entry("A", 0.30, 100, 0.20, 30, 6, 90.21, 0.18, 163, 6, 10, 6.76, 0.97, 0.5,
           (1, 5, 6, 7, 8, 15, 21, 22, 24, 25, 26, 36, 40, 49, 53, 55, 56, 58, 60)),
    _entry("B", 0.30, 100, 0.80, 50, 8, 89.97, 0.18, 10, 6, 10, 10, 0.97, 0.5,
           (1, 3, 5, 6, 7, 8, 13, 21, 23, 28, 29, 31, 39, 48, 53, 55, 56)),
    _entry("C", 0.10, 20, 0.70, 100, 6, 89.83, 0.36, 114, 3, 5.8, 4.34, 1.0, 0.61,
           (0, 1, 6, 8, 21, 41, 46)),
    _entry("D", 0.30, 100, 0.70, 30, 6, 89.81, 0.18, 294, 6, 10, 9.35, 0.97, 0.5,
           (1, 2, 6, 7, 8, 15, 21, 22, 24, 25, 28, 31, 32, 39, 40, 51, 56, 59, 60)),
    _entry("E", 0.10, 10, 0.20, 100, 6, 89.75, 0.15, 320, 5, 10, 10, 0.51, 0.8,
           (0, 1, 2, 5, 8, 14, 56)),
    _entry("F", 0.10, 10, 0.50, 100, 6, 89.70, 0.27, 444, 3, 10, 2.97, 0.95, 0.78,
           (0, 1, 6, 8, 9, 47, 56)),
    _entry("G", 0.20, 50, 0.80, 30, 8, 89.68, 0.15, 10, 4, 7.31, 8.23, 0.53, 0.82,
           (0, 1, 2, 6, 7, 8, 14, 21, 25, 53, 54, 55, 56)),
    _entry("H", 0.40, 20, 0.20, 30, 6, 89.65, 0.39, 280, 2, 10, 6.84, 0.61, 0.94,
           (1, 5, 6, 7, 8, 9, 12, 13, 15, 16, 22, 27, 28, 29, 31, 36, 37, 44, 46, 50,
            51, 52, 56, 59, 60)),
    _entry("I", 0.10, 10, 0.50, 100, 8, 89.60, 0.37, 80, 3, 10, 10, 0.65, 0.5,
           (0, 1, 6, 8, 20, 29, 59)),
    _entry("J", 0.10, 10, 0.50, 100, 10, 89.52, 0.27, 51, 5, 8.65, 3.99, 1.0, 0.9,
           (0, 1, 6, 7, 8, 24, 60)),
)}


def reproduce_experiment(exp_id, data, repeats=5, k=10, seed=723, fractions=DECILES):
    """Repeated stratified CV of a registered configuration's final model."""
    try:
        entry = REGISTRY[exp_id]
    except KeyError:
        raise ValueError(f"unknown experiment id {exp_id!r}; valid ids: {sorted(REGISTRY)}") from None
    params = replace(entry.params, scale_pos_weight=entry.lambda_fn)
    return repeated_cv(data, entry.features, params, k=k, repeats=repeats,
                       seed=seed, fractions=fractions)


def _manifest_result(path):
    # reconstruct a GaResult from a manifest written by ga.write_manifest
    with open(path) as fh:
        payload = json.load(fh)
    cfg = GaConfig(**payload["config"])
    ch = Chromosome(hyper_genes=tuple(payload["best"]["hyper_genes"]),
                    feature_genes=tuple(payload["best"]["features"]),
                    width=payload["width"])
    params_kw = dict(payload["best"]["params"])
    for int_name in ("n_estimators", "max_depth"):
        params_kw[int_name] = int(params_kw[int_name])
    return GaResult(best_chromosome=ch, best_fitness=payload["best"]["fitness"],
                    history=tuple(payload["history"]),
                    decoded_params=gbt.HyperParams(**params_kw),
                    decoded_features=list(payload["best"]["features"]),
                    config=cfg, elapsed_seconds=payload["elapsed_seconds"])


def _sweep(tag, values, configs, data, n_jobs, out_dir, feature_names):
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    results = []
    for value, cfg in zip(values, configs):
        manifest = os.path.join(out_dir, f"{tag}_{value:g}.json") if out_dir else None
        if manifest and os.path.exists(manifest):
            results.append((value, _manifest_result(manifest)))  # resume: reuse finished run
            continue
        res = run_ga(cfg, data, n_jobs=n_jobs)
        if manifest:
            write_manifest(res, manifest, feature_names=feature_names, extra={"sweep": tag, "value": value})
        results.append((value, res))
    return results


def sweep_cost(lambdas, base, data, n_jobs=1, out_dir=None, feature_names=None):
    """One GA run per cost weight; everything else fixed from base."""
    lams = [float(v) for v in lambdas]
    for v in lams:
        if v < 1:
            raise ValueError(f"cost weight must be >= 1, got {v!r}")
    configs = [replace(base, lambda_fn=v) for v in lams]
    return _sweep("cost", lams, configs, data, n_jobs, out_dir, feature_names)


def sweep_crossover(ratios, base, data, n_jobs=1, out_dir=None, feature_names=None):
    """One GA run per crossover ratio; everything else fixed from base."""
    rats = [float(v) for v in ratios]
    for v in rats:
        if not 0 <= v <= 1:
            raise ValueError(f"crossover ratio must lie in [0, 1], got {v!r}")
    configs = [replace(base, crossover_ratio=v) for v in rats]
    return _sweep("crossover", rats, configs, data, n_jobs, out_dir, feature_names)


def run_ablation(data, feature_fraction=0.30, population=8, generations=5,
                 crossover_ratio=0.5, seed=723, fitness_rows=None, n_jobs=1):
    """Eight-arm component knockout; returns [(arm, gmean), ...] in ABLATION_ARMS order.

    Arm names compose three toggles: FS = GA over the feature subset
    (otherwise all columns), PO = GA over hyperparameters (otherwise the
    stock defaults 0.3/100/6/1/0/1/1), C6/C1 = cost weight 6 vs 1. All
    arms share one fitness protocol (same seed-derived holdout), so the
    numbers are directly comparable. fitness_rows, when set, caps the
    working set by stratified subsampling before any arm runs.
    """
    y = np.asarray(data.labels)
    if fitness_rows is not None and fitness_rows < y.size:
        rows = stratified_subsample(y, fitness_rows, seed)
        data = EncodedDataset(matrix=np.ascontiguousarray(data.matrix[rows]),
                              labels=y[rows], schema=data.schema)
    width = data.matrix.shape[1]
    all_features = tuple(range(width))
    defaults = gbt.HyperParams()

    out = []
    for arm in ABLATION_ARMS:
        parts = arm.split("-")
        lam = 6.0 if parts[-1] == "C6" else 1.0
        fs = "FS" in parts
        po = "PO" in parts
        cfg = GaConfig(feature_fraction=feature_fraction, population=population,
                       crossover_ratio=crossover_ratio, generations=generations,
                       lambda_fn=lam, seed=seed)
        if fs or po:
            res = run_ga(cfg, data, n_jobs=n_jobs,
                         fixed_params=None if po else defaults,
                         fixed_features=None if fs else all_features)
            out.append((arm, res.best_fitness))
        else:
            ch = Chromosome(hyper_genes=encode_params(defaults),
                            feature_genes=all_features, width=width)
            out.append((arm, fitness(ch, data, cfg, fixed_params=defaults)))
    return out


@dataclass
class FeatureAnalysis:
    run_count: int
    frequencies: dict         # feature index -> runs selecting it (all runs)
    top10_frequencies: dict   # same, over the ten best runs by gmean
    correlations: dict        # feature index -> spearman(inclusion, gmean); nan = undefined
    groups: dict              # {"positive": [...], "negative": [...], "neutral": [...]}


def analyze_features(runs, width=None):
    """Selection frequency and inclusion-vs-score rank correlation per feature.

    Accepts GaResult objects or plain (feature_indices, gmean) pairs.
    Features whose inclusion indicator is constant across runs get a nan
    correlation and land in the neutral group, as do exact-zero
    correlations; otherwise the sign decides the group.
    """
    normalized = []
    inferred_width = 0
    for run in runs:
        if isinstance(run, GaResult):
            feats = list(run.decoded_features)
            gm = float(run.best_fitness)
            inferred_width = max(inferred_width, run.best_chromosome.width)
        else:
            feats, gm = run
            feats = [int(f) for f in feats]
            inferred_width = max(inferred_width, max(feats) + 1)
        normalized.append((sorted(set(feats)), float(gm)))
    if len(normalized) < 2:
        raise ValueError(f"feature analysis needs at least 2 runs, got {len(normalized)}")
    if width is None:
        width = inferred_width

    gmeans = [gm for _, gm in normalized]
    top = sorted(range(len(normalized)), key=lambda i: -gmeans[i])[:10]
    frequencies = {}
    top10 = {}
    correlations = {}
    groups = {"positive": [], "negative": [], "neutral": []}
    for f in range(width):
        included = [1.0 if f in feats else 0.0 for feats, _ in normalized]
        frequencies[f] = int(sum(included))
        top10[f] = int(sum(included[i] for i in top))
        r = spearman_rank_corr(included, gmeans)
        correlations[f] = r
        if math.isnan(r) or r == 0.0:
            groups["neutral"].append(f)
        elif r > 0:
            groups["positive"].append(f)
        else:
            groups["negative"].append(f)
    return FeatureAnalysis(run_count=len(normalized), frequencies=frequencies,
                           top10_frequencies=top10, correlations=correlations, groups=groups)


def write_feature_analysis(analysis, path, feature_names=None):
    def named(d):
        if feature_names is None:
            return {str(k): v for k, v in d.items()}
        return {f"{k}:{feature_names[k]}": v for k, v in d.items()}

    payload = {
        "run_count": analysis.run_count,
        "frequencies": named(analysis.frequencies),
        "top10_frequencies": named(analysis.top10_frequencies),
        "correlations": {k: (None if math.isnan(v) else v)
                         for k, v in named(analysis.correlations).items()},
        "groups": analysis.groups,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def registry_analysis(width=63):
    """Feature analysis over the pinned A..J outcomes."""
    runs = [(entry.features, entry.search_gmean_pct / 100.0)
            for entry in (REGISTRY[i] for i in sorted(REGISTRY))]
    return analyze_features(runs, width=width)
