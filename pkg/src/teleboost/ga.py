"""Genetic search over feature subsets and boosting hyperparameters.

An individual is seven hyperparameter genes, each normalized to [0, 1]
and decoded linearly onto the searched ranges, plus a fixed-size set of
feature indices. Fitness is the GMean of a cost-weighted model trained
on a stratified holdout split derived from the run seed, so fitness is
a pure function of (chromosome, data, config) and a population can be
evaluated in any order or in parallel without changing the result.
"""

import json
import math
import os
import time
from dataclasses import dataclass, asdict, field, replace

import numpy as np

from . import gbt
from .metrics import confusion, gmean
from .validation import stratified_holdout

# (name, lo, hi, integer) in gene order
HYPER_RANGES = (
    ("learning_rate", 0.01, 1.0, False),
    ("n_estimators", 10, 1500, True),
    ("max_depth", 1, 10, True),
    ("min_child_weight", 0.01, 10.0, False),
    ("gamma", 0.01, 10.0, False),
    ("subsample", 0.01, 1.0, False),
    ("colsample_bytree", 0.01, 1.0, False),
)
N_HYPER_GENES = len(HYPER_RANGES)

HYPER_MUTATION_RATE = 0.1
HYPER_MUTATION_SIGMA = 0.1


def subset_size(feature_fraction, width):
    """Search-subset cardinality: ceil(fraction * (width - 1)), at least 1.

    The count basis is width - 1, which reproduces the published subset
    sizes 7/13/19/25 for fractions 10/20/30/40% on the 63-column layout.
    """
    return max(1, math.ceil(feature_fraction * (width - 1)))


@dataclass(frozen=True)
class GaConfig:
    feature_fraction: float = 0.10
    population: int = 10
    crossover_ratio: float = 0.5
    generations: int = 10
    lambda_fn: float = 6.0
    seed: int = 723
    fitness_split: float = 0.2  # held-out validation fraction

    def __post_init__(self):
        if not 0 < self.feature_fraction <= 1:
            raise ValueError(f"feature_fraction must lie in (0, 1], got {self.feature_fraction!r}")
        if not isinstance(self.population, (int, np.integer)) or self.population < 2:
            raise ValueError(f"population must be an integer >= 2, got {self.population!r}")
        if not 0 <= self.crossover_ratio <= 1:
            raise ValueError(f"crossover_ratio must lie in [0, 1], got {self.crossover_ratio!r}")
        if not isinstance(self.generations, (int, np.integer)) or self.generations < 1:
            raise ValueError(f"generations must be an integer >= 1, got {self.generations!r}")
        if not self.lambda_fn > 0:
            raise ValueError(f"lambda_fn must be positive, got {self.lambda_fn!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not 0 < self.fitness_split < 1:
            raise ValueError(f"fitness_split must lie in (0, 1), got {self.fitness_split!r}")


@dataclass(frozen=True)
class Chromosome:
    """Hashable GA individual; width is the feature-index domain size."""

    hyper_genes: tuple
    feature_genes: tuple  # sorted, distinct, each in [0, width)
    width: int

    def __post_init__(self):
        if len(self.hyper_genes) != N_HYPER_GENES:
            raise ValueError(f"expected {N_HYPER_GENES} hyper genes, got {len(self.hyper_genes)}")
        for g in self.hyper_genes:
            if not 0.0 <= g <= 1.0:
                raise ValueError(f"hyper gene {g!r} outside [0, 1]")
        k = len(self.feature_genes)
        if k == 0:
            raise ValueError("feature_genes is empty")
        if len(set(self.feature_genes)) != k:
            raise ValueError(f"feature_genes contain duplicates: {self.feature_genes}")
        if tuple(sorted(self.feature_genes)) != self.feature_genes:
            raise ValueError("feature_genes must be sorted ascending")
        if self.feature_genes[0] < 0 or self.feature_genes[-1] >= self.width:
            raise ValueError(f"feature_genes must lie in [0, {self.width}), got {self.feature_genes}")


def decode(ch):
    """Map genes onto concrete trainer settings; integer fields round half-up then clamp.

    Returns (HyperParams, sorted feature index list). scale_pos_weight
    stays at 1.0 here; the caller injects the active cost weight.
    """
    kwargs = {}
    for gene, (name, lo, hi, integer) in zip(ch.hyper_genes, HYPER_RANGES):
        value = lo + gene * (hi - lo)
        if integer:
            value = min(max(int(math.floor(value + 0.5)), lo), hi)
        kwargs[name] = value
    return gbt.HyperParams(**kwargs), list(ch.feature_genes)


def encode_params(params):
    """Inverse of decode for representable points; genes clamped to [0, 1]."""
    genes = []
    for name, lo, hi, _ in HYPER_RANGES:
        v = getattr(params, name)
        genes.append(min(max((v - lo) / (hi - lo), 0.0), 1.0))
    return tuple(genes)


def init_population(cfg, rng, width=63):
    """P chromosomes: hyper genes uniform on [0,1], subsets uniform without replacement."""
    k = subset_size(cfg.feature_fraction, width)
    if k > width:
        raise ValueError(f"subset size {k} exceeds feature count {width}")
    out = []
    for _ in range(cfg.population):
        hyper = tuple(float(g) for g in rng.random(N_HYPER_GENES))
        feats = tuple(sorted(int(i) for i in rng.choice(width, size=k, replace=False)))
        out.append(Chromosome(hyper_genes=hyper, feature_genes=feats, width=width))
    return out


def fitness(ch, data, cfg, fixed_params=None):
    """GMean on the held-out side of a seed-derived stratified split.

    Trains on (1 - fitness_split) of the rows using the chromosome's
    features and decoded parameters (or fixed_params when given), with
    scale_pos_weight = cfg.lambda_fn, and scores the held-out rows at
    threshold 0.5.
    """
    y = np.asarray(data.labels)
    width = data.matrix.shape[1]
    if ch.width != width:
        raise ValueError(f"chromosome width {ch.width} does not match data width {width}")
    params = fixed_params if fixed_params is not None else decode(ch)[0]
    params = replace(params, scale_pos_weight=cfg.lambda_fn)
    train_rows, val_rows = stratified_holdout(y, cfg.fitness_split, cfg.seed)
    X = data.matrix[:, list(ch.feature_genes)]
    model = gbt.train(X[train_rows], y[train_rows], params, seed=cfg.seed)
    preds = model.predict_label(X[val_rows], threshold=0.5)
    return gmean(confusion(y[val_rows], preds))


def uniform_crossover(a, b, rng):
    """Two children: hyper genes swapped per-gene with probability 1/2;
    feature sets keep the parents' intersection and fill the remainder
    from the symmetric difference, drawn without replacement per child."""
    if len(a.feature_genes) != len(b.feature_genes) or a.width != b.width:
        raise ValueError("crossover requires chromosomes with the same subset size and width")
    swap = rng.random(N_HYPER_GENES) < 0.5
    h1 = tuple(gb if s else ga for ga, gb, s in zip(a.hyper_genes, b.hyper_genes, swap))
    h2 = tuple(ga if s else gb for ga, gb, s in zip(a.hyper_genes, b.hyper_genes, swap))

    k = len(a.feature_genes)
    inter = sorted(set(a.feature_genes) & set(b.feature_genes))
    sym = sorted(set(a.feature_genes) ^ set(b.feature_genes))

    def child_features():
        need = k - len(inter)
        if need == 0:
            return tuple(inter)
        picks = rng.choice(len(sym), size=need, replace=False)
        return tuple(sorted(inter + [sym[int(i)] for i in picks]))

    f1 = child_features()
    f2 = child_features()
    return (Chromosome(hyper_genes=h1, feature_genes=f1, width=a.width),
            Chromosome(hyper_genes=h2, feature_genes=f2, width=a.width))


def mutate(ch, rng, mutate_hyper=True, mutate_features=True):
    """Gaussian-perturb each hyper gene w.p. 1/10 (sigma 0.1, clamped);
    replace each feature index w.p. 1/k with a uniform index outside the subset."""
    hyper = list(ch.hyper_genes)
    if mutate_hyper:
        for i in range(N_HYPER_GENES):
            if rng.random() < HYPER_MUTATION_RATE:
                hyper[i] = float(min(max(hyper[i] + rng.normal(0.0, HYPER_MUTATION_SIGMA), 0.0), 1.0))

    feats = list(ch.feature_genes)
    if mutate_features:
        k = len(feats)
        current = set(feats)
        for i in range(k):
            if rng.random() < 1.0 / k:
                pool = sorted(set(range(ch.width)) - current)
                if not pool:
                    continue  # subset already covers every index
                new = pool[int(rng.integers(len(pool)))]
                current.remove(feats[i])
                current.add(new)
                feats[i] = new
    return Chromosome(hyper_genes=tuple(hyper), feature_genes=tuple(sorted(feats)), width=ch.width)


@dataclass
class GaResult:
    best_chromosome: Chromosome
    best_fitness: float
    history: tuple  # best-ever fitness after each generation's evaluation
    decoded_params: gbt.HyperParams  # includes scale_pos_weight = lambda_fn
    decoded_features: list
    config: GaConfig
    elapsed_seconds: float = field(compare=False)


def _tournament(population, fits, rng):
    i, j = (int(v) for v in rng.integers(len(population), size=2))
    if fits[j] > fits[i]:
        return population[j]
    return population[i]  # ties and i-wins: keep the first draw


def run_ga(cfg, data, n_jobs=1, fixed_params=None, fixed_features=None):
    """Elitist generational GA; see module docstring for determinism rules.

    Args:
        cfg: GaConfig. cfg.generations populations are evaluated.
        data: EncodedDataset or anything with .matrix/.labels.
        n_jobs: fitness evaluations per generation run in parallel when
            != 1; the result is identical either way.
        fixed_params: freeze the hyperparameter dimension at these
            values (search features only).
        fixed_features: freeze the feature subset (search params only).

    Returns:
        GaResult with non-decreasing history of length cfg.generations.
    """
    started = time.perf_counter()
    width = data.matrix.shape[1]
    rng_init = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(0,)))
    population = init_population(cfg, rng_init, width=width)
    if fixed_params is not None:
        frozen_hyper = encode_params(fixed_params)
        population = [replace(ch, hyper_genes=frozen_hyper) for ch in population]
    if fixed_features is not None:
        frozen_feats = tuple(sorted(int(f) for f in fixed_features))
        population = [replace(ch, feature_genes=frozen_feats) for ch in population]

    cache = {}

    def evaluate(pop):
        todo = [ch for ch in dict.fromkeys(pop) if ch not in cache]
        if n_jobs != 1 and len(todo) > 1:
            from joblib import Parallel, delayed
            values = Parallel(n_jobs=n_jobs)(
                delayed(_checked_fitness)(ch, data, cfg, fixed_params) for ch in todo)
        else:
            values = [_checked_fitness(ch, data, cfg, fixed_params) for ch in todo]
        cache.update(zip(todo, values))
        return [cache[ch] for ch in pop]

    best_ch = None
    best_fit = -1.0
    history = []
    for gen in range(cfg.generations):
        fits = evaluate(population)
        gen_best = int(np.argmax(fits))
        if fits[gen_best] > best_fit:
            best_fit = float(fits[gen_best])
            best_ch = population[gen_best]
        history.append(best_fit)
        if gen == cfg.generations - 1:
            break
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(1, gen)))
        population = _breed(population, fits, best_ch, cfg, rng,
                            mutate_hyper=fixed_params is None,
                            mutate_features=fixed_features is None)

    params = fixed_params if fixed_params is not None else decode(best_ch)[0]
    params = replace(params, scale_pos_weight=cfg.lambda_fn)
    return GaResult(best_chromosome=best_ch, best_fitness=best_fit, history=tuple(history),
                    decoded_params=params, decoded_features=list(best_ch.feature_genes),
                    config=cfg, elapsed_seconds=time.perf_counter() - started)


def _checked_fitness(ch, data, cfg, fixed_params):
    try:
        return fitness(ch, data, cfg, fixed_params)
    except ValueError as err:
        raise ValueError(f"fitness evaluation failed for chromosome {ch}: {err}") from err


def _breed(population, fits, elite, cfg, rng, mutate_hyper, mutate_features):
    # elite passes through untouched; crossover fills a C fraction of the
    # remaining slots (round half up), tournament clones fill the rest
    slots = cfg.population - 1
    n_cross = int(math.floor(cfg.crossover_ratio * slots + 0.5))
    out = [elite]
    produced = 0
    while produced < n_cross:
        p1 = _tournament(population, fits, rng)
        p2 = _tournament(population, fits, rng)
        for child in uniform_crossover(p1, p2, rng):
            if produced < n_cross:
                out.append(mutate(child, rng, mutate_hyper, mutate_features))
                produced += 1
    while len(out) < cfg.population:
        winner = _tournament(population, fits, rng)
        out.append(mutate(winner, rng, mutate_hyper, mutate_features))
    return out


def write_manifest(result, path, feature_names=None, extra=None):
    """JSON record sufficient to re-run and to feed feature analysis."""
    from . import __version__

    best = {
        "fitness": result.best_fitness,
        "hyper_genes": list(result.best_chromosome.hyper_genes),
        "features": result.decoded_features,
        "params": asdict(result.decoded_params),
    }
    if feature_names is not None:
        best["feature_names"] = [feature_names[i] for i in result.decoded_features]
    payload = {
        "package_version": __version__,
        "config": asdict(result.config),
        "width": result.best_chromosome.width,
        "history": list(result.history),
        "elapsed_seconds": result.elapsed_seconds,
        "best": best,
    }
    if extra:
        payload.update(extra)
    # write-then-rename so a crashed run never leaves a truncated manifest
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)
