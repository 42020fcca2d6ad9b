"""Command-line front end.

Every subcommand takes the raw semicolon-delimited campaign CSV via
--csv; there is no implicit dataset discovery. Budgets default to desk
scale (minutes on one core); --paper-scale restores the published
search and validation budgets (hours). Exit status is 0 on success and
2 on any rejected input, with the reason on stderr.
"""

import argparse
import json
import sys
from dataclasses import asdict, fields, replace

from . import __version__, experiments
from .data import SCHEMA, class_distribution_inverse, load_bank_csv, one_hot_encode, write_encoded
from .ga import GaConfig, run_ga, write_manifest
from .gbt import HyperParams, time_inference, train
from .validation import AGGREGATE_METRICS, repeated_cv, write_cv_rows, write_cv_summary

PAPER_GENERATIONS = 100
PAPER_VALIDATE_REPEATS = 50
# the searched ablation arms reuse the top run's budget at paper scale
PAPER_ABLATION = dict(feature_fraction=0.30, population=100, generations=30,
                      crossover_ratio=0.20)
DESK_ABLATION = dict(feature_fraction=0.30, population=8, generations=5,
                     crossover_ratio=0.50)


def _load(path):
    raw = load_bank_csv(path)
    return one_hot_encode(raw)


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _config_from_args(args):
    """GaConfig from an optional JSON file plus flag overrides."""
    kwargs = {}
    if args.config:
        payload = _read_json(args.config)
        valid = {f.name for f in fields(GaConfig)}
        bad = sorted(set(payload) - valid)
        if bad:
            raise ValueError(f"unknown config keys {bad}; valid keys: {sorted(valid)}")
        kwargs.update(payload)
    overrides = {
        "feature_fraction": args.feature_fraction,
        "population": args.population,
        "crossover_ratio": args.crossover,
        "generations": args.generations,
        "lambda_fn": args.cost,
        "seed": args.seed,
    }
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    if "generations" not in kwargs and args.paper_scale:
        kwargs["generations"] = PAPER_GENERATIONS
    return GaConfig(**kwargs)


def _params_from_payload(payload):
    valid = {f.name for f in fields(HyperParams)}
    bad = sorted(set(payload) - valid)
    if bad:
        raise ValueError(f"unknown hyperparameter keys {bad}; valid keys: {sorted(valid)}")
    return HyperParams(**payload)


def _print_aggregates(report):
    print(f"models: {report.model_count}  (k={report.k} x repeats={report.repeats}, seed={report.seed})")
    print(f"{'metric':<14}{'min':>12}{'avg':>12}{'max':>12}{'sd':>12}")
    for name in AGGREGATE_METRICS:
        agg = report.aggregates[name]
        print(f"{name:<14}{agg['min']:>12.6f}{agg['avg']:>12.6f}"
              f"{agg['max']:>12.6f}{agg['sd']:>12.6f}")


def cmd_encode(args):
    data = _load(args.csv)
    write_encoded(data, args.out)
    ratio = class_distribution_inverse(data.labels)
    print(f"encoded {data.n_rows} rows x {data.matrix.shape[1]} features -> {args.out}")
    print(f"positives: {int(data.labels.sum())}, negative/positive ratio: {ratio:.3f}")
    return 0


def cmd_tune(args):
    data = _load(args.csv)
    cfg = _config_from_args(args)
    result = run_ga(cfg, data, n_jobs=args.jobs)
    print(f"best fitness (gmean): {result.best_fitness:.6f}  "
          f"after {cfg.generations} generations, {result.elapsed_seconds:.1f}s")
    print(f"features ({len(result.decoded_features)}): {result.decoded_features}")
    for key, value in asdict(result.decoded_params).items():
        print(f"  {key} = {value}")
    if args.out:
        write_manifest(result, args.out, feature_names=data.feature_names)
        print(f"manifest -> {args.out}")
    return 0


def cmd_validate(args):
    data = _load(args.csv)
    repeats = args.repeats
    if repeats is None:
        repeats = PAPER_VALIDATE_REPEATS if args.paper_scale else 5
    if args.experiment:
        report = experiments.reproduce_experiment(args.experiment, data, repeats=repeats,
                                                  k=args.k, seed=args.seed)
    else:
        payload = _read_json(args.config)
        if "params" not in payload or "features" not in payload:
            raise ValueError('validate config must contain "params" and "features"')
        params = _params_from_payload(payload["params"])
        report = repeated_cv(data, payload["features"], params, k=args.k,
                             repeats=repeats, seed=args.seed)
    _print_aggregates(report)
    if args.rows_out:
        write_cv_rows(report, args.rows_out)
        print(f"per-model rows -> {args.rows_out}")
    if args.summary_out:
        write_cv_summary(report, args.summary_out)
        print(f"summary -> {args.summary_out}")
    return 0


def cmd_sweep(args):
    data = _load(args.csv)
    generations = args.generations
    if generations is None:
        generations = PAPER_GENERATIONS if args.paper_scale else 10
    if args.axis == "cost":
        # published budget for this sweep: F=0.10, P=10, C=0.05
        base = GaConfig(feature_fraction=0.10, population=args.population,
                        crossover_ratio=0.05, generations=generations, seed=args.seed)
        values = [float(v) for v in args.values.split(",")] if args.values else experiments.COST_GRID
        results = experiments.sweep_cost(values, base, data, n_jobs=args.jobs,
                                         out_dir=args.out_dir, feature_names=data.feature_names)
    else:
        # published budget: F=0.10, P=10, lambda=6
        base = GaConfig(feature_fraction=0.10, population=args.population,
                        lambda_fn=6.0, generations=generations, seed=args.seed)
        values = [float(v) for v in args.values.split(",")] if args.values else experiments.CROSSOVER_GRID
        results = experiments.sweep_crossover(values, base, data, n_jobs=args.jobs,
                                              out_dir=args.out_dir, feature_names=data.feature_names)
    print(f"{args.axis:>10}{'best gmean':>14}{'features':>10}")
    for value, res in results:
        print(f"{value:>10g}{res.best_fitness:>14.6f}{len(res.decoded_features):>10}")
    return 0


def cmd_ablate(args):
    data = _load(args.csv)
    budget = dict(PAPER_ABLATION if args.paper_scale else DESK_ABLATION)
    if args.population is not None:
        budget["population"] = args.population
    if args.generations is not None:
        budget["generations"] = args.generations
    fitness_rows = None if args.paper_scale else args.fitness_rows
    table = experiments.run_ablation(data, seed=args.seed, fitness_rows=fitness_rows,
                                     n_jobs=args.jobs, **budget)
    print(f"{'arm':<10}{'gmean':>12}")
    for arm, gm in table:
        print(f"{arm:<10}{gm:>12.6f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"budget": budget, "fitness_rows": fitness_rows, "seed": args.seed,
                       "arms": {arm: gm for arm, gm in table}}, fh, indent=2)
            fh.write("\n")
        print(f"table -> {args.out}")
    return 0


def cmd_analyze(args):
    if args.registry:
        analysis = experiments.registry_analysis()
        names = [entry.name for entry in SCHEMA.entries]
    else:
        if not args.manifests:
            raise ValueError("analyze needs --registry or at least two --manifests")
        runs = [experiments._manifest_result(p) for p in args.manifests]
        analysis = experiments.analyze_features(runs, width=args.width)
        names = None
    print(f"runs analyzed: {analysis.run_count}")
    always = sorted(f for f, c in analysis.frequencies.items() if c == analysis.run_count)
    never = sorted(f for f, c in analysis.frequencies.items() if c == 0)
    print(f"selected in every run: {always}")
    print(f"never selected: {never}")
    for group in ("positive", "negative", "neutral"):
        print(f"{group}: {analysis.groups[group]}")
    if args.out:
        experiments.write_feature_analysis(analysis, args.out, feature_names=names)
        print(f"report -> {args.out}")
    return 0


def cmd_bench(args):
    data = _load(args.csv)
    entry = experiments.REGISTRY.get(args.experiment)
    if entry is None:
        raise ValueError(f"unknown experiment id {args.experiment!r}; valid ids: "
                         f"{sorted(experiments.REGISTRY)}")
    params = replace(entry.params, scale_pos_weight=entry.lambda_fn)
    X = data.matrix[:, list(entry.features)]
    model = train(X, data.labels, params, seed=args.seed)
    timing = time_inference(model, X, repetitions=args.repetitions)
    print(f"experiment {entry.id}: {model.node_count()} nodes over "
          f"{len(model.trees)} trees, {len(entry.features)} features")
    print(f"scored {X.shape[0]} rows x {args.repetitions} repetitions")
    for key in ("min", "median", "mean"):
        print(f"  {key}: {timing[key]:.4f}s  ({timing[key] / X.shape[0] * 1e6:.2f} us/row)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="teleboost",
                                     description="Genetic tuning and validation of "
                                                 "cost-sensitive boosted-tree classifiers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, jobs=True):
        p.add_argument("--csv", required=True, help="raw semicolon-delimited campaign CSV")
        p.add_argument("--seed", type=int, default=723)
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel fitness workers")

    p = sub.add_parser("encode", help="encode the CSV onto the 63-column numeric schema")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True, help="encoded matrix destination (TSV)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("tune", help="run the genetic search")
    add_common(p)
    p.add_argument("--config", help="JSON file with GaConfig fields")
    p.add_argument("--feature-fraction", type=float, dest="feature_fraction")
    p.add_argument("--population", type=int)
    p.add_argument("--crossover", type=float, help="fraction of offspring from crossover")
    p.add_argument("--generations", type=int)
    p.add_argument("--cost", type=float, help="false-negative weight (lambda)")
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--out", help="write a JSON run manifest here")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("validate", help="repeated stratified cross-validation")
    add_common(p, jobs=False)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--experiment", choices=sorted(experiments.REGISTRY),
                       help="a registered configuration")
    group.add_argument("--config", help='JSON file with "params" and "features"')
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--repeats", type=int, default=None,
                   help="default 5, or 50 with --paper-scale")
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--rows-out", help="write per-model rows here (TSV)")
    p.add_argument("--summary-out", help="write the JSON summary here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="sensitivity sweep: one search per grid value")
    p.add_argument("axis", choices=("cost", "crossover"))
    add_common(p)
    p.add_argument("--values", help="comma-separated grid; defaults to the published grid")
    p.add_argument("--population", type=int, default=10)
    p.add_argument("--generations", type=int, default=None,
                   help="default 10, or 100 with --paper-scale")
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--out-dir", help="write one resumable manifest per grid value")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ablate", help="eight-arm knockout of search/cost components")
    add_common(p)
    p.add_argument("--population", type=int, default=None)
    p.add_argument("--generations", type=int, default=None)
    p.add_argument("--fitness-rows", type=int, default=8000, dest="fitness_rows",
                   help="stratified row cap for fitness evaluation (desk scale only)")
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--out", help="write the arm table as JSON")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("analyze", help="feature frequency/correlation report over runs")
    p.add_argument("--registry", action="store_true",
                   help="analyze the built-in registered runs")
    p.add_argument("--manifests", nargs="*", help="tune/sweep manifests to analyze")
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="train a registered configuration and time inference")
    p.add_argument("--csv", required=True)
    p.add_argument("--experiment", default="J", help="registered id (default J)")
    p.add_argument("--seed", type=int, default=723)
    p.add_argument("--repetitions", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
