"""Genetic search over feature subsets and boosting hyperparameters
for cost-sensitive binary classification of term-deposit subscriptions.

Layers, bottom up:

- data: semicolon-CSV loading and one-hot encoding onto a frozen
  63-column schema.
- gbt: deterministic second-order gradient-boosted trees with
  class-weighted loss.
- metrics: confusion-matrix scores, ROC/AUC, lift curves, rank
  correlation, misclassification cost.
- validation: stratified splitting and repeated k-fold cross-validation.
- ga: the genetic optimizer over (feature subset, hyperparameters).
- experiments: pinned named configurations, sensitivity sweeps, the
  ablation matrix, and feature-selection analysis.
"""

__version__ = "0.1.0"

from .data import (CATEGORICAL_LEVELS, LABEL_COLUMN, NUMERIC_COLUMNS, SCHEMA,
                   EncodedDataset, FeatureSchema, RawDataset, SchemaEntry,
                   class_distribution_inverse, encode_labels, encoded_from_arrays,
                   generic_schema, load_bank_csv, one_hot_encode, write_encoded)
from .gbt import (GbtModel, HyperParams, TreeNode, load_model, save_model,
                  time_inference, train)
from .metrics import (DECILES, ConfusionCounts, CostSpec, MetricsReport, accuracy,
                      compute_report, confusion, gmean, lift_curve, roc_auc,
                      spearman_rank_corr, total_cost, tnr, tpr, type_i, type_ii)
from .validation import (AGGREGATE_METRICS, CvReport, FoldAssignment, ModelEval,
                         aggregate_evals, child_seed, repeated_cv, stratified_holdout,
                         stratified_kfold, stratified_subsample, write_cv_rows,
                         write_cv_summary)
from .ga import (Chromosome, GaConfig, GaResult, decode, encode_params, fitness,
                 init_population, mutate, run_ga, subset_size, uniform_crossover,
                 write_manifest)
from .experiments import (ABLATION_ARMS, COST_GRID, CROSSOVER_GRID, REGISTRY,
                          FeatureAnalysis, RegistryEntry, analyze_features,
                          registry_analysis, reproduce_experiment, run_ablation,
                          sweep_cost, sweep_crossover, write_feature_analysis)
