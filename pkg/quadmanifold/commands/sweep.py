"""
sweep: AUC-ROC of the quadric detector over quadric counts and of PCA over subspace dimensions

With a gallery, every detector also robustifies the cosine similarity and the
sweep reports its identification rates. The threshold comes from a grid search
on a validation half when --grid is given, and otherwise flags the top one
percent of gallery and distractor scores.
"""

import argparse
from dataclasses import replace
from typing import Optional, Tuple

from ..baselines import pca_distances, pca_fit
from ..command_registry import Command, global_command_registry
from ..evaluation import (
    IdentificationSetup, LabeledScores, ScoreFunction, auc_roc, full_identification_rate, identification_rate,
    outlier_quantile_threshold, robustify, split_setup, threshold_search,
)
from ..fitting import fit
from ..intersection import score_batch
from ..io import read_cloud, read_labels, write_table
from ..logging import logger
from ..errors import DimensionMismatchError, UsageError
from .common import (
    add_fit_arguments, add_identification_arguments, fit_config_from_args, identification_setup_from_args, int_list,
    nonnegative_int, require_file, require_output,
)

COLUMNS = ("method", "param", "auc")
IDENTIFICATION_COLUMNS = ("ir", "full_ir")


def configure(parser: argparse.ArgumentParser):
    parser.add_argument("--input", required=True, help="Point cloud CSV")
    parser.add_argument("--labels", required=True, help="Labels CSV aligned with the cloud")
    parser.add_argument("--m-values", type=int_list, default=[1], help="Comma-separated quadric counts")
    parser.add_argument("--pca-k", type=int_list, default=[], help="Comma-separated PCA dimensions")
    parser.add_argument("--centered", action="store_true", help="Center the data before PCA")
    parser.add_argument("--output", required=True, help="Results CSV (method,param,auc[,ir,full_ir])")
    add_identification_arguments(parser)
    parser.add_argument("--split-seed", type=nonnegative_int, default=0,
                        help="Seed of the validation/test split used with --grid")
    add_fit_arguments(parser)


def robustified_rates(setup: IdentificationSetup, scorer: ScoreFunction, grid: Optional[list],
                      split_seed: int) -> Tuple[float, Optional[float]]:
    """(IR, Full IR) of the similarity robustified with `scorer`; Full IR is None without distractors"""
    if grid:
        validation, setup = split_setup(setup, split_seed)
        threshold = threshold_search(validation, scorer, grid).threshold
    else:
        threshold = outlier_quantile_threshold(setup, scorer)
    robust = replace(setup, similarity=robustify(setup.similarity, scorer, threshold))
    full = full_identification_rate(robust) if robust.distractors.shape[0] else None
    return identification_rate(robust), full


def run_sweep(args: argparse.Namespace) -> dict:
    cloud = read_cloud(require_file(args.input, "input"))
    labels = read_labels(require_file(args.labels, "labels"))
    output = require_output(args.output)
    if len(labels) != cloud.n:
        raise DimensionMismatchError(cloud.n, len(labels), "label count")

    setup = None
    if args.gallery is not None:
        setup = identification_setup_from_args(args)
        if setup.gallery.shape[1] != cloud.dim:
            raise DimensionMismatchError(cloud.dim, setup.gallery.shape[1], "gallery dimension")
    elif args.grid:
        raise UsageError("--grid needs --gallery and --identities")

    detectors = []
    for m in args.m_values:
        model, _ = fit(cloud, fit_config_from_args(args, m=m))
        detectors.append(("quadric", m, lambda points, model=model: score_batch(model, points)))
    for k in args.pca_k:
        pca = pca_fit(cloud, k, centered=args.centered)
        detectors.append(("pca", k, lambda points, pca=pca: pca_distances(pca, points)))

    rows = []
    for method, param, scorer in detectors:
        auc = auc_roc(LabeledScores(scorer(cloud.points), labels))
        row = (method, param, auc)
        if setup is None:
            logger.info(f"{method} {param}: AUC {auc:.4f}")
        else:
            ir, full = robustified_rates(setup, scorer, args.grid, args.split_seed)
            logger.info(f"{method} {param}: AUC {auc:.4f}, IR {ir:.4f}")
            row += (ir, full)
        rows.append(row)

    columns = COLUMNS if setup is None else COLUMNS + IDENTIFICATION_COLUMNS
    write_table(output, columns, rows)
    return {"rows": len(rows)}


sweep_command = Command(
    name="sweep",
    description="Ablation of detector AUC and identification rates over quadric counts and PCA dimensions",
    configure=configure,
    function=run_sweep,
)

global_command_registry.register_command(sweep_command)
