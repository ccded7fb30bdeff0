"""
eval: AUC-ROC of outlier scores and identification rates of a gallery

With a threshold grid, identities and distractors are split into a validation
half, where the robustification threshold is searched, and a test half, where
robustified and plain identification rates are reported.
"""

import argparse
from dataclasses import replace

from ..command_registry import Command, global_command_registry
from ..errors import UsageError
from ..evaluation import (
    EvalReport, LabeledScores, auc_roc, full_identification_rate,
    identification_rate, robustify, roc_points, split_setup, threshold_search,
)
from ..io import read_labels, read_scores, write_table
from ..logging import logger
from ..polynomial import PointCloud
from ..scorer_registry import global_scorer_registry
from .common import (
    add_identification_arguments, add_scorer_arguments, identification_setup_from_args, nonnegative_int, require_file,
    require_output, scorer_context_from_args,
)


def configure(parser: argparse.ArgumentParser):
    parser.add_argument("--scores", help="Scores CSV")
    parser.add_argument("--labels", help="Labels CSV aligned with the scores")
    add_identification_arguments(parser)
    parser.add_argument("--seed", type=nonnegative_int, default=0, help="Seed of the validation/test split")
    parser.add_argument("--output", help="Write the report as key=value lines")
    parser.add_argument("--roc", help="Write the ROC curve of --scores as an fpr,tpr CSV")
    add_scorer_arguments(parser)


def run_eval(args: argparse.Namespace) -> dict:
    for path in (args.output, args.roc):
        if path:
            require_output(path)
    if args.scores is None and args.gallery is None:
        raise UsageError("Nothing to evaluate: pass --scores/--labels or --gallery/--identities")

    report = EvalReport()
    if args.scores is not None or args.labels is not None:
        scores = read_scores(require_file(args.scores, "scores"))
        labels = read_labels(require_file(args.labels, "labels"))
        labeled = LabeledScores(scores, labels)
        report.auc = auc_roc(labeled)
        report.roc = roc_points(labeled)
    elif args.roc:
        raise UsageError("--roc needs --scores and --labels")

    if args.gallery is not None:
        setup = identification_setup_from_args(args)
        report.f = args.f
        has_distractors = setup.distractors.shape[0] > 0
        if args.grid:
            context = scorer_context_from_args(args, fallback_train=PointCloud(setup.gallery))
            scorer = global_scorer_registry.score_function(args.scorer, context)
            validation, test = split_setup(setup, args.seed)
            search = threshold_search(validation, scorer, args.grid)
            robust = replace(test, similarity=robustify(test.similarity, scorer, search.threshold))
            report.threshold = search.threshold
            report.ir = identification_rate(robust)
            report.baseline_ir = identification_rate(test)
            if has_distractors:
                report.full_ir = full_identification_rate(robust)
                report.baseline_full_ir = full_identification_rate(test)
        else:
            report.ir = identification_rate(setup)
            if has_distractors:
                report.full_ir = full_identification_rate(setup)

    print(report.to_text(), end="")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(report.to_key_value())
    if args.roc:
        write_table(args.roc, ("fpr", "tpr"), report.roc_rows())
    logger.info(f"Evaluation finished: {', '.join(key for key, _ in report.items())}")
    return dict(report.items())


eval_command = Command(
    name="eval",
    description="Evaluate outlier scores (AUC-ROC) and identification rates",
    configure=configure,
    function=run_eval,
)

global_command_registry.register_command(eval_command)
