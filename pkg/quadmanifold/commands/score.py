"""
score: per-point outlier scores of a point cloud
"""

import argparse

from ..command_registry import Command, global_command_registry
from ..io import read_cloud, write_scores
from ..logging import logger
from .common import add_scorer_arguments, require_file, require_output, scorer_context_from_args, scores_for


def configure(parser: argparse.ArgumentParser):
    parser.add_argument("--input", required=True, help="Point cloud CSV")
    parser.add_argument("--output", required=True, help="Scores CSV to write, one score per input row")
    add_scorer_arguments(parser)


def run_score(args: argparse.Namespace) -> dict:
    input_path = require_file(args.input, "input")
    output = require_output(args.output)
    cloud = read_cloud(input_path)
    context = scorer_context_from_args(args, fallback_train=cloud)
    scores = scores_for(args, context, cloud.points)
    write_scores(output, scores)
    logger.info(f"Wrote {len(scores)} {args.scorer} scores to {output}")
    return {"scorer": args.scorer, "points": len(scores)}


score_command = Command(
    name="score",
    description="Score every point of a cloud with an outlier scorer",
    configure=configure,
    function=run_score,
)

global_command_registry.register_command(score_command)
