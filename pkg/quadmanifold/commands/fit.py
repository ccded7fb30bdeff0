"""
fit: train a quadric intersection on a point cloud
"""

import argparse

from ..command_registry import Command, global_command_registry
from ..fitting import fit
from ..intersection import ortho_penalty, save_model
from ..io import read_cloud, write_trace
from ..logging import logger
from .common import add_fit_arguments, fit_config_from_args, require_file, require_output, sibling_path


def configure(parser: argparse.ArgumentParser):
    parser.add_argument("--input", required=True, help="Point cloud CSV")
    parser.add_argument("--output", required=True, help="Model file to write (QIM v1)")
    parser.add_argument("--trace", help="Training trace CSV (default: <output>.trace.csv)")
    add_fit_arguments(parser)


def run_fit(args: argparse.Namespace) -> dict:
    input_path = require_file(args.input, "input")
    output = require_output(args.output)
    trace_path = require_output(args.trace or sibling_path(args.output, ".trace.csv"))
    config = fit_config_from_args(args)

    cloud = read_cloud(input_path)
    model, trace = fit(cloud, config)
    save_model(output, model)
    write_trace(trace_path, trace)
    penalty = ortho_penalty(model)
    logger.info(f"Wrote model with {model.m} quadrics to {output} (orthogonality penalty {penalty:.3e})")
    return {"m": model.m, "loss": model.loss, "epochs": len(trace), "trace": trace_path}


fit_command = Command(
    name="fit",
    description="Fit quadrics to a point cloud by minibatch gradient descent",
    configure=configure,
    function=run_fit,
)

global_command_registry.register_command(fit_command)
