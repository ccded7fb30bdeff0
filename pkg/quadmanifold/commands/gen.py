"""
gen: write a synthetic point cloud and its outlier labels
"""

import argparse

import numpy as np

from ..command_registry import Command, global_command_registry
from ..datagen import CurveSpec, inject_outliers, labels_for, sample_curve, sample_sphere, sample_viviani
from ..io import write_cloud, write_labels
from ..logging import logger
from .common import nonnegative_float, nonnegative_int, positive_int, require_output, sibling_path

CURVES = ("tennis", "circle", "sphere", "viviani")


def configure(parser: argparse.ArgumentParser):
    parser.add_argument("--curve", choices=CURVES, default="tennis")
    parser.add_argument("--n", type=positive_int, default=99, help="Number of points on the curve")
    parser.add_argument("--noise", type=nonnegative_float, default=0.05, help="Gaussian noise standard deviation")
    parser.add_argument("--a", type=float, default=0.8, help="Tennis curve parameter a")
    parser.add_argument("--b", type=float, default=0.2, help="Tennis curve parameter b")
    parser.add_argument("--dim", type=positive_int, default=3, help="Ambient dimension of the sphere curve")
    parser.add_argument("--outliers", type=nonnegative_int, default=0, help="Number of injected outliers")
    parser.add_argument("--factor", type=nonnegative_float, default=2.0, help="Outlier norm / median inlier norm")
    parser.add_argument("--seed", type=nonnegative_int, default=0)
    parser.add_argument("--output", required=True, help="Point cloud CSV to write")
    parser.add_argument("--labels", help="Labels CSV to write (default: <output>.labels.csv)")


def _child_seeds(seed: int, count: int):
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def run_gen(args: argparse.Namespace) -> dict:
    output = require_output(args.output)
    labels_path = require_output(args.labels or sibling_path(args.output, ".labels.csv"))
    curve_seed, outlier_seed = _child_seeds(args.seed, 2)

    if args.curve == "tennis":
        cloud = sample_curve(CurveSpec(a=args.a, b=args.b, n=args.n, noise_sigma=args.noise, seed=curve_seed))
    elif args.curve == "circle":
        cloud = sample_sphere(args.n, dim=2, noise=args.noise, seed=curve_seed)
    elif args.curve == "sphere":
        cloud = sample_sphere(args.n, dim=args.dim, noise=args.noise, seed=curve_seed)
    else:
        cloud = sample_viviani(args.n, noise=args.noise, seed=curve_seed)

    cloud, outliers = inject_outliers(cloud, args.outliers, args.factor, seed=outlier_seed)
    write_cloud(output, cloud)
    write_labels(labels_path, labels_for(cloud.n, outliers))
    logger.info(f"Wrote {cloud.n} points ({len(outliers)} outliers) to {output}")
    return {"points": cloud.n, "outliers": len(outliers), "labels": labels_path}


gen_command = Command(
    name="gen",
    description="Generate a synthetic point cloud with labels",
    configure=configure,
    function=run_gen,
)

global_command_registry.register_command(gen_command)
