"""
Argument helpers shared by the subcommands
"""

import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .. import scorers  # noqa: F401  registers the built-in scorers
from ..baselines import DEFAULT_NORM_SIGN, pca_fit
from ..config import FitConfig, LossVariant, LrSchedule
from ..errors import ConfigError, DimensionMismatchError, UsageError
from ..evaluation import IdentificationSetup
from ..intersection import load_model
from ..polynomial import PointCloud
from ..presets import presets
from ..scorer_registry import ScorerContext, global_scorer_registry
from ..io import read_cloud, read_identities


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return value


def nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a number")
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def float_list(text: str) -> List[float]:
    """Comma-separated decimals; 'inf' is accepted"""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of numbers")


def int_list(text: str) -> List[int]:
    values = [positive_int(item) for item in text.split(",") if item.strip()]
    if not values:
        raise argparse.ArgumentTypeError("list is empty")
    return values


def require_file(path: Optional[str], what: str) -> str:
    if path is None:
        raise UsageError(f"Missing {what} path")
    if not Path(path).is_file():
        raise ConfigError(f"{what.capitalize()} file not found: {path}")
    return path


def require_output(path: str) -> str:
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise ConfigError(f"Output directory does not exist: {parent}")
    return path


def sibling_path(path: str, suffix: str) -> str:
    """cloud.csv + '.labels.csv' -> cloud.labels.csv"""
    p = Path(path)
    return str(p.with_name(p.stem + suffix))


# Fit configuration flags

_FIT_FLAGS = ("m", "loss", "lam", "learning_rate", "batch_size", "epochs", "seed", "lr_schedule", "final_lr_factor",
              "subsample")


def add_fit_arguments(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", help="JSON fit configuration file")
    source.add_argument("--preset", choices=sorted(presets), help="Named fit configuration")

    loss = parser.add_mutually_exclusive_group()
    loss.add_argument("--qfull", dest="loss", action="store_const", const=LossVariant.QFULL.value,
                      help="Order-2 distance loss with HS orthogonality penalty")
    loss.add_argument("--qbase", dest="loss", action="store_const", const=LossVariant.QBASE.value,
                      help="Squared algebraic distance loss (kernel PCA equivalent)")
    loss.add_argument("--loss", dest="loss", choices=[v.value for v in LossVariant])

    parser.add_argument("--m", type=positive_int, help="Number of quadrics")
    parser.add_argument("--lam", type=nonnegative_float, help="Orthogonality penalty multiplier")
    parser.add_argument("--lr", dest="learning_rate", type=float, help="Learning rate")
    parser.add_argument("--batch-size", type=positive_int)
    parser.add_argument("--epochs", type=nonnegative_int)
    parser.add_argument("--seed", type=nonnegative_int)
    parser.add_argument("--schedule", dest="lr_schedule", choices=[v.value for v in LrSchedule])
    parser.add_argument("--final-lr-factor", type=float,
                        help="Last step size as a fraction of --lr (exponential schedule)")
    parser.add_argument("--subsample", type=positive_int, help="Train on a random subsample of this size")
    parser.add_argument("--normalize", dest="normalize_inputs", action="store_true", default=None,
                        help="Project points onto the unit sphere before fitting")


def fit_config_from_args(args: argparse.Namespace, **overrides) -> FitConfig:
    """Preset or config file first, then explicit flags, then overrides"""
    if args.config:
        data: Dict[str, Any] = FitConfig.from_json_file(require_file(args.config, "config")).to_dict()
    elif args.preset:
        data = FitConfig.from_preset(args.preset).to_dict()
    else:
        data = FitConfig().to_dict()
    for flag in _FIT_FLAGS:
        value = getattr(args, flag, None)
        if value is not None:
            data[flag] = value
    if getattr(args, "normalize_inputs", None):
        data["normalize_inputs"] = True
    data.update({k: v for k, v in overrides.items() if v is not None})
    return FitConfig.from_dict(data)


# Scorer flags

def add_scorer_arguments(parser: argparse.ArgumentParser, default: str = "quadric"):
    parser.add_argument("--scorer", default=default, choices=global_scorer_registry.scorer_names())
    parser.add_argument("--model", help="QIM v1 model file for the quadric scorer")
    parser.add_argument("--pca-k", type=positive_int, help="Subspace dimension for the pca scorer")
    parser.add_argument("--centered", action="store_true", help="Center the data before PCA")
    parser.add_argument("--train", help="Point cloud the pca scorer is fitted on")
    parser.add_argument("--norm-sign", type=float, default=DEFAULT_NORM_SIGN, choices=[1.0, -1.0],
                        help="Default +1 writes the plain norm column and flags large norms; "
                             "-1 gives -||p||, flagging low-norm embeddings as outliers")


def scorer_context_from_args(args: argparse.Namespace, fallback_train: Optional[PointCloud] = None) -> ScorerContext:
    context = ScorerContext(settings={"norm_sign": args.norm_sign})
    if args.scorer == "quadric":
        context.model = load_model(require_file(args.model, "model"))
    elif args.scorer == "pca":
        if args.pca_k is None:
            raise UsageError("--pca-k is required for the pca scorer")
        train = read_cloud(require_file(args.train, "training cloud")) if args.train else fallback_train
        if train is None:
            raise UsageError("--train is required for the pca scorer")
        context.pca_model = pca_fit(train, args.pca_k, centered=args.centered)
    return context


def scores_for(args: argparse.Namespace, context: ScorerContext, points: np.ndarray) -> np.ndarray:
    return global_scorer_registry.score(args.scorer, context, points)


# Identification flags

def add_identification_arguments(parser: argparse.ArgumentParser, required: bool = False):
    parser.add_argument("--gallery", required=required, help="Gallery embeddings CSV")
    parser.add_argument("--identities", help="Identity label per gallery row")
    parser.add_argument("--distractors", help="Distractor embeddings CSV")
    parser.add_argument("--f", type=float, default=1e-3, help="Target false positive rate")
    parser.add_argument("--grid", type=float_list, help="Comma-separated robustification thresholds")


def identification_setup_from_args(args: argparse.Namespace) -> IdentificationSetup:
    gallery = read_cloud(require_file(args.gallery, "gallery"))
    identities = read_identities(require_file(args.identities, "identities"))
    if len(identities) != gallery.n:
        raise DimensionMismatchError(gallery.n, len(identities), "identity count")
    distractors = read_cloud(require_file(args.distractors, "distractors")).points if args.distractors else []
    return IdentificationSetup(gallery.points, identities, distractors, f=args.f)
