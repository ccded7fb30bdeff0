# quadmanifold - Quadric intersections for manifold fitting and outlier detection

from .errors import (
    QuadManifoldError, DimensionMismatchError, EmptyInputError, NotOrthogonalError, ModelFormatError,
    DegenerateQuadricError, DivergenceError, NoFeasiblePointError, ConfigError, CloudFormatError, UsageError,
)
from .polynomial import (
    QuadraticPolynomial, Isometry, PointCloud, to_coefficients, from_coefficients, evaluate, gradient,
    hs_inner, hs_norm, hs_normalized, dist_alg, dist_1, dist_2, dist_k, taylor_coefficients,
    approximation_coefficients, compose_isometry,
)
from .intersection import (
    QuadricIntersection, outlier_score, score_batch, ortho_penalty, serialize, deserialize, save_model, load_model,
)
from .config import FitConfig, LossVariant, LrSchedule
from .presets import presets, get_preset_info
from .trace import TrainTrace
from .fitting import init_model, fit, loss_qfull, loss_qbase, grad_loss
from .baselines import (
    PcaModel, pca_fit, pca_distance, feature_map, feature_map_tilde, qbase_exact, norm_score,
    eigen_decay_profile, suggest_quadric_count,
)
from .evaluation import (
    LabeledScores, IdentificationSetup, EvalReport, CosineSimilarity, RobustifiedSimilarity, auc_roc, roc_points,
    cosine_similarity, robustify, similarity_matrix, similarity_threshold, identification_rate,
    full_identification_rate, threshold_search, split_setup,
)
from .datagen import (
    CurveSpec, tennis_point, sample_curve, inject_outliers, labels_for, sample_sphere, sample_viviani,
    sample_uniform_ball, geometric_distance_oracle,
)
from .scorer_registry import Scorer, ScorerRegistry, ScorerContext, global_scorer_registry
from .logging import logger, set_verbose_logging

# Import scorer modules to register scorers
from . import scorers

__all__ = [
    "QuadManifoldError", "DimensionMismatchError", "EmptyInputError", "NotOrthogonalError", "ModelFormatError",
    "DegenerateQuadricError", "DivergenceError", "NoFeasiblePointError", "ConfigError", "CloudFormatError",
    "UsageError",
    "QuadraticPolynomial", "Isometry", "PointCloud", "to_coefficients", "from_coefficients", "evaluate",
    "gradient", "hs_inner", "hs_norm", "hs_normalized", "dist_alg", "dist_1", "dist_2", "dist_k",
    "taylor_coefficients", "approximation_coefficients", "compose_isometry",
    "QuadricIntersection", "outlier_score", "score_batch", "ortho_penalty", "serialize", "deserialize",
    "save_model", "load_model",
    "FitConfig", "LossVariant", "LrSchedule", "presets", "get_preset_info", "TrainTrace",
    "init_model", "fit", "loss_qfull", "loss_qbase", "grad_loss",
    "PcaModel", "pca_fit", "pca_distance", "feature_map", "feature_map_tilde", "qbase_exact", "norm_score",
    "eigen_decay_profile", "suggest_quadric_count",
    "LabeledScores", "IdentificationSetup", "EvalReport", "CosineSimilarity", "RobustifiedSimilarity",
    "auc_roc", "roc_points", "cosine_similarity", "robustify", "similarity_matrix", "similarity_threshold",
    "identification_rate", "full_identification_rate", "threshold_search", "split_setup",
    "CurveSpec", "tennis_point", "sample_curve", "inject_outliers", "labels_for", "sample_sphere",
    "sample_viviani", "sample_uniform_ball", "geometric_distance_oracle",
    "Scorer", "ScorerRegistry", "ScorerContext", "global_scorer_registry",
    "logger", "set_verbose_logging",
]
