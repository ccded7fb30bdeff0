"""
Norm outlier score. The sign setting decides whether large (+1) or small (-1)
norms look like outliers.
"""

import numpy as np

from ..baselines import DEFAULT_NORM_SIGN, norm_scores
from ..scorer_registry import Scorer, ScorerContext, global_scorer_registry


def norm_score(context: ScorerContext, points: np.ndarray) -> np.ndarray:
    return norm_scores(points, sign=float(context.get_setting("norm_sign", DEFAULT_NORM_SIGN)))


norm_scorer = Scorer(
    name="norm",
    description="Signed Euclidean norm of each point",
    function=norm_score,
)

global_scorer_registry.register_scorer(norm_scorer)
