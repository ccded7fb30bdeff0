"""
PCA outlier score: distance to the fitted principal subspace
"""

import numpy as np

from ..baselines import pca_distances
from ..scorer_registry import Scorer, ScorerContext, global_scorer_registry


def pca_score(context: ScorerContext, points: np.ndarray) -> np.ndarray:
    return pca_distances(context.pca_model, points)


pca_scorer = Scorer(
    name="pca",
    description="Euclidean distance from each point to the fitted PCA subspace",
    function=pca_score,
    requires=["pca_model"],
)

global_scorer_registry.register_scorer(pca_scorer)
