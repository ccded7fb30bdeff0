"""
Quadric-intersection outlier score: mean order-2 distance to the fitted quadrics
"""

import numpy as np

from ..intersection import score_batch
from ..scorer_registry import Scorer, ScorerContext, global_scorer_registry


def quadric_score(context: ScorerContext, points: np.ndarray) -> np.ndarray:
    return score_batch(context.model, points)


quadric_scorer = Scorer(
    name="quadric",
    description="Mean order-2 distance from each point to the quadrics of the fitted intersection",
    function=quadric_score,
    requires=["model"],
)

global_scorer_registry.register_scorer(quadric_scorer)
