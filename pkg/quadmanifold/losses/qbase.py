from typing import Tuple

import numpy as np

from .base import Loss, feature_weighted_sum, gram_penalty, values_and_gradients


class QBaseLoss(Loss):
    """Squared algebraic distances with a Euclidean penalty on the full coefficient vectors

    This is the objective solved exactly by non-centered PCA in the degree-2
    feature space; it is not equivariant under isometries.
    """
    name = "qbase"

    def data_terms(self, coefficients: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
        values, _ = values_and_gradients(coefficients, points, dim)
        return values * values

    def data_gradient(self, coefficients: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
        values, _ = values_and_gradients(coefficients, points, dim)
        return feature_weighted_sum(2.0 * values, points, dim)

    def penalty(self, coefficients: np.ndarray, dim: int) -> Tuple[float, np.ndarray]:
        return gram_penalty(coefficients)
