from typing import Tuple

import numpy as np

from .base import Loss, feature_weighted_sum, gram_penalty, split_coefficients, values_and_gradients
from ..errors import DegenerateQuadricError
from ..polynomial import HS_TOL, hs_weights, multinomial_weights, order2_distance, triu_indices


class QFullLoss(Loss):
    """Sum of order-2 distances with the Hilbert-Schmidt orthogonality penalty"""
    name = "qfull"

    def _parts(self, coefficients: np.ndarray, points: np.ndarray, dim: int):
        alpha, _, _, _ = split_coefficients(coefficients, dim)
        values, gradients = values_and_gradients(coefficients, points, dim)
        grad_norms = np.sqrt(np.sum(gradients * gradients, axis=-1))
        hs = np.sqrt(np.sum(alpha * alpha / multinomial_weights(dim), axis=1))
        dist = order2_distance(np.abs(values), grad_norms, hs[np.newaxis])
        return alpha, values, gradients, grad_norms, hs, dist

    def data_terms(self, coefficients: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
        return self._parts(coefficients, points, dim)[-1]

    def data_gradient(self, coefficients: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
        alpha, values, gradients, grad_norms, hs, dist = self._parts(coefficients, points, dim)
        if not np.all(np.isfinite(dist)):
            raise DegenerateQuadricError(
                "A quadric has vanishing quadratic part and gradient at a batch point (infinite distance); "
                "re-initialize the model with a different seed"
            )
        value_abs = np.abs(values)
        half = grad_norms / 2.0
        s = np.broadcast_to(hs[np.newaxis], value_abs.shape)
        fallback = s <= HS_TOL
        # Subgradient of |f| at 0 is taken as 0, so points on a quadric contribute nothing
        active = value_abs > 0.0

        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.sqrt(half * half + value_abs * s)
            d_value = np.where(fallback, 1.0 / grad_norms, (1.0 - s * dist / (2.0 * root)) / (root + half))
            d_grad = np.where(fallback, -dist / grad_norms, -dist / (2.0 * root))
            d_hs = np.where(fallback, 0.0, -dist * dist / (2.0 * root))
            unit = gradients / grad_norms[..., np.newaxis]
        d_value = np.where(active, d_value, 0.0)
        d_grad = np.where(active, d_grad, 0.0)
        d_hs = np.where(active, d_hs, 0.0)
        unit = np.where((grad_norms > 0.0)[..., np.newaxis], unit, 0.0)

        # |f(p)| = sign(f(p)) <phi(p), v(f)>
        result = feature_weighted_sum(d_value * np.sign(values), points, dim)

        # ||grad f(p)|| with grad f(p) = 2 A p + b
        rows, cols = triu_indices(dim)
        outer = np.einsum("nk,nki,nj->kij", d_grad, unit, points)
        result[:, :len(rows)] += (outer + outer.transpose(0, 2, 1))[:, rows, cols]
        result[:, len(rows):len(rows) + dim] += np.einsum("nk,nki->ki", d_grad, unit)

        # ||f||_HS
        with np.errstate(divide="ignore", invalid="ignore"):
            d_alpha = np.where(hs[:, np.newaxis] > HS_TOL, alpha / (multinomial_weights(dim) * hs[:, np.newaxis]), 0.0)
        result[:, :len(rows)] += d_hs.sum(axis=0)[:, np.newaxis] * d_alpha
        return result

    def penalty(self, coefficients: np.ndarray, dim: int) -> Tuple[float, np.ndarray]:
        alpha, _, _, _ = split_coefficients(coefficients, dim)
        weights = hs_weights(dim)
        value, weighted_gradient = gram_penalty(alpha * weights)
        gradient = np.zeros_like(coefficients)
        gradient[:, :alpha.shape[1]] = weighted_gradient * weights
        return value, gradient
