from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..polynomial import coefficient_count, quad_count, triu_indices
from ..errors import DimensionMismatchError


@dataclass
class LossTerms:
    """Decomposition of a loss value: data term, raw penalty, and data + lambda * penalty"""
    data: float
    penalty: float
    total: float


def split_coefficients(coefficients: np.ndarray, dim: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split an m x D coefficient matrix into (alpha, A, b, c)

    alpha is m x d(d+1)/2 in canonical order, A is the m x d x d stack of symmetric matrices.
    """
    if coefficients.ndim != 2 or coefficients.shape[1] != coefficient_count(dim):
        raise DimensionMismatchError(coefficient_count(dim), coefficients.shape[-1], "coefficient vector")
    t = quad_count(dim)
    alpha = coefficients[:, :t]
    rows, cols = triu_indices(dim)
    packed = np.where(rows == cols, alpha, alpha / 2.0)
    quad = np.zeros((coefficients.shape[0], dim, dim))
    quad[:, rows, cols] = packed
    quad[:, cols, rows] = packed
    return alpha, quad, coefficients[:, t:t + dim], coefficients[:, -1]


def evaluate_stack(quad: np.ndarray, lin: np.ndarray, const: np.ndarray,
                   points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Values (n x m) and gradients (n x m x d) of the quadrics given as m x d x d, m x d and m stacks"""
    quad_points = np.einsum("kde,ne->nkd", quad, points)
    values = np.einsum("nd,nkd->nk", points, quad_points) + points @ lin.T + const
    return values, 2.0 * quad_points + lin[np.newaxis]


def values_and_gradients(coefficients: np.ndarray, points: np.ndarray, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """f_k(p_j) as n x m and grad f_k(p_j) as n x m x d"""
    _, quad, lin, const = split_coefficients(coefficients, dim)
    return evaluate_stack(quad, lin, const, points)


def feature_weighted_sum(weights: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
    """sum_j weights[j, k] * phi(p_j) for every k, as an m x D matrix, without building phi"""
    rows, cols = triu_indices(dim)
    second = np.einsum("nk,ni,nj->kij", weights, points, points)[:, rows, cols]
    return np.concatenate([second, weights.T @ points, weights.sum(axis=0)[:, np.newaxis]], axis=1)


def gram_penalty(vectors: np.ndarray) -> Tuple[float, np.ndarray]:
    """||V^T V - I||^2 for the rows of `vectors` and its gradient 4 (G - I) V"""
    residual = vectors @ vectors.T - np.eye(vectors.shape[0])
    return float(np.sum(residual * residual)), 4.0 * residual @ vectors


class Loss(ABC):
    """A training objective over an m x D matrix of quadric coefficients"""
    name: str = ""

    @abstractmethod
    def data_terms(self, coefficients: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
        """Per-point, per-quadric contributions to the data term (n x m)"""
        pass

    @abstractmethod
    def data_gradient(self, coefficients: np.ndarray, points: np.ndarray, dim: int) -> np.ndarray:
        """Gradient of the summed data term with respect to the coefficients (m x D)"""
        pass

    @abstractmethod
    def penalty(self, coefficients: np.ndarray, dim: int) -> Tuple[float, np.ndarray]:
        """Orthogonality penalty and its gradient (m x D)"""
        pass

    def value(self, coefficients: np.ndarray, points: np.ndarray, dim: int, lam: float) -> LossTerms:
        data = float(np.sum(self.data_terms(coefficients, points, dim)))
        penalty, _ = self.penalty(coefficients, dim)
        return LossTerms(data=data, penalty=penalty, total=data + lam * penalty)

    def gradient(self, coefficients: np.ndarray, points: np.ndarray, dim: int, lam: float,
                 data_weight: float = 1.0) -> np.ndarray:
        """Gradient of data_weight * data + lam * penalty"""
        _, penalty_gradient = self.penalty(coefficients, dim)
        total = lam * penalty_gradient
        if data_weight != 0.0:
            total = total + data_weight * self.data_gradient(coefficients, points, dim)
        return total
