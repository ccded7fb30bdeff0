"""
Linear and kernel baselines for the quadric detector.

PCA subspace distances, the degree-2 feature maps shared with the coefficient
order of `polynomial`, the exact SVD solution of the Q-BASE problem and the
norm score. `qbase_exact` runs a dense SVD of an n x O(d^2) matrix, so its cost
grows like d^6; it is meant for small d.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from scipy.linalg import svd

from .errors import ConfigError, DimensionMismatchError
from .intersection import QuadricIntersection
from .polynomial import ArrayLike, PointCloud, as_cloud, coefficient_count, triu_indices


@dataclass(frozen=True)
class PcaModel:
    """k-dimensional (affine when centered) subspace of R^d"""
    dim: int
    k: int
    basis: np.ndarray
    centered: bool
    mean: np.ndarray
    singular_values: np.ndarray

    def project(self, points: np.ndarray) -> np.ndarray:
        shifted = points - self.mean
        return (shifted @ self.basis) @ self.basis.T


def _check_dim(dim: int, points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[1] != dim:
        raise DimensionMismatchError(dim, points.shape[1])
    return points


def pca_fit(cloud: Union[PointCloud, ArrayLike], k: int, centered: bool = False) -> PcaModel:
    """Top-k right singular directions of the (optionally centered) data matrix"""
    points = as_cloud(cloud).points
    n, dim = points.shape
    if not 1 <= k <= dim:
        raise ConfigError(f"PCA dimension k must be in [1, {dim}], got {k}")

    mean = points.mean(axis=0) if centered else np.zeros(dim)
    _, s, vt = svd(points - mean, full_matrices=True)
    singular_values = np.zeros(dim)
    singular_values[:s.shape[0]] = s
    return PcaModel(dim=dim, k=k, basis=vt[:k].T.copy(), centered=centered, mean=mean,
                    singular_values=singular_values)


def pca_distance(model: PcaModel, p: ArrayLike) -> float:
    """||p - proj(p)||, distance from p to the fitted subspace"""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    return float(pca_distances(model, p[np.newaxis])[0])


def pca_distances(model: PcaModel, points: ArrayLike) -> np.ndarray:
    points = _check_dim(model.dim, points)
    residual = (points - model.mean) - model.project(points)
    return np.linalg.norm(residual, axis=1)


def reconstruction_error(model: PcaModel, cloud: Union[PointCloud, ArrayLike]) -> float:
    """Sum of squared subspace distances over the cloud"""
    distances = pca_distances(model, as_cloud(cloud).points)
    return float(np.sum(distances * distances))


# Feature maps

def feature_map(p: ArrayLike) -> np.ndarray:
    """phi(p) = (x_i x_j for i <= j, x_1..x_d, 1); <phi(p), v(f)> = f(p)

    Accepts a single point or an n x d batch.
    """
    points = np.asarray(p, dtype=np.float64)
    single = points.ndim == 1
    points = np.atleast_2d(points)
    rows, cols = triu_indices(points.shape[1])
    features = np.concatenate([
        points[:, rows] * points[:, cols],
        points,
        np.ones((points.shape[0], 1)),
    ], axis=1)
    return features[0] if single else features


def feature_map_tilde(p: ArrayLike) -> np.ndarray:
    """Feature map of the polynomial kernel: <phi~(x), phi~(y)> = (<x, y> + 1)^2"""
    features = np.array(feature_map(p), dtype=np.float64)
    dim = int(np.asarray(p).shape[-1])
    rows, cols = triu_indices(dim)
    scale = np.ones(coefficient_count(dim))
    scale[:rows.shape[0]][rows != cols] = math.sqrt(2.0)
    scale[rows.shape[0]:rows.shape[0] + dim] = math.sqrt(2.0)
    return features * scale


def qbase_exact(cloud: Union[PointCloud, ArrayLike], m: int) -> Tuple[QuadricIntersection, float]:
    """Optimal Q-BASE data term over Euclidean-orthonormal coefficient vectors

    The m right singular vectors of the feature matrix with the smallest singular
    values (non-centered PCA in feature space). Returns the model and the sum of
    the m smallest squared singular values.
    """
    points = as_cloud(cloud).points
    dim = points.shape[1]
    size = coefficient_count(dim)
    if not 1 <= m <= size:
        raise ConfigError(f"m must be in [1, {size}] for d={dim}, got {m}")

    _, s, vt = svd(feature_map(points), full_matrices=True)
    # Fewer points than features leaves trailing directions with singular value 0
    squared = np.zeros(size)
    squared[:s.shape[0]] = s * s
    model = QuadricIntersection.from_coefficient_matrix(vt[size - m:], dim, "qbase")
    return model, float(np.sum(squared[size - m:]))


# The norm column itself; pass -1 when low-norm points are the outliers
DEFAULT_NORM_SIGN = 1.0


def norm_score(p: ArrayLike, sign: float = DEFAULT_NORM_SIGN) -> float:
    """sign * ||p||; use sign=-1 when low-norm points are the outliers"""
    return float(sign * np.linalg.norm(np.asarray(p, dtype=np.float64)))


def norm_scores(points: ArrayLike, sign: float = DEFAULT_NORM_SIGN) -> np.ndarray:
    return sign * np.linalg.norm(np.atleast_2d(np.asarray(points, dtype=np.float64)), axis=1)


def eigen_decay_profile(cloud: Union[PointCloud, ArrayLike]) -> List[float]:
    """-log(lambda_i / lambda_1) over the non-centered PCA spectrum"""
    model = pca_fit(cloud, 1)
    eigenvalues = model.singular_values ** 2
    if eigenvalues[0] == 0.0:
        return [0.0] + [math.inf] * (model.dim - 1)
    with np.errstate(divide="ignore"):
        return [float(x) for x in -np.log(eigenvalues / eigenvalues[0])]


def suggest_quadric_count(cloud: Union[PointCloud, ArrayLike], threshold: float) -> int:
    """d minus the estimated linear dimension, at least 1

    Components whose eigenvalue decay stays below the threshold count toward
    the linear dimension.
    """
    profile = eigen_decay_profile(cloud)
    linear_dim = sum(1 for decay in profile if decay < threshold)
    return max(1, len(profile) - linear_dim)
