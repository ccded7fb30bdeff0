"""
Synthetic point clouds and a numeric geometric-distance oracle.

Fixtures: the tennis-ball seam curve on the unit sphere, circles and spheres,
the Viviani curve (sphere cut by a cylinder), uniform samples of a ball, and
norm-scaled outlier injection. All sampling is deterministic per seed.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigError, DimensionMismatchError, EmptyInputError, NoFeasiblePointError
from .logging import logger
from .polynomial import ArrayLike, PointCloud, QuadraticPolynomial, as_cloud, evaluate, gradient

FEASIBILITY_TOL = 1e-8
# Penalty weights mu = 1, 1e2, ..., 1e8
PENALTY_SCHEDULE = tuple(10.0 ** e for e in range(0, 9, 2))
_PROJECTION_STEPS = 50


@dataclass
class CurveSpec:
    """Tennis-ball seam curve sample: a + b = 1 puts the curve on the unit sphere"""
    a: float = 0.8
    b: float = 0.2
    n: int = 99
    noise_sigma: float = 0.05
    seed: int = 0


def _check_curve_params(a: float, b: float):
    if a <= 0 or b <= 0:
        raise ConfigError(f"Curve parameters a and b must be positive, got a={a}, b={b}")


def _tennis_points(t: np.ndarray, a: float, b: float) -> np.ndarray:
    return np.stack([
        a * np.cos(t) + b * np.cos(3 * t),
        a * np.sin(t) - b * np.sin(3 * t),
        2 * math.sqrt(a * b) * np.sin(2 * t),
    ], axis=-1)


def tennis_point(t: float, a: float = 0.8, b: float = 0.2) -> np.ndarray:
    _check_curve_params(a, b)
    return _tennis_points(np.asarray(float(t)), a, b)


def _check_count(n: int):
    if n < 1:
        raise EmptyInputError(f"Sample size must be at least 1, got {n}")


def _with_noise(points: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    if sigma < 0:
        raise ConfigError(f"Noise standard deviation must be nonnegative, got {sigma}")
    if sigma == 0:
        return points
    return points + rng.normal(scale=sigma, size=points.shape)


def sample_curve(spec: CurveSpec) -> PointCloud:
    _check_curve_params(spec.a, spec.b)
    _check_count(spec.n)
    rng = np.random.default_rng(spec.seed)
    t = rng.uniform(0.0, 2 * math.pi, size=spec.n)
    return PointCloud(_with_noise(_tennis_points(t, spec.a, spec.b), spec.noise_sigma, rng))


def _unit_directions(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    directions = rng.standard_normal((n, dim))
    return directions / np.linalg.norm(directions, axis=1, keepdims=True)


def sample_sphere(n: int, dim: int = 2, radius: float = 1.0, noise: float = 0.0, seed: int = 0) -> PointCloud:
    """Uniform points on the radius sphere in R^dim (a circle for dim=2)"""
    _check_count(n)
    rng = np.random.default_rng(seed)
    return PointCloud(_with_noise(radius * _unit_directions(n, dim, rng), noise, rng))


def sample_viviani(n: int, noise: float = 0.0, seed: int = 0) -> PointCloud:
    """Points on the intersection of the unit sphere and the cylinder (x - 1/2)^2 + y^2 = 1/4"""
    _check_count(n)
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, 2 * math.pi, size=n)
    points = np.stack([np.cos(u) ** 2, np.sin(u) * np.cos(u), np.sin(u)], axis=-1)
    return PointCloud(_with_noise(points, noise, rng))


def sample_uniform_ball(n: int, dim: int, radius: float = 1.0, seed: int = 0) -> PointCloud:
    _check_count(n)
    rng = np.random.default_rng(seed)
    directions = _unit_directions(n, dim, rng)
    radii = radius * rng.uniform(size=n) ** (1.0 / dim)
    return PointCloud(directions * radii[:, np.newaxis])


def inject_outliers(cloud: Union[PointCloud, ArrayLike], count: int, norm_factor: float = 2.0,
                    seed: int = 0) -> Tuple[PointCloud, np.ndarray]:
    """Append `count` points in uniform random directions with norm = factor x median inlier norm

    Returns the extended cloud and the indices of the appended outliers.
    """
    cloud = as_cloud(cloud)
    if count < 0:
        raise ConfigError(f"Outlier count must be nonnegative, got {count}")
    if count == 0:
        return cloud, np.zeros(0, dtype=np.int64)
    rng = np.random.default_rng(seed)
    radius = norm_factor * float(np.median(np.linalg.norm(cloud.points, axis=1)))
    outliers = radius * _unit_directions(count, cloud.dim, rng)
    indices = np.arange(cloud.n, cloud.n + count)
    return PointCloud(np.concatenate([cloud.points, outliers])), indices


def labels_for(n: int, outlier_indices: Iterable[int]) -> np.ndarray:
    """0/1 label vector of length n with ones at the outlier indices"""
    labels = np.zeros(n, dtype=np.int64)
    labels[np.asarray(list(outlier_indices), dtype=np.int64)] = 1
    return labels


# Geometric distance oracle

def _project_onto(f: QuadraticPolynomial, x: np.ndarray) -> np.ndarray:
    """Newton steps x <- x - f(x) grad f / |grad f|^2 onto Z(f)"""
    for _ in range(_PROJECTION_STEPS):
        value = evaluate(f, x)
        if abs(value) < 1e-15:
            break
        grad = gradient(f, x)
        grad_sq = float(np.dot(grad, grad))
        if grad_sq < 1e-24:
            break
        x = x - value * grad / grad_sq
    return x


def _penalty_descent(f: QuadraticPolynomial, p: np.ndarray, x0: np.ndarray, steps: int) -> np.ndarray:
    x = x0
    for mu in PENALTY_SCHEDULE:
        def objective(y, mu=mu):
            value = evaluate(f, y)
            diff = y - p
            return float(np.dot(diff, diff) + mu * value * value), 2.0 * diff + 2.0 * mu * value * gradient(f, y)

        x = minimize(objective, x, jac=True, method="BFGS", options={"maxiter": steps}).x
    return _project_onto(f, x)


def geometric_distance_oracle(f: QuadraticPolynomial, p: ArrayLike, restarts: int = 4, steps: int = 200,
                              seed: int = 0) -> float:
    """Upper estimate of the distance from p to Z(f) by multi-start penalty descent

    The first start is p itself, later ones are random perturbations of p. Every
    returned candidate is projected onto Z(f), so the result never undercuts the
    true distance by more than the projection tolerance.
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.shape[0] != f.dim:
        raise DimensionMismatchError(f.dim, p.shape[0])
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.linalg.norm(p)))

    best: Optional[float] = None
    for attempt in range(max(1, restarts)):
        x0 = p if attempt == 0 else p + scale * rng.standard_normal(f.dim)
        x = _penalty_descent(f, p, x0, steps)
        if abs(evaluate(f, x)) < FEASIBILITY_TOL:
            distance = float(np.linalg.norm(x - p))
            best = distance if best is None else min(best, distance)
    if best is None:
        logger.debug(f"No feasible point of {f!r} found from {restarts} starts")
        raise NoFeasiblePointError(f"No point of the zero set found in {restarts} restarts; is Z(f) empty?")
    return best
