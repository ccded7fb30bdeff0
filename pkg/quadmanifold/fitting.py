"""
Initialization and minibatch gradient descent for quadric intersections.
"""

import math
import time
from typing import Optional, Tuple, Union

import numpy as np
from scipy.linalg import qr

from .config import FitConfig, LossVariant, LrSchedule
from .errors import ConfigError, DimensionMismatchError, DivergenceError, QuadManifoldError
from .intersection import QuadricIntersection
from .logging import logger
from .losses import LossTerms, get_loss
from .polynomial import ArrayLike, PointCloud, as_cloud, coefficient_count, hs_weights, quad_count
from .trace import TrainTrace

# Scale of the initial linear and constant coefficients relative to the quadratic part
_AFFINE_INIT_SCALE = 0.01


def _batch_points(model: QuadricIntersection, batch: Union[PointCloud, ArrayLike]) -> np.ndarray:
    cloud = as_cloud(batch)
    if cloud.dim != model.dim:
        raise DimensionMismatchError(model.dim, cloud.dim)
    return cloud.points


def loss_qfull(model: QuadricIntersection, batch: Union[PointCloud, ArrayLike], lam: float) -> LossTerms:
    """sum_j sum_k dist_2(p_j, Z(f_k)) + lam * ||V~^T V~ - I||^2_HS"""
    points = _batch_points(model, batch)
    return get_loss(LossVariant.QFULL).value(model.coefficient_matrix(), points, model.dim, lam)


def loss_qbase(model: QuadricIntersection, batch: Union[PointCloud, ArrayLike], lam: float) -> LossTerms:
    """sum_j sum_k f_k(p_j)^2 + lam * ||V^T V - I||^2 over the full coefficient vectors"""
    points = _batch_points(model, batch)
    return get_loss(LossVariant.QBASE).value(model.coefficient_matrix(), points, model.dim, lam)


def grad_loss(variant: Union[str, LossVariant], model: QuadricIntersection, batch: Union[PointCloud, ArrayLike],
              lam: float, data_weight: float = 1.0) -> np.ndarray:
    """Gradient of data_weight * data + lam * penalty over all m x D coefficients"""
    points = _batch_points(model, batch)
    return get_loss(variant).gradient(model.coefficient_matrix(), points, model.dim, lam, data_weight)


def init_model(dim: int, m: int, seed: int, loss: str = "qfull", lam: float = 1.0) -> QuadricIntersection:
    """Random model whose weighted quadratic parts are exactly orthonormal"""
    t = quad_count(dim)
    if m > t:
        raise ConfigError(f"Cannot fit {m} HS-orthonormal quadrics in dimension {dim}: at most {t} exist")
    rng = np.random.default_rng(seed)
    coefficients = rng.standard_normal((m, coefficient_count(dim)))

    weights = hs_weights(dim)
    q, r = qr((coefficients[:, :t] * weights).T, mode="economic")
    # Fix the sign ambiguity of QR so the result depends only on the seed
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    coefficients[:, :t] = (q * signs).T / weights
    coefficients[:, t:] *= _AFFINE_INIT_SCALE
    return QuadricIntersection.from_coefficient_matrix(coefficients, dim, loss, lam)


def normalize_to_sphere(points: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(points, axis=1)
    if np.any(norms == 0.0):
        raise QuadManifoldError("Cannot project the zero vector onto the unit sphere")
    return points / norms[:, np.newaxis]


def learning_rate_at(config: FitConfig, step: int, total_steps: int) -> float:
    if config.lr_schedule == LrSchedule.COSINE and total_steps > 0:
        return config.learning_rate * 0.5 * (1.0 + math.cos(math.pi * step / total_steps))
    if config.lr_schedule == LrSchedule.EXPONENTIAL and total_steps > 0:
        return config.learning_rate * config.final_lr_factor ** (step / total_steps)
    return config.learning_rate


def fit(cloud: Union[PointCloud, ArrayLike], config: Optional[FitConfig] = None) -> Tuple[QuadricIntersection, TrainTrace]:
    """Fit m quadrics to the cloud by minibatch SGD on the configured loss

    Each step minimizes data/|B| + lam * penalty on its batch; the last short
    batch of an epoch is kept. Runs are deterministic given the seed.
    """
    config = config or FitConfig()
    config.validate()
    points = as_cloud(cloud).points
    n, dim = points.shape
    if config.normalize_inputs:
        points = normalize_to_sphere(points)

    # Shuffling draws from a child stream so it never overlaps the init_model stream
    rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(1)[0])
    if config.subsample is not None and config.subsample < n:
        points = points[np.sort(rng.choice(n, size=config.subsample, replace=False))]
        n = points.shape[0]

    model = init_model(dim, config.m, config.seed, config.loss.value, config.lam)
    trace = TrainTrace()
    if config.epochs == 0:
        return model, trace

    loss = get_loss(config.loss)
    coefficients = model.coefficient_matrix()
    steps_per_epoch = math.ceil(n / config.batch_size)
    total_steps = steps_per_epoch * config.epochs

    logger.info(f"Fitting {config.m} quadrics ({loss.name}) to {n} points in R^{dim} "
                f"for {config.epochs} epochs")
    step = 0
    started = time.perf_counter()
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = points[order[start:start + config.batch_size]]
            gradient = loss.gradient(coefficients, batch, dim, config.lam, data_weight=1.0 / batch.shape[0])
            coefficients = coefficients - learning_rate_at(config, step, total_steps) * gradient
            step += 1

        terms = loss.value(coefficients, points, dim, config.lam) if np.all(np.isfinite(coefficients)) else None
        data = terms.data / n if terms else float("nan")
        penalty = terms.penalty if terms else float("nan")
        total = data + config.lam * penalty
        if not math.isfinite(total):
            logger.error(f"Loss is {total} after epoch {epoch}")
            raise DivergenceError(epoch, total)
        trace.add_epoch(epoch, data, penalty, total, time.perf_counter() - started)
        logger.log_epoch(epoch, data, penalty, total)

    model = QuadricIntersection.from_coefficient_matrix(coefficients, dim, loss.name, config.lam)
    logger.info(f"Fit finished: mean data term {trace.data[-1]:.6g}, orthogonality penalty {trace.final_penalty:.3e}")
    return model, trace
