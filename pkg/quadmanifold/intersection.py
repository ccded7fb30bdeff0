"""
The quadric intersection model: a list of m quadrics over a common R^d.

Scoring averages order-2 distances over the quadrics; the orthogonality
penalty measures how far the weighted quadratic parts are from orthonormal.
Models are stored in the versioned `QIM v1` text format.
"""

import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from .errors import DimensionMismatchError, EmptyInputError, ModelFormatError
from .losses.base import evaluate_stack
from .polynomial import (
    ArrayLike, Isometry, PointCloud, QuadraticPolynomial, as_cloud, coefficient_count,
    compose_isometry, from_coefficients, hs_norm, hs_weights, order2_distance, to_coefficients,
)

FORMAT_HEADER = "QIM v1"
LOSS_NAMES = ("qfull", "qbase")
_HEADER_PATTERN = re.compile(r"^d=(\d+) m=(\d+) loss=(\S+) lambda=(\S+)$")
# Points per chunk in batch scoring; bounds the n x m x d gradient buffer
_CHUNK = 1024


@dataclass(frozen=True, eq=False)
class QuadricIntersection:
    """Ordered list of quadrics whose common zero set approximates the data manifold"""
    dim: int
    quadrics: Tuple[QuadraticPolynomial, ...]
    loss: str = "qfull"
    lam: float = 1.0

    def __post_init__(self):
        quadrics = tuple(self.quadrics)
        if not quadrics:
            raise EmptyInputError("A quadric intersection needs at least one quadric")
        for f in quadrics:
            if f.dim != self.dim:
                raise DimensionMismatchError(self.dim, f.dim, "quadric")
        if self.loss not in LOSS_NAMES:
            raise ModelFormatError(f"Unknown loss variant '{self.loss}', expected one of {LOSS_NAMES}")
        lam = float(self.lam)
        if not math.isfinite(lam) or lam < 0:
            raise ModelFormatError(f"lambda must be a finite nonnegative number, got {self.lam}")
        object.__setattr__(self, "quadrics", quadrics)
        object.__setattr__(self, "lam", lam)

    @property
    def m(self) -> int:
        return len(self.quadrics)

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadricIntersection):
            return NotImplemented
        return (self.dim == other.dim and self.loss == other.loss and self.lam == other.lam
                and all(f == g for f, g in zip(self.quadrics, other.quadrics)) and self.m == other.m)

    __hash__ = None

    @classmethod
    def from_coefficient_matrix(cls, coefficients: np.ndarray, dim: int, loss: str = "qfull",
                                lam: float = 1.0) -> 'QuadricIntersection':
        coefficients = np.atleast_2d(np.asarray(coefficients, dtype=np.float64))
        return cls(dim, tuple(from_coefficients(row, dim) for row in coefficients), loss, lam)

    def coefficient_matrix(self) -> np.ndarray:
        """m x D matrix whose rows are the coefficient vectors v(f_k)"""
        return np.stack([to_coefficients(f) for f in self.quadrics])

    def weighted_matrix(self) -> np.ndarray:
        """m x d(d+1)/2 matrix whose rows are the weighted vectors v~(f_k)"""
        return np.stack([f.quad_coefficients for f in self.quadrics]) * hs_weights(self.dim)

    @cached_property
    def _quad_stack(self) -> np.ndarray:
        return np.stack([f.quad for f in self.quadrics])

    @cached_property
    def _lin_stack(self) -> np.ndarray:
        return np.stack([f.lin for f in self.quadrics])

    @cached_property
    def _const_stack(self) -> np.ndarray:
        return np.array([f.const for f in self.quadrics])

    @cached_property
    def _hs_stack(self) -> np.ndarray:
        return np.array([hs_norm(f) for f in self.quadrics])

    def values_and_gradients(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """f_k(p_j) as n x m and grad f_k(p_j) as n x m x d"""
        return evaluate_stack(self._quad_stack, self._lin_stack, self._const_stack, points)

    def distances(self, points: ArrayLike) -> np.ndarray:
        """n x m matrix of order-2 distances from each point to each quadric"""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[1] != self.dim:
            raise DimensionMismatchError(self.dim, points.shape[1])
        blocks = []
        for start in range(0, points.shape[0], _CHUNK):
            values, gradients = self.values_and_gradients(points[start:start + _CHUNK])
            grad_norms = np.sqrt(np.sum(gradients * gradients, axis=-1))
            blocks.append(order2_distance(np.abs(values), grad_norms, self._hs_stack[np.newaxis]))
        return np.concatenate(blocks, axis=0)

    def transformed(self, theta: Isometry) -> 'QuadricIntersection':
        """The model {f_k o theta}"""
        return QuadricIntersection(self.dim, tuple(compose_isometry(f, theta) for f in self.quadrics),
                                   self.loss, self.lam)


def outlier_score(model: QuadricIntersection, p: ArrayLike) -> float:
    """Mean order-2 distance from p to the quadrics of the model"""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.shape[0] != model.dim:
        raise DimensionMismatchError(model.dim, p.shape[0])
    return float(np.mean(model.distances(p[np.newaxis])[0]))


def score_batch(model: QuadricIntersection, cloud: Union[PointCloud, ArrayLike]) -> np.ndarray:
    """Outlier score of every point of the cloud, in input order"""
    cloud = as_cloud(cloud)
    if cloud.dim != model.dim:
        raise DimensionMismatchError(model.dim, cloud.dim)
    return np.mean(model.distances(cloud.points), axis=1)


def ortho_penalty(model: QuadricIntersection) -> float:
    """||V~^T V~ - I||^2_HS over the weighted quadratic-part vectors"""
    weighted = model.weighted_matrix()
    gram = weighted @ weighted.T
    residual = gram - np.eye(model.m)
    return float(np.sum(residual * residual))


# Serialization

def _format_float(value: float) -> str:
    # repr gives the shortest string that parses back to the same double
    return repr(float(value))


def serialize(model: QuadricIntersection) -> bytes:
    lines = [
        FORMAT_HEADER,
        f"d={model.dim} m={model.m} loss={model.loss} lambda={_format_float(model.lam)}",
    ]
    for f in model.quadrics:
        lines.append(" ".join(_format_float(x) for x in to_coefficients(f)))
    return ("\n".join(lines) + "\n").encode("ascii")


def _parse_float(token: str, line_number: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ModelFormatError(f"Line {line_number}: '{token}' is not a decimal number")
    if not math.isfinite(value):
        raise ModelFormatError(f"Line {line_number}: coefficient '{token}' is not finite")
    return value


def deserialize(data: Union[bytes, str]) -> QuadricIntersection:
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError:
            raise ModelFormatError("Model file is not ASCII text")
    lines = data.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ModelFormatError("Model file is empty")

    if lines[0].strip() != FORMAT_HEADER:
        if lines[0].startswith("QIM "):
            raise ModelFormatError(f"Unsupported model format version '{lines[0].strip()}', expected '{FORMAT_HEADER}'")
        raise ModelFormatError(f"Missing '{FORMAT_HEADER}' header")
    if len(lines) < 2:
        raise ModelFormatError("Model file is truncated: missing parameter line")

    match = _HEADER_PATTERN.match(lines[1].strip())
    if not match:
        raise ModelFormatError(f"Line 2: malformed parameter line '{lines[1]}'")
    dim, m, loss = int(match.group(1)), int(match.group(2)), match.group(3)
    lam = _parse_float(match.group(4), 2)
    if dim < 1:
        raise ModelFormatError("Line 2: d must be positive")
    if m < 1:
        raise ModelFormatError("Line 2: m must be at least 1")
    if loss not in LOSS_NAMES:
        raise ModelFormatError(f"Line 2: unknown loss variant '{loss}'")

    rows = lines[2:]
    if len(rows) != m:
        raise ModelFormatError(f"Model file declares m={m} quadrics but contains {len(rows)} coefficient lines")
    expected = coefficient_count(dim)
    coefficients = np.empty((m, expected))
    for k, row in enumerate(rows):
        line_number = k + 3
        tokens = row.split()
        if len(tokens) != expected:
            raise ModelFormatError(f"Line {line_number}: expected {expected} coefficients for d={dim}, got {len(tokens)}")
        coefficients[k] = [_parse_float(token, line_number) for token in tokens]
    return QuadricIntersection.from_coefficient_matrix(coefficients, dim, loss, lam)


def save_model(path: Union[str, Path], model: QuadricIntersection):
    with open(path, "wb") as f:
        f.write(serialize(model))


def load_model(path: Union[str, Path]) -> QuadricIntersection:
    with open(path, "rb") as f:
        return deserialize(f.read())
