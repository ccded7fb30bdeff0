"""
Quadratic polynomials in d variables and the point-to-quadric distance approximations.

A polynomial f(x) = x^T A x + b x + c keeps A packed as its upper triangle
(row-major, i <= j). Coefficient vectors use one canonical monomial order:
x_i x_j for i <= j in lexicographic order, then x_1..x_d, then the constant.
Serialized models depend on that order.
"""

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.linalg import qr

from .errors import DimensionMismatchError, EmptyInputError, NotOrthogonalError, QuadManifoldError

ArrayLike = Union[np.ndarray, List[float], Tuple[float, ...]]

HS_TOL = 1e-12
ORTHO_TOL = 1e-10


def quad_count(dim: int) -> int:
    """Number of quadratic monomials x_i x_j (i <= j) in dim variables"""
    return dim * (dim + 1) // 2


def coefficient_count(dim: int) -> int:
    """Length D = (d^2 + 3d)/2 + 1 of a full coefficient vector"""
    return (dim * dim + 3 * dim) // 2 + 1


@lru_cache(maxsize=None)
def triu_indices(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(dim)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


@lru_cache(maxsize=None)
def multinomial_weights(dim: int) -> np.ndarray:
    """b(I) for the quadratic multi-indices: 1 on the diagonal, 2 off it"""
    rows, cols = triu_indices(dim)
    weights = np.where(rows == cols, 1.0, 2.0)
    weights.setflags(write=False)
    return weights


@lru_cache(maxsize=None)
def hs_weights(dim: int) -> np.ndarray:
    """Factors turning quadratic coefficients into the weighted vector: 1 and 1/sqrt(2)"""
    rows, cols = triu_indices(dim)
    weights = np.where(rows == cols, 1.0, 1.0 / math.sqrt(2.0))
    weights.setflags(write=False)
    return weights


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.float64, copy=True)
    values.setflags(write=False)
    return values


def _root_sum_squares(values: np.ndarray, weights: Union[float, np.ndarray] = 1.0) -> float:
    return math.sqrt(float(np.sum(values * values / weights)))


@dataclass(frozen=True, eq=False)
class QuadraticPolynomial:
    """f(x) = x^T A x + b x + c with A stored as a packed upper triangle"""
    dim: int
    quad_packed: np.ndarray
    lin: np.ndarray
    const: float

    def __post_init__(self):
        if self.dim < 1:
            raise QuadManifoldError(f"Polynomial dimension must be positive, got {self.dim}")
        quad_packed = _frozen(self.quad_packed).reshape(-1)
        lin = _frozen(self.lin).reshape(-1)
        if quad_packed.shape[0] != quad_count(self.dim):
            raise DimensionMismatchError(quad_count(self.dim), quad_packed.shape[0], "packed quadratic part")
        if lin.shape[0] != self.dim:
            raise DimensionMismatchError(self.dim, lin.shape[0], "linear part")
        const = float(self.const)
        if not (np.all(np.isfinite(quad_packed)) and np.all(np.isfinite(lin)) and math.isfinite(const)):
            raise QuadManifoldError("Polynomial coefficients must be finite")
        object.__setattr__(self, "quad_packed", quad_packed)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "const", const)

    @classmethod
    def from_matrix(cls, quad: ArrayLike, lin: Optional[ArrayLike] = None, const: float = 0.0) -> 'QuadraticPolynomial':
        """Build from a square matrix; the matrix is symmetrized, which keeps x^T A x unchanged"""
        quad = np.asarray(quad, dtype=np.float64)
        if quad.ndim != 2 or quad.shape[0] != quad.shape[1]:
            raise QuadManifoldError(f"Quadratic part must be a square matrix, got shape {quad.shape}")
        dim = quad.shape[0]
        symmetric = (quad + quad.T) / 2.0
        if lin is None:
            lin = np.zeros(dim)
        return cls(dim=dim, quad_packed=symmetric[triu_indices(dim)], lin=lin, const=const)

    @cached_property
    def quad(self) -> np.ndarray:
        """Full symmetric matrix A"""
        rows, cols = triu_indices(self.dim)
        full = np.zeros((self.dim, self.dim))
        full[rows, cols] = self.quad_packed
        full[cols, rows] = self.quad_packed
        full.setflags(write=False)
        return full

    def quad_entry(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        return float(self.quad_packed[i * self.dim - i * (i - 1) // 2 + (j - i)])

    @cached_property
    def quad_coefficients(self) -> np.ndarray:
        """alpha_{i,j}: A_ii on the diagonal, 2 A_ij off it"""
        rows, cols = triu_indices(self.dim)
        values = np.where(rows == cols, self.quad_packed, 2.0 * self.quad_packed)
        values.setflags(write=False)
        return values

    def __call__(self, p: ArrayLike) -> float:
        return evaluate(self, p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticPolynomial):
            return NotImplemented
        return (self.dim == other.dim
                and np.array_equal(self.quad_packed, other.quad_packed)
                and np.array_equal(self.lin, other.lin)
                and self.const == other.const)

    __hash__ = None

    def scaled(self, factor: float) -> 'QuadraticPolynomial':
        return QuadraticPolynomial(self.dim, self.quad_packed * factor, self.lin * factor, self.const * factor)

    def __repr__(self) -> str:
        return f"QuadraticPolynomial(dim={self.dim}, coefficients={to_coefficients(self).tolist()})"


@dataclass(frozen=True, eq=False)
class Isometry:
    """theta(x) = Q x + v with Q orthogonal"""
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = _frozen(self.rotation)
        translation = _frozen(self.translation).reshape(-1)
        if rotation.ndim != 2 or rotation.shape[0] != rotation.shape[1]:
            raise NotOrthogonalError(f"Rotation must be square, got shape {rotation.shape}")
        if translation.shape[0] != rotation.shape[0]:
            raise DimensionMismatchError(rotation.shape[0], translation.shape[0], "translation")
        residual = np.max(np.abs(rotation.T @ rotation - np.eye(rotation.shape[0])))
        if residual > ORTHO_TOL:
            raise NotOrthogonalError(f"Rotation is not orthogonal: max |Q^T Q - I| = {residual:.3e}")
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @property
    def dim(self) -> int:
        return self.rotation.shape[0]

    @classmethod
    def identity(cls, dim: int) -> 'Isometry':
        return cls(np.eye(dim), np.zeros(dim))

    @classmethod
    def translation_by(cls, vector: ArrayLike) -> 'Isometry':
        vector = np.asarray(vector, dtype=np.float64)
        return cls(np.eye(vector.shape[0]), vector)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, shift_scale: float = 1.0) -> 'Isometry':
        """Haar-distributed orthogonal part (QR of a Gaussian matrix) and a Gaussian shift"""
        q, r = qr(rng.standard_normal((dim, dim)))
        q = q * np.sign(np.diag(r))
        return cls(q, shift_scale * rng.standard_normal(dim))

    def apply(self, points: ArrayLike) -> np.ndarray:
        """Map a single point or an n x d array of points"""
        points = np.asarray(points, dtype=np.float64)
        if points.shape[-1] != self.dim:
            raise DimensionMismatchError(self.dim, points.shape[-1])
        return points @ self.rotation.T + self.translation

    def inverse(self) -> 'Isometry':
        return Isometry(self.rotation.T, -(self.rotation.T @ self.translation))


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        points = _frozen(self.points)
        if points.ndim == 1:
            points = points.reshape(1, -1) if points.size else points.reshape(0, 0)
        if points.ndim != 2:
            raise QuadManifoldError(f"Point cloud must be a 2-D array, got shape {points.shape}")
        if points.shape[0] < 1:
            raise EmptyInputError("Point cloud is empty")
        if points.shape[1] < 1:
            raise QuadManifoldError("Point cloud has zero-dimensional points")
        if not np.all(np.isfinite(points)):
            raise QuadManifoldError("Point cloud contains NaN or infinite entries")
        object.__setattr__(self, "points", points)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def subset(self, indices: ArrayLike) -> 'PointCloud':
        return PointCloud(self.points[np.asarray(indices, dtype=int)])


def as_cloud(points: Union['PointCloud', ArrayLike]) -> PointCloud:
    if isinstance(points, PointCloud):
        return points
    return PointCloud(np.asarray(points, dtype=np.float64))


def _check_point(f: QuadraticPolynomial, p: ArrayLike) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.shape[0] != f.dim:
        raise DimensionMismatchError(f.dim, p.shape[0])
    return p


def _check_same_dim(f: QuadraticPolynomial, g: QuadraticPolynomial):
    if f.dim != g.dim:
        raise DimensionMismatchError(f.dim, g.dim, "polynomial")


# Coefficient representations

def to_coefficients(f: QuadraticPolynomial) -> np.ndarray:
    """Coefficient vector v(f) of length D in canonical monomial order"""
    return np.concatenate([f.quad_coefficients, f.lin, [f.const]])


def from_coefficients(coefficients: ArrayLike, dim: int) -> QuadraticPolynomial:
    coefficients = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    if coefficients.shape[0] != coefficient_count(dim):
        raise DimensionMismatchError(coefficient_count(dim), coefficients.shape[0], "coefficient vector")
    t = quad_count(dim)
    rows, cols = triu_indices(dim)
    quad_packed = np.where(rows == cols, coefficients[:t], coefficients[:t] / 2.0)
    return QuadraticPolynomial(dim, quad_packed, coefficients[t:t + dim], coefficients[-1])


def weighted_quad_vector(f: QuadraticPolynomial) -> np.ndarray:
    """Weighted vector v~(f): off-diagonal coefficients divided by sqrt(2)"""
    return f.quad_coefficients * hs_weights(f.dim)


# Evaluation

def evaluate(f: QuadraticPolynomial, p: ArrayLike) -> float:
    p = _check_point(f, p)
    return float(p @ f.quad @ p + f.lin @ p + f.const)


def gradient(f: QuadraticPolynomial, p: ArrayLike) -> np.ndarray:
    p = _check_point(f, p)
    return 2.0 * (f.quad @ p) + f.lin


def hs_inner(f: QuadraticPolynomial, g: QuadraticPolynomial) -> float:
    """Hilbert-Schmidt inner product of the quadratic parts (a degenerate inner product)"""
    _check_same_dim(f, g)
    return float(np.sum(f.quad_coefficients * g.quad_coefficients / multinomial_weights(f.dim)))


def hs_norm(f: QuadraticPolynomial) -> float:
    return _root_sum_squares(f.quad_coefficients, multinomial_weights(f.dim))


def hs_normalized(f: QuadraticPolynomial) -> QuadraticPolynomial:
    norm = hs_norm(f)
    if norm <= HS_TOL:
        raise QuadManifoldError("Cannot HS-normalize a polynomial with vanishing quadratic part")
    return f.scaled(1.0 / norm)


# Distance approximations. The kernels below work elementwise on arrays so the
# model can score many points and quadrics at once with the same arithmetic.

def order1_distance(value_abs, grad_norm):
    """|f(p)| / ||grad f(p)||; +inf for a nonzero value with zero gradient"""
    value_abs = np.asarray(value_abs, dtype=np.float64)
    grad_norm = np.asarray(grad_norm, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = value_abs / grad_norm
    return np.where(value_abs == 0.0, 0.0, dist)


def order2_distance(value_abs, grad_norm, hs):
    """Nonnegative root of |f(p)| - ||grad f(p)|| t - ||f||_HS t^2

    Uses |f| / (sqrt(h^2 + |f| s) + h), h = ||grad||/2, which avoids the
    cancellation of (sqrt(h^2 + |f| s) - h) / s when h is large.
    """
    value_abs = np.asarray(value_abs, dtype=np.float64)
    grad_norm = np.asarray(grad_norm, dtype=np.float64)
    hs = np.asarray(hs, dtype=np.float64)
    half = grad_norm / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = value_abs / (np.sqrt(half * half + value_abs * hs) + half)
    fallback = np.where((grad_norm <= HS_TOL) & (value_abs > HS_TOL), np.inf, order1_distance(value_abs, grad_norm))
    dist = np.where(hs <= HS_TOL, fallback, dist)
    return np.where(value_abs == 0.0, 0.0, dist)


def dist_alg(f: QuadraticPolynomial, p: ArrayLike) -> float:
    return abs(evaluate(f, p))


def dist_1(f: QuadraticPolynomial, p: ArrayLike) -> float:
    value = evaluate(f, p)
    return float(order1_distance(abs(value), _root_sum_squares(gradient(f, p))))


def dist_2(f: QuadraticPolynomial, p: ArrayLike) -> float:
    value = evaluate(f, p)
    return float(order2_distance(abs(value), _root_sum_squares(gradient(f, p)), hs_norm(f)))


def _taylor_blocks(f: QuadraticPolynomial, p: ArrayLike) -> Tuple[float, np.ndarray, np.ndarray]:
    """Taylor coefficients of f at p grouped by degree, quadratic block in canonical order"""
    p = _check_point(f, p)
    hessian = 2.0 * f.quad_packed
    rows, cols = triu_indices(f.dim)
    # C_I = d^I f / I!; I! is 2 on the diagonal and 1 off it
    second = np.where(rows == cols, hessian / 2.0, hessian)
    return evaluate(f, p), gradient(f, p), second


def taylor_coefficients(f: QuadraticPolynomial, p: ArrayLike) -> Dict[Tuple[int, ...], float]:
    """Map from multi-index I (|I| <= 2) to the Taylor coefficient C_I of f at p"""
    value, first, second = _taylor_blocks(f, p)
    table: Dict[Tuple[int, ...], float] = {tuple([0] * f.dim): value}
    for i in range(f.dim):
        index = [0] * f.dim
        index[i] = 1
        table[tuple(index)] = float(first[i])
    rows, cols = triu_indices(f.dim)
    for i, j, coefficient in zip(rows, cols, second):
        index = [0] * f.dim
        index[i] += 1
        index[j] += 1
        table[tuple(index)] = float(coefficient)
    return table


def approximation_coefficients(f: QuadraticPolynomial, p: ArrayLike, k: int) -> List[float]:
    """c_0 = |f(p)| and c_l = -(sum_{|I|=l} C_I^2 / b(I))^(1/2) for l = 1..k"""
    if k < 1:
        raise QuadManifoldError(f"Approximation order must be at least 1, got {k}")
    value, first, second = _taylor_blocks(f, p)
    coefficients = [abs(value), -_root_sum_squares(first), -_root_sum_squares(second, multinomial_weights(f.dim))]
    # Taylor polynomials of a quadratic stop at degree 2
    coefficients.extend([-0.0] * max(0, k - 2))
    return coefficients[:k + 1]


def dist_k(f: QuadraticPolynomial, p: ArrayLike, k: int) -> float:
    """Approximation distance of order k: the nonnegative root of sum_l c_l t^l"""
    coefficients = approximation_coefficients(f, p, k)
    if k == 1:
        return float(order1_distance(coefficients[0], -coefficients[1]))
    return float(order2_distance(coefficients[0], -coefficients[1], -coefficients[2]))


# Isometry action

def compose_isometry(f: QuadraticPolynomial, theta: Isometry) -> QuadraticPolynomial:
    """f o theta: x -> f(Q x + v)"""
    if theta.dim != f.dim:
        raise DimensionMismatchError(f.dim, theta.dim, "isometry")
    q, v = theta.rotation, theta.translation
    quad = q.T @ f.quad @ q
    lin = q.T @ (2.0 * (f.quad @ v) + f.lin)
    return QuadraticPolynomial.from_matrix(quad, lin, evaluate(f, v))
