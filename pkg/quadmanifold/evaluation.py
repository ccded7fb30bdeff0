"""
Detection and identification metrics.

AUC-ROC for outlier scores, cosine similarity and its robustified variant,
the similarity threshold at a target false positive rate, the identification
rate with and without distractors, and the grid search for the robustification
threshold.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata
from sklearn.metrics import roc_curve

from .errors import DimensionMismatchError, EmptyInputError, QuadManifoldError

# Maps an n x d array of points to n outlier scores
ScoreFunction = Callable[[np.ndarray], np.ndarray]

ONE_PERCENT_QUANTILE = 99.0


@dataclass
class LabeledScores:
    """Outlier scores with ground truth labels (0 = inlier, 1 = outlier)"""
    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        self.labels = np.asarray(self.labels).reshape(-1)
        if self.scores.shape != self.labels.shape:
            raise DimensionMismatchError(self.scores.shape[0], self.labels.shape[0], "label count")
        if not np.all(np.isin(self.labels, (0, 1))):
            raise QuadManifoldError("Labels must be 0 (inlier) or 1 (outlier)")
        self.labels = self.labels.astype(np.int64)

    def _check_both_classes(self):
        positives = int(np.sum(self.labels))
        if positives == 0 or positives == self.labels.shape[0]:
            raise QuadManifoldError("AUC-ROC needs at least one inlier and one outlier")


def auc_roc(data: LabeledScores) -> float:
    """P(score_outlier > score_inlier) + P(tie) / 2, via average ranks"""
    data._check_both_classes()
    ranks = rankdata(data.scores)
    positive = data.labels == 1
    n_pos = int(np.sum(positive))
    n_neg = data.labels.shape[0] - n_pos
    u = float(np.sum(ranks[positive])) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def roc_points(data: LabeledScores) -> Tuple[np.ndarray, np.ndarray]:
    """(fpr, tpr) arrays of the ROC curve"""
    data._check_both_classes()
    fpr, tpr, _ = roc_curve(data.labels, data.scores)
    return fpr, tpr


# Similarities

def cosine_similarity(x, y) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape != y.shape:
        raise DimensionMismatchError(x.shape[0], y.shape[0])
    norms = np.linalg.norm(x) * np.linalg.norm(y)
    if norms == 0.0:
        raise QuadManifoldError("Cosine similarity is undefined for the zero vector")
    return float(np.clip(np.dot(x, y) / norms, -1.0, 1.0))


def _unit_rows(points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    norms = np.linalg.norm(points, axis=1)
    if np.any(norms == 0.0):
        raise QuadManifoldError("Cosine similarity is undefined for the zero vector")
    return points / norms[:, np.newaxis]


class CosineSimilarity:
    def __call__(self, x, y) -> float:
        return cosine_similarity(x, y)

    def matrix(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """All pairwise similarities as a len(xs) x len(ys) matrix"""
        if len(ys) == 0:
            return np.zeros((len(xs), 0))
        return np.clip(_unit_rows(xs) @ _unit_rows(ys).T, -1.0, 1.0)


class RobustifiedSimilarity:
    """s_h(x, y) = s(x, y) if max(o(x), o(y)) < t, else 0"""

    def __init__(self, base, scorer: ScoreFunction, threshold: float):
        if math.isnan(threshold):
            raise QuadManifoldError("Robustification threshold must not be NaN")
        self.base = base
        self.scorer = scorer
        self.threshold = float(threshold)

    def _accepted(self, points: np.ndarray) -> np.ndarray:
        if len(points) == 0:
            return np.zeros(0, dtype=bool)
        return np.asarray(self.scorer(np.atleast_2d(points))) < self.threshold

    def __call__(self, x, y) -> float:
        points = np.stack([np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)])
        if not np.all(self._accepted(points)):
            return 0.0
        return self.base(x, y)

    def matrix(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        mask = np.logical_and.outer(self._accepted(xs), self._accepted(ys))
        return np.where(mask, similarity_matrix(self.base, xs, ys), 0.0)


def robustify(similarity, scorer: ScoreFunction, threshold: float) -> RobustifiedSimilarity:
    return RobustifiedSimilarity(similarity, scorer, threshold)


def similarity_matrix(similarity, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Pairwise similarities; plain (x, y) -> float callables are evaluated pair by pair"""
    matrix = getattr(similarity, "matrix", None)
    if matrix is not None:
        return np.asarray(matrix(xs, ys), dtype=np.float64)
    result = np.zeros((len(xs), len(ys)))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            result[i, j] = similarity(x, y)
    return result


def similarity_threshold(scores: Sequence[float], same: Sequence[bool], f: float) -> float:
    """Smallest threshold a with fpr(a) <= f, where s >= a counts as positive

    Candidates are the observed scores, the next float above the largest
    negative score, and +inf. f = 1 gives -inf.
    """
    if not 0.0 <= f <= 1.0:
        raise QuadManifoldError(f"Target false positive rate must be in [0, 1], got {f}")
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    same = np.asarray(same, dtype=bool).reshape(-1)
    if scores.shape != same.shape:
        raise DimensionMismatchError(scores.shape[0], same.shape[0], "label count")
    negatives = np.sort(scores[~same])
    if negatives.shape[0] == 0:
        raise EmptyInputError("Similarity threshold needs at least one negative pair")
    if f >= 1.0:
        return -math.inf

    candidates = np.unique(np.concatenate([scores, [np.nextafter(negatives[-1], math.inf), math.inf]]))
    false_positives = negatives.shape[0] - np.searchsorted(negatives, candidates, side="left")
    fpr = false_positives / negatives.shape[0]
    return float(candidates[np.argmax(fpr <= f)])


# Identification

@dataclass
class IdentificationSetup:
    """Gallery embeddings with identity labels, distractors, a similarity and a target fpr"""
    gallery: np.ndarray
    identities: np.ndarray
    distractors: np.ndarray
    similarity: object = field(default_factory=CosineSimilarity)
    f: float = 1e-3

    def __post_init__(self):
        self.gallery = np.atleast_2d(np.asarray(self.gallery, dtype=np.float64))
        self.identities = np.asarray(self.identities).reshape(-1)
        if self.identities.shape[0] != self.gallery.shape[0]:
            raise DimensionMismatchError(self.gallery.shape[0], self.identities.shape[0], "identity count")
        distractors = np.asarray(self.distractors, dtype=np.float64)
        self.distractors = distractors.reshape(-1, self.gallery.shape[1]) if distractors.size else \
            np.zeros((0, self.gallery.shape[1]))


def _gallery_pairs(setup: IdentificationSetup) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pair indices (i < j, self-pairs excluded), their similarities and same-identity flags"""
    first, second = np.triu_indices(setup.gallery.shape[0], k=1)
    sims = similarity_matrix(setup.similarity, setup.gallery, setup.gallery)[first, second]
    same = setup.identities[first] == setup.identities[second]
    if not np.any(same):
        raise EmptyInputError("Identification needs at least one pair with the same identity")
    return first, second, sims, same


def identification_rate(setup: IdentificationSetup) -> float:
    """tpr of the classifier s >= sth(f) over same-identity gallery pairs"""
    _, _, sims, same = _gallery_pairs(setup)
    threshold = similarity_threshold(sims, same, setup.f)
    return float(np.mean(sims[same] >= threshold))


def full_identification_rate(setup: IdentificationSetup) -> float:
    """As identification_rate, but genuine pairs must also beat every distractor"""
    first, second, sims, same = _gallery_pairs(setup)
    threshold = similarity_threshold(sims, same, setup.f)
    if setup.distractors.shape[0]:
        best_distractor = similarity_matrix(setup.similarity, setup.gallery, setup.distractors).max(axis=1)
        undistracted = sims > np.maximum(best_distractor[first], best_distractor[second])
    else:
        undistracted = np.ones_like(same)
    accepted = (sims >= threshold) & undistracted
    return float(np.mean(accepted[same]))


@dataclass
class ThresholdSearchResult:
    threshold: float
    ir: float
    baseline_ir: float
    fallback: bool = False
    grid_ir: List[float] = field(default_factory=list)


def outlier_quantile_threshold(setup: IdentificationSetup, scorer: ScoreFunction) -> float:
    """Score above which one percent of gallery and distractor points lie"""
    points = np.concatenate([setup.gallery, setup.distractors])
    return float(np.percentile(scorer(points), ONE_PERCENT_QUANTILE))


def threshold_search(setup: IdentificationSetup, scorer: ScoreFunction, grid: Sequence[float],
                     f: Optional[float] = None) -> ThresholdSearchResult:
    """Grid point maximizing IR of the robustified similarity

    When every grid point is strictly worse than the plain similarity, the
    threshold marking one percent of gallery and distractor points as outliers
    is used instead.
    """
    grid = [float(t) for t in grid]
    if not grid:
        raise EmptyInputError("Threshold grid is empty")
    if f is not None:
        setup = replace(setup, f=f)

    baseline = identification_rate(setup)
    grid_ir = [identification_rate(replace(setup, similarity=robustify(setup.similarity, scorer, t)))
               for t in grid]
    if all(ir < baseline for ir in grid_ir):
        threshold = outlier_quantile_threshold(setup, scorer)
        ir = identification_rate(replace(setup, similarity=robustify(setup.similarity, scorer, threshold)))
        return ThresholdSearchResult(threshold, ir, baseline, fallback=True, grid_ir=grid_ir)

    best = int(np.argmax(grid_ir))
    return ThresholdSearchResult(grid[best], grid_ir[best], baseline, grid_ir=grid_ir)


def split_setup(setup: IdentificationSetup, seed: int) -> Tuple[IdentificationSetup, IdentificationSetup]:
    """Split identities and distractors into two random halves (validation, test)"""
    rng = np.random.default_rng(seed)
    identities = np.unique(setup.identities)
    if identities.shape[0] < 2:
        raise QuadManifoldError("Splitting needs at least two identities")
    shuffled = rng.permutation(identities)
    half = shuffled[:shuffled.shape[0] // 2]
    in_first = np.isin(setup.identities, half)
    distractor_order = rng.permutation(setup.distractors.shape[0])
    cut = distractor_order.shape[0] // 2
    first = replace(setup, gallery=setup.gallery[in_first], identities=setup.identities[in_first],
                    distractors=setup.distractors[np.sort(distractor_order[:cut])])
    second = replace(setup, gallery=setup.gallery[~in_first], identities=setup.identities[~in_first],
                     distractors=setup.distractors[np.sort(distractor_order[cut:])])
    return first, second


@dataclass
class EvalReport:
    """Evaluation metrics; absent metrics are None and omitted from output"""
    auc: Optional[float] = None
    ir: Optional[float] = None
    full_ir: Optional[float] = None
    threshold: Optional[float] = None
    baseline_ir: Optional[float] = None
    baseline_full_ir: Optional[float] = None
    f: Optional[float] = None
    # (fpr, tpr) of the ROC curve behind auc; kept out of the scalar listing
    roc: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    def items(self) -> List[Tuple[str, float]]:
        return [(key, float(value)) for key, value in self.__dict__.items() if key != "roc" and value is not None]

    def roc_rows(self) -> List[Tuple[float, float]]:
        if self.roc is None:
            return []
        fpr, tpr = self.roc
        return [(float(x), float(y)) for x, y in zip(fpr, tpr)]

    def to_key_value(self) -> str:
        return "".join(f"{key}={value!r}\n" for key, value in self.items())

    def to_text(self) -> str:
        labels: Dict[str, str] = {
            "auc": "AUC-ROC",
            "ir": "Identification rate",
            "full_ir": "Full identification rate",
            "threshold": "Robustification threshold",
            "baseline_ir": "Identification rate (no robustification)",
            "baseline_full_ir": "Full identification rate (no robustification)",
            "f": "Target false positive rate",
        }
        text = "".join(f"{labels[key]}: {value:.6f}\n" for key, value in self.items())
        if self.roc is not None:
            text += f"ROC curve: {len(self.roc[0])} points\n"
        return text
