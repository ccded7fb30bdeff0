#!/usr/bin/env python3
"""
Tests for AUC-ROC, similarity thresholds, identification rates and the robustified similarity
"""

import math
import sys
from dataclasses import replace
from itertools import combinations
from pathlib import Path

import numpy as np

# Add the parent directory to the path
sys.path.insert(0, str(Path(__file__).parent.parent))

from quadmanifold import (
    CosineSimilarity, EvalReport, IdentificationSetup, LabeledScores, auc_roc, cosine_similarity,
    full_identification_rate, identification_rate, robustify, roc_points, similarity_matrix, similarity_threshold,
    split_setup, threshold_search,
)
from quadmanifold.errors import DimensionMismatchError, EmptyInputError, QuadManifoldError


def brute_force_auc(scores, labels) -> float:
    wins = 0.0
    pairs = 0
    for s_out, l_out in zip(scores, labels):
        for s_in, l_in in zip(scores, labels):
            if l_out == 1 and l_in == 0:
                pairs += 1
                wins += 1.0 if s_out > s_in else 0.5 if s_out == s_in else 0.0
    return wins / pairs


def brute_force_rates(gallery, identities, distractors, f):
    """IR and Full IR by looping over every pair and distractor"""
    pairs = []
    for i, j in combinations(range(len(gallery)), 2):
        pairs.append((i, j, cosine_similarity(gallery[i], gallery[j]), identities[i] == identities[j]))
    negatives = [s for _, _, s, same in pairs if not same]
    candidates = sorted(set([s for _, _, s, _ in pairs] + [float(np.nextafter(max(negatives), math.inf)), math.inf]))
    threshold = -math.inf
    if f < 1.0:
        for a in candidates:
            if sum(1 for s in negatives if s >= a) / len(negatives) <= f:
                threshold = a
                break

    def best_distractor(x):
        return max((cosine_similarity(x, y) for y in distractors), default=-math.inf)

    genuine = [(i, j, s) for i, j, s, same in pairs if same]
    ir = sum(1 for _, _, s in genuine if s >= threshold) / len(genuine)
    full = sum(1 for i, j, s in genuine
               if s >= threshold and s > best_distractor(gallery[i]) and s > best_distractor(gallery[j])) / len(genuine)
    return ir, full


def random_setup(rng: np.random.Generator, f: float):
    n = int(rng.integers(3, 13))
    identities = rng.integers(0, max(1, n // 2), size=n)
    # At least one genuine pair
    identities[1] = identities[0]
    gallery = rng.standard_normal((n, 3))
    distractors = rng.standard_normal((int(rng.integers(0, 5)), 3))
    return IdentificationSetup(gallery, identities, distractors, f=f)


def test_auc_roc():
    """AUC examples and agreement with pairwise enumeration"""
    try:
        assert auc_roc(LabeledScores([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])) == 0.75
        assert auc_roc(LabeledScores([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])) == 1.0
        assert auc_roc(LabeledScores([0.5, 0.5, 0.5], [0, 1, 0])) == 0.5

        rng = np.random.default_rng(40)
        for _ in range(200):
            n = int(rng.integers(2, 13))
            labels = rng.integers(0, 2, size=n)
            labels[0], labels[1] = 0, 1
            # Rounding produces ties
            scores = np.round(rng.standard_normal(n), 1)
            assert abs(auc_roc(LabeledScores(scores, labels)) - brute_force_auc(scores, labels)) < 1e-12

        fpr, tpr = roc_points(LabeledScores([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]))
        assert fpr[0] == 0.0 and fpr[-1] == 1.0 and tpr[-1] == 1.0
        area = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
        assert abs(area - 0.75) < 1e-12

        for scores, labels in (([0.1, 0.2], [0, 0]), ([0.1, 0.2], [1, 1])):
            try:
                auc_roc(LabeledScores(scores, labels))
                assert False, "Expected a single class to be rejected"
            except QuadManifoldError:
                pass
        try:
            LabeledScores([0.1, 0.2], [0, 2])
            assert False, "Expected label 2 to be rejected"
        except QuadManifoldError:
            pass
        try:
            LabeledScores([0.1, 0.2, 0.3], [0, 1])
            assert False, "Expected a length mismatch"
        except DimensionMismatchError:
            pass

        print("PASS AUC-ROC")
    except Exception as e:
        print(f"FAIL AUC-ROC: {e}")
        raise


def test_cosine_similarity():
    """Cosine similarity examples"""
    try:
        assert abs(cosine_similarity([1.0, 2.0], [1.0, 2.0]) - 1.0) < 1e-15
        assert cosine_similarity([1.0, 0.0], [0.0, 3.0]) == 0.0
        assert cosine_similarity([1.0, 0.0], [-1.0, 0.0]) == -1.0
        try:
            cosine_similarity([0.0, 0.0], [1.0, 0.0])
            assert False, "Expected the zero vector to be rejected"
        except QuadManifoldError:
            pass

        rng = np.random.default_rng(41)
        xs, ys = rng.standard_normal((4, 3)), rng.standard_normal((5, 3))
        matrix = CosineSimilarity().matrix(xs, ys)
        assert matrix.shape == (4, 5)
        assert abs(matrix[2, 3] - cosine_similarity(xs[2], ys[3])) < 1e-12

        print("PASS Cosine similarity")
    except Exception as e:
        print(f"FAIL Cosine similarity: {e}")
        raise


def test_robustify():
    """Similarity is zeroed once either outlier score reaches the threshold"""
    try:
        def first_coordinate(points):
            return np.asarray(points)[:, 0]

        base = CosineSimilarity()
        x, y = np.array([0.2, 1.0]), np.array([0.3, 0.8])
        assert robustify(base, first_coordinate, 0.5)(x, y) == base(x, y)
        assert robustify(base, first_coordinate, 0.3)(x, y) == 0.0
        assert robustify(base, first_coordinate, math.inf)(x, y) == base(x, y)

        robust = robustify(base, first_coordinate, 0.25)
        xs = np.array([[0.1, 1.0], [0.9, 1.0]])
        matrix = robust.matrix(xs, xs)
        assert matrix[0, 0] == base.matrix(xs, xs)[0, 0]
        assert matrix[0, 1] == 0.0 and matrix[1, 1] == 0.0

        try:
            robustify(base, first_coordinate, math.nan)
            assert False, "Expected a NaN threshold to be rejected"
        except QuadManifoldError:
            pass

        print("PASS Robustify")
    except Exception as e:
        print(f"FAIL Robustify: {e}")
        raise


def test_similarity_threshold():
    """Smallest threshold meeting the target false positive rate"""
    try:
        assert similarity_threshold([0.1, 0.9], [False, False], 0.5) == 0.9
        assert similarity_threshold([0.1, 0.9], [False, False], 0.0) == np.nextafter(0.9, math.inf)
        assert similarity_threshold([0.1, 0.9], [False, False], 1.0) == -math.inf

        # The successor of the largest negative comes before any higher positive score
        assert similarity_threshold([0.1, 0.9, 0.95], [False, False, True], 0.0) == np.nextafter(0.9, math.inf)
        assert similarity_threshold([0.1, 0.5, 0.9], [False, True, False], 0.5) == 0.5

        for bad_f in (-0.1, 1.5):
            try:
                similarity_threshold([0.1], [False], bad_f)
                assert False, f"Expected f={bad_f} to be rejected"
            except QuadManifoldError:
                pass
        try:
            similarity_threshold([0.1, 0.2], [True, True], 0.1)
            assert False, "Expected missing negatives to be rejected"
        except EmptyInputError:
            pass

        print("PASS Similarity threshold")
    except Exception as e:
        print(f"FAIL Similarity threshold: {e}")
        raise


def test_identification_rates():
    """IR and Full IR examples and agreement with brute force"""
    try:
        rng = np.random.default_rng(42)
        for _ in range(60):
            f = float(rng.choice([0.0, 0.1, 0.5, 1.0]))
            setup = random_setup(rng, f)
            if np.all(setup.identities == setup.identities[0]):
                continue
            ir, full = brute_force_rates(setup.gallery, setup.identities, setup.distractors, f)
            assert abs(identification_rate(setup) - ir) < 1e-12
            assert abs(full_identification_rate(setup) - full) < 1e-12
            assert full_identification_rate(setup) <= identification_rate(setup)

        # Three identities with two embeddings each and two distractors
        gallery = np.array([[1.0, 0.1, 0.0], [1.0, -0.1, 0.0], [0.0, 1.0, 0.2],
                            [0.1, 1.0, -0.1], [0.0, 0.0, 1.0], [0.3, 0.0, 1.0]])
        identities = np.array(["a", "a", "b", "b", "c", "c"])
        distractors = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])
        setup = IdentificationSetup(gallery, identities, distractors, f=0.5)
        ir, full = brute_force_rates(gallery, identities, distractors, 0.5)
        assert identification_rate(setup) == ir and full_identification_rate(setup) == full

        no_distractors = IdentificationSetup(gallery, identities, np.zeros((0, 3)), f=0.5)
        assert full_identification_rate(no_distractors) == identification_rate(no_distractors)

        angles = np.radians([0.0, 30.0, 5.0, 40.0])
        close = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        distracted = IdentificationSetup(close, ["a", "a", "b", "b"], [[np.cos(np.radians(10.0)), np.sin(np.radians(10.0))]],
                                         f=1.0)
        assert identification_rate(distracted) == 1.0
        assert full_identification_rate(distracted) == 0.0

        try:
            identification_rate(IdentificationSetup(gallery[:3], ["a", "b", "c"], np.zeros((0, 3))))
            assert False, "Expected missing genuine pairs to be rejected"
        except EmptyInputError:
            pass

        print("PASS Identification rates")
    except Exception as e:
        print(f"FAIL Identification rates: {e}")
        raise


def poisoned_setup() -> IdentificationSetup:
    """Three clean identities plus two near-identical outliers filed under different identities"""
    gallery = np.array([
        [1.0, 0.1, 0.0, 0.0], [1.0, -0.1, 0.0, 0.0],
        [0.0, 1.0, 0.1, 0.0], [0.0, 1.0, -0.1, 0.0],
        [0.1, 0.0, 1.0, 0.0], [-0.1, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.01, 1.0],
    ])
    identities = np.array(["a", "a", "b", "b", "c", "c", "a", "b"])
    return IdentificationSetup(gallery, identities, np.zeros((0, 4)), f=0.0)


def flags_last_axis(points):
    return np.where(np.asarray(points)[:, 3] > 0.5, 1000.0, 0.0)


def test_threshold_search():
    """Grid search over robustification thresholds and its one-percent fallback"""
    try:
        setup = poisoned_setup()
        assert identification_rate(setup) == 0.0

        result = threshold_search(setup, flags_last_axis, [500.0])
        assert result.threshold == 500.0 and not result.fallback
        assert result.baseline_ir == 0.0
        assert abs(result.ir - 3.0 / 7.0) < 1e-12 and result.grid_ir == [result.ir]

        # An infinite threshold leaves the similarity untouched
        untouched = threshold_search(setup, flags_last_axis, [math.inf])
        assert untouched.ir == untouched.baseline_ir

        # Ties keep the first grid point
        tied = threshold_search(setup, flags_last_axis, [math.inf, 500.0, 100.0])
        assert tied.threshold == 500.0

        clean = IdentificationSetup(setup.gallery[:6], setup.identities[:6], np.zeros((0, 4)), f=0.0)
        assert identification_rate(clean) == 1.0

        def norms(points):
            return np.linalg.norm(points, axis=1)

        fallback = threshold_search(clean, norms, [-1.0])
        assert fallback.fallback and fallback.grid_ir == [0.0]
        assert fallback.threshold == float(np.percentile(norms(clean.gallery), 99.0))

        with_f = threshold_search(clean, norms, [math.inf], f=1.0)
        assert with_f.baseline_ir == 1.0

        try:
            threshold_search(clean, norms, [])
            assert False, "Expected an empty grid to be rejected"
        except EmptyInputError:
            pass

        print("PASS Threshold search")
    except Exception as e:
        print(f"FAIL Threshold search: {e}")
        raise


def test_plain_similarity_function():
    """A bare (x, y) -> float similarity works wherever the cosine object does"""
    try:
        rng = np.random.default_rng(43)
        checked = 0
        while checked < 30:
            f = float(rng.choice([0.0, 0.1, 0.5, 1.0]))
            setup = replace(random_setup(rng, f), similarity=cosine_similarity)
            if np.all(setup.identities == setup.identities[0]):
                continue
            ir, full = brute_force_rates(setup.gallery, setup.identities, setup.distractors, f)
            assert identification_rate(setup) == ir
            assert full_identification_rate(setup) == full
            checked += 1

        xs = rng.standard_normal((4, 3))
        ys = rng.standard_normal((5, 3))
        assert np.allclose(similarity_matrix(cosine_similarity, xs, ys), CosineSimilarity().matrix(xs, ys), atol=1e-12)

        def first_coordinate(points):
            return np.asarray(points)[:, 0]

        robust = robustify(cosine_similarity, first_coordinate, 0.0)
        expected = robustify(CosineSimilarity(), first_coordinate, 0.0).matrix(xs, ys)
        assert np.allclose(robust.matrix(xs, ys), expected, atol=1e-12)
        assert robust(xs[0], ys[0]) == (cosine_similarity(xs[0], ys[0]) if max(xs[0, 0], ys[0, 0]) < 0.0 else 0.0)

        setup = replace(poisoned_setup(), similarity=cosine_similarity)
        result = threshold_search(setup, flags_last_axis, [500.0])
        assert result.baseline_ir == 0.0 and result.threshold == 500.0
        assert abs(result.ir - 3.0 / 7.0) < 1e-12

        print("PASS Plain similarity function")
    except Exception as e:
        print(f"FAIL Plain similarity function: {e}")
        raise


def test_split_setup():
    """Identities and distractors are split into disjoint halves"""
    try:
        rng = np.random.default_rng(43)
        gallery = rng.standard_normal((12, 3))
        identities = np.repeat(np.arange(6), 2)
        setup = IdentificationSetup(gallery, identities, rng.standard_normal((5, 3)), f=0.1)
        first, second = split_setup(setup, seed=1)

        assert set(first.identities).isdisjoint(set(second.identities))
        assert len(first.identities) + len(second.identities) == 12
        assert len(set(first.identities)) == 3
        assert first.distractors.shape[0] + second.distractors.shape[0] == 5
        assert first.f == 0.1 and second.f == 0.1

        again, _ = split_setup(setup, seed=1)
        assert np.array_equal(again.gallery, first.gallery)

        try:
            split_setup(IdentificationSetup(gallery[:2], [0, 0], np.zeros((0, 3))), seed=1)
            assert False, "Expected a single identity to be rejected"
        except QuadManifoldError:
            pass

        print("PASS Split setup")
    except Exception as e:
        print(f"FAIL Split setup: {e}")
        raise


def test_eval_report():
    """Reports list present metrics only, as text and as key=value lines, plus the ROC curve"""
    try:
        report = EvalReport(auc=0.75, ir=np.float64(0.5))
        assert report.items() == [("auc", 0.75), ("ir", 0.5)]
        assert report.to_key_value() == "auc=0.75\nir=0.5\n"
        text = report.to_text()
        assert "AUC-ROC: 0.750000" in text and "Full identification rate" not in text

        labeled = LabeledScores([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
        with_curve = EvalReport(auc=auc_roc(labeled), roc=roc_points(labeled))
        assert with_curve.items() == [("auc", 0.75)]
        rows = with_curve.roc_rows()
        assert rows[0] == (0.0, 0.0) and rows[-1] == (1.0, 1.0)
        assert "ROC curve: " in with_curve.to_text()
        assert report.roc_rows() == []

        print("PASS Eval report")
    except Exception as e:
        print(f"FAIL Eval report: {e}")
        raise


if __name__ == "__main__":
    print("Running evaluation tests...\n")

    try:
        test_auc_roc()
        test_cosine_similarity()
        test_robustify()
        test_similarity_threshold()
        test_identification_rates()
        test_threshold_search()
        test_plain_similarity_function()
        test_split_setup()
        test_eval_report()

        print("\nAll evaluation tests passed!")

    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
