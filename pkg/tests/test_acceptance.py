#!/usr/bin/env python3
"""
Acceptance tests: distance bounds, equivariance, optimality of the fits,
the tennis-ball toy problem, metric oracles and end-to-end determinism.
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

# Add the parent directory to the path
sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent))

from quadmanifold import (
    CurveSpec, FitConfig, Isometry, LabeledScores, QuadricIntersection, approximation_coefficients, auc_roc,
    compose_isometry, deserialize, dist_2, dist_k, fit, from_coefficients, full_identification_rate,
    geometric_distance_oracle, hs_inner, hs_norm, identification_rate, inject_outliers, init_model, loss_qbase,
    loss_qfull, ortho_penalty, pca_fit, qbase_exact, sample_curve, sample_sphere, sample_uniform_ball,
    sample_viviani, score_batch, serialize, to_coefficients,
)
from quadmanifold.baselines import pca_distances
from quadmanifold.cli import EXIT_OK, main
from quadmanifold.errors import NoFeasiblePointError
from quadmanifold.io import read_trace
from quadmanifold.polynomial import coefficient_count

from test_evaluation import brute_force_auc, brute_force_rates, random_setup
from test_fitting import finite_difference_gradient


def random_quadric(rng: np.random.Generator, dim: int):
    return from_coefficients(rng.standard_normal(coefficient_count(dim)), dim)


def test_majorization():
    """The order-2 distance never exceeds the geometric distance"""
    try:
        rng = np.random.default_rng(70)
        checked = 0
        for _ in range(1000):
            dim = int(rng.integers(2, 4))
            f = random_quadric(rng, dim)
            p = 2.0 * rng.standard_normal(dim)
            try:
                geometric = geometric_distance_oracle(f, p, restarts=2, steps=100, seed=int(rng.integers(0, 2 ** 31)))
            except NoFeasiblePointError:
                # Empty zero set (or none found): nothing to compare against
                continue
            checked += 1
            assert dist_2(f, p) <= geometric + 1e-6, f"dist_2 {dist_2(f, p)} > geometric {geometric} for {f!r} at {p}"
        assert checked >= 500, f"only {checked} quadrics had a feasible oracle point"

        print("PASS Majorization")
    except Exception as e:
        print(f"FAIL Majorization: {e}")
        raise


def test_equivariance():
    """Order-2 distances and HS inner products are invariant under isometries"""
    try:
        rng = np.random.default_rng(71)
        for _ in range(1000):
            dim = int(rng.integers(1, 5))
            f, g = random_quadric(rng, dim), random_quadric(rng, dim)
            p = rng.standard_normal(dim)
            theta = Isometry.random(dim, rng)
            moved = compose_isometry(f, theta.inverse())
            assert abs(dist_2(moved, theta.apply(p)) - dist_2(f, p)) <= 1e-8
            assert abs(hs_inner(compose_isometry(f, theta), compose_isometry(g, theta)) - hs_inner(f, g)) <= 1e-9

        print("PASS Equivariance")
    except Exception as e:
        print(f"FAIL Equivariance: {e}")
        raise


def test_qbase_not_equivariant():
    """Shifting the cloud changes the exact Q-BASE solution but not the Q-FULL objective"""
    try:
        # Gaussian blob: no single conic fits it, so the algebraic fit depends on where the cloud sits
        cloud = np.random.default_rng(72).standard_normal((50, 2))
        shift = Isometry.translation_by([10.0, 0.0])
        shifted = shift.apply(cloud)

        original, _ = qbase_exact(cloud, 1)
        moved, _ = qbase_exact(shifted, 1)
        # Compare in the original frame, where no coefficient dominates
        pulled_back = compose_isometry(moved.quadrics[0], shift)
        a = original.coefficient_matrix()[0]
        a = a / np.linalg.norm(a)
        b = to_coefficients(pulled_back)
        b = b / np.linalg.norm(b)
        if float(a @ b) < 0:
            b = -b
        assert np.max(np.abs(a - b)) > 0.01

        model = init_model(2, 1, seed=73)
        before = loss_qfull(model, cloud, 1.0).total
        after = loss_qfull(model.transformed(shift.inverse()), shifted, 1.0).total
        assert abs(before - after) <= 1e-8 * before

        print("PASS Q-BASE is not equivariant")
    except Exception as e:
        print(f"FAIL Q-BASE is not equivariant: {e}")
        raise


def test_k_distance_consistency():
    """Order-k distances coincide with the order-2 distance for k >= 2"""
    try:
        rng = np.random.default_rng(74)
        for _ in range(200):
            dim = int(rng.integers(1, 6))
            f = random_quadric(rng, dim)
            p = rng.standard_normal(dim)
            for k in (2, 3, 4):
                assert dist_k(f, p, k) == dist_2(f, p)
            c2 = -approximation_coefficients(f, p, 2)[2]
            assert abs(c2 - hs_norm(f)) <= 1e-12 * max(1.0, hs_norm(f))

        print("PASS k-distance consistency")
    except Exception as e:
        print(f"FAIL k-distance consistency: {e}")
        raise


def test_gradient_correctness():
    """Analytic gradients match central differences on random small instances"""
    try:
        rng = np.random.default_rng(75)
        from quadmanifold import grad_loss
        for trial in range(50):
            variant = ("qfull", "qbase")[trial % 2]
            dim, m = int(rng.integers(1, 5)), int(rng.integers(1, 4))
            model = QuadricIntersection.from_coefficient_matrix(
                rng.standard_normal((m, coefficient_count(dim))), dim, variant)
            points = rng.standard_normal((int(rng.integers(1, 9)), dim))
            analytic = grad_loss(variant, model, points, 1.0)
            numeric = finite_difference_gradient(variant, model, points, 1.0)
            error = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-8)
            assert error < 1e-5, f"trial {trial} ({variant}): relative error {error:.2e}"

        print("PASS Gradient correctness")
    except Exception as e:
        print(f"FAIL Gradient correctness: {e}")
        raise


def test_qbase_sgd_reaches_optimum():
    """SGD on Q-BASE gets within 2% of the exact SVD optimum"""
    try:
        cloud = sample_viviani(500, noise=0.05, seed=76)
        _, optimum = qbase_exact(cloud, 2)
        model, trace = fit(cloud, FitConfig.from_preset("viviani"))
        terms = loss_qbase(model, cloud, 1.0)
        assert terms.data <= 1.02 * optimum, f"SGD data term {terms.data} vs optimum {optimum}"
        assert terms.penalty <= 1e-3

        print("PASS Q-BASE SGD reaches the optimum")
    except Exception as e:
        print(f"FAIL Q-BASE SGD reaches the optimum: {e}")
        raise


def test_tennis_ball():
    """Two quadrics fitted to the noisy seam curve single out the injected outlier"""
    try:
        clean = sample_curve(CurveSpec(n=99, noise_sigma=0.05, seed=77))
        cloud, outliers = inject_outliers(clean, 1, norm_factor=2.0, seed=78)
        ball = sample_uniform_ball(50, 3, seed=79).points
        test_points = np.concatenate([clean.points, ball])
        labels = np.array([0] * 99 + [1] * 50)
        pca_auc = auc_roc(LabeledScores(pca_distances(pca_fit(cloud, 2), test_points), labels))

        for init_seed in (0, 1, 2):
            model, _ = fit(cloud, FitConfig.from_preset("tennis", seed=init_seed))
            assert ortho_penalty(model) <= 1e-3, f"seed {init_seed}: penalty {ortho_penalty(model)}"

            scores = score_batch(model, cloud)
            ratio = scores[outliers[0]] / np.percentile(scores[:99], 95)
            assert ratio >= 3.0, f"seed {init_seed}: outlier score is {ratio:.2f} times the clean 95th percentile"

            quadric_auc = auc_roc(LabeledScores(score_batch(model, test_points), labels))
            assert quadric_auc >= pca_auc, f"seed {init_seed}: quadric AUC {quadric_auc} < PCA AUC {pca_auc}"

        print("PASS Tennis ball")
    except Exception as e:
        print(f"FAIL Tennis ball: {e}")
        raise


def test_orthogonality_residual():
    """Fixture fits end close to orthonormal"""
    try:
        circle_model, _ = fit(sample_sphere(200, dim=2, seed=80), FitConfig.from_preset("circle"))
        assert ortho_penalty(circle_model) <= 1e-3

        print("PASS Orthogonality residual")
    except Exception as e:
        print(f"FAIL Orthogonality residual: {e}")
        raise


def test_serialization():
    """Random models round-trip bit for bit"""
    try:
        rng = np.random.default_rng(81)
        for _ in range(100):
            dim, m = int(rng.integers(1, 7)), int(rng.integers(1, 5))
            model = QuadricIntersection.from_coefficient_matrix(
                rng.standard_normal((m, coefficient_count(dim))) * 10.0 ** rng.integers(-5, 6), dim, "qfull",
                float(rng.uniform(0.0, 3.0)))
            restored = deserialize(serialize(model))
            assert np.array_equal(restored.coefficient_matrix(), model.coefficient_matrix())
            assert restored.lam == model.lam

        print("PASS Serialization")
    except Exception as e:
        print(f"FAIL Serialization: {e}")
        raise


def test_metric_oracles():
    """AUC and identification rates against exhaustive enumeration"""
    try:
        rng = np.random.default_rng(82)
        for _ in range(300):
            n = int(rng.integers(2, 13))
            labels = rng.integers(0, 2, size=n)
            if labels.min() == labels.max():
                continue
            scores = np.round(rng.uniform(size=n), 1)
            assert abs(auc_roc(LabeledScores(scores, labels)) - brute_force_auc(scores, labels)) < 1e-12

        checked = 0
        while checked < 100:
            f = float(rng.choice([0.0, 0.05, 0.2, 0.5, 1.0]))
            setup = random_setup(rng, f)
            if np.all(setup.identities == setup.identities[0]):
                continue
            ir, full = brute_force_rates(setup.gallery, setup.identities, setup.distractors, f)
            assert abs(identification_rate(setup) - ir) < 1e-12
            assert abs(full_identification_rate(setup) - full) < 1e-12
            assert full_identification_rate(setup) <= identification_rate(setup)
            checked += 1

        print("PASS Metric oracles")
    except Exception as e:
        print(f"FAIL Metric oracles: {e}")
        raise


def test_cli_determinism():
    """gen, fit and score produce identical files on repeated runs"""
    try:
        outputs = []
        traces = []
        for _ in range(2):
            with tempfile.TemporaryDirectory() as temp_dir:
                cloud = str(Path(temp_dir) / "cloud.csv")
                model = str(Path(temp_dir) / "model.qim")
                scores = str(Path(temp_dir) / "scores.csv")
                assert main(["gen", "--outliers", "1", "--seed", "7", "--output", cloud]) == EXIT_OK
                assert main(["fit", "--input", cloud, "--output", model, "--epochs", "20", "--m", "2",
                             "--seed", "3"]) == EXIT_OK
                assert main(["score", "--input", cloud, "--model", model, "--output", scores]) == EXIT_OK
                outputs.append([Path(path).read_bytes() for path in
                                (cloud, str(Path(temp_dir) / "cloud.labels.csv"), model, scores)])
                trace = read_trace(Path(temp_dir) / "model.trace.csv")
                # Wall time is the only column allowed to differ
                traces.append([(r.epoch, r.data, r.penalty, r.total) for r in trace.records])

        assert outputs[0] == outputs[1]
        assert traces[0] == traces[1]

        print("PASS CLI determinism")
    except Exception as e:
        print(f"FAIL CLI determinism: {e}")
        raise


if __name__ == "__main__":
    print("Running acceptance tests...\n")

    try:
        test_majorization()
        test_equivariance()
        test_qbase_not_equivariant()
        test_k_distance_consistency()
        test_gradient_correctness()
        test_qbase_sgd_reaches_optimum()
        test_tennis_ball()
        test_orthogonality_residual()
        test_serialization()
        test_metric_oracles()
        test_cli_determinism()

        print("\nAll acceptance tests passed!")

    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
