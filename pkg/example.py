#!/usr/bin/env python3
"""
Example usage of quadmanifold: the tennis-ball toy problem
"""

import numpy as np

from quadmanifold import (
    CurveSpec, FitConfig, LabeledScores, ScorerContext, auc_roc, fit, global_scorer_registry, inject_outliers,
    labels_for, pca_fit, sample_curve, sample_uniform_ball, save_model,
)


def main():
    # 99 noisy points on the seam curve plus one point at twice the median norm
    clean = sample_curve(CurveSpec(n=99, noise_sigma=0.05, seed=1))
    cloud, outliers = inject_outliers(clean, 1, norm_factor=2.0, seed=2)

    config = FitConfig.from_preset("tennis", seed=3)
    print("Fitting with:", config.to_json_string())
    model, trace = fit(cloud, config)
    print(f"Final data term {trace.data[-1]:.4g}, orthogonality penalty {trace.final_penalty:.3g}")

    save_model("tennis.qim", model)
    print("Model written to tennis.qim")

    context = ScorerContext(model=model, pca_model=pca_fit(cloud, 2))
    scores = global_scorer_registry.score("quadric", context, cloud.points)
    print(f"Injected outlier at index {outliers[0]} scores {scores[outliers[0]]:.3f}; "
          f"the highest-scoring point is {int(np.argmax(scores))}")

    # Fresh outliers spread uniformly through the unit ball
    test_points = np.concatenate([clean.points, sample_uniform_ball(50, 3, seed=4).points])
    labels = labels_for(len(test_points), range(clean.n, len(test_points)))
    for name in ("quadric", "pca", "norm"):
        auc = auc_roc(LabeledScores(global_scorer_registry.score(name, context, test_points), labels))
        print(f"{name:>8} AUC-ROC: {auc:.3f}")


if __name__ == "__main__":
    main()
