"""
Named fitting presets for quadmanifold.

Each preset fixes the hyperparameters used for one kind of data. The values are
fixture choices made so runs are reproducible, not tuned optima.
"""

from typing import Any, Dict

presets = {
    # A noise-free circle has a kinked minimum that SGD circles around; the step
    # size has to shrink geometrically for the epoch losses to settle
    "circle": {
        "loss": "qfull",
        "m": 1,
        "lam": 1.0,
        "learning_rate": 2e-1,
        "batch_size": 4,
        "epochs": 500,
        "lr_schedule": "exponential",
        "final_lr_factor": 1e-14,
        "normalize_inputs": False,
    },
    "viviani": {
        "loss": "qbase",
        "m": 2,
        "lam": 1.0,
        "learning_rate": 1e-1,
        "batch_size": 64,
        "epochs": 1000,
        "lr_schedule": "cosine",
        "normalize_inputs": False,
    },
    "tennis": {
        "loss": "qfull",
        "m": 2,
        "lam": 1.0,
        "learning_rate": 5e-2,
        "batch_size": 16,
        "epochs": 2000,
        "lr_schedule": "cosine",
        "normalize_inputs": False,
    },
    # Deep-feature embeddings are projected to the unit sphere first
    "embedding": {
        "loss": "qfull",
        "m": 100,
        "lam": 1.0,
        "learning_rate": 1e-2,
        "batch_size": 256,
        "epochs": 50,
        "lr_schedule": "cosine",
        "normalize_inputs": True,
    },
}


def get_preset_info(name: str) -> Dict[str, Any]:
    """
    Get the hyperparameters of a named preset.

    Args:
        name: The preset name (e.g., 'tennis')

    Returns:
        dict: A copy of the preset's FitConfig fields

    Raises:
        ValueError: If the preset is not known
    """
    if name not in presets:
        raise ValueError(f"Preset '{name}' not found, available: {', '.join(sorted(presets))}")
    return dict(presets[name])
