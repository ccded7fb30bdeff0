from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .errors import ConfigError


class ScorerContext:
    """Context object passed to scorers: fitted models and settings"""
    def __init__(self, settings: Optional[Dict[str, Any]] = None, model=None, pca_model=None, **kwargs):
        self.settings = settings or {}
        self.model = model
        self.pca_model = pca_model
        # Additional context can be added via kwargs
        for key, value in kwargs.items():
            setattr(self, key, value)

    def get_setting(self, key: str, default: Any = None) -> Any:
        """Get a setting value"""
        return self.settings.get(key, default)


class Scorer:
    def __init__(self, name: str, description: str, function: Callable, requires: Optional[List[str]] = None):
        self.name = name
        self.description = description
        self.function = function
        self.requires = requires or []

    def score(self, context: ScorerContext, points: np.ndarray) -> np.ndarray:
        """Outlier scores of the points; larger means more outlier-like"""
        for attribute in self.requires:
            if getattr(context, attribute, None) is None:
                raise ConfigError(f"Scorer '{self.name}' needs a fitted {attribute.replace('_', ' ')}")
        return np.asarray(self.function(context, np.atleast_2d(points)), dtype=np.float64)


class ScorerRegistry:
    """Central scorer registry - can be used as a singleton"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance.scorers = {}
        return cls._instance

    @classmethod
    def get_instance(cls) -> 'ScorerRegistry':
        """Get the global scorer registry instance"""
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def register_scorer(self, scorer: Scorer):
        self.scorers[scorer.name] = scorer

    def get_scorer(self, name: str) -> Scorer:
        scorer = self.scorers.get(name)
        if scorer is None:
            raise ConfigError(f"Unknown scorer '{name}', available: {', '.join(self.scorer_names())}")
        return scorer

    def scorer_names(self) -> List[str]:
        return sorted(self.scorers)

    def score(self, name: str, context: ScorerContext, points: np.ndarray) -> np.ndarray:
        return self.get_scorer(name).score(context, points)

    def score_function(self, name: str, context: ScorerContext) -> Callable[[np.ndarray], np.ndarray]:
        """Bind a scorer to a context, giving a points -> scores callable"""
        scorer = self.get_scorer(name)
        return lambda points: scorer.score(context, points)


# Global scorer registry instance
global_scorer_registry = ScorerRegistry.get_instance()
