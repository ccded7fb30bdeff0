from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Any, Dict, Optional
import json

from .errors import ConfigError
from .presets import get_preset_info


class LossVariant(Enum):
    QFULL = "qfull"
    QBASE = "qbase"


class LrSchedule(Enum):
    CONSTANT = "constant"
    COSINE = "cosine"
    EXPONENTIAL = "exponential"


@dataclass
class FitConfig:
    """Hyperparameters of one quadric-intersection fit"""
    m: int = 1
    loss: LossVariant = LossVariant.QFULL
    lam: float = 1.0
    learning_rate: float = 1e-2
    batch_size: int = 64
    epochs: int = 500
    seed: int = 0
    normalize_inputs: bool = False
    lr_schedule: LrSchedule = LrSchedule.COSINE
    # Exponential schedule only: ratio of the last step size to learning_rate
    final_lr_factor: float = 1e-14
    subsample: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.loss, str):
            self.loss = _parse_enum(LossVariant, self.loss, "loss")
        if isinstance(self.lr_schedule, str):
            self.lr_schedule = _parse_enum(LrSchedule, self.lr_schedule, "lr_schedule")
        self.validate()

    def validate(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ConfigError(f"m must be a positive integer, got {self.m}")
        if not self.lam >= 0:
            raise ConfigError(f"lambda must be nonnegative, got {self.lam}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0 < self.final_lr_factor <= 1:
            raise ConfigError(f"final_lr_factor must be in (0, 1], got {self.final_lr_factor}")
        if not isinstance(self.batch_size, int) or self.batch_size < 1:
            raise ConfigError(f"batch_size must be a positive integer, got {self.batch_size}")
        if not isinstance(self.epochs, int) or self.epochs < 0:
            raise ConfigError(f"epochs must be a nonnegative integer, got {self.epochs}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.subsample is not None and (not isinstance(self.subsample, int) or self.subsample < 1):
            raise ConfigError(f"subsample must be a positive integer, got {self.subsample}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FitConfig':
        """Create FitConfig from dictionary; unknown keys are rejected"""
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown fit config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_preset(cls, name: str, **overrides) -> 'FitConfig':
        """Create FitConfig from a named preset, with field overrides"""
        try:
            data = get_preset_info(name)
        except ValueError as e:
            raise ConfigError(str(e))
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["loss"] = self.loss.value
        data["lr_schedule"] = self.lr_schedule.value
        return data

    @classmethod
    def from_json_file(cls, file_path: str) -> 'FitConfig':
        """Load configuration from JSON file"""
        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        return cls.from_dict(data)

    def to_json_file(self, file_path: str):
        """Save configuration to JSON file"""
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def from_json_string(cls, json_str: str) -> 'FitConfig':
        return cls.from_dict(json.loads(json_str))

    def to_json_string(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _parse_enum(enum_cls, value: str, name: str):
    try:
        return enum_cls(value.lower())
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ConfigError(f"Invalid {name} '{value}', expected one of: {choices}")
