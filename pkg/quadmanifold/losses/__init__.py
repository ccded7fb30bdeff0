# Losses package
from typing import Union

from .base import Loss, LossTerms
from .qfull import QFullLoss
from .qbase import QBaseLoss
from ..config import LossVariant

_losses = {loss.name: loss for loss in (QFullLoss(), QBaseLoss())}


def get_loss(variant: Union[str, LossVariant]) -> Loss:
    """Look up the loss implementation for a variant name or enum member"""
    if isinstance(variant, str):
        variant = LossVariant(variant.lower())
    return _losses[variant.value]


__all__ = ["Loss", "LossTerms", "QFullLoss", "QBaseLoss", "get_loss"]
