"""Minimal tensor layer stack with exact-gradient backpropagation."""

from .adadelta import AdadeltaState, adadelta_step
from .losses import contrastive_loss, contrastive_loss_grad, log_loss, log_loss_grad
from .model import (
    ARCHITECTURES,
    MANHATTAN,
    SIAMESE_EUCLID,
    TWO_CHANNEL,
    EmptyDataset,
    InvalidSpec,
    Model,
    ModelSpec,
    TrainConfig,
    build,
    encode_pairs,
    load_checkpoint,
    save_checkpoint,
    train,
)
from .ops import ShapeMismatch

__all__ = [
    "ARCHITECTURES", "MANHATTAN", "SIAMESE_EUCLID", "TWO_CHANNEL",
    "AdadeltaState", "EmptyDataset", "InvalidSpec", "Model", "ModelSpec",
    "ShapeMismatch", "TrainConfig", "adadelta_step", "build",
    "contrastive_loss", "contrastive_loss_grad", "encode_pairs",
    "load_checkpoint", "log_loss", "log_loss_grad", "save_checkpoint",
    "train",
]
