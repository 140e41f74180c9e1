"""Loss functions with analytic gradients."""

from __future__ import annotations

import numpy as np

LOG_LOSS_CLIP = 1e-7


def contrastive_loss(d, y, margin: float = 1.0):
    """y*D + (1-y)*max(0, margin - D), element-wise."""
    d = np.asarray(d, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return y * d + (1.0 - y) * np.maximum(0.0, margin - d)


def contrastive_loss_grad(d, y, margin: float = 1.0):
    """dL/dD; the kink at D == margin for y = 0 takes subgradient 0."""
    d = np.asarray(d, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return y - (1.0 - y) * (d < margin)


def log_loss(p, y):
    """-[y ln p + (1-y) ln(1-p)] with p clipped to [1e-7, 1 - 1e-7]."""
    p = np.clip(np.asarray(p, dtype=np.float64), LOG_LOSS_CLIP, 1.0 - LOG_LOSS_CLIP)
    y = np.asarray(y, dtype=np.float64)
    return -(y * np.log(p) + (1.0 - y) * np.log1p(-p))


def log_loss_grad(p, y):
    """dL/dp; zero where the clip is active."""
    p = np.asarray(p, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    inside = (p > LOG_LOSS_CLIP) & (p < 1.0 - LOG_LOSS_CLIP)
    pc = np.clip(p, LOG_LOSS_CLIP, 1.0 - LOG_LOSS_CLIP)
    return inside * (pc - y) / (pc * (1.0 - pc))
