"""Adadelta parameter updates with per-tensor accumulators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ops import ShapeMismatch


@dataclass
class AdadeltaState:
    """Running averages E[g^2] and E[dx^2], one pair per named parameter."""

    eg2: dict[str, np.ndarray] = field(default_factory=dict)
    edx2: dict[str, np.ndarray] = field(default_factory=dict)
    rho: float = 0.95
    epsilon: float = 1e-6
    lr: float = 1.0

    @classmethod
    def for_params(cls, params: dict[str, np.ndarray], rho: float = 0.95,
                   epsilon: float = 1e-6, lr: float = 1.0) -> "AdadeltaState":
        return cls(
            eg2={k: np.zeros_like(v) for k, v in params.items()},
            edx2={k: np.zeros_like(v) for k, v in params.items()},
            rho=rho,
            epsilon=epsilon,
            lr=lr,
        )


def adadelta_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray],
                  state: AdadeltaState) -> dict[str, np.ndarray]:
    """Apply one adadelta update in place; returns the params dict.

    Per element: E[g^2] <- rho E[g^2] + (1-rho) g^2;
    dx = -sqrt((E[dx^2]+eps)/(E[g^2]+eps)) g;
    E[dx^2] <- rho E[dx^2] + (1-rho) dx^2;  param <- param + lr dx.
    """
    if set(params) != set(grads) or set(params) != set(state.eg2):
        raise ShapeMismatch("params, grads, and state must share the same names")
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeMismatch(f"{name}: grad shape {g.shape} != param shape {p.shape}")
        eg2 = state.eg2[name]
        edx2 = state.edx2[name]
        eg2 *= state.rho
        eg2 += (1.0 - state.rho) * g * g
        dx = -np.sqrt((edx2 + state.epsilon) / (eg2 + state.epsilon)) * g
        edx2 *= state.rho
        edx2 += (1.0 - state.rho) * dx * dx
        p += state.lr * dx
    return params
