"""Adam optimizer on the flattened parameter vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpec, NonFiniteGradient


@dataclass(frozen=True)
class TrainConfig:
    """Optimization hyperparameters.

    threshold is the preictal-probability decision boundary used at
    evaluation time. Interictal undersampling is the only balancing
    strategy, so it has no switch here.
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 16
    max_epochs: int = 20
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise InvalidSpec(f"lr must be positive, got {self.lr}")
        if not 0 <= self.beta1 < 1 or not 0 <= self.beta2 < 1:
            raise InvalidSpec("betas must lie in [0, 1)")
        if self.eps <= 0:
            raise InvalidSpec("eps must be positive")
        if self.batch_size < 1:
            raise InvalidSpec("batch_size must be >= 1")
        if self.max_epochs < 0:
            raise InvalidSpec("max_epochs must be >= 0")
        if not 0 < self.threshold < 1:
            raise InvalidSpec(f"threshold must lie in (0, 1), got {self.threshold}")


@dataclass
class AdamState:
    """First/second moment estimates plus the step counter."""

    m: np.ndarray
    v: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, n_params: int) -> "AdamState":
        return cls(m=np.zeros(n_params), v=np.zeros(n_params), step=0)


def adam_step(
    theta: np.ndarray, grad: np.ndarray, state: AdamState, cfg: TrainConfig
) -> tuple[np.ndarray, AdamState]:
    """One bias-corrected Adam update. Pure: inputs are not mutated.

    Raises:
        NonFiniteGradient: grad contains NaN or infinity.
    """
    if theta.shape != grad.shape or theta.shape != state.m.shape:
        raise NonFiniteGradient(
            f"shape mismatch theta={theta.shape} grad={grad.shape}"
        )
    if not np.isfinite(grad).all():
        raise NonFiniteGradient("gradient contains non-finite values")
    t = state.step + 1
    m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad
    v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad * grad
    m_hat = m / (1.0 - cfg.beta1**t)
    v_hat = v / (1.0 - cfg.beta2**t)
    theta_next = theta - cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.eps)
    return theta_next, AdamState(m=m, v=v, step=t)
