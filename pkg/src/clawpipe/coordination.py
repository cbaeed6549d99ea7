"""Progress-normalized coordination arithmetic.

The checkpoint score decomposes an agent's progress into weighted throughput,
validated-work, and information-gain components; the reputation update is an
EMA-style rule weighting a peer's squared deviation by relative progress.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZeroTau, NonpositiveTpsMax

ALPHA = 0.3
BETA = 0.5
GAMMA = 0.2
LAMBDA = 0.95


@dataclass(frozen=True)
class TauInputs:
    tps: float
    tps_max: float
    vwu: float  # validated-work-units rate in [0, 1]
    ig: float  # information-gain rate in [0, 1]
    alpha: float = ALPHA
    beta: float = BETA
    gamma: float = GAMMA


@dataclass(frozen=True)
class ReputationState:
    tau_i: float
    tau_j: float
    delta_tau_j: float
    lam: float = LAMBDA


def tau_checkpoint(inputs: TauInputs) -> float:
    """alpha*(tps/tps_max) + beta*vwu + gamma*ig, clamped into [0, 1]."""
    if inputs.tps_max <= 0:
        raise NonpositiveTpsMax(f"tps_max={inputs.tps_max}")
    throughput = min(1.0, max(0.0, inputs.tps / inputs.tps_max))
    vwu = min(1.0, max(0.0, inputs.vwu))
    ig = min(1.0, max(0.0, inputs.ig))
    return inputs.alpha * throughput + inputs.beta * vwu + inputs.gamma * ig


def reputation_update(state: ReputationState, delta_ij_sq: float) -> float:
    """lam*delta_ij_sq + (1-lam)*(tau_i/(2*tau_j))*delta_tau_j, literally."""
    if state.tau_j == 0:
        raise DivisionByZeroTau("tau_j must be nonzero")
    return state.lam * delta_ij_sq + (1.0 - state.lam) * (
        state.tau_i / (2.0 * state.tau_j)
    ) * state.delta_tau_j
