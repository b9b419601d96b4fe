"""Magic-state distillation with noisy CSS operations.

Models the iterated |+i> (7-to-1, Steane-code based) and |T> (15-to-1,
Reed-Muller based) distillation maps.  Noisy CSS operations put an
additive floor on the output error: 4*eps_css for |+i> and 8*eps_css for
|T>; above the floor one round suppresses the input error cubically with
the standard leading coefficients (7 and 35), which are exposed as
configuration since only the floors and the few-round convergence are
pinned by the analysis this follows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .bounds import cnot_bound, injection_bound
from .config import GadgetConfig
from .noise import NoiseParams


class DistillKind(Enum):
    PLUS_I = "plus_i"
    T = "t"


#: (cubic-suppression coefficient A, floor coefficient F) per protocol.
COEFFICIENTS = {DistillKind.PLUS_I: (7.0, 4.0), DistillKind.T: (35.0, 8.0)}

INPUT_COUNTS = {DistillKind.PLUS_I: 7, DistillKind.T: 15}


@dataclass(frozen=True)
class DistillParams:
    kind: DistillKind
    eps_in: float
    eps_css: float
    rounds: int = 0

    def __post_init__(self):
        if not 0.0 <= self.eps_in <= 1.0:
            raise ValueError(f"eps_in={self.eps_in} outside [0, 1]")
        if not 0.0 <= self.eps_css <= 1.0:
            raise ValueError(f"eps_css={self.eps_css} outside [0, 1]")
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")

    @property
    def input_counts(self) -> int:
        return INPUT_COUNTS[self.kind]


def distill_step(params: DistillParams) -> float:
    """Output error after one round: min(1, A*eps_in^3 + F*eps_css)."""
    a, f = COEFFICIENTS[params.kind]
    return min(1.0, a * params.eps_in ** 3 + f * params.eps_css)


def floor_of(kind: DistillKind, eps_css: float) -> float:
    return COEFFICIENTS[kind][1] * eps_css


def ideal_threshold(kind: DistillKind) -> float:
    """Fixed point of the noiseless map A*x^3 = x."""
    return COEFFICIENTS[kind][0] ** -0.5


@dataclass(frozen=True)
class DistillSchedule:
    eps_by_round: list  # eps_by_round[k] = error after k rounds
    rounds_to_floor: int | None  # first round within 10% of the floor
    floor: float


def distill_schedule(params: DistillParams) -> DistillSchedule:
    """Iterate distill_step for params.rounds rounds."""
    floor = floor_of(params.kind, params.eps_css)
    eps = params.eps_in
    history = [eps]
    rounds_to_floor = None
    if floor > 0 and abs(eps - floor) <= 0.1 * floor:
        rounds_to_floor = 0
    for k in range(1, params.rounds + 1):
        eps = distill_step(DistillParams(params.kind, eps, params.eps_css))
        history.append(eps)
        if rounds_to_floor is None and floor > 0 \
                and abs(eps - floor) <= 0.1 * floor:
            rounds_to_floor = k
    return DistillSchedule(eps_by_round=history, rounds_to_floor=rounds_to_floor,
                           floor=floor)


@dataclass(frozen=True)
class EndToEndReport:
    eps_inject: float
    eps_css: float
    eps_plus_i_ancilla: float | None  # 4*eps_css for the T protocol
    schedule: DistillSchedule
    floor: float


def end_to_end(noise: NoiseParams, cfg: GadgetConfig, kind: DistillKind,
               rounds: int = 10) -> EndToEndReport:
    """Injection followed by distillation at the given gadget's error rates.

    The injected-state error feeds eps_in; the CNOT bound total feeds
    eps_css.  T distillation consumes maximally distilled |+i> ancillas at
    4*eps_css, which is what its 8*eps_css floor already accounts for.
    """
    log_inject = injection_bound(cfg, noise)
    log_css = cnot_bound(cfg, noise).log_total
    eps_inject = math.exp(log_inject) if log_inject != float("-inf") else 0.0
    eps_css = math.exp(log_css) if log_css != float("-inf") else 0.0
    schedule = distill_schedule(DistillParams(kind, eps_inject, eps_css, rounds))
    plus_i = 4.0 * eps_css if kind is DistillKind.T else None
    return EndToEndReport(eps_inject=eps_inject, eps_css=eps_css,
                          eps_plus_i_ancilla=plus_i, schedule=schedule,
                          floor=schedule.floor)
