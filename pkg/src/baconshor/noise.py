"""Biased-noise parameters and per-location fault rates.

The noise model distinguishes diagonal (dephasing, Z-type) faults from
non-diagonal (general) faults, with independent rates for gate locations,
idle storage steps, single-qubit X measurements and the unprotected
injected state.  Every other module reads rates exclusively through
``rate_of`` so that substituting a distinct measurement error rate is a
single code path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from enum import Enum


class UndefinedBiasError(ValueError):
    """Raised when the noise bias eps/eps_nd is requested with eps_nd = 0."""


class LocationClass(Enum):
    PREP_PLUS = "prep_plus"
    MEAS_X = "meas_x"
    CZ = "cz"
    WAIT = "wait"


class FaultType(Enum):
    DIAGONAL = "diagonal"
    NON_DIAGONAL = "non_diagonal"


_FIELD_NAMES = ("eps", "eps_nd", "eps_s", "eps_s_nd", "eps_meas", "eps_psi")


@dataclass(frozen=True)
class NoiseParams:
    """Physical fault rates.

    eps       -- diagonal fault rate per gate/preparation location
    eps_nd    -- non-diagonal (general) fault rate per gate location
    eps_s     -- diagonal storage fault rate per idle time step
    eps_s_nd  -- non-diagonal storage fault rate per idle step
    eps_meas  -- X-measurement outcome flip rate; defaults to eps
    eps_psi   -- error rate of the unprotected injected state; defaults to eps

    All rates live in [0, 1].  Instances are immutable and safe to share
    across workers.
    """

    eps: float = 0.0
    eps_nd: float = 0.0
    eps_s: float = 0.0
    eps_s_nd: float = 0.0
    eps_meas: float | None = None
    eps_psi: float | None = None

    def __post_init__(self):
        if self.eps_meas is None:
            object.__setattr__(self, "eps_meas", self.eps)
        if self.eps_psi is None:
            object.__setattr__(self, "eps_psi", self.eps)
        for name in _FIELD_NAMES:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value!r} outside [0, 1]")

    def bias(self) -> float:
        """Noise bias eps/eps_nd; rejects eps_nd = 0 rather than returning inf."""
        if self.eps_nd == 0.0:
            raise UndefinedBiasError("bias undefined: eps_nd is zero")
        return self.eps / self.eps_nd

    @classmethod
    def from_bias(cls, eps: float, bias: float, **kwargs) -> "NoiseParams":
        """Convenience constructor: eps_nd = eps / bias."""
        if bias <= 0:
            raise ValueError("bias must be positive")
        return cls(eps=eps, eps_nd=eps / bias, **kwargs)

    def replace(self, **kwargs) -> "NoiseParams":
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(kwargs)
        return NoiseParams(**current)

    def to_json(self) -> str:
        return json.dumps({name: getattr(self, name) for name in _FIELD_NAMES},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "NoiseParams":
        data = json.loads(text)
        unknown = set(data) - set(_FIELD_NAMES)
        if unknown:
            raise ValueError(f"unknown noise fields: {sorted(unknown)}")
        return cls(**data)


# (diagonal, non-diagonal) rates per location class.  Preparations flip the
# prepared |+> to |-> (diagonal only); X measurements flip the classical
# outcome only; measurement bias enters exclusively through MEAS_X.
def rate_of(cls: LocationClass, which: FaultType, noise: NoiseParams) -> float:
    """Fault rate of one circuit location of the given class."""
    table = {
        LocationClass.PREP_PLUS: (noise.eps, 0.0),
        LocationClass.MEAS_X: (noise.eps_meas, 0.0),
        LocationClass.CZ: (noise.eps, noise.eps_nd),
        LocationClass.WAIT: (noise.eps_s, noise.eps_s_nd),
    }
    diag, nondiag = table[cls]
    return diag if which is FaultType.DIAGONAL else nondiag
