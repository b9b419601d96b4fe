"""Gadget configuration: code shape, cat length, repetition counts."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Locality(Enum):
    NONLOCAL = "nonlocal"
    LOCAL = "local"


class Variant(Enum):
    """CNOT gadget versions; they permute block roles, not location counts.

    A/C measure the twice-measured block on the incoming (control) side,
    B/D on the outgoing side.
    """

    A = "A"
    B = "B"
    C = "C"
    D = "D"


@dataclass(frozen=True)
class GadgetConfig:
    """Shape of one fault-tolerant CNOT gadget.

    n, m    -- code block rows/columns (both odd; m protects against dephasing)
    p       -- cat-state length for Z-type logical measurements (nonlocal
               mode only; local mode forces 2m/3m to match operator weight)
    r       -- repetitions of each row-parity measurement (odd)
    r_prime -- rounds of cat-state syndrome measurement
    r_plus  -- rounds of syndrome measurement in the |+>^L preparation
    """

    n: int
    m: int
    p: int
    r: int
    r_prime: int
    r_plus: int
    locality: Locality = Locality.NONLOCAL
    variant: Variant = Variant.A

    def __post_init__(self):
        for name in ("n", "m", "p", "r", "r_prime", "r_plus"):
            value = getattr(self, name)
            if not isinstance(value, int):
                raise TypeError(f"{name} must be an integer, got {value!r}")
        if self.n < 1 or self.n % 2 == 0:
            raise ValueError(f"n must be odd and >= 1, got {self.n}")
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError(f"m must be odd and >= 1, got {self.m}")
        if self.r < 1 or self.r % 2 == 0:
            raise ValueError(f"r must be odd and >= 1, got {self.r}")
        if self.r_prime < 1:
            raise ValueError(f"r_prime must be >= 1, got {self.r_prime}")
        if self.r_plus < 1:
            raise ValueError(f"r_plus must be >= 1, got {self.r_plus}")
        if self.locality is Locality.NONLOCAL and not 1 <= self.p <= 3 * self.m:
            raise ValueError(f"p must lie in [1, 3m] = [1, {3 * self.m}], got {self.p}")

    def effective_p(self, weight_blocks: int) -> int:
        """Cat length actually used for a measurement spanning weight_blocks blocks.

        Local gates force the cat to match the measured operator's weight.
        """
        if self.locality is Locality.LOCAL:
            return weight_blocks * self.m
        return self.p

    def sort_key(self):
        return (self.n, self.m, self.p, self.r, self.r_prime, self.r_plus,
                self.locality.value, self.variant.value)

    def replace(self, **kwargs) -> "GadgetConfig":
        from dataclasses import fields
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(kwargs)
        return GadgetConfig(**current)
