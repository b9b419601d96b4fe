"""Pauli masks over circuit qubits."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class PauliMask:
    """X/Z bit-vectors over a circuit's qubits; composition is bitwise XOR."""

    x_bits: np.ndarray
    z_bits: np.ndarray

    @classmethod
    def zeros(cls, n_qubits: int) -> "PauliMask":
        return cls(np.zeros(n_qubits, dtype=bool), np.zeros(n_qubits, dtype=bool))

    def __post_init__(self):
        self.x_bits = np.asarray(self.x_bits, dtype=bool)
        self.z_bits = np.asarray(self.z_bits, dtype=bool)
        if self.x_bits.shape != self.z_bits.shape:
            raise ValueError("x/z bit-vector shapes differ")

    def __xor__(self, other: "PauliMask") -> "PauliMask":
        return PauliMask(self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliMask):
            return NotImplemented
        return (np.array_equal(self.x_bits, other.x_bits)
                and np.array_equal(self.z_bits, other.z_bits))

    def weight(self) -> int:
        return int((self.x_bits | self.z_bits).sum())

    def copy(self) -> "PauliMask":
        return PauliMask(self.x_bits.copy(), self.z_bits.copy())
