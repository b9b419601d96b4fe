"""Fault-tolerant CNOT gadgets on asymmetric Bacon-Shor codes under biased
dephasing noise: analytic failure bounds, parameter optimization, and
circuit-level Monte-Carlo validation."""

__version__ = "0.1.0"
