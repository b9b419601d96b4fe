"""Pauli-frame propagation of sampled faults through a circuit.

All preparations are |+>, all gates CZ, all measurements X-basis, so the
noiseless run is a fixed reference and only fault-induced deviations need
tracking: a CZ maps an X on one operand to an additional Z on the other
and commutes with Z, an X measurement records the Z parity on its qubit
XORed with any classical flip, and preparation faults are Z flips of the
fresh |+>.  Trials are simulated as a batch dimension over boolean masks.

Faults are drawn per location: a diagonal fault applies a uniformly random
non-identity Z-type Pauli on the operands, a non-diagonal fault a uniform
Pauli with non-trivial X part; measurement faults flip the classical bit;
the unprotected injected state draws a uniform non-identity Pauli at rate
eps_psi.  Randomness comes from counter-based streams keyed on (seed,
batch index), making results independent of how trials are sharded.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..noise import LocationClass, NoiseParams
from .circuits import Circuit
from .pauli import PauliMask

BATCH = 4096

# non-diagonal two-qubit Paulis (non-trivial X part), in enumeration order
# over (P1, P2) with P in (I, X, Y, Z): bits (x1, z1, x2, z2)
_PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_CZ_ND_TABLE = np.array(
    [_PAULI_BITS[p1] + _PAULI_BITS[p2]
     for p1 in "IXYZ" for p2 in "IXYZ"
     if _PAULI_BITS[p1][0] or _PAULI_BITS[p2][0]],
    dtype=bool)
assert _CZ_ND_TABLE.shape == (12, 4)


@dataclass
class FaultEvent:
    """One sampled fault: Pauli bits aligned with the location's operands."""

    location: int
    x_bits: tuple = ()
    z_bits: tuple = ()
    classical_flip: bool = False


@dataclass
class Trace:
    """Pre-decode fields of a batch of trials."""

    circuit: Circuit
    n_trials: int
    flips: np.ndarray          # (T, n_meas) measurement flip bits
    x: np.ndarray              # (T, nq) final X part of the propagated error
    z: np.ndarray              # (T, nq) final Z part
    xhit: np.ndarray           # (T, nq) cat qubits hit by window X faults
    snapshots: dict            # cat trace index -> (T, stages, n_checks) bools
    meas_slot: np.ndarray      # location index -> measurement slot or -1


def meas_slots(circuit: Circuit) -> np.ndarray:
    slot = np.full(len(circuit.locations), -1, dtype=np.int64)
    k = 0
    for loc in circuit.locations:
        if loc.kind is LocationClass.MEAS_X:
            slot[loc.index] = k
            k += 1
    return slot


def _rng_for(seed: int, batch_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=np.array([seed % 2**64, batch_index],
                                      dtype=np.uint64)))


def _snapshot_schedule(circuit: Circuit) -> dict:
    by_layer = {}
    for tid, trace in enumerate(circuit.cat_traces):
        for stage, layer in enumerate(trace.snapshot_layers):
            by_layer.setdefault(layer, []).append((tid, stage))
    return by_layer


def run_batch(circuit: Circuit, noise: NoiseParams | None, n_trials: int,
              rng: np.random.Generator | None = None,
              injected: dict | None = None,
              initial: tuple | None = None) -> Trace:
    """Propagate one batch of trials.

    Either `noise` + `rng` (sampled faults) or `injected` (explicit faults:
    location index -> list of (trial, x_bits, z_bits, classical_flip)).
    `initial` holds (x0, z0) masks installed before the first layer, used
    to feed logical Pauli differences into a gadget's input blocks.
    """
    nq = circuit.n_qubits
    T = n_trials
    x = np.zeros((T, nq), dtype=bool)
    z = np.zeros((T, nq), dtype=bool)
    if initial is not None:
        x0, z0 = initial
        x |= x0
        z |= z0
    xhit = np.zeros((T, nq), dtype=bool)
    slot = meas_slots(circuit)
    flips = np.zeros((T, int(slot.max() + 1) if len(slot) else 0), dtype=bool)
    snap_plan = _snapshot_schedule(circuit)
    snapshots = {
        tid: np.zeros((T, len(tr.snapshot_layers), len(tr.check_pairs)),
                      dtype=bool)
        for tid, tr in enumerate(circuit.cat_traces)
    }
    rates = _location_rates(noise) if noise is not None else None
    # snapshots registered before any layer stay identically zero

    for L, layer in enumerate(circuit.layers):
        # ideal gate action first; faults at a location strike afterwards
        cz_a = [loc.qubits[0] for loc in layer
                if loc.kind is LocationClass.CZ]
        cz_b = [loc.qubits[1] for loc in layer
                if loc.kind is LocationClass.CZ]
        if cz_a:
            ia = np.array(cz_a)
            ib = np.array(cz_b)
            z[:, ib] ^= x[:, ia]
            z[:, ia] ^= x[:, ib]
        for loc in layer:
            if loc.kind is LocationClass.MEAS_X:
                flips[:, slot[loc.index]] = z[:, loc.qubits[0]]
        if rates is not None:
            for loc in layer:
                _apply_sampled(loc, rates, rng, x, z, xhit, flips, slot)
        if injected:
            for loc in layer:
                events = injected.get(loc.index)
                if events:
                    _apply_injected(loc, events, x, z, xhit, flips, slot)
        for tid, stage in snap_plan.get(L, []):
            tr = circuit.cat_traces[tid]
            mem = np.array(tr.members)
            for c, (ia_, ib_) in enumerate(tr.check_pairs):
                snapshots[tid][:, stage, c] = x[:, mem[ia_]] ^ x[:, mem[ib_]]
    return Trace(circuit=circuit, n_trials=T, flips=flips, x=x, z=z,
                 xhit=xhit, snapshots=snapshots, meas_slot=slot)


def _location_rates(noise: NoiseParams):
    return {
        LocationClass.PREP_PLUS: (noise.eps, 0.0),
        LocationClass.MEAS_X: (noise.eps_meas, 0.0),
        LocationClass.CZ: (noise.eps, noise.eps_nd),
        LocationClass.WAIT: (noise.eps_s, noise.eps_s_nd),
        "psi": (0.0, noise.eps_psi),
    }


def _apply_sampled(loc, rates, rng, x, z, xhit, flips, slot):
    T = x.shape[0]
    if loc.psi:
        # general fault on the unprotected state: uniform over {X, Y, Z}
        u = rng.random(T)
        v = rng.integers(0, 12, T, dtype=np.uint8) % 3
        hit = u < rates["psi"][1]
        q = loc.qubits[0]
        x[:, q] ^= hit & (v != 2)
        z[:, q] ^= hit & (v != 0)
        return
    rd, rn = rates[loc.kind]
    if rd == 0.0 and rn == 0.0:
        return
    if rd + rn > 1.0:
        raise ValueError("per-location fault rates exceed probability 1")
    u = rng.random(T)
    v = rng.integers(0, 12, T, dtype=np.uint8)
    dm = u < rd
    nm = (~dm) & (u < rd + rn)
    kind = loc.kind
    if kind is LocationClass.MEAS_X:
        flips[:, slot[loc.index]] ^= dm
        return
    if kind is LocationClass.CZ:
        a, b = loc.qubits
        if dm.any():
            t3 = v % 3  # 0: Z x I, 1: I x Z, 2: Z x Z
            z[:, a] ^= dm & (t3 != 1)
            z[:, b] ^= dm & (t3 != 0)
        if nm.any():
            bits = _CZ_ND_TABLE[v]
            xa = nm & bits[:, 0]
            xb = nm & bits[:, 2]
            x[:, a] ^= xa
            z[:, a] ^= nm & bits[:, 1]
            x[:, b] ^= xb
            z[:, b] ^= nm & bits[:, 3]
            if loc.xhit:
                if loc.xhit[0]:
                    xhit[:, a] |= xa
                if loc.xhit[1]:
                    xhit[:, b] |= xb
        return
    q = loc.qubits[0]
    if kind is LocationClass.PREP_PLUS:
        z[:, q] ^= dm
        return
    # WAIT: diagonal Z, non-diagonal uniform over {X, Y}
    z[:, q] ^= dm
    if rn:
        t2 = v % 2  # 0: X, 1: Y
        x[:, q] ^= nm
        z[:, q] ^= nm & (t2 == 1)
        if loc.xhit and loc.xhit[0]:
            xhit[:, q] |= nm


def _apply_injected(loc, events, x, z, xhit, flips, slot):
    for trial, x_bits, z_bits, cflip in events:
        if cflip:
            flips[trial, slot[loc.index]] ^= True
        for j, q in enumerate(loc.qubits):
            if j < len(x_bits) and x_bits[j]:
                x[trial, q] ^= True
                if loc.xhit and j < len(loc.xhit) and loc.xhit[j]:
                    xhit[trial, q] ^= True
            if j < len(z_bits) and z_bits[j]:
                z[trial, q] ^= True


def sample_faults(circuit: Circuit, noise: NoiseParams,
                  rng_seed: int) -> list:
    """Draw one trial's faults as an explicit, reproducible list."""
    rng = _rng_for(rng_seed, 0)
    events = []
    rates = _location_rates(noise)
    for layer in circuit.layers:
        for loc in layer:
            ev = _sample_one(loc, rates, rng)
            if ev is not None:
                events.append(ev)
    return events


def _sample_one(loc, rates, rng):
    u = float(rng.random(1)[0])
    v = int(rng.integers(0, 12, 1, dtype=np.uint8)[0])
    if loc.psi:
        if u < rates["psi"][1]:
            t3 = v % 3
            return FaultEvent(loc.index, (t3 != 2,), (t3 != 0,))
        return None
    rd, rn = rates[loc.kind]
    if u < rd:
        if loc.kind is LocationClass.MEAS_X:
            return FaultEvent(loc.index, classical_flip=True)
        if loc.kind is LocationClass.CZ:
            t3 = v % 3
            return FaultEvent(loc.index, (False, False),
                              (t3 != 1, t3 != 0))
        return FaultEvent(loc.index, (False,), (True,))
    if u < rd + rn:
        if loc.kind is LocationClass.CZ:
            bits = _CZ_ND_TABLE[v]
            return FaultEvent(loc.index, (bool(bits[0]), bool(bits[2])),
                              (bool(bits[1]), bool(bits[3])))
        if loc.kind is LocationClass.WAIT:
            t2 = v % 2
            return FaultEvent(loc.index, (True,), (t2 == 1,))
    return None


def propagate_events(circuit: Circuit, events) -> Trace:
    """Single-trial propagation of an explicit fault list."""
    injected = {}
    for ev in events:
        injected.setdefault(ev.location, []).append(
            (0, ev.x_bits, ev.z_bits, ev.classical_flip))
    return run_batch(circuit, noise=None, n_trials=1, injected=injected)


def residual_mask(trace: Trace, trial: int = 0) -> PauliMask:
    return PauliMask(trace.x[trial].copy(), trace.z[trial].copy())
