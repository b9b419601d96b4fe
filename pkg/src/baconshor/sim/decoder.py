"""Decoding of measurement flips into Pauli frames and failure classes.

The decoder mirrors the protocol's classical processing, applied to
deviations from the noiseless reference run:

* Each cat preparation selects the most frequent syndrome among accepted
  rounds (rounds failing the wrap-around parity veto are rejected when the
  veto exists).  A tie, a winning syndrome that matches no stage of the
  true defect history, or half-or-more cat qubits hit by window X faults
  is a preparation failure.  The winner's low-weight interpretation
  updates the Pauli frame: phase kicks into the coupled data for
  measurement cats, X defects on the column qubits for |+>^L column cats.
* Each Z-type logical measurement majority-votes repetitions per row and
  rows per logical outcome, after correcting every row parity by the
  inferred X frame on its data qubits.
* Each destructive X readout majority-votes the m column parities after
  correcting each column by the inferred phase-kick frame.
* Outcome flips of the current gadget's logical measurements feed the
  teleportation corrections; the trial succeeds when the inferred frame
  and the actual residual differ by an element of the stabilizer-gauge
  group of each outgoing block, i.e. when an ideal decoded measurement of
  either logical operator would still give the reference answer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..config import GadgetConfig
from .circuits import Circuit
from .engine import Trace
from .pauli import PauliMask


class Classification(Enum):
    SUCCESS = "success"
    PREP_FAILURE = "prep_failure"
    LOGICAL_X = "logical_x"
    LOGICAL_Z = "logical_z"
    LOGICAL_Y = "logical_y"


@dataclass
class DecodedBatch:
    """Vectorized decode results for a batch of trials."""

    n_trials: int
    prep_failure: np.ndarray          # (T,)
    classification: np.ndarray        # (T,) of Classification
    zmeas_flips: dict                 # trace index -> (T,) outcome flips
    xmeas_flips: dict                 # trace index -> (T,)
    single_flips: dict                # trace index -> (T,)
    a_bits: np.ndarray | None
    b_bits: np.ndarray | None
    block_x_flip: dict                # block id -> (T,) net logical X discrepancy
    block_z_flip: dict                # block id -> (T,)
    x_frame: np.ndarray               # (T, nq) inferred X frame on data
    z_frame: np.ndarray               # (T, nq) inferred phase-kick frame


@dataclass
class TrialOutcome:
    """Per-trial result: decoder inputs, inferred vs. actual frames, class.

    a_bit/b_bit are the teleported-CNOT outcome flips (X readout of the
    measured target input and the three-block parity outcome).
    """

    flip_bits: np.ndarray
    actual_residual: PauliMask
    inferred_frame: PauliMask | None = None
    a_bit: int | None = None
    b_bit: int | None = None
    classification: Classification | None = None
    prep_failure: bool = False
    block_flips: dict = field(default_factory=dict)


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack (..., C) bool syndromes into comparable void scalars."""
    if bits.shape[-1] == 0:
        return np.zeros(bits.shape[:-1] + (1,), dtype=np.uint8)
    return np.packbits(bits, axis=-1)


def _decode_cat(trace_syn, accepted, truth, members_hit, p, chain_checks):
    """Winning-syndrome selection for one cat across the batch.

    trace_syn: (T, R, C) measured flip syndromes; accepted: (T, R);
    truth: (T, S, C) stage syndromes; members_hit: (T,) count of window
    X hits.  Returns (prep_fail, pattern) with pattern (T, p) the
    low-weight interpretation of the winner.
    """
    T, R, C = trace_syn.shape
    half = -(-p // 2)
    if R == 0 or C == 0:
        pattern = np.zeros((T, p), dtype=bool)
        return (members_hit >= half), pattern
    packed = _pack_rows(trace_syn)                       # (T, R, B)
    eq = (packed[:, :, None, :] == packed[:, None, :, :]).all(-1)  # (T, R, R)
    counts = (eq & accepted[:, None, :]).sum(-1)         # (T, R)
    counts = np.where(accepted, counts, -1)
    top = counts.max(axis=1)                             # (T,)
    none_accepted = top < 1
    is_top = counts == top[:, None]
    winner = is_top.argmax(axis=1)                       # first top round
    # a different syndrome also reaching top count is a tie
    same_as_winner = eq[np.arange(T), :, winner]
    tie = (is_top & ~same_as_winner).any(axis=1)

    win_syn = trace_syn[np.arange(T), winner]            # (T, C)
    packed_truth = _pack_rows(truth)
    packed_win = _pack_rows(win_syn[:, None, :])         # (T, 1, B)
    valid = (packed_truth == packed_win).all(-1).any(-1)

    prep_fail = none_accepted | tie | ~valid | (members_hit >= half)

    # low-weight interpretation from the chain checks (first p-1 bits)
    pattern = np.zeros((T, p), dtype=bool)
    if p >= 2 and chain_checks > 0:
        np.logical_xor.accumulate(win_syn[:, :p - 1], axis=1,
                                  out=pattern[:, 1:])
        weight = pattern.sum(axis=1)
        flip = weight * 2 > p
        pattern ^= flip[:, None]
    return prep_fail, pattern


def decode_batch(trace: Trace, cfg: GadgetConfig) -> DecodedBatch:
    circuit = trace.circuit
    T = trace.n_trials
    flips = trace.flips
    slot = trace.meas_slot
    nq = circuit.n_qubits
    x_frame = np.zeros((T, nq), dtype=bool)
    z_frame = np.zeros((T, nq), dtype=bool)
    prep_fail = np.zeros(T, dtype=bool)

    # cat decodes, in construction (chronological) order
    for tid, cat in enumerate(circuit.cat_traces):
        p = len(cat.members)
        R = len(cat.round_meas)
        C = len(cat.check_pairs)
        syn = np.zeros((T, R, C), dtype=bool)
        for k, row in enumerate(cat.round_meas):
            for c, loc_index in enumerate(row):
                syn[:, k, c] = flips[:, slot[loc_index]]
        if cat.has_veto and C:
            accepted = syn.sum(axis=2) % 2 == 0
        else:
            accepted = np.ones((T, R), dtype=bool)
        hits = trace.xhit[:, cat.members].sum(axis=1) if p else \
            np.zeros(T, dtype=np.int64)
        chain = p - 1 if p >= 2 else 0
        fail, pattern = _decode_cat(syn, accepted, trace.snapshots[tid],
                                    hits, p, chain)
        prep_fail |= fail
        if cat.column_data:
            if p:
                x_frame[:, cat.members] ^= pattern
        else:
            for k, targets in enumerate(cat.kick_targets):
                for dq in targets:
                    z_frame[:, dq] ^= pattern[:, k]

    corr_x = {b.id: np.zeros(T, dtype=bool) for b in circuit.blocks}
    corr_z = {b.id: np.zeros(T, dtype=bool) for b in circuit.blocks}

    def apply_corrections(corrections, flip_bits):
        for axis, block_id in corrections:
            if axis == "X":
                corr_x[block_id] ^= flip_bits
            else:
                corr_z[block_id] ^= flip_bits

    # Z-type logical measurements
    zflips = {}
    for zi, zm in enumerate(circuit.zmeas_traces):
        row_bits = []
        for group in zm.rows:
            frame_corr = x_frame[:, group.data_qubits].sum(axis=1) % 2 == 1
            rep_flips = []
            for readouts in group.rep_readouts:
                parity = flips[:, slot[readouts]].sum(axis=1) % 2 == 1
                rep_flips.append(parity)
            reps = np.stack(rep_flips, axis=1)           # (T, r)
            row = reps.sum(axis=1) * 2 > reps.shape[1]   # majority of flips
            row_bits.append(row ^ frame_corr)
        rows = np.stack(row_bits, axis=1)
        outcome = rows.sum(axis=1) * 2 > rows.shape[1]
        if not zm.is_prior:
            zflips[zi] = outcome
            apply_corrections(zm.corrections, outcome)

    # destructive X readouts
    xflips = {}
    for xi, xm in enumerate(circuit.xmeas_traces):
        col_bits = []
        for col_qubits, col_locs in zip(xm.columns, xm.meas_locs):
            parity = flips[:, slot[col_locs]].sum(axis=1) % 2 == 1
            frame_corr = z_frame[:, col_qubits].sum(axis=1) % 2 == 1
            col_bits.append(parity ^ frame_corr)
        cols = np.stack(col_bits, axis=1)
        outcome = cols.sum(axis=1) * 2 > cols.shape[1]
        xflips[xi] = outcome
        apply_corrections(xm.corrections, outcome)

    # single-qubit readouts (unprotected injected state)
    sflips = {}
    for si, sm in enumerate(circuit.single_meas):
        outcome = flips[:, slot[sm.meas_loc]] ^ z_frame[:, sm.qubit]
        sflips[si] = outcome
        apply_corrections(sm.corrections, outcome)

    # net logical discrepancy on each outgoing block: difference between
    # inferred frame and actual residual, closed by ideal majority decoding
    block_x = {}
    block_z = {}
    any_x = np.zeros(T, dtype=bool)
    any_z = np.zeros(T, dtype=bool)
    for blk in circuit.blocks:
        if not blk.outgoing:
            continue
        qubits = np.array(blk.qubits)                    # (n, m)
        dz = trace.z[:, qubits] ^ z_frame[:, qubits]     # (T, n, m)
        dx = trace.x[:, qubits] ^ x_frame[:, qubits]
        odd_cols = (dz.sum(axis=1) % 2 == 1).sum(axis=1)
        odd_rows = (dx.sum(axis=2) % 2 == 1).sum(axis=1)
        zflip = (odd_cols * 2 > qubits.shape[1]) ^ corr_z[blk.id]
        xflip = (odd_rows * 2 > qubits.shape[0]) ^ corr_x[blk.id]
        block_z[blk.id] = zflip
        block_x[blk.id] = xflip
        any_z |= zflip
        any_x |= xflip

    classification = np.full(T, Classification.SUCCESS, dtype=object)
    classification[any_z] = Classification.LOGICAL_Z
    classification[any_x] = Classification.LOGICAL_X
    classification[any_x & any_z] = Classification.LOGICAL_Y
    classification[prep_fail] = Classification.PREP_FAILURE

    a_bits = (xflips[circuit.a_bit_source]
              if circuit.a_bit_source is not None else None)
    b_bits = (zflips[circuit.b_bit_source]
              if circuit.b_bit_source is not None else None)
    return DecodedBatch(n_trials=T, prep_failure=prep_fail,
                        classification=classification, zmeas_flips=zflips,
                        xmeas_flips=xflips, single_flips=sflips,
                        a_bits=a_bits, b_bits=b_bits,
                        block_x_flip=block_x, block_z_flip=block_z,
                        x_frame=x_frame, z_frame=z_frame)


def propagate(circuit: Circuit, faults) -> TrialOutcome:
    """Single-trial propagation; returns the pre-decode outcome fields."""
    from .engine import propagate_events
    trace = propagate_events(circuit, faults)
    outcome = TrialOutcome(
        flip_bits=trace.flips[0].copy(),
        actual_residual=PauliMask(trace.x[0].copy(), trace.z[0].copy()))
    outcome._trace = trace
    return outcome


def decode(outcome: TrialOutcome, cfg: GadgetConfig) -> TrialOutcome:
    """Complete a single-trial outcome with decoder results."""
    trace = outcome._trace
    decoded = decode_batch(trace, cfg)
    outcome.inferred_frame = PauliMask(decoded.x_frame[0].copy(),
                                       decoded.z_frame[0].copy())
    outcome.prep_failure = bool(decoded.prep_failure[0])
    outcome.classification = decoded.classification[0]
    if decoded.a_bits is not None:
        outcome.a_bit = int(decoded.a_bits[0])
    if decoded.b_bits is not None:
        outcome.b_bit = int(decoded.b_bits[0])
    outcome.block_flips = {
        bid: (int(decoded.block_x_flip[bid][0]),
              int(decoded.block_z_flip[bid][0]))
        for bid in decoded.block_x_flip
    }
    return outcome
