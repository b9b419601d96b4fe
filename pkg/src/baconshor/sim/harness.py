"""Monte-Carlo estimation and bound validation.

estimate() samples trials in fixed-size batches with counter-based random
streams keyed on (seed, batch index), so results are reproducible and
independent of sharding.  check_bound() compares the empirical failure
rate's upper confidence limit against the analytic bound for the matching
gadget; the simulated CNOT prepends each input block's worst-case prior
exposure so the counted fault locations line up with the bound's.

Failure predicates per kind: the CNOT counts any non-success (preparation
failures included, as the bound charges them); bare logical measurements
count outcome flips with preparation failures excluded (they are charged
separately); cat and block preparations count preparation failures;
injection counts logical discrepancies with preparation failures excluded
(the bound assigns those to the following gadget).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import bounds as _bounds
from ..config import GadgetConfig, Locality, Variant
from ..noise import LocationClass, NoiseParams
from .circuits import Circuit, CircuitKind, build_circuit, cnot_wiring
from .decoder import Classification, DecodedBatch, decode_batch
from .engine import BATCH, Trace, _rng_for, run_batch

SIM_KINDS = ("cnot", "mx", "mzz", "mzzz", "plus_prep", "cat_zz", "cat_zzz",
             "injection")


def circuit_for_kind(kind: str, cfg: GadgetConfig) -> Circuit:
    """The simulated circuit whose locations match the kind's bound."""
    if kind == "cnot":
        return build_circuit(CircuitKind.CNOT, cfg, prior_context=True)
    if kind == "mx":
        return build_circuit(CircuitKind.MX_L, cfg, prior_context=True)
    if kind == "mzz" or kind == "cat_zz":
        return build_circuit(CircuitKind.MZZ_L, cfg,
                             prior_context=(kind == "mzz"))
    if kind == "mzzz" or kind == "cat_zzz":
        return build_circuit(CircuitKind.MZZZ_L, cfg,
                             prior_context=(kind == "mzzz"))
    if kind == "plus_prep":
        return build_circuit(CircuitKind.PLUS_PREP, cfg)
    if kind == "injection":
        return build_circuit(CircuitKind.INJECTION, cfg)
    raise ValueError(f"unknown simulation kind {kind!r}; "
                     f"expected one of {SIM_KINDS}")


def _current_zflip(circuit: Circuit, decoded: DecodedBatch, name: str):
    for zi, zm in enumerate(circuit.zmeas_traces):
        if zm.name == name and not zm.is_prior:
            return decoded.zmeas_flips[zi]
    raise LookupError(f"no current measurement named {name}")


def failure_mask(kind: str, circuit: Circuit,
                 decoded: DecodedBatch) -> np.ndarray:
    if kind == "cnot":
        return decoded.classification != Classification.SUCCESS
    if kind in ("mzz", "mzzz"):
        flip = _current_zflip(circuit, decoded, kind)
        return flip & ~decoded.prep_failure
    if kind == "mx":
        flip = decoded.xmeas_flips[len(circuit.xmeas_traces) - 1]
        return flip & ~decoded.prep_failure
    if kind in ("cat_zz", "cat_zzz", "plus_prep"):
        return decoded.prep_failure
    if kind == "injection":
        logical = ((decoded.classification != Classification.SUCCESS)
                   & (decoded.classification != Classification.PREP_FAILURE))
        return logical & ~decoded.prep_failure
    raise ValueError(f"unknown simulation kind {kind!r}")


def analytic_log_bound(kind: str, cfg: GadgetConfig,
                       noise: NoiseParams) -> float:
    if kind == "cnot":
        return _bounds.cnot_bound(cfg, noise).log_total
    if kind == "mx":
        return _bounds.mx_bound(cfg, noise)
    if kind == "mzz":
        return _bounds.mzz_bound(cfg, noise)
    if kind == "mzzz":
        return _bounds.mzzz_bound(cfg, noise)
    if kind == "cat_zz":
        return _bounds.cat_prep_bound(cfg, noise, 2)
    if kind == "cat_zzz":
        return _bounds.cat_prep_bound(cfg, noise, 3)
    if kind == "plus_prep":
        return _bounds.plus_prep_bound(cfg, noise)
    if kind == "injection":
        return _bounds.injection_bound(cfg, noise)
    raise ValueError(f"unknown simulation kind {kind!r}")


def wilson_interval(k: int, n: int, z: float = 1.959964) -> tuple:
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass
class EstimateReport:
    kind: str
    cfg: GadgetConfig
    noise: NoiseParams
    trials: int
    seed: int
    failures: int
    p_fail: float
    ci95: tuple
    tallies: dict

    def to_jsonable(self) -> dict:
        return {
            "kind": self.kind,
            "trials": self.trials,
            "seed": self.seed,
            "failures": self.failures,
            "p_fail": self.p_fail,
            "ci95": list(self.ci95),
            "tallies": dict(self.tallies),
        }


def estimate(kind: str, cfg: GadgetConfig, noise: NoiseParams, trials: int,
             seed: int) -> EstimateReport:
    """Wilson-interval Monte-Carlo estimate of the kind's failure rate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    circuit = circuit_for_kind(kind, cfg)
    failures = 0
    tallies = {c: 0 for c in Classification}
    done = 0
    batch_index = 0
    while done < trials:
        t = min(BATCH, trials - done)
        rng = _rng_for(seed, batch_index)
        trace = run_batch(circuit, noise, t, rng=rng)
        decoded = decode_batch(trace, cfg)
        failures += int(failure_mask(kind, circuit, decoded).sum())
        for c in Classification:
            tallies[c] += int((decoded.classification == c).sum())
        done += t
        batch_index += 1
    p = failures / trials
    noiseless = (noise.eps == noise.eps_nd == noise.eps_s == noise.eps_s_nd
                 == noise.eps_meas == noise.eps_psi == 0.0)
    ci = (0.0, 0.0) if noiseless else wilson_interval(failures, trials)
    return EstimateReport(kind=kind, cfg=cfg, noise=noise, trials=trials,
                          seed=seed, failures=failures, p_fail=p, ci95=ci,
                          tallies={c.value: v for c, v in tallies.items()})


@dataclass
class CheckReport:
    kind: str
    cfg: GadgetConfig
    noise: NoiseParams
    analytic_noise: NoiseParams
    trials: int
    seed: int
    empirical: float
    ci95: tuple
    analytic: float
    verdict: str
    estimate: EstimateReport

    def to_jsonable(self) -> dict:
        data = self.estimate.to_jsonable()
        data.update({
            "analytic": self.analytic,
            "verdict": self.verdict,
            "empirical": self.empirical,
            "noise": self.noise.to_json(),
            "analytic_noise": self.analytic_noise.to_json(),
        })
        return data


def check_bound(kind: str, cfg: GadgetConfig, noise: NoiseParams,
                trials: int, seed: int,
                analytic_noise: NoiseParams | None = None) -> CheckReport:
    """UPHELD when the empirical upper confidence limit stays at or below
    the analytic bound (or the bound clamps at 1); VIOLATED otherwise.

    analytic_noise evaluates the bound at different rates than the
    simulation (negative-control runs).
    """
    a_noise = analytic_noise if analytic_noise is not None else noise
    report = estimate(kind, cfg, noise, trials, seed)
    log_bound = analytic_log_bound(kind, cfg, a_noise)
    analytic = math.exp(log_bound) if log_bound != float("-inf") else 0.0
    upheld = analytic >= 1.0 or report.ci95[1] <= analytic
    return CheckReport(kind=kind, cfg=cfg, noise=noise,
                       analytic_noise=a_noise, trials=trials, seed=seed,
                       empirical=report.p_fail, ci95=report.ci95,
                       analytic=analytic,
                       verdict="UPHELD" if upheld else "VIOLATED",
                       estimate=report)


# ---------------------------------------------------------------------------
# Exhaustive fault injection

def fault_options(loc) -> list:
    """All (probability-weight-per-rate, x_bits, z_bits, cflip) choices of
    one location, split by fault type: (which, weight, x, z, cflip)."""
    from .engine import _CZ_ND_TABLE
    opts = []
    if loc.psi:
        for t3 in range(3):
            opts.append(("psi", 1 / 3, ((t3 != 2),), ((t3 != 0),), False))
        return opts
    if loc.kind is LocationClass.MEAS_X:
        return [("d", 1.0, (), (), True)]
    if loc.kind is LocationClass.CZ:
        for t3 in range(3):
            opts.append(("d", 1 / 3, (False, False),
                         (t3 != 1, t3 != 0), False))
        for row in _CZ_ND_TABLE:
            opts.append(("n", 1 / 12, (bool(row[0]), bool(row[2])),
                         (bool(row[1]), bool(row[3])), False))
        return opts
    if loc.kind is LocationClass.PREP_PLUS:
        return [("d", 1.0, (False,), (True,), False)]
    # WAIT
    return [("d", 1.0, (False,), (True,), False),
            ("n", 1 / 2, (True,), (False,), False),
            ("n", 1 / 2, (True,), (True,), False)]


def _option_rate(which: str, loc, noise: NoiseParams) -> float:
    if which == "psi":
        return noise.eps_psi
    table = {
        LocationClass.PREP_PLUS: (noise.eps, 0.0),
        LocationClass.MEAS_X: (noise.eps_meas, 0.0),
        LocationClass.CZ: (noise.eps, noise.eps_nd),
        LocationClass.WAIT: (noise.eps_s, noise.eps_s_nd),
    }
    d, n = table[loc.kind]
    return d if which == "d" else n


def run_injected(circuit: Circuit, cfg: GadgetConfig, scenarios) -> DecodedBatch:
    """Run explicit fault scenarios as one batch.

    scenarios: list of lists of (location index, x_bits, z_bits, cflip).
    """
    injected = {}
    for t, events in enumerate(scenarios):
        for loc_index, xb, zb, cf in events:
            injected.setdefault(loc_index, []).append((t, xb, zb, cf))
    trace = run_batch(circuit, noise=None, n_trials=len(scenarios),
                      injected=injected)
    return decode_batch(trace, cfg)


def exhaustive_single_faults(kind: str, cfg: GadgetConfig,
                             chunk: int = 20000):
    """Yield (location, option, classification) over every single-fault
    scenario of the kind's simulated circuit."""
    circuit = circuit_for_kind(kind, cfg)
    scenarios = []
    meta = []
    for loc in circuit.locations:
        for opt in fault_options(loc):
            scenarios.append([(loc.index, opt[2], opt[3], opt[4])])
            meta.append((loc, opt))
    for start in range(0, len(scenarios), chunk):
        part = scenarios[start:start + chunk]
        decoded = run_injected(circuit, cfg, part)
        for i, (loc, opt) in enumerate(meta[start:start + chunk]):
            yield loc, opt, decoded.classification[i]


def second_order_failure_sum(cfg: GadgetConfig, noise: NoiseParams,
                             chunk: int = 20000) -> tuple:
    """Exact probability of (exactly this fault set occurs and the gadget
    fails), summed over all single faults and fault pairs of the bare CNOT
    circuit.  A lower bound on the true failure probability, hence also on
    the analytic bound.  Returns (single_sum, pair_sum)."""
    circuit = build_circuit(CircuitKind.CNOT, cfg)
    locs = circuit.locations
    loc_rate = []
    for loc in locs:
        opts = fault_options(loc)
        total = sum(_option_rate(w, loc, noise) * weight
                    for w, weight, *_ in opts)
        loc_rate.append(total)
    log_clean = sum(math.log1p(-r) for r in loc_rate if r < 1.0)

    weighted = []   # (loc_index, probability, x, z, cf)
    for loc in locs:
        for which, weight, xb, zb, cf in fault_options(loc):
            p = _option_rate(which, loc, noise) * weight
            if p > 0:
                weighted.append((loc.index, p, xb, zb, cf))

    def run_chunked(scenarios, probs):
        total = 0.0
        for start in range(0, len(scenarios), chunk):
            decoded = run_injected(circuit, cfg, scenarios[start:start + chunk])
            fail = decoded.classification != Classification.SUCCESS
            total += float(np.dot(fail.astype(float),
                                  probs[start:start + chunk]))
        return total

    singles = [[(li, xb, zb, cf)] for li, _, xb, zb, cf in weighted]
    sp = np.array([p for _, p, *_ in weighted])
    single_sum = run_chunked(singles, sp) * math.exp(log_clean)

    pairs = []
    pp = []
    for i in range(len(weighted)):
        li, pi, xi, zi, ci = weighted[i]
        for j in range(i + 1, len(weighted)):
            lj, pj, xj, zj, cj = weighted[j]
            if li == lj:
                continue  # one fault per location
            pairs.append([(li, xi, zi, ci), (lj, xj, zj, cj)])
            pp.append(pi * pj)
    pair_sum = run_chunked(pairs, np.array(pp)) * math.exp(log_clean)
    return single_sum, pair_sum


# ---------------------------------------------------------------------------
# Noiseless logical action of the CNOT

_CNOT_RULE = {
    ("X", "I"): ("X", "X"),
    ("I", "X"): ("I", "X"),
    ("Z", "I"): ("Z", "I"),
    ("I", "Z"): ("Z", "Z"),
}


def verify_cnot_rule(cfg: GadgetConfig) -> dict:
    """Check the noiseless logical action for every input Pauli pair.

    Injects each logical Pauli as an input frame difference on the bare
    CNOT circuit, runs without faults, and compares the net output frame
    (corrections from the teleportation outcome flips composed with the
    propagated residual) against the CNOT conjugation rule.  Returns a map
    (control, target) -> bool.
    """
    w = cnot_wiring(cfg.variant)
    circuit = build_circuit(CircuitKind.CNOT, cfg)
    results = {}
    for (pc, pt), (qc, qt) in _CNOT_RULE.items():
        x0 = np.zeros((1, circuit.n_qubits), dtype=bool)
        z0 = np.zeros((1, circuit.n_qubits), dtype=bool)
        _inject_logical(circuit, x0, z0, w["control_in"], pc)
        _inject_logical(circuit, x0, z0, w["target_in"], pt)
        trace = run_batch(circuit, noise=None, n_trials=1, initial=(x0, z0))
        decoded = decode_batch(trace, cfg)
        got = {
            "control": _block_pauli(decoded, w["control_out"]),
            "target": _block_pauli(decoded, w["target_out"]),
        }
        results[(pc, pt)] = (got["control"] == qc and got["target"] == qt)
    return results


def _inject_logical(circuit: Circuit, x0, z0, block_id: int, pauli: str):
    """Install a logical Pauli representative of one block as an initial
    frame difference: a full column of X or a full row of Z."""
    if pauli == "I":
        return
    block = circuit.blocks[block_id]
    if pauli == "X":
        for row in block.qubits:
            x0[:, row[0]] = True
    else:
        for q in block.qubits[0]:
            z0[:, q] = True


def _block_pauli(decoded: DecodedBatch, block_id: int) -> str:
    xf = bool(decoded.block_x_flip[block_id][0])
    zf = bool(decoded.block_z_flip[block_id][0])
    return {(False, False): "I", (True, False): "X",
            (False, True): "Z", (True, True): "Y"}[(xf, zf)]
