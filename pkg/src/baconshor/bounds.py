"""Closed-form upper bounds on logical failure rates, evaluated in log space.

Every bound is a pure function of (GadgetConfig, NoiseParams) returning a
natural-log probability (-inf encodes exactly zero).  Optimal gadget
configurations push failure rates to 1e-20 and below, where intermediate
powers underflow double precision, so sums are accumulated with
log-sum-exp and binomial coefficients go through lgamma.

Structure of the bounds:

* Z-type logical measurements (two- and three-block row parities) fail if
  more than half the row repetitions are flipped in more than half the
  rows, or if a non-diagonal fault strikes any coupled data qubit.
* The destructive X-basis block measurement fails if more than half the
  columns each catch a phase error, with a separate fanout-weighted sum
  when a short ancilla cat services several columns per block.
* Cat-state and |+>^L preparations fail when the most-frequent syndrome
  across repeated measurement rounds misrepresents the true defect
  history; the combinatorial sum runs over the disjoint counts of winning
  rounds, additional faulty rounds, and rounds carrying X-type faults.
* State injection combines a single-row joint parity measurement with the
  readout of the unprotected qubit.

Measurement-rate substitution: wherever a location count charges
(eps + eps_nd) or a syndrome bit charges its four constituent locations,
the diagonal part of every X-measurement slot is charged at eps_meas
instead of eps.  With eps_meas == eps all formulas reduce to their plain
forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .config import GadgetConfig, Locality
from .noise import FaultType, LocationClass, NoiseParams, rate_of

NEG_INF = float("-inf")
LN10 = math.log(10.0)

#: Multiplicity of each term in the CNOT failure bound: one fresh and two
#: inherited copies of each cat preparation, four block preparations, two
#: destructive X measurements.
CNOT_MULTIPLICITIES = {
    "mzz_star": 1,
    "mzzz_star": 1,
    "mx_star": 2,
    "plus_prep": 4,
    "zz_cat_prep": 3,
    "zzz_cat_prep": 3,
}


def log_binom(n: int, k: int) -> float:
    """log of C(n, k); -inf outside the valid range."""
    if k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_sum_exp(terms) -> float:
    terms = [t for t in terms if t != NEG_INF]
    if not terms:
        return NEG_INF
    peak = max(terms)
    if peak == float("inf"):
        return peak
    return peak + math.log(sum(math.exp(t - peak) for t in terms))


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else NEG_INF


def _pow(log_x: float, k: int) -> float:
    """k-th power in log space with the 0^0 = 1 convention."""
    if k == 0:
        return 0.0
    return log_x * k if log_x != NEG_INF else NEG_INF


def _clamp(log_p: float) -> float:
    return min(log_p, 0.0)


def t_min(r_prime: int, u: int, s: int) -> int:
    """Minimum number of rounds the winning syndrome must occupy.

    Pigeonhole over the r_prime - u accepted-or-winning rounds, which can
    show at most s + 2 distinct syndromes; floored at 0 once u >= r_prime.
    """
    if r_prime < 0 or u < 0 or s < 0:
        raise ValueError("t_min arguments must be non-negative")
    if u >= r_prime:
        return 0
    return -((u - r_prime) // (s + 2))


@dataclass(frozen=True)
class _Rates:
    """Per-location rates pulled once through rate_of."""

    prep: float
    meas: float
    cz_d: float
    cz_n: float
    wait_d: float
    wait_n: float

    @classmethod
    def of(cls, noise: NoiseParams) -> "_Rates":
        return cls(
            prep=rate_of(LocationClass.PREP_PLUS, FaultType.DIAGONAL, noise),
            meas=rate_of(LocationClass.MEAS_X, FaultType.DIAGONAL, noise),
            cz_d=rate_of(LocationClass.CZ, FaultType.DIAGONAL, noise),
            cz_n=rate_of(LocationClass.CZ, FaultType.NON_DIAGONAL, noise),
            wait_d=rate_of(LocationClass.WAIT, FaultType.DIAGONAL, noise),
            wait_n=rate_of(LocationClass.WAIT, FaultType.NON_DIAGONAL, noise),
        )

    @property
    def any_cz(self) -> float:
        return self.cz_d + self.cz_n

    @property
    def sbit(self) -> float:
        # syndrome bit = one |+> prep, two CZ gates, one X measurement
        return self.prep + 2 * self.any_cz + self.meas

    @property
    def storage(self) -> float:
        return self.wait_d + self.wait_n

    def count_with_meas(self, total: int, meas_slots: int) -> float:
        """`total` locations charged (eps+eps_nd), meas_slots of them
        X measurements whose diagonal part is charged at eps_meas."""
        return ((total - meas_slots) * self.any_cz
                + meas_slots * (self.meas + self.cz_n))


def mx_short_ancilla_terms(cfg: GadgetConfig, noise: NoiseParams) -> list[float]:
    """Log-space terms of the fanout-weighted X-measurement failure sum.

    Term k covers histories where k cat qubits carry frame X errors, each
    contaminating up to ceil(m/p) columns per block, and the remaining
    max(0, (m+1)/2 - fanout*k) columns are hit directly.
    """
    rr = _Rates.of(noise)
    n, m, p, r, rp, rplus = cfg.n, cfg.m, cfg.p, cfg.r, cfg.r_prime, cfg.r_plus
    h = (m + 1) // 2
    fanout = -((-m) // p)
    kmax = -((-(m + 1)) // (2 * fanout))
    log_frame = _log(8 * n * r * fanout * rr.cz_n + 6 * n * r * rp * rr.cz_n)
    log_base = _log(n * rr.count_with_meas(2 * rplus + 3 * r + 2, 1))
    terms = []
    for k in range(kmax + 1):
        lk = max(0, h - fanout * k)
        terms.append(log_binom(p, k) + _pow(log_frame, k)
                     + log_binom(m, lk) + _pow(log_base, lk))
    return terms


def mx_bound(cfg: GadgetConfig, noise: NoiseParams) -> float:
    """Failure of the destructive X-basis logical measurement (log-prob).

    Excludes preparation-gadget failures, which are charged separately in
    the CNOT bound.
    """
    rr = _Rates.of(noise)
    n, m, r, rp, rplus = cfg.n, cfg.m, cfg.r, cfg.r_prime, cfg.r_plus
    h = (m + 1) // 2
    per_qubit = rr.count_with_meas(2 * rplus + 3 * r + 2, 1)
    if cfg.locality is Locality.LOCAL:
        bracket = (n * per_qubit + 32 * n * r * rp * rr.storage
                   + 8 * n * r * rp * rr.cz_n)
        return _clamp(log_binom(m, h) + _pow(_log(bracket), h))
    if cfg.p >= m:
        bracket = n * per_qubit + 6 * n * r * rp * rr.cz_n
        return _clamp(log_binom(m, h) + _pow(_log(bracket), h))
    return _clamp(log_sum_exp(mx_short_ancilla_terms(cfg, noise)))


def _mz_bound(cfg: GadgetConfig, noise: NoiseParams, weight_blocks: int) -> float:
    rr = _Rates.of(noise)
    n, m, r, rp, rplus = cfg.n, cfg.m, cfg.r, cfg.r_prime, cfg.r_plus
    hn = (n + 1) // 2
    hr = (r + 1) // 2
    w = weight_blocks * m
    p_eff = cfg.effective_p(weight_blocks)
    # CZ exposure of each coupled data qubit before this measurement
    # completes: its own block prep, this measurement, and the worst-case
    # preceding Z-type measurements.
    prefactor = 2 * rplus + (3 * r if weight_blocks == 2 else 4 * r)
    locations = rr.count_with_meas(w + 2 * p_eff + 2 * p_eff * rp, p_eff)
    parts = [_log(w * prefactor * rr.cz_n),
             log_binom(r, hr) + _pow(_log(locations), hr)]
    if cfg.locality is Locality.LOCAL:
        storage = 24 * r * rp if weight_blocks == 2 else 32 * r * rp
        parts.append(_log(w * storage * rr.wait_n))
    bracket = log_sum_exp(parts)
    return _clamp(log_binom(n, hn) + _pow(bracket, hn))


def mzz_bound(cfg: GadgetConfig, noise: NoiseParams) -> float:
    """Failure of the two-block joint Z-parity measurement (log-prob)."""
    return _mz_bound(cfg, noise, 2)


def mzzz_bound(cfg: GadgetConfig, noise: NoiseParams) -> float:
    """Failure of the three-block joint Z-parity measurement (log-prob)."""
    return _mz_bound(cfg, noise, 3)


def _prep_sum(length: int, rounds: int, rr: _Rates, local: bool) -> float:
    """Log of the (s, u) history sum for one repeated syndrome measurement.

    t winning rounds, u additional faulty rounds and s X-carrying rounds
    are disjoint, so s + u + t <= rounds; t = 0 histories carry no failure
    mechanism.  Without the wrap-around parity veto (local mode) a single
    fault corrupts a round, so winning rounds cost one fault instead of
    two syndrome-bit errors.
    """
    log_sbit = _log(rr.sbit)
    if local:
        log_round = _log(length * rr.sbit + 4 * length * rr.storage)
        log_xround = _log(2 * length * rr.cz_n + 4 * length * rr.wait_n)
    else:
        log_round = _log(length * rr.sbit)
        log_xround = _log(2 * length * rr.cz_n)
        log_pair = log_binom(length, 2)
    terms = []
    for u in range(rounds + 1):
        for s in range(rounds + 1):
            t = t_min(rounds, u, s)
            if t < 1 or u + t > rounds or s > rounds - u - t:
                continue
            combos = (log_binom(rounds, s) + log_binom(rounds, u + t)
                      + log_binom(u + t, u))
            if local:
                terms.append(combos + _pow(log_round, t + u)
                             + _pow(log_xround, s))
            else:
                terms.append(combos + log_pair + _pow(log_sbit, 2 * t)
                             + _pow(log_round, u) + _pow(log_xround, s))
    return log_sum_exp(terms)


def _misdecode(length: int, rounds: int, rr: _Rates, local: bool) -> float:
    """Half-or-more cat qubits hit by frame X errors: the low-weight
    syndrome interpretation then picks the complement pattern."""
    per_qubit = 2 * rounds * rr.cz_n
    if local:
        per_qubit += 4 * rounds * rr.wait_n
    half = -((-length) // 2)
    return log_binom(length, half) + _pow(_log(per_qubit), half)


def cat_prep_bound(cfg: GadgetConfig, noise: NoiseParams,
                   weight_blocks: int) -> float:
    """Failure of all cat preparations inside one Z-type measurement (log-prob).

    weight_blocks in {2, 3} selects the measured operator (and, in local
    mode, the forced cat length).
    """
    if weight_blocks not in (2, 3):
        raise ValueError("weight_blocks must be 2 or 3")
    rr = _Rates.of(noise)
    local = cfg.locality is Locality.LOCAL
    p_eff = cfg.effective_p(weight_blocks)
    body = log_sum_exp([_prep_sum(p_eff, cfg.r_prime, rr, local),
                        _misdecode(p_eff, cfg.r_prime, rr, local)])
    return _clamp(_log(cfg.n * cfg.r) + body)


def plus_prep_bound(cfg: GadgetConfig, noise: NoiseParams,
                    misdecode_analog: bool = True) -> float:
    """Failure of the |+>^L block preparation (log-prob).

    The block is a product of m length-n column cats checked for r_plus
    rounds.  `misdecode_analog` adds the column-misdecode channel (half
    the column hit by frame X errors, flipping the column's logical X);
    on by default as the failure mechanism exists even though only the
    measurement-cat version appears in the closed-form derivation.
    """
    rr = _Rates.of(noise)
    local = cfg.locality is Locality.LOCAL
    parts = [_prep_sum(cfg.n, cfg.r_plus, rr, local)]
    if misdecode_analog:
        parts.append(_misdecode(cfg.n, cfg.r_plus, rr, local))
    return _clamp(_log(cfg.m) + log_sum_exp(parts))


@dataclass(frozen=True)
class BoundBreakdown:
    """Per-term decomposition of the CNOT failure bound, in log space.

    log_terms holds one log-probability per named term; the total applies
    the multiplicities in CNOT_MULTIPLICITIES and clamps at probability 1.
    """

    log_terms: dict
    log_total: float

    @property
    def total(self) -> float:
        return math.exp(self.log_total) if self.log_total != NEG_INF else 0.0

    def log10_total(self) -> float:
        return self.log_total / LN10 if self.log_total != NEG_INF else NEG_INF

    def to_jsonable(self) -> dict:
        terms = {k: _prob_jsonable(v) for k, v in self.log_terms.items()}
        log10_terms = {k: (v / LN10 if v != NEG_INF else None)
                       for k, v in self.log_terms.items()}
        return {
            "terms": terms,
            "log10_terms": log10_terms,
            "multiplicities": dict(CNOT_MULTIPLICITIES),
            "total": _prob_jsonable(self.log_total),
            "log10_total": (self.log_total / LN10
                            if self.log_total != NEG_INF else None),
        }


def _prob_jsonable(log_p: float):
    """Linear-space probability for JSON; values below 1e-300 are rendered
    as decimal strings built from the log10 magnitude."""
    if log_p == NEG_INF:
        return 0.0
    if log_p >= -690.0:  # exp() comfortably above the subnormal floor
        return math.exp(log_p)
    log10 = log_p / LN10
    exponent = math.floor(log10)
    mantissa = 10.0 ** (log10 - exponent)
    return f"{mantissa:.9f}e{int(exponent)}"


def cnot_bound(cfg: GadgetConfig, noise: NoiseParams,
               misdecode_analog: bool = True) -> BoundBreakdown:
    """Total CNOT gadget failure bound with its per-term decomposition.

    Charges the two Z-type measurements, both destructive X measurements,
    the four block preparations feeding the gadget, and three copies of
    each cat preparation (one in this gadget, two inherited from the
    measurements acting on the incoming blocks).
    """
    log_terms = {
        "mzz_star": mzz_bound(cfg, noise),
        "mzzz_star": mzzz_bound(cfg, noise),
        "mx_star": mx_bound(cfg, noise),
        "plus_prep": plus_prep_bound(cfg, noise, misdecode_analog),
        "zz_cat_prep": cat_prep_bound(cfg, noise, 2),
        "zzz_cat_prep": cat_prep_bound(cfg, noise, 3),
    }
    total = log_sum_exp([
        log_terms[name] + math.log(mult)
        for name, mult in CNOT_MULTIPLICITIES.items()
    ])
    return BoundBreakdown(log_terms=log_terms, log_total=_clamp(total))


def injection_bound(cfg: GadgetConfig, noise: NoiseParams) -> float:
    """Error of teleporting an unprotected state into the block (log-prob).

    The block parameters are those of the CNOT gadget that consumes the
    injected state.  Covers the unprotected preparation itself, the
    single-qubit X readout, and the repeated weight-(m+1) joint parity
    measurement; preparation-gadget failures are charged to the following
    CNOT instead.
    """
    rr = _Rates.of(noise)
    m, r, rp, rplus = cfg.m, cfg.r, cfg.r_prime, cfg.r_plus
    hr = (r + 1) // 2
    mx_part = (rr.count_with_meas(r + 1, 1)
               + 8 * (r - 1) * rp * rr.storage
               + 2 * (m + 1) * r * rp * rr.cz_n)
    locations = rr.count_with_meas((m + 1) * (rp + 3), m + 1)
    zz_terms = [_log(r * rr.cz_n),
                _log(8 * rp * (r - 1) * rr.wait_n),
                _log(m * (2 * rplus + r) * rr.cz_n),
                log_binom(r, hr) + _pow(_log(locations), hr)]
    return _clamp(log_sum_exp([_log(noise.eps_psi), _log(mx_part)] + zz_terms))
