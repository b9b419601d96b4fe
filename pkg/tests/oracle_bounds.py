"""Arbitrary-precision reference evaluation of every closed-form bound.

Direct linear-space transcription of the failure-probability formulas using
mpmath, kept deliberately independent of the package's log-space
implementation: plain nested sums, exact binomials, no log-sum-exp, no
clamping tricks beyond the final min(1, .).  Used to freeze regression
values and to cross-check the production code.
"""
from __future__ import annotations

import mpmath as mp

mp.mp.dps = 60

IS_LOCAL = "local"
IS_NONLOCAL = "nonlocal"


def _ceil_div(a, b):
    return -((-a) // b)


def t_min(r_prime, u, s):
    if u >= r_prime:
        return 0
    return _ceil_div(r_prime - u, s + 2)


def binom(n, k):
    if k < 0 or k > n:
        return mp.mpf(0)
    return mp.binomial(n, k)


class Rates:
    """Per-location rates with the measurement-rate substitution applied.

    Counts charged at (eps + eps_nd) in the formulas keep that charging for
    gate and preparation slots; the diagonal part of each measurement slot
    is charged at eps_meas instead of eps.
    """

    def __init__(self, eps, eps_nd, eps_s=0.0, eps_s_nd=0.0, eps_meas=None,
                 eps_psi=None):
        self.d = mp.mpf(eps)
        self.nd = mp.mpf(eps_nd)
        self.sd = mp.mpf(eps_s)
        self.snd = mp.mpf(eps_s_nd)
        self.meas = mp.mpf(eps if eps_meas is None else eps_meas)
        self.psi = mp.mpf(eps if eps_psi is None else eps_psi)

    @property
    def any_cz(self):
        return self.d + self.nd

    @property
    def sbit(self):
        # one |+> prep + two CZ + one X measurement per syndrome bit
        return 3 * self.d + self.meas + 2 * self.nd

    def count_with_meas(self, total, meas_slots):
        """total locations charged (eps+eps_nd), meas_slots of them measurements."""
        return (total - meas_slots) * self.any_cz + meas_slots * (self.meas + self.nd)


def mx_oracle(n, m, p, r, rp, rplus, rates, locality):
    h = (m + 1) // 2
    per_qubit = rates.count_with_meas(2 * rplus + 3 * r + 2, 1)
    if locality == IS_LOCAL:
        bracket = (n * per_qubit + 32 * n * r * rp * (rates.sd + rates.snd)
                   + 8 * n * r * rp * rates.nd)
        val = binom(m, h) * bracket ** h
    elif p >= m:
        bracket = n * per_qubit + 6 * n * r * rp * rates.nd
        val = binom(m, h) * bracket ** h
    else:
        fanout = _ceil_div(m, p)
        kmax = _ceil_div(m + 1, 2 * fanout)
        frame = 8 * n * r * fanout * rates.nd + 6 * n * r * rp * rates.nd
        base = n * per_qubit
        val = mp.mpf(0)
        for k in range(kmax + 1):
            lk = max(0, h - fanout * k)
            val += binom(p, k) * frame ** k * binom(m, lk) * base ** lk
    return min(mp.mpf(1), val)


def _mz_oracle(weight_blocks, n, m, p, r, rp, rplus, rates, locality):
    hn = (n + 1) // 2
    hr = (r + 1) // 2
    w = weight_blocks * m
    prefactor = 2 * rplus + (3 * r if weight_blocks == 2 else 4 * r)
    p_eff = w if locality == IS_LOCAL else p
    locations = rates.count_with_meas(w + 2 * p_eff + 2 * p_eff * rp, p_eff)
    bracket = w * prefactor * rates.nd + binom(r, hr) * locations ** hr
    if locality == IS_LOCAL:
        storage = 24 * r * rp if weight_blocks == 2 else 32 * r * rp
        bracket += w * storage * rates.snd
    return min(mp.mpf(1), binom(n, hn) * bracket ** hn)


def mzz_oracle(n, m, p, r, rp, rplus, rates, locality):
    return _mz_oracle(2, n, m, p, r, rp, rplus, rates, locality)


def mzzz_oracle(n, m, p, r, rp, rplus, rates, locality):
    return _mz_oracle(3, n, m, p, r, rp, rplus, rates, locality)


def _prep_sum(length, rounds, rates, locality):
    """Double sum over (s, u) fault-round histories for one cat preparation.

    Winning, extra-faulty and X-carrying rounds are disjoint subsets of the
    `rounds` syndrome-measurement rounds, so s + u + t <= rounds; terms with
    t = 0 carry no failure mechanism and are excluded.
    """
    total = mp.mpf(0)
    for u in range(rounds + 1):
        for s in range(rounds + 1):
            t = t_min(rounds, u, s)
            if t < 1 or u + t > rounds or s > rounds - u - t:
                continue
            combos = binom(rounds, s) * binom(rounds, u + t) * binom(u + t, u)
            if locality == IS_LOCAL:
                per_round = (length * rates.sbit
                             + 4 * length * (rates.sd + rates.snd))
                x_round = 2 * length * rates.nd + 4 * length * rates.snd
                total += combos * per_round ** (t + u) * x_round ** s
            else:
                per_round = length * rates.sbit
                x_round = 2 * length * rates.nd
                total += (combos * binom(length, 2) * rates.sbit ** (2 * t)
                          * per_round ** u * x_round ** s)
    return total


def _misdecode(length, rounds, rates, locality):
    per_qubit = 2 * rounds * rates.nd
    if locality == IS_LOCAL:
        per_qubit += 4 * rounds * rates.snd
    half = _ceil_div(length, 2)
    return binom(length, half) * per_qubit ** half


def cat_prep_oracle(n, m, p, r, rp, rplus, rates, locality, weight_blocks):
    p_eff = weight_blocks * m if locality == IS_LOCAL else p
    val = n * r * (_prep_sum(p_eff, rp, rates, locality)
                   + _misdecode(p_eff, rp, rates, locality))
    return min(mp.mpf(1), val)


def plus_prep_oracle(n, m, p, r, rp, rplus, rates, locality, analog_term=True):
    val = _prep_sum(n, rplus, rates, locality)
    if analog_term:
        val += _misdecode(n, rplus, rates, locality)
    return min(mp.mpf(1), m * val)


def cnot_oracle(n, m, p, r, rp, rplus, rates, locality, analog_term=True):
    args = (n, m, p, r, rp, rplus, rates, locality)
    total = (mzz_oracle(*args) + mzzz_oracle(*args) + 2 * mx_oracle(*args)
             + 4 * plus_prep_oracle(*args, analog_term=analog_term)
             + 3 * cat_prep_oracle(*args, weight_blocks=2)
             + 3 * cat_prep_oracle(*args, weight_blocks=3))
    return min(mp.mpf(1), total)


def injection_oracle(n, m, p, r, rp, rplus, rates, locality):
    hr = (r + 1) // 2
    mx_part = (rates.count_with_meas(r + 1, 1)
               + 8 * (r - 1) * rp * (rates.sd + rates.snd)
               + 2 * (m + 1) * r * rp * rates.nd)
    locations = rates.count_with_meas((m + 1) * (rp + 3), m + 1)
    zz_part = (r * rates.nd + 8 * rp * (r - 1) * rates.snd
               + m * (2 * rplus + r) * rates.nd
               + binom(r, hr) * locations ** hr)
    return min(mp.mpf(1), rates.psi + mx_part + zz_part)
