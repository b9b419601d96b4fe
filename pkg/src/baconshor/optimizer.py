"""Brute-force search over gadget configurations.

The search enumerates every grid point of a SearchSpace and minimizes the
total CNOT failure bound (or the gate cost subject to a bound target).
Grid pruning only ever skips configurations whose partial bound already
exceeds the incumbent strictly, which preserves the optimum and the
deterministic tie-break (smaller two-qubit gate count, then lexicographic
configuration).  Work can be sharded across processes; shards are merged
by the same tie-break, so results are independent of the shard count.

Gate costs come from the closed-form location tallies shared with the
circuit builder; the cost metric is the CZ count, with preparations,
measurements, storage steps and a physical-qubit footprint model reported
alongside.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from . import bounds as _b
from .bounds import BoundBreakdown, cnot_bound, log_sum_exp
from .config import GadgetConfig, Locality, Variant
from .noise import LocationClass, NoiseParams
from .sim.circuits import CircuitKind, location_tally

NEG_INF = float("-inf")
LOG10 = math.log(10.0)


class NotAchievableError(Exception):
    """No grid point satisfies the requested bound target."""


def fanout_breakpoints(m: int) -> list:
    """Cat lengths where ceil(m/p) changes, plus the full operator weights.

    Between breakpoints the fanout-weighted bound only grows with p, so
    these are the only lengths worth searching.
    """
    cands = {2 * m, 3 * m}
    for fanout in range(1, m + 1):
        cands.add(-(-m // fanout))
    return sorted(c for c in cands if 1 <= c <= 3 * m)


@dataclass(frozen=True)
class SearchSpace:
    """Inclusive grids for each gadget parameter.

    p_values = None uses the fanout breakpoints of each m; in local mode
    the cat length is forced by the operator weight and p is not searched.
    """

    n_values: tuple
    m_values: tuple
    r_values: tuple
    r_prime_values: tuple
    r_plus_values: tuple
    p_values: tuple | None = None
    locality: Locality = Locality.NONLOCAL
    variant: Variant = Variant.A

    def __post_init__(self):
        for name in ("n_values", "m_values", "r_values", "r_prime_values",
                     "r_plus_values"):
            values = tuple(getattr(self, name))
            object.__setattr__(self, name, values)
            if not values:
                raise ValueError(f"{name} is empty")
        if self.p_values is not None:
            object.__setattr__(self, "p_values", tuple(self.p_values))
        for name in ("n_values", "m_values", "r_values"):
            bad = [v for v in getattr(self, name) if v < 1 or v % 2 == 0]
            if bad:
                raise ValueError(f"{name} must be odd and >= 1, got {bad}")

    def p_candidates(self, m: int) -> list:
        if self.locality is Locality.LOCAL:
            return [2 * m]  # recorded value; local cats are weight-forced
        if self.p_values is None:
            return fanout_breakpoints(m)
        return [p for p in self.p_values if 1 <= p <= 3 * m]

    def size(self) -> int:
        per_m = sum(len(self.p_candidates(m)) for m in self.m_values)
        return (len(self.n_values) * len(self.r_values)
                * len(self.r_prime_values) * len(self.r_plus_values) * per_m)


def default_space(locality: Locality = Locality.NONLOCAL,
                  variant: Variant = Variant.A) -> SearchSpace:
    """Covers the block sizes of interest with margin."""
    return SearchSpace(
        n_values=tuple(range(1, 22, 2)),
        m_values=tuple(range(1, 152, 2)),
        r_values=tuple(range(1, 16, 2)),
        r_prime_values=tuple(range(1, 31)),
        r_plus_values=tuple(range(1, 31)),
        locality=locality,
        variant=variant,
    )


@dataclass(frozen=True)
class ResourceCount:
    """Location counts of one CNOT gadget."""

    cz_gates: int
    preps: int
    measurements: int
    wait_steps: int
    physical_qubits: int

    def __post_init__(self):
        for name in ("cz_gates", "preps", "measurements", "wait_steps",
                     "physical_qubits"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def _check_rounds(p: int, local: bool) -> int:
    if p < 2:
        return 0
    return p - 1 if local else p


def count_resources(cfg: GadgetConfig) -> ResourceCount:
    """Location counts of the CNOT gadget, from the shared builder tally.

    The physical-qubit model counts the four data blocks plus the peak
    concurrent ancilla estate: the in-flight cats with their check
    ancillas (nonlocal), or the interleaved ancilla lattice with the
    inter-block linker columns (local).
    """
    tally = location_tally(CircuitKind.CNOT, cfg)
    n, m = cfg.n, cfg.m
    local = cfg.locality is Locality.LOCAL
    if local:
        qubits = 4 * n * m + 4 * n * (2 * m - 1) + 3 * n
    else:
        p3 = cfg.effective_p(3)
        col_checks = n if n >= 2 else 0
        peak = max(n * (p3 + _check_rounds(p3, local)),
                   2 * m * col_checks)
        qubits = 4 * n * m + peak
    return ResourceCount(
        cz_gates=tally[LocationClass.CZ],
        preps=tally[LocationClass.PREP_PLUS],
        measurements=tally[LocationClass.MEAS_X],
        wait_steps=tally[LocationClass.WAIT],
        physical_qubits=qubits,
    )


def cz_gates(cfg: GadgetConfig) -> int:
    """CZ count of the CNOT gadget (the optimization cost metric)."""
    n, m = cfg.n, cfg.m
    local = cfg.locality is Locality.LOCAL
    p2, p3 = cfg.effective_p(2), cfg.effective_p(3)
    col_checks = (n - 1 if local else n) if n >= 2 else 0
    plus = 2 * m * 2 * col_checks * cfg.r_plus
    mzz = n * cfg.r * (2 * m + 2 * _check_rounds(p2, local) * cfg.r_prime)
    mzzz = n * cfg.r * (3 * m + 2 * _check_rounds(p3, local) * cfg.r_prime)
    return 2 * plus + mzz + mzzz if False else plus + plus + mzz + mzzz


@dataclass
class OptResult:
    best_cfg: GadgetConfig
    bound: BoundBreakdown
    resources: ResourceCount
    frontier: list | None = None


class _Evaluator:
    """Cached evaluation of the CNOT bound total over a grid.

    The preparation sums depend only on (length, rounds), so they are
    memoized across the whole grid; the measurement bounds are cheap
    closed forms evaluated per configuration.
    """

    def __init__(self, noise: NoiseParams, locality: Locality):
        self.noise = noise
        self.local = locality is Locality.LOCAL
        self.rr = _b._Rates.of(noise)
        self._cat = {}
        self._plus = {}

    def cat_body(self, length: int, rounds: int) -> float:
        key = (length, rounds)
        if key not in self._cat:
            self._cat[key] = log_sum_exp([
                _b._prep_sum(length, rounds, self.rr, self.local),
                _b._misdecode(length, rounds, self.rr, self.local)])
        return self._cat[key]

    def plus_body(self, n: int, r_plus: int) -> float:
        key = (n, r_plus)
        if key not in self._plus:
            parts = [_b._prep_sum(n, r_plus, self.rr, self.local),
                     _b._misdecode(n, r_plus, self.rr, self.local)]
            self._plus[key] = log_sum_exp(parts)
        return self._plus[key]

    def log_total(self, cfg: GadgetConfig) -> float:
        terms = self.rising_terms(cfg)
        terms.append(math.log(2) + _b.mx_bound(cfg, self.noise))
        return min(0.0, log_sum_exp(terms))

    def rising_terms(self, cfg: GadgetConfig) -> list:
        """Bound terms that never decrease with p (pruning helper)."""
        nr = math.log(3 * cfg.n * cfg.r)
        return [
            nr + min(0.0, self.cat_body(cfg.effective_p(2), cfg.r_prime)),
            nr + min(0.0, self.cat_body(cfg.effective_p(3), cfg.r_prime)),
            math.log(4 * cfg.m) + min(0.0, self.plus_body(cfg.n, cfg.r_plus)),
            _b.mzz_bound(cfg, self.noise),
            _b.mzzz_bound(cfg, self.noise),
        ]


_BestEntry = tuple  # (log_total, cz, sort_key, cfg)


def _better(a: _BestEntry, b: _BestEntry) -> bool:
    return a[:3] < b[:3]


def _scan_shard(noise, space, shard, n_shards, objective, target_log,
                on_visit=None):
    """Enumerate the sub-grid whose (n, r_plus) pairs fall in this shard."""
    ev = _Evaluator(noise, space.locality)
    best = None
    visited = 0
    outer = [(n, rp) for n in space.n_values for rp in space.r_plus_values]
    inner_size_per_m = {m: len(space.p_candidates(m)) for m in space.m_values}
    inner_block = (len(space.r_values) * len(space.r_prime_values)
                   * sum(inner_size_per_m.values()))
    min_bound_mode = objective == "min_bound"
    for idx, (n, r_plus) in enumerate(outer):
        if idx % n_shards != shard:
            continue
        plus_body = ev.plus_body(n, r_plus)
        cutoff = (best[0] if (min_bound_mode and best is not None)
                  else target_log)
        if cutoff is not None and math.log(4) + plus_body > cutoff:
            visited += inner_block
            continue
        for r in space.r_values:
            for rp in space.r_prime_values:
                for m in space.m_values:
                    cutoff = (best[0] if (min_bound_mode and best is not None)
                              else target_log)
                    n_p = inner_size_per_m[m]
                    if cutoff is not None and \
                            math.log(4 * m) + plus_body > cutoff:
                        visited += n_p
                        continue
                    group_low = None
                    for p in space.p_candidates(m):
                        visited += 1
                        cfg = GadgetConfig(n=n, m=m, p=p, r=r, r_prime=rp,
                                           r_plus=r_plus,
                                           locality=space.locality,
                                           variant=space.variant)
                        rising = ev.rising_terms(cfg)
                        low = log_sum_exp(rising)
                        cutoff = (best[0]
                                  if (min_bound_mode and best is not None)
                                  else target_log)
                        if cutoff is not None and low > cutoff:
                            if group_low is not None and low > group_low:
                                break  # rising terms only grow with p
                            group_low = low if group_low is None \
                                else min(group_low, low)
                            continue
                        group_low = low if group_low is None \
                            else min(group_low, low)
                        total = min(0.0, log_sum_exp(
                            rising + [math.log(2)
                                      + _b.mx_bound(cfg, noise)]))
                        if not min_bound_mode and target_log is not None \
                                and total > target_log:
                            continue
                        if min_bound_mode:
                            entry = (total, cz_gates(cfg), cfg.sort_key(), cfg)
                        else:
                            entry = (cz_gates(cfg), total, cfg.sort_key(), cfg)
                        if best is None or _better(entry, best):
                            best = entry
    if on_visit is not None:
        on_visit(visited)
    return best, visited


def optimize(noise: NoiseParams, space: SearchSpace,
             objective: str = "min_bound", target: float | None = None,
             workers: int | None = None, on_visit=None) -> OptResult:
    """Exhaustive grid minimization.

    objective 'min_bound' returns the grid point with the smallest bound
    total (ties: fewer CZ gates, then lexicographic configuration);
    'min_cost_for_target' returns the cheapest point whose bound is at
    most `target`, raising NotAchievableError when none qualifies.
    """
    if objective not in ("min_bound", "min_cost_for_target"):
        raise ValueError(f"unknown objective {objective!r}")
    target_log = None
    if objective == "min_cost_for_target":
        if target is None:
            raise ValueError("min_cost_for_target requires a target")
        target_log = math.log(target) if target > 0 else NEG_INF
    if workers is None:
        workers = int(os.environ.get("BACONSHOR_WORKERS", "1"))
    if workers <= 1:
        best, _ = _scan_shard(noise, space, 0, 1, objective, target_log,
                              on_visit)
        candidates = [best]
    else:
        import multiprocessing as mp
        visited_total = 0
        with mp.Pool(workers) as pool:
            parts = pool.starmap(
                _scan_shard,
                [(noise, space, k, workers, objective, target_log, None)
                 for k in range(workers)])
        candidates = [b for b, _ in parts]
        visited_total = sum(v for _, v in parts)
        if on_visit is not None:
            on_visit(visited_total)
    candidates = [c for c in candidates if c is not None]
    if not candidates:
        raise NotAchievableError(
            f"no configuration reaches bound <= {target!r}")
    best = min(candidates, key=lambda e: e[:3])
    cfg = best[3]
    return OptResult(best_cfg=cfg, bound=cnot_bound(cfg, noise),
                     resources=count_resources(cfg))


def pareto_front(noise: NoiseParams, space: SearchSpace) -> list:
    """Non-dominated (cz_gates, bound, cfg) points, cost-ascending.

    Exhaustive: every grid point is evaluated, so prefer modest spaces.
    """
    ev = _Evaluator(noise, space.locality)
    points = []
    for n in space.n_values:
        for r_plus in space.r_plus_values:
            for r in space.r_values:
                for rp in space.r_prime_values:
                    for m in space.m_values:
                        for p in space.p_candidates(m):
                            cfg = GadgetConfig(
                                n=n, m=m, p=p, r=r, r_prime=rp,
                                r_plus=r_plus, locality=space.locality,
                                variant=space.variant)
                            points.append((cz_gates(cfg), ev.log_total(cfg),
                                           cfg.sort_key(), cfg))
    points.sort(key=lambda t: (t[0], t[1], t[2]))
    front = []
    best_log = None
    for cost, log_total, _, cfg in points:
        if best_log is None or log_total < best_log:
            front.append((cost, log_total, cfg))
            best_log = log_total
    return front


def sweep(noise_template: NoiseParams, eps_grid, bias_list,
          space: SearchSpace, locality: Locality | None = None,
          meas_multipliers=(1.0,), workers: int | None = None) -> list:
    """Optimal bound per (eps, bias, measurement-bias multiplier) point.

    Emits one row dict per grid point with the resolved noise, the best
    configuration and its resources; suitable for direct CSV/JSON dumps.
    """
    if locality is not None and locality is not space.locality:
        space = SearchSpace(
            n_values=space.n_values, m_values=space.m_values,
            r_values=space.r_values, r_prime_values=space.r_prime_values,
            r_plus_values=space.r_plus_values, p_values=space.p_values,
            locality=locality, variant=space.variant)
    rows = []
    for eps in eps_grid:
        for bias in bias_list:
            for mult in meas_multipliers:
                noise = noise_template.replace(
                    eps=eps, eps_nd=eps / bias, eps_meas=eps * mult)
                result = optimize(noise, space, workers=workers)
                cfg = result.best_cfg
                rows.append({
                    "eps": eps,
                    "bias": bias,
                    "eps_meas": eps * mult,
                    "locality": cfg.locality.value,
                    "n": cfg.n, "m": cfg.m, "p": cfg.p, "r": cfg.r,
                    "r_prime": cfg.r_prime, "r_plus": cfg.r_plus,
                    "log10_bound": (result.bound.log_total / LOG10
                                    if result.bound.log_total != NEG_INF
                                    else NEG_INF),
                    "cz_gates": result.resources.cz_gates,
                    "qubits": result.resources.physical_qubits,
                })
    return rows
