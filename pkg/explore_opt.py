"""Dev-time exploration of the optimization landscape (not shipped)."""
import math
import sys
import time

from baconshor.noise import NoiseParams
from baconshor.config import GadgetConfig, Locality
from baconshor import bounds

LOG10 = math.log(10)


def p_candidates(m, coarse=False):
    if coarse:
        base = {1, 2, 3, -(-m // 8), -(-m // 4), -(-m // 3), -(-m // 2), m,
                2 * m, 3 * m}
    else:
        base = {m, 2 * m, 3 * m}
        for fanout in range(1, m + 1):
            base.add(-(-m // fanout))
    return sorted(c for c in base if 1 <= c <= 3 * m)


def scan(noise, locality, n_range, m_range, r_range, rp_range, rplus_range,
         coarse=False, seed_best=0.0, verbose=True):
    best = (seed_best, None)
    cat_cache = {}
    plus_cache = {}
    rr = bounds._Rates.of(noise)
    local = locality is Locality.LOCAL
    t0 = time.time()
    count = 0

    def cat_body(pe, rp):
        ck = (pe, rp)
        if ck not in cat_cache:
            cat_cache[ck] = bounds.log_sum_exp([
                bounds._prep_sum(pe, rp, rr, local),
                bounds._misdecode(pe, rp, rr, local)])
        return cat_cache[ck]

    for n in n_range:
        for rplus in rplus_range:
            key = (n, rplus)
            if key not in plus_cache:
                plus_cache[key] = bounds.log_sum_exp([
                    bounds._prep_sum(n, rplus, rr, local),
                    bounds._misdecode(n, rplus, rr, local)])
            log_plus_body = plus_cache[key]
            if math.log(4) + log_plus_body > best[0]:
                continue
            for r in r_range:
                for rp in rp_range:
                    for m in m_range:
                        lp = math.log(4 * m) + log_plus_body
                        if lp > best[0]:
                            break  # plus term monotone in m
                        group_best = 0.0
                        for p in (p_candidates(m, coarse)
                                  if not local else [2 * m]):
                            cfg = GadgetConfig(n=n, m=m, p=p, r=r, r_prime=rp,
                                               r_plus=rplus, locality=locality)
                            count += 1
                            rising = [math.log(3 * n * r)
                                      + cat_body(cfg.effective_p(2), rp),
                                      math.log(3 * n * r)
                                      + cat_body(cfg.effective_p(3), rp),
                                      lp,
                                      bounds.mzz_bound(cfg, noise),
                                      bounds.mzzz_bound(cfg, noise)]
                            lo = bounds.log_sum_exp(rising)
                            if lo > best[0] and lo > group_best:
                                break  # these terms grow with p
                            tot = bounds.log_sum_exp(
                                rising + [math.log(2) + bounds.mx_bound(cfg, noise)])
                            group_best = min(group_best, tot)
                            if tot < best[0]:
                                best = (tot, cfg)
    if verbose:
        print(f"scanned {count} configs in {time.time()-t0:.1f}s")
        if best[1] is not None:
            print(f"best log10 total = {best[0]/LOG10:.3f}  cfg = {best[1]}")
            bb = bounds.cnot_bound(best[1], noise)
            for k, v in bb.log_terms.items():
                print(f"   {k:14s} log10 = {v/LOG10:8.3f}")
        else:
            print("no config beat the seed")
    return best


if __name__ == "__main__":
    mode = sys.argv[1] if len(sys.argv) > 1 else "nonlocal"
    noise = NoiseParams.from_bias(1e-4, 1e4)
    if mode == "nonlocal":
        scan(noise, Locality.NONLOCAL,
             n_range=range(1, 22, 2), m_range=range(1, 152, 4),
             r_range=range(1, 16, 2),
             rp_range=[1, 2, 4, 6, 8, 10, 12, 14, 18, 24, 30],
             rplus_range=[1, 2, 4, 6, 8, 10, 12, 14, 18, 24, 30],
             coarse=True)
    elif mode == "local":
        scan(noise, Locality.LOCAL,
             n_range=range(1, 22, 2), m_range=range(1, 152, 2),
             r_range=range(1, 16, 2), rp_range=range(1, 31),
             rplus_range=range(1, 31))
    elif mode == "localwide":
        scan(noise, Locality.LOCAL,
             n_range=range(1, 22, 2), m_range=range(1, 152, 2),
             r_range=range(1, 80, 2), rp_range=range(1, 41),
             rplus_range=range(1, 31))
