#!/usr/bin/env python3
"""Numeric batteries for the analytic inequalities behind the estimates.

Each algebraic inequality is hammered with random domain points; the
Gaussian-integral band is checked by adaptive quadrature.  The band
int exp(-mx^2 + mx^4) = (1 +- 2/m) sqrt(pi/m) only holds above an
empirical threshold, which we locate by bisection.
"""

from regfactor.proofcheck import (
    LEMMA_IDS,
    check_inequality,
    lemma23_band,
    lemma23_threshold,
    run_battery,
)

print(f"{'id':<5} {'trials':>8} {'worst slack':>12} {'violations':>10}")
for lemma in LEMMA_IDS:
    r = run_battery(lemma, trials=100_000, seed=5)
    print(f"{r.lemma:<5} {r.trials:>8} {r.worst_slack:>12.3e} {r.violations:>10}")

m0 = lemma23_threshold()
print(f"\nGaussian band threshold: m0 = {m0}")
for m in (10, m0, 100, 1000):
    val, center, width = lemma23_band(float(m))
    inside = abs(val - center) <= width
    print(f"  m={m:>5}: integral {val:.6f} vs {center:.6f} +- {width:.6f} "
          f"-> {'inside' if inside else 'OUTSIDE'}")

c = check_inequality("2.5", (1.0, 1.0, 1.0), 2)
print(f"\nsymmetric-sum chain at x=(1,1,1), k=2: lhs {c.lhs} <= rhs {c.rhs} "
      f"(slack {c.slack})")
