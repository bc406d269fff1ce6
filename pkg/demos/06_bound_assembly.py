#!/usr/bin/env python3
"""Assembling the total-variation bound from per-length event terms.

The upper bound is  sum_k (alpha_k/2) (E|1/k - c_k P[create_k]| +
E|W_k - c_k P[destroy_k]|) with c_k = n/(2k) and alpha_k = 1.  At desk
scale both the terms and the true distance are exactly computable, so the
domination is verifiable with no tolerance at all; at larger n the terms
are estimated by Monte Carlo with exact per-sample probabilities.
"""

import numpy as np

from shortcycles import (
    PoissonSpec,
    SteinParameters,
    joint_pmf,
    term_estimates_exact,
    term_estimates_mc,
    tv_exact,
)

print("=" * 72)
print("Damping factors are identically 1 here")
print("=" * 72)
params = SteinParameters.for_cycle_counts(100, 5)
print(f"  reference means 1/k: {[str(x) for x in params.lambdas]}")
print(f"  scalings n/(2k):     {[str(x) for x in params.scalings]}")
print(f"  alphas:              {[str(x) for x in params.alphas]}  (1.4 sqrt(k) >= 1)")

print("\n" + "=" * 72)
print("Exact domination at desk scale (no tolerance: both sides exact)")
print("=" * 72)
print("\n  n  r  d    assembled bound      exact tv     ratio")
for n in (6, 7, 8):
    for r in (-(-n // 2), n):
        for d in (1, 2):
            terms = term_estimates_exact(n, r, d)
            tv = tv_exact(joint_pmf(n, r, d), PoissonSpec.cycle_reference(d))
            print(
                f"  {n}  {r}  {d}    {float(terms.total):12.6f}   {tv:12.6f}   "
                f"{float(terms.total) / tv if tv else float('inf'):8.1f}x"
            )

print("\n" + "=" * 72)
print("Per-length terms at n=8, r=4, d=2")
print("=" * 72)
terms = term_estimates_exact(8, 4, 2)
for row in terms.rows:
    print(
        f"  k={row.k}: E|1/k - c_k P[create]| = {row.creation_term} = {float(row.creation_term):.6f}, "
        f"E|W_k - c_k P[destroy]| = {row.destruction_term} = {float(row.destruction_term):.6f}"
    )
print(f"  total: {float(terms.total):.6f}")

print("\n" + "=" * 72)
print("Monte Carlo terms at moderate n (per-sample probabilities stay exact)")
print("=" * 72)
rng = np.random.default_rng(31337)
for n, r, d, samples in [(2000, 2000, 3, 500), (2000, 1000, 3, 500)]:
    terms = term_estimates_mc(n, r, d, samples, rng)
    print(f"\n  n={n}, r={r}, d={d}, {samples} samples:")
    for row in terms.rows:
        print(
            f"    k={row.k}: creation term {row.creation_term:.2e} (se {row.creation_se:.1e}), "
            f"destruction term {row.destruction_term:.2e} (se {row.destruction_se:.1e})"
        )
    print(f"    assembled bound: {terms.total:.3e}")
print("\nBoth terms shrink like 1/n, which is what drives the distance to zero.")
