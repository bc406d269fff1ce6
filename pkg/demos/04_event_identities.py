#!/usr/bin/env python3
"""Per-permutation event probabilities for one step of the restricted walk.

The creation/destruction probabilities of k-cycles (with counts of lengths
k+1..d frozen) admit closed forms over the cycle structure.  Enumerating
all n(n-1)/2 transpositions gives the same numbers, exhaustively.  One
finite-size blind spot of the destruction formula is catalogued instead of
patched: when r <= 2k-2 it counts merges the walk rejects.
"""

from shortcycles import (
    Permutation,
    creation_probability,
    destruction_probability,
    destruction_probability_rearranged,
    event_probabilities,
    verify_closed_forms,
)

print("=" * 72)
print("A worked example: sigma = (0 1 2)(3 4) in S_5 with r = 3, k = d = 2")
print("=" * 72)
sigma = Permutation((1, 2, 0, 4, 3))
tally = event_probabilities(sigma, 2, 2, 3)
print(f"  all {tally.n_transpositions} transpositions classified:")
print(f"  P[one more 2-cycle]  = {tally.p_increase}   (3 splits of the 3-cycle)")
print(f"  P[one fewer 2-cycle] = {tally.p_decrease}   (the swap inside the 2-cycle)")
print("  the 6 cross pairs would build a 5-cycle > r and are rejected")
print(f"  closed forms: {creation_probability(sigma, 2, 2)}, {destruction_probability(sigma, 2, 2, 3)}")

print("\n" + "=" * 72)
print("Exhaustive verification over whole state spaces")
print("=" * 72)
for n, r in [(5, 3), (6, 4), (7, 5)]:
    report = verify_closed_forms(n, r, 3)
    print(
        f"  n={n} r={r}: {report.checked} (sigma, k, d) combinations; "
        f"creation mismatches {report.mismatch_count('creation')}, "
        f"destruction mismatches {report.mismatch_count('destruction')}, "
        f"rearranged-variant mismatches {report.mismatch_count('destruction_rearranged')}"
    )

print("\n" + "=" * 72)
print("The destruction formula's blind spot (r <= 2k-2)")
print("=" * 72)
report = verify_closed_forms(5, 4, 3)
blind = [m for m in report.mismatches if m.which == "destruction"]
print(f"  n=5, r=4, d<=3: {len(blind)} mismatches, all at k=3:")
m = blind[0]
print(f"  witness sigma = {m.mapping} (a 2-cycle and a 3-cycle)")
print(f"  enumeration: {m.enumerated}   closed form: {m.formula}")
print("  the formula counts merging the 3-cycle with the 2-cycle, but the")
print("  resulting 5-cycle would exceed r = 4, so the walk rejects it")

print("\n" + "=" * 72)
print("The rearranged variant is not an identity at all")
print("=" * 72)
sigma = Permutation((1, 0, 2, 3, 4))  # one 2-cycle, three fixed points
enum = event_probabilities(sigma, 1, 1, 3).p_decrease
variant = destruction_probability_rearranged(sigma, 1, 1, 3)
closed = destruction_probability(sigma, 1, 1, 3)
print(f"  sigma = {sigma.mapping}, k = d = 1, r = 3")
print(f"  enumeration:          {enum}")
print(f"  closed form:          {closed}")
print(f"  rearranged variant:   {variant}   <- leading term is the raw count;")
print("  it matches the event probability only after scaling by n/(2k)")
