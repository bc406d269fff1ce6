"""Event probabilities for one step of the restricted transposition walk.

Fix k <= d < r and a permutation sigma with no cycle longer than r.  One
chain step proposes a uniform transposition and keeps the result only if no
cycle grows beyond r.  Two events matter for comparing the small-cycle
counts with independent Poissons:

* creation: the number of k-cycles goes up by exactly one while the counts
  of lengths k+1..d are unchanged;
* destruction: the number of k-cycles drops by exactly one, same freeze.

Both probabilities are exactly computable per sigma in two independent
ways.  The enumeration route walks all n(n-1)/2 transpositions and
classifies each outcome.  The closed-form route reads them off the cycle
structure:

  P[create] = 2/(n(n-1)) * sum_a [ 1{L_a > d+k} + 1{d < L_a < 2k} ]
            + 1/(n(n-1)) * sum_{a != b} 1{cycle_a != cycle_b} 1{L_a + L_b = k}

  P[destroy] = 2/(n(n-1)) * sum_{a != b} 1{L_a = k} *
                   ( 1{L_b > d} 1{L_b <= r-k} + 1{d-k < L_b < k} )
             + (k-1)/(n(n-1)) * sum_a 1{L_a = k}

where L_a is the length of the cycle containing element a.  A splitting
transposition inside a cycle of length L makes parts (j, L-j); it creates a
k-cycle net +1 only when L > d+k or d < L < 2k (L = 2k makes two).  A merge
of different cycles with L_a + L_b = k always lands inside the length
budget because k < r.  Destruction merges a k-cycle with a cycle whose
length stays acceptable and out of the frozen window, or splits the k-cycle
itself (k-1 partners per element).

The creation identity is exact for every valid (k, d, r).  The destruction
display has one finite-size blind spot: its small-partner window d-k < L_b
< k ignores the length budget, so when r <= 2k-2 it counts merges the walk
actually rejects.  Exhaustive sweeps catalogue exactly those cases (witness
permutations included) rather than patching the formula silently.

``destruction_probability_rearranged`` evaluates a complement-substituted
variant whose leading term is the raw k-cycle count; it is retained because
it does NOT agree with enumeration (the leading term only matches after
scaling by n/2k), and the comparison report catalogues the gap with witness
permutations instead of asserting either way.

The assembled upper bound on the total-variation distance from the product
Poisson law is

  sum_k (alpha_k / 2) * ( E|lambda_k - c_k P[create_k]|
                          + E|W_k - c_k P[destroy_k]| ),

with lambda_k = 1/k, c_k = n/(2k) and alpha_k = min(1, 1.4/sqrt(lambda_k)),
which is identically 1 here since 1.4^2 * k >= 1 for every k >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .counting import count_table
from .errors import ResourceLimitError
from .permutations import (
    CycleStructure,
    Permutation,
    cycle_structure,
    permutations_with_bounded_cycles,
)
from .sampling import SamplerConfig, sample_sequential


@dataclass(frozen=True)
class SteinParameters:
    """Per-length reference means, damping factors, and scalings."""

    n: int
    d: int
    lambdas: tuple[Fraction, ...]
    alphas: tuple[Fraction, ...]
    scalings: tuple[Fraction, ...]

    @classmethod
    def for_cycle_counts(cls, n: int, d: int) -> "SteinParameters":
        if not 1 <= d <= n:
            raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
        lambdas = tuple(Fraction(1, k) for k in range(1, d + 1))
        # min(1, 1.4 * sqrt(k)) = 1 exactly: (7/5)^2 * k >= 1 for k >= 1
        alphas = tuple(Fraction(1) for _ in range(d))
        scalings = tuple(Fraction(n, 2 * k) for k in range(1, d + 1))
        return cls(n, d, lambdas, alphas, scalings)


@dataclass(frozen=True)
class EventTally:
    """Exact per-permutation event probabilities from full enumeration."""

    k: int
    p_increase: Fraction
    p_decrease: Fraction
    n_transpositions: int


def _pair_effects(struct: CycleStructure, r: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(created lengths, destroyed lengths) per accepted transposition.

    Rejected proposals (merges that would exceed r) appear as ((), ()).
    Splits of a cycle of length L at within-cycle distance j give parts
    (j, L-j); there are exactly L unordered pairs per distance class except
    j = L/2, which has L/2.
    """
    n = struct.n
    effects: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    cycles = struct.cycles
    # position of each element within its cycle
    pos = [0] * n
    for cycle in cycles:
        for i, x in enumerate(cycle):
            pos[x] = i
    for a in range(n):
        for b in range(a + 1, n):
            ca, cb = struct.cycle_id[a], struct.cycle_id[b]
            if ca == cb:
                length = struct.cycle_length[a]
                j = (pos[b] - pos[a]) % length
                effects.append(((j, length - j), (length,)))
            else:
                la, lb = struct.cycle_length[a], struct.cycle_length[b]
                if la + lb > r:
                    effects.append(((), ()))
                else:
                    effects.append(((la + lb,), (la, lb)))
    return effects


def _classify(created: tuple[int, ...], destroyed: tuple[int, ...], k: int, d: int) -> str | None:
    delta_k = created.count(k) - destroyed.count(k)
    if delta_k not in (1, -1):
        return None
    for j in range(k + 1, d + 1):
        if created.count(j) != destroyed.count(j):
            return None
    return "increase" if delta_k == 1 else "decrease"


def event_probabilities(p: Permutation, k: int, d: int, r: int) -> EventTally:
    """Classify all n(n-1)/2 transpositions of ``p``; exact rationals."""
    _validate_kdr(p.n, k, d, r)
    struct = cycle_structure(p)
    if max(struct.lengths) > r:
        raise ValueError("permutation has a cycle longer than r")
    up = down = 0
    effects = _pair_effects(struct, r)
    for created, destroyed in effects:
        outcome = _classify(created, destroyed, k, d)
        if outcome == "increase":
            up += 1
        elif outcome == "decrease":
            down += 1
    total = len(effects)
    return EventTally(k, Fraction(up, total), Fraction(down, total), total)


def _validate_kdr(n: int, k: int, d: int, r: int) -> None:
    if not 1 <= k <= d < r <= n:
        raise ValueError(f"need 1 <= k <= d < r <= n, got k={k}, d={d}, r={r}, n={n}")


def _length_statistics(struct: CycleStructure) -> dict[int, int]:
    """length -> number of cycles of that length."""
    hist: dict[int, int] = {}
    for length in struct.lengths:
        hist[length] = hist.get(length, 0) + 1
    return hist


def creation_probability(p_or_struct, k: int, d: int) -> Fraction:
    """Closed form for the creation event, read off the cycle structure."""
    struct = p_or_struct if isinstance(p_or_struct, CycleStructure) else cycle_structure(p_or_struct)
    n = struct.n
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    hist = _length_statistics(struct)
    elements = {length: length * count for length, count in hist.items()}
    split = sum(e for length, e in elements.items() if length > d + k or d < length < 2 * k)
    merge_ordered = 0
    for j in range(1, k):
        ej = elements.get(j, 0)
        other = k - j
        if other == j:
            merge_ordered += ej * (ej - 1) - hist.get(j, 0) * j * (j - 1)
        else:
            merge_ordered += ej * elements.get(other, 0)
    return Fraction(2 * split + merge_ordered, n * (n - 1))


def destruction_probability(p_or_struct, k: int, d: int, r: int) -> Fraction:
    """Closed form for the destruction event, read off the cycle structure."""
    struct = p_or_struct if isinstance(p_or_struct, CycleStructure) else cycle_structure(p_or_struct)
    n = struct.n
    _validate_kdr(n, k, d, r)
    hist = _length_statistics(struct)
    k_elements = k * hist.get(k, 0)
    partner_weight = 0
    for length, count in hist.items():
        if (d < length <= r - k) or (d - k < length < k):
            partner_weight += length * count
    return Fraction(2 * k_elements * partner_weight + (k - 1) * k_elements, n * (n - 1))


def destruction_probability_rearranged(p_or_struct, k: int, d: int, r: int) -> Fraction:
    """Complement-substituted variant with the raw count as leading term.

    Not an identity: enumeration sweeps catalogue its deviation (the leading
    term matches the event probability only after the n/2k scaling).  Kept
    so reports can show the gap explicitly.
    """
    struct = p_or_struct if isinstance(p_or_struct, CycleStructure) else cycle_structure(p_or_struct)
    n = struct.n
    _validate_kdr(n, k, d, r)
    hist = _length_statistics(struct)
    w_k = hist.get(k, 0)
    k_elements = k * w_k

    def g(length: int) -> int:
        value = 0
        if length <= d:
            value -= 1
        if length > r - k:
            value -= 1
        if d - k < length < k:
            value += 1
        return value

    total_g = sum(length * count * g(length) for length, count in hist.items())
    inner = total_g - g(k)  # the summation excludes b = a
    return (
        Fraction(w_k)
        - Fraction(2 * k_elements * inner, n * (n - 1))
        + Fraction((k - 1) * k_elements, n * (n - 1))
    )


@dataclass(frozen=True)
class ClosedFormMismatch:
    n: int
    r: int
    d: int
    k: int
    which: str  # "creation" | "destruction" | "destruction_rearranged"
    mapping: tuple[int, ...]  # witness permutation
    enumerated: Fraction
    formula: Fraction


@dataclass
class ClosedFormReport:
    """Exhaustive closed-form vs enumeration comparison over a state space."""

    n: int
    r: int
    d_max: int
    checked: int = 0
    mismatches: list[ClosedFormMismatch] = field(default_factory=list)

    def mismatch_count(self, which: str) -> int:
        return sum(1 for m in self.mismatches if m.which == which)


def verify_closed_forms(n: int, r: int, d_max: int, include_rearranged: bool = True) -> ClosedFormReport:
    """Compare both closed forms against enumeration for every permutation.

    Sweeps all sigma in the bounded-cycle set, all d <= min(d_max, r-1) and
    k <= d; every disagreement is recorded with its witness permutation.
    """
    if n > 8:
        raise ResourceLimitError("exhaustive verification capped at n <= 8")
    report = ClosedFormReport(n, r, d_max)
    for p in permutations_with_bounded_cycles(n, r):
        struct = cycle_structure(p)
        effects = _pair_effects(struct, r)
        total = len(effects)
        for d in range(1, min(d_max, r - 1) + 1):
            for k in range(1, d + 1):
                up = down = 0
                for created, destroyed in effects:
                    outcome = _classify(created, destroyed, k, d)
                    if outcome == "increase":
                        up += 1
                    elif outcome == "decrease":
                        down += 1
                enum_up = Fraction(up, total)
                enum_down = Fraction(down, total)
                report.checked += 1
                formula_up = creation_probability(struct, k, d)
                if formula_up != enum_up:
                    report.mismatches.append(
                        ClosedFormMismatch(n, r, d, k, "creation", p.mapping, enum_up, formula_up)
                    )
                formula_down = destruction_probability(struct, k, d, r)
                if formula_down != enum_down:
                    report.mismatches.append(
                        ClosedFormMismatch(n, r, d, k, "destruction", p.mapping, enum_down, formula_down)
                    )
                if include_rearranged:
                    variant = destruction_probability_rearranged(struct, k, d, r)
                    if variant != enum_down:
                        report.mismatches.append(
                            ClosedFormMismatch(
                                n, r, d, k, "destruction_rearranged", p.mapping, enum_down, variant
                            )
                        )
    return report


@dataclass(frozen=True)
class TermRow:
    k: int
    creation_term: Fraction | float
    destruction_term: Fraction | float
    creation_se: float | None = None
    destruction_se: float | None = None


@dataclass(frozen=True)
class TermEstimates:
    """Per-length terms of the assembled total-variation upper bound."""

    n: int
    r: int
    d: int
    mode: str  # exact | mc
    rows: tuple[TermRow, ...]
    total: Fraction | float
    sample_count: int | None = None


def term_estimates_exact(n: int, r: int, d: int) -> TermEstimates:
    """Exact expectations over the whole bounded-cycle set (n <= 8)."""
    if n > 8:
        raise ResourceLimitError("exact expectations capped at n <= 8")
    if not 1 <= d < r <= n:
        raise ValueError(f"need 1 <= d < r <= n, got d={d}, r={r}, n={n}")
    params = SteinParameters.for_cycle_counts(n, d)
    sums_up = [Fraction(0)] * d
    sums_down = [Fraction(0)] * d
    count = 0
    for p in permutations_with_bounded_cycles(n, r):
        struct = cycle_structure(p)
        effects = _pair_effects(struct, r)
        total = len(effects)
        hist = _length_statistics(struct)
        for k in range(1, d + 1):
            up = down = 0
            for created, destroyed in effects:
                outcome = _classify(created, destroyed, k, d)
                if outcome == "increase":
                    up += 1
                elif outcome == "decrease":
                    down += 1
            c_k = params.scalings[k - 1]
            sums_up[k - 1] += abs(params.lambdas[k - 1] - c_k * Fraction(up, total))
            sums_down[k - 1] += abs(hist.get(k, 0) - c_k * Fraction(down, total))
        count += 1
    rows = tuple(
        TermRow(k, sums_up[k - 1] / count, sums_down[k - 1] / count) for k in range(1, d + 1)
    )
    total_bound = sum(
        params.alphas[k - 1] / 2 * (rows[k - 1].creation_term + rows[k - 1].destruction_term)
        for k in range(1, d + 1)
    )
    return TermEstimates(n, r, d, "exact", rows, total_bound)


def term_estimates_mc(
    n: int,
    r: int,
    d: int,
    sample_count: int,
    rng: np.random.Generator,
) -> TermEstimates:
    """Monte Carlo over sampled permutations; per-sample terms stay exact.

    The conditional event probabilities come from the (exhaustively
    verified) closed forms, so sampling noise enters only through the
    choice of permutations.
    """
    if sample_count <= 0:
        raise ValueError("sample_count must be positive")
    if not 1 <= d < r <= n:
        raise ValueError(f"need 1 <= d < r <= n, got d={d}, r={r}, n={n}")
    params = SteinParameters.for_cycle_counts(n, d)
    table = count_table(n, r, "exact" if n <= 200 else "double")
    cfg = SamplerConfig(n=n, r=r, method="sequential")
    acc_up = np.zeros((sample_count, d))
    acc_down = np.zeros((sample_count, d))
    for i in range(sample_count):
        p = sample_sequential(cfg, rng, table)
        struct = cycle_structure(p)
        hist = _length_statistics(struct)
        effects = None
        for k in range(1, d + 1):
            c_k = params.scalings[k - 1]
            p_up = creation_probability(struct, k, d)
            if r >= 2 * k - 1:
                p_down = destruction_probability(struct, k, d, r)
            else:
                # the closed form over-counts merges the chain rejects when
                # r <= 2k-2; fall back to enumeration there
                if effects is None:
                    effects = _pair_effects(struct, r)
                down = sum(
                    1 for created, destroyed in effects
                    if _classify(created, destroyed, k, d) == "decrease"
                )
                p_down = Fraction(down, len(effects))
            acc_up[i, k - 1] = abs(float(params.lambdas[k - 1] - c_k * p_up))
            acc_down[i, k - 1] = abs(float(hist.get(k, 0) - c_k * p_down))
    means_up = acc_up.mean(axis=0)
    means_down = acc_down.mean(axis=0)
    ses_up = acc_up.std(axis=0, ddof=1) / np.sqrt(sample_count) if sample_count > 1 else np.zeros(d)
    ses_down = acc_down.std(axis=0, ddof=1) / np.sqrt(sample_count) if sample_count > 1 else np.zeros(d)
    rows = tuple(
        TermRow(k, float(means_up[k - 1]), float(means_down[k - 1]),
                float(ses_up[k - 1]), float(ses_down[k - 1]))
        for k in range(1, d + 1)
    )
    total_bound = sum(
        float(params.alphas[k - 1]) / 2 * (rows[k - 1].creation_term + rows[k - 1].destruction_term)
        for k in range(1, d + 1)
    )
    return TermEstimates(n, r, d, "mc", rows, total_bound, sample_count)
