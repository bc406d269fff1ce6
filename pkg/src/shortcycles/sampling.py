"""Uniform samplers for permutations with all cycle lengths at most r.

Three routes to the same distribution:

* rejection: draw uniform permutations (Fisher-Yates) until the longest
  cycle is <= r.  Exact, with acceptance probability nu(n, r), so only
  practical when that fraction is not tiny.
* sequential: build the permutation cycle by cycle.  With m elements left,
  the cycle containing the smallest unplaced element has length k with
  probability nu(m-k, r) / (m * nu(m, r)); its k-1 partners are a uniform
  draw without replacement and the cycle order is uniform.  Exact in one
  pass, no rejection.
* mcmc: the random-transposition walk restricted to the bounded-cycle set.
  A step proposes a uniform transposition tau and accepts sigma' = tau o
  sigma only if sigma' still has no cycle longer than r.  The proposal is
  symmetric and rejection keeps the chain reversible, so the uniform law is
  stationary; one step is also the perturbation the event-probability
  identities in :mod:`shortcycles.stein` describe.

All draws consume a numpy Generator.  Parallel work should give each worker
its own substream (numpy SeedSequence.spawn); samplers never share mutable
state.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counting import CountTable, count_table
from .errors import ResourceLimitError
from .permutations import (
    Permutation,
    Transposition,
    apply_transposition,
    cycle_structure,
    longest_cycle,
    permutations_with_bounded_cycles,
)

DEFAULT_RETRY_CAP = 10**7


def retry_cap() -> int:
    """Rejection-sampler draw budget; override with SHORTCYCLES_RETRY_CAP."""
    return int(os.environ.get("SHORTCYCLES_RETRY_CAP", DEFAULT_RETRY_CAP))


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    r: int
    method: str = "sequential"  # rejection | sequential | mcmc
    seed: int = 0
    mcmc_burn_in: int = 0
    mcmc_thinning: int = 1

    def __post_init__(self):
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.method not in ("rejection", "sequential", "mcmc"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.mcmc_burn_in < 0 or self.mcmc_thinning < 0:
            raise ValueError("burn-in and thinning must be >= 0")

    @property
    def u(self) -> float:
        return self.n / self.r


def sample_rejection(cfg: SamplerConfig, rng: np.random.Generator, *, cap: int | None = None) -> Permutation:
    """One exact uniform draw by rejection on the longest cycle."""
    cap = retry_cap() if cap is None else cap
    for _ in range(cap):
        p = Permutation(rng.permutation(cfg.n))
        if longest_cycle(p) <= cfg.r:
            return p
    raise ResourceLimitError(
        f"rejection sampler used {cap} draws without an acceptance (n={cfg.n}, r={cfg.r})"
    )


def acceptance_rate(n: int, r: int, trials: int, rng: np.random.Generator) -> float:
    """Fraction of uniform permutations whose longest cycle is <= r.

    This is the empirical acceptance rate of the rejection sampler's
    proposal loop and estimates nu(n, r).
    """
    hits = 0
    for _ in range(trials):
        if longest_cycle(Permutation(rng.permutation(n))) <= r:
            hits += 1
    return hits / trials


def stage_length_pmf(m: int, r: int, table: CountTable) -> np.ndarray:
    """Cycle-length law of the next anchor when m elements remain.

    Entry k-1 is nu(m-k, r) / (m * nu(m, r)) for k = 1..min(m, r).  The
    probabilities sum to 1 by the counting recurrence; the float path
    renormalizes to absorb table rounding.
    """
    top = min(m, r)
    values = table.float_view()
    probs = values[m - top : m][::-1] / (m * values[m])
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"stage law sums to {total}, table looks inconsistent")
    return probs / total


def sample_sequential(cfg: SamplerConfig, rng: np.random.Generator, table: CountTable) -> Permutation:
    """One exact uniform draw built cycle by cycle, no rejection."""
    n, r = cfg.n, cfg.r
    if table.r != r or table.n_max < n:
        raise ValueError("table does not cover this (n, r)")
    mapping = [0] * n
    pool = list(range(n))  # unplaced elements, swap-removed
    position = list(range(n))  # position[x] = index of x in pool
    placed = bytearray(n)
    anchor_scan = 0
    m = n

    def remove(x: int) -> None:
        nonlocal m
        i = position[x]
        last = pool[m - 1]
        pool[i] = last
        position[last] = i
        m -= 1

    while m > 0:
        while placed[anchor_scan]:
            anchor_scan += 1
        anchor = anchor_scan
        probs = stage_length_pmf(m, r, table)
        k = 1 + int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
        k = min(k, len(probs))  # guard the 1-ulp edge of the cumulative sum
        remove(anchor)
        placed[anchor] = 1
        cycle = [anchor]
        for _ in range(k - 1):
            partner = pool[int(rng.integers(m))]
            remove(partner)
            placed[partner] = 1
            cycle.append(partner)
        for i, x in enumerate(cycle):
            mapping[x] = cycle[(i + 1) % k]
    return Permutation(mapping)


def mcmc_step(p: Permutation, r: int, rng: np.random.Generator) -> Permutation:
    """One step of the restricted random-transposition walk.

    Proposes a uniform unordered pair (a, b), composes the swap after ``p``,
    and keeps the proposal only when no cycle grows beyond ``r``.
    """
    struct = cycle_structure(p)
    if max(struct.lengths) > r:
        raise ValueError("chain state has a cycle longer than r")
    n = p.n
    a = int(rng.integers(n))
    b = int(rng.integers(n))
    while b == a:
        b = int(rng.integers(n))
    if struct.cycle_id[a] != struct.cycle_id[b]:
        if struct.cycle_length[a] + struct.cycle_length[b] > r:
            return p
    return apply_transposition(p, Transposition(a, b))


def draw(cfg: SamplerConfig, count: int, *, table: CountTable | None = None, rng: np.random.Generator | None = None) -> list[Permutation]:
    """``count`` draws with the configured method (burn-in/thinning for mcmc)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if cfg.method == "sequential" and table is None:
        mode = "exact" if cfg.n <= 200 else "double"
        table = count_table(cfg.n, cfg.r, mode)
    out: list[Permutation] = []
    if cfg.method == "rejection":
        for _ in range(count):
            out.append(sample_rejection(cfg, rng))
    elif cfg.method == "sequential":
        for _ in range(count):
            out.append(sample_sequential(cfg, rng, table))
    else:
        state = Permutation.identity(cfg.n)
        for _ in range(cfg.mcmc_burn_in):
            state = mcmc_step(state, cfg.r, rng)
        stride = max(1, cfg.mcmc_thinning)
        for _ in range(count):
            for _ in range(stride):
                state = mcmc_step(state, cfg.r, rng)
            out.append(state)
    return out


@dataclass(frozen=True)
class TransitionMatrix:
    """Exact one-step law of the restricted transposition walk.

    ``states`` enumerates the bounded-cycle permutations; ``rows[i]`` maps
    column index -> rational probability (diagonal included when proposals
    get rejected).
    """

    n: int
    r: int
    states: tuple[Permutation, ...]
    rows: tuple[dict[int, Fraction], ...]

    def probability(self, i: int, j: int) -> Fraction:
        return self.rows[i].get(j, Fraction(0))

    def is_symmetric(self) -> bool:
        for i, row in enumerate(self.rows):
            for j, value in row.items():
                if self.rows[j].get(i, Fraction(0)) != value:
                    return False
        return True

    def row_sums(self) -> list[Fraction]:
        return [sum(row.values()) for row in self.rows]

    def uniform_is_stationary(self) -> bool:
        """uniform * P = uniform, checked in exact rationals (column sums 1)."""
        size = len(self.states)
        column_sums = [Fraction(0)] * size
        for row in self.rows:
            for j, value in row.items():
                column_sums[j] += value
        return all(s == 1 for s in column_sums)


def stationarity_matrix(n: int, r: int, cap: int = 7) -> TransitionMatrix:
    """Build the exact transition matrix over the bounded-cycle state space."""
    if n > cap:
        raise ResourceLimitError(f"state space enumeration capped at n <= {cap}")
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    states = tuple(permutations_with_bounded_cycles(n, r))
    index = {p: i for i, p in enumerate(states)}
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    total = len(pairs)
    rows = []
    for p in states:
        row: dict[int, Fraction] = {}
        for a, b in pairs:
            q = apply_transposition(p, Transposition(a, b))
            j = index.get(q)
            if j is None:  # proposal left the state space: stay put
                j = index[p]
            row[j] = row.get(j, Fraction(0)) + Fraction(1, total)
        rows.append(row)
    return TransitionMatrix(n, r, states, tuple(rows))
