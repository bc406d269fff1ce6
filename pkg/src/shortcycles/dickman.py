"""Numerics for the Dickman function and its companion root xi.

rho is the continuous solution of the delay differential equation

    t * rho'(t) + rho(t - 1) = 0,        rho(t) = 1 on [0, 1].

Integrating the equation once against the initial condition gives the
equivalent averaging identity

    t * rho(t) = integral_{t-1}^{t} rho(s) ds,

which is the form actually evaluated here.  The naive forward panel
recurrence rho(t) = rho(k) - integral_k^t rho(s-1)/s ds is exact in
structure but catastrophically cancellative in fixed precision: each unit
panel subtracts away all but a factor rho(k+1)/rho(k) ~ exp(-xi(k)) of the
checkpoint, so double precision runs out of digits near t = 13.  The
averaging identity instead expresses rho(t) as a positive weighted mean of
recent values, so relative errors propagate as convex combinations and
accumulate only slowly with t (around 1e-12 by t = 25) instead of
exploding.

Panels: on [k, k+1] the evaluator stores a Chebyshev interpolant of the
scaled function h_k(t) = rho(t) / rho(k), found by Picard iteration of the
Volterra form

    (k + x) h_k(k + x) = R_k * integral_x^1 h_{k-1}(k-1+y) dy
                         + integral_0^x h_k(k+y) dy,

with R_k = rho(k-1)/rho(k) (a moderate number, about exp(xi(k))).  The
iteration contracts with factor 1/(k+1).  Scaling per panel keeps every
stored quantity O(1) even though rho itself decays like 1/Gamma(t+1);
log-rho is exposed directly and stays finite long after rho underflows a
double (around t = 170).

xi(t) is the positive solution of e^x = 1 + t*x, which for t > 1 lies in
the bracket (log t, 2 log t].  It controls ratios of rho at nearby
arguments: rho(t - v) / rho(t) is approximately exp(v * xi(t)) for moderate
v, which is also the scale of consecutive checkpoint ratios above.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.chebyshev import Chebyshev

DEFAULT_PANEL_TOLERANCE = 1e-12
DEFAULT_T_MAX = 200.0
DEFAULT_XI_TOLERANCE = 1e-13


class DickmanEvaluator:
    """Panel-by-panel evaluator for rho and log-rho on [0, t_max]."""

    def __init__(self, panel_tolerance: float = DEFAULT_PANEL_TOLERANCE, t_max: float = DEFAULT_T_MAX):
        if panel_tolerance <= 0:
            raise ValueError("panel_tolerance must be positive")
        if t_max < 1:
            raise ValueError("t_max must be at least 1")
        self.panel_tolerance = panel_tolerance
        self.t_max = float(t_max)
        # panel k covers [k, k+1] and stores h_k(t) = rho(t)/rho(k); h_0 == 1
        self._panels: list[Chebyshev] = [Chebyshev([1.0], domain=[0.0, 1.0])]
        self._log_checkpoints: list[float] = [0.0, 0.0]  # log rho(0), log rho(1)
        self._lock = threading.Lock()

    # -- panel construction -------------------------------------------------

    def _build_panel(self, k: int) -> None:
        """Append panel k (requires panels 0..k-1 and checkpoints 0..k)."""
        prev = self._panels[k - 1]
        ratio = math.exp(self._log_checkpoints[k - 1] - self._log_checkpoints[k])
        prev_anti = prev.integ()
        inner_tol = max(1e-16, 1e-4 * self.panel_tolerance)
        degree = 48
        while True:
            nodes = k + 0.5 * (1.0 + np.cos(np.pi * np.arange(degree, -1, -1) / degree))
            nodes[0], nodes[-1] = float(k), float(k + 1)
            # contribution of the previous panel: integral_{x-1}^{k} h_{k-1}
            left_part = ratio * (prev_anti(float(k)) - prev_anti(nodes - 1.0))
            h_vals = left_part / nodes
            previous_delta = math.inf
            for _ in range(400):
                fit = Chebyshev.fit(nodes, h_vals, deg=degree, domain=[k, k + 1])
                anti = fit.integ()
                new_vals = (left_part + (anti(nodes) - anti(float(k)))) / nodes
                delta = float(np.max(np.abs(new_vals - h_vals)))
                h_vals = new_vals
                # the iteration contracts by 1/(k+1); once delta stops halving
                # it has hit the rounding floor
                if delta <= inner_tol or (delta < 1e-12 and delta >= 0.5 * previous_delta):
                    break
                previous_delta = delta
            else:
                raise ArithmeticError(f"panel {k}: fixed-point iteration failed to settle")
            fit = Chebyshev.fit(nodes, h_vals, deg=degree, domain=[k, k + 1])
            tail = float(np.max(np.abs(fit.coef[-3:])))
            if tail <= max(3e-16, 1e-3 * self.panel_tolerance) or degree >= 192:
                break
            degree *= 2
        right = float(h_vals[-1])
        if right <= 0:
            raise ArithmeticError(f"panel {k}: scaled value went non-positive ({right})")
        self._panels.append(fit)
        self._log_checkpoints.append(self._log_checkpoints[k] + math.log(right))

    def _ensure(self, k: int) -> None:
        """Make panels 0..k (hence checkpoints 0..k+1) available."""
        if len(self._panels) > k:
            return
        with self._lock:
            while len(self._panels) <= k:
                self._build_panel(len(self._panels))

    # -- evaluation ----------------------------------------------------------

    def log_rho(self, t: float) -> float:
        """log rho(t); exactly 0.0 on [0, 1]."""
        t = float(t)
        if t < 0:
            raise ValueError("rho is only defined for t >= 0")
        if t > self.t_max:
            raise ValueError(f"t={t} exceeds t_max={self.t_max}")
        if t <= 1.0:
            return 0.0
        k = int(math.floor(t))
        if t == k:
            self._ensure(k - 1)
            return self._log_checkpoints[k]
        self._ensure(k)
        scaled = float(self._panels[k](t))
        if scaled <= 0:
            raise ArithmeticError(f"rho evaluation lost positivity at t={t}")
        return self._log_checkpoints[k] + math.log(scaled)

    def rho(self, t: float) -> float:
        """rho(t); underflows gracefully to 0.0 once log rho < -745 or so."""
        return math.exp(self.log_rho(t))


class XiEvaluator:
    """Solve e^x = 1 + t*x for the positive root, t > 1 (xi(1) := 0)."""

    def __init__(self, residual_tolerance: float = DEFAULT_XI_TOLERANCE, max_iterations: int = 200):
        self.residual_tolerance = residual_tolerance
        self.max_iterations = max_iterations

    def xi(self, t: float) -> float:
        t = float(t)
        if t < 1.0:
            raise ValueError(f"xi requires t >= 1, got {t}")
        if t == 1.0:
            return 0.0  # limit convention: the positive root degenerates at t = 1
        lo = math.log(t)
        hi = 2.0 * math.log(t)
        # f(x) = e^x - 1 - t*x is increasing and convex on [lo, hi], with
        # f(lo) < 0 <= f(hi), so Newton from the upper end is safe; any step
        # leaving the bracket falls back to bisection.
        x = hi
        for _ in range(self.max_iterations):
            ex = math.exp(x)
            f = ex - 1.0 - t * x
            if abs(f) <= self.residual_tolerance * (1.0 + t * x):
                return x
            if f > 0:
                hi = x
            else:
                lo = x
            candidate = x - f / (ex - t)
            if not lo < candidate < hi:
                candidate = 0.5 * (lo + hi)
            x = candidate
        raise ArithmeticError(f"xi failed to converge for t={t}")


_DEFAULT_EVALUATOR: DickmanEvaluator | None = None
_DEFAULT_LOCK = threading.Lock()


def default_evaluator() -> DickmanEvaluator:
    """Shared evaluator with default settings (panel cache is reused)."""
    global _DEFAULT_EVALUATOR
    with _DEFAULT_LOCK:
        if _DEFAULT_EVALUATOR is None:
            _DEFAULT_EVALUATOR = DickmanEvaluator()
        return _DEFAULT_EVALUATOR


def rho(t: float) -> float:
    return default_evaluator().rho(t)


def log_rho(t: float) -> float:
    return default_evaluator().log_rho(t)


def xi(t: float) -> float:
    return XiEvaluator().xi(t)


@dataclass(frozen=True)
class RhoRatioReport:
    """rho(t-v)/rho(t) against exp(v*xi(t)); the gap is reported, not judged."""

    t: float
    v: float
    ratio: float
    predicted: float
    relative_gap: float


def rho_ratio_check(t: float, v: float, evaluator: DickmanEvaluator | None = None) -> RhoRatioReport:
    if t < 1:
        raise ValueError("ratio check requires t >= 1")
    if not 0 <= v <= t:
        raise ValueError("need 0 <= v <= t")
    if v > 3:
        warnings.warn(f"v={v} is large; the exponential prediction assumes v = O(1)", stacklevel=2)
    ev = evaluator or default_evaluator()
    ratio = math.exp(ev.log_rho(t - v) - ev.log_rho(t))
    predicted = math.exp(v * xi(t)) if t > 1 else 1.0
    gap = abs(ratio / predicted - 1.0)
    return RhoRatioReport(t, v, ratio, predicted, gap)


@dataclass(frozen=True)
class GammaBoundReport:
    """Check of rho(t) <= 1 / Gamma(t+1), performed in log space."""

    t: float
    log_rho: float
    log_bound: float
    holds: bool


def gamma_bound_check(t: float, evaluator: DickmanEvaluator | None = None) -> GammaBoundReport:
    if t < 0:
        raise ValueError("t must be >= 0")
    ev = evaluator or default_evaluator()
    lr = ev.log_rho(t)
    bound = -math.lgamma(t + 1.0)
    slack = 100.0 * ev.panel_tolerance * max(1.0, abs(bound))
    return GammaBoundReport(t, lr, bound, lr <= bound + slack)
