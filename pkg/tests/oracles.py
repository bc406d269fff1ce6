"""Independent reference implementations used only by the tests.

These deliberately avoid the code paths they are meant to check.
"""

from __future__ import annotations

import numpy as np


def dickman_fixed_step(t_max: int, step: float = 1e-6) -> list[np.ndarray]:
    """Fixed-step trapezoid solution of t*rho(t) = integral_{t-1}^t rho(s) ds.

    Returns one array of rho values per unit panel ([k, k+1] sampled every
    ``step``).  The window integral is recomputed per point from per-panel
    cumulative sums rather than marched forward; marching accumulates
    absolute truncation that swamps rho once it has decayed a few orders of
    magnitude.  With t_j = k + j*step and the trapezoid rule, the identity
    becomes

        rho_j * (t_j - h/2) = A_j + S_j,
        A_j = (integral of the previous panel from t_j - 1 to k),
        S_j = h/2 * rho_0 + h * sum_{0 < i < j} rho_i,

    a one-step linear recurrence in S_j with positive coefficients, solved
    in closed form with cumulated products (no cancellation anywhere except
    inside A_j, where the amplification is bounded by one panel's decay).
    """
    m = round(1.0 / step)
    if abs(m * step - 1.0) > 1e-12:
        raise ValueError("step must divide 1 exactly")
    h = step
    panels = [np.ones(m + 1)]
    for k in range(1, t_max):
        prev = panels[k - 1]
        increments = 0.5 * h * (prev[:-1] + prev[1:])
        prev_cum = np.concatenate([[0.0], np.cumsum(increments)])
        total_prev = prev_cum[-1]
        a_part = total_prev - prev_cum  # integral of prev from t_j - 1 up to k
        t = k + np.arange(m + 1) * h
        denom = t - 0.5 * h
        rho0 = total_prev / k
        values = np.empty(m + 1)
        values[0] = rho0
        # S_{j+1} = S_j * (1 + h/denom_j) + h * A_j / denom_j, S_1 = h/2 * rho_0
        growth = 1.0 + h / denom[1:m]
        forcing = h * a_part[1:m] / denom[1:m]
        cum_growth = np.cumprod(growth)
        s = np.empty(m + 1)
        s[1] = 0.5 * h * rho0
        if m > 1:
            s[2:] = cum_growth * (s[1] + np.cumsum(forcing / cum_growth))
        values[1:] = (a_part[1:] + s[1:]) / denom[1:]
        panels.append(values)
    return panels


def dickman_fixed_step_at(panels: list[np.ndarray], t: float, step: float = 1e-6) -> float:
    """Value at t, which must lie exactly on the grid."""
    k = int(t)
    if t == k:
        if k == len(panels):
            return float(panels[k - 1][-1])
        return float(panels[k][0])
    offset = (t - k) / step
    idx = round(offset)
    if abs(offset - idx) > 1e-6:
        raise ValueError(f"t={t} is not on the step grid")
    return float(panels[k][idx])
