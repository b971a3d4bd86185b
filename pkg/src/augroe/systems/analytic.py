"""Closed-form reference solutions for the heat benchmarks (u, q columns)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy.special import erf

from ..errors import ConfigurationError

Evaluator = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class AnalyticalSolution:
    """``evaluator(x, t)`` returns an array of shape (len(x), 2)."""

    evaluator: Evaluator
    kind: Literal["steady", "transient"]
    domain: tuple[float, float] = (-math.inf, math.inf)
    medium: dict = field(default_factory=dict)

    def __call__(self, x, t: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.evaluator(x, t)


def _stack(u, q):
    return np.stack(np.broadcast_arrays(u, q), axis=-1)


def analytic_sine_steady(M: float, W: float, C: float) -> AnalyticalSolution:
    """k = M / (W sin x + C), u = -W cos x + C x, q = -M."""
    if not abs(C) > abs(W):
        raise ConfigurationError(f"need |C| > |W| for a bounded conductivity (C={C}, W={W})")

    def k(x):
        return M / (W * np.sin(x) + C)

    def ev(x, t):
        return _stack(-W * np.cos(x) + C * x, np.full_like(x, -M))

    return AnalyticalSolution(ev, "steady", medium={"k": k})


def layer_conductivity(k1, k2, delta, mid):
    """k1 | (k1 + k2)/2 on a layer of width delta centred at mid | k2."""
    lo, hi = mid - 0.5 * delta, mid + 0.5 * delta
    km = 0.5 * (k1 + k2)

    def k(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < lo, k1, np.where(x > hi, k2, km)) if delta > 0 else np.where(
            x < mid, k1, k2
        )

    return k


def _resistance(x, k1, k2, delta, mid, a):
    # integral of 1/k from a to x through the three-region profile
    lo, hi = mid - 0.5 * delta, mid + 0.5 * delta
    km = 0.5 * (k1 + k2)
    seg1 = np.clip(x, a, lo) - a
    seg2 = np.clip(x, lo, hi) - lo
    seg3 = np.maximum(x - hi, 0.0)
    return seg1 / k1 + seg2 / km + seg3 / k2


def analytic_piecewise_steady(
    M: float,
    k1: float,
    k2: float,
    delta: float = 0.0,
    a: float = 0.0,
    b: float = 10.0,
    u_out: float | None = None,
) -> AnalyticalSolution:
    """Steady state with inflow flux q = -M through k1 | layer | k2.

    u solves du/dx = -q/k anchored at u(b) = u_out (default -M b / k2).
    delta = dx reproduces the one-cell transition layer of the discrete
    equilibrium; delta = 0 is the sharp jump.
    """
    if not (k1 > 0 and k2 > 0):
        raise ConfigurationError("conductivities must be positive")
    if not 0.0 <= delta < (b - a):
        raise ConfigurationError(f"layer thickness must lie in [0, {b - a}), got {delta}")
    mid = 0.5 * (a + b)
    if u_out is None:
        u_out = -M * b / k2
    q = -M
    Rb = _resistance(np.float64(b), k1, k2, delta, mid, a)

    def ev(x, t):
        u = u_out + q * (Rb - _resistance(x, k1, k2, delta, mid, a))
        return _stack(u, np.full_like(x, q))

    return AnalyticalSolution(
        ev, "steady", (a, b), medium={"k": layer_conductivity(k1, k2, delta, mid)}
    )


def analytic_source_steady(
    q_a: float, phi: float, k: float, a: float = 0.0, u_a: float = 0.0
) -> AnalyticalSolution:
    """q = q_a + phi (x - a); u = u_a - q_a (x - a)/k - phi (x - a)^2 / (2k)."""
    if k == 0:
        raise ConfigurationError("k must be nonzero")

    def ev(x, t):
        s = x - a
        return _stack(u_a - q_a * s / k - phi * s * s / (2.0 * k), q_a + phi * s)

    return AnalyticalSolution(ev, "steady", (a, math.inf), medium={"k": k, "phi": phi})


def analytic_erf_transient(k: float, x0: float = 5.0) -> AnalyticalSolution:
    """Parabolic-limit solution of the step u = -1 | +1 at x0."""
    if not k > 0:
        raise ConfigurationError("k must be positive")

    def ev(x, t):
        if not t > 0:
            raise ConfigurationError(f"erf solution is defined for t > 0, got t={t}")
        s = x - x0
        u = erf(s / (2.0 * math.sqrt(k * t)))
        q = -k * np.exp(-s * s / (4.0 * k * t)) / math.sqrt(k * math.pi * t)
        return _stack(u, q)

    return AnalyticalSolution(ev, "transient", medium={"k": k})
