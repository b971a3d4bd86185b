"""Benchmark registry: medium, initial data, boundaries and references."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ConfigurationError
from ..grid import BoundarySpec, Dirichlet, Extrapolate, Grid
from ..systems import (
    acoustics_model,
    analytic_erf_transient,
    analytic_piecewise_steady,
    analytic_sine_steady,
    analytic_source_steady,
    epsilon_for,
    heat_model,
    piecewise,
)

Reference = Callable[[np.ndarray, float], np.ndarray]


@dataclass
class Setup:
    """Everything a run needs on one grid."""

    model: object
    bc: BoundarySpec
    U0: np.ndarray
    references: dict[str, Reference] = field(default_factory=dict)


@dataclass(frozen=True)
class CaseSpec:
    id: str
    description: str
    domain: tuple[float, float]
    reference: str  # exact | equilibrium | fine-grid-self
    cfl: float
    grids: tuple[float, ...]
    build: Callable[[Grid, Optional[float]], Setup]
    steps: Optional[int] = None
    t_end: Optional[float] = None
    reference_dx: Optional[float] = None
    # relaxation time for steady heat cases; None means eps = safety dx / K1
    eps: Optional[float] = None
    # upper bounds on L-inf of the primary reference, per scheme and component
    limits: dict = field(default_factory=dict)

    @property
    def names(self) -> tuple[str, ...]:
        return ("p", "u") if self.id.startswith("acoustics") else ("u", "q")


def _heat_bc(q_in: float, u_out: float) -> BoundarySpec:
    # inflow flux on the left, temperature on the right
    return BoundarySpec((Extrapolate(), Dirichlet(q_in)), (Dirichlet(u_out), Extrapolate()))


def _eps(case_eps, grid, safety):
    if safety is not None or case_eps is None:
        return epsilon_for(grid.dx, 1.0 if safety is None else safety)
    return case_eps


# --- acoustics -------------------------------------------------------------

X0, XHAT, PHAT = 0.4, 0.075, 0.2


def hump(x):
    s = (np.asarray(x) - X0) / XHAT
    return np.where(np.abs(s) < 1.0, PHAT * np.sqrt(np.clip(1.0 - s * s, 0.0, None)), 0.0)


def _acoustics(grid, safety):
    x = grid.centers
    model = acoustics_model(K=1.0, rho=piecewise(0.6, 1.0, 4.0)(x))
    U0 = np.stack([hump(x), np.zeros_like(x)], axis=-1)
    return Setup(model, BoundarySpec.transmissive(2), U0)


# --- steady heat -----------------------------------------------------------

STEADY_EPS = 1.0


def _sine(W):
    def build(grid, safety):
        sol = analytic_sine_steady(1.0, W, 2.0)
        x = grid.centers
        model = heat_model(k=sol.medium["k"](x), eps=_eps(STEADY_EPS, grid, safety))
        u_out = float(sol(np.array([grid.b]))[0, 0])
        return Setup(model, _heat_bc(-1.0, u_out), sol(x), {"exact": sol})

    return build


def _piecewise(grid, safety):
    x = grid.centers
    exact = analytic_piecewise_steady(1.0, 1.0, 4.0, 0.0, grid.a, grid.b)
    equilibrium = analytic_piecewise_steady(1.0, 1.0, 4.0, grid.dx, grid.a, grid.b)
    mid = 0.5 * (grid.a + grid.b)
    if abs((mid - grid.a) / grid.dx - round((mid - grid.a) / grid.dx)) > 1e-9:
        raise ConfigurationError("the conductivity jump must fall on a cell interface")
    model = heat_model(k=piecewise(mid, 1.0, 4.0)(x), eps=_eps(STEADY_EPS, grid, safety))
    return Setup(
        model,
        _heat_bc(-1.0, -1.0 * grid.b / 4.0),
        exact(x),
        {"exact": exact, "equilibrium": equilibrium},
    )


def _source(grid, safety):
    phi, r, k, q_a = 0.5, 2.0, 3.0, -1.0
    sol = analytic_source_steady(q_a, phi, k, grid.a, 0.0)
    x = grid.centers
    model = heat_model(k=np.full(grid.N, k), r=r, phi=phi, eps=_eps(STEADY_EPS, grid, safety))
    u_out = float(sol(np.array([grid.b]))[0, 0])
    return Setup(model, _heat_bc(q_a, u_out), sol(x), {"exact": sol})


# --- heat Riemann problems -------------------------------------------------


def _riemann(k_left, k_right, exact=False):
    def build(grid, safety):
        x = grid.centers
        mid = 0.5 * (grid.a + grid.b)
        k = piecewise(mid, k_left, k_right)(x)
        model = heat_model(k=k, eps=_eps(None, grid, safety))
        U0 = np.stack([np.where(x < mid, -1.0, 1.0), np.zeros_like(x)], axis=-1)
        refs = {"exact": analytic_erf_transient(k_left, mid)} if exact else {}
        return Setup(model, BoundarySpec.transmissive(2), U0, refs)

    return build


CASES: dict[str, CaseSpec] = {
    c.id: c
    for c in [
        CaseSpec(
            "acoustics-transient",
            "pressure hump hitting an impedance jump (rho 1 -> 4 at x = 0.6)",
            (0.0, 1.0),
            "fine-grid-self",
            0.8,
            (0.01, 0.0025, 0.00125),
            _acoustics,
            t_end=0.52,
            reference_dx=0.00125,
        ),
        CaseSpec(
            "heat-steady-const-k",
            "linear temperature profile, k = 0.5",
            (0.0, 10.0),
            "exact",
            0.8,
            (0.5, 0.05),
            _sine(0.0),
            steps=30_000,
            eps=STEADY_EPS,
            limits={"augmented": {"u": 1e-12, "q": 1e-12}},
        ),
        CaseSpec(
            "heat-steady-sine-k",
            "k = 1 / (1.8 sin x + 2), constant flux",
            (0.0, 10.0),
            "exact",
            0.8,
            (0.5, 0.05),
            _sine(1.8),
            steps=500_000,
            eps=STEADY_EPS,
            limits={"augmented": {"q": 1e-10}},
        ),
        CaseSpec(
            "heat-steady-piecewise-k",
            "k jumps 1 -> 4 at x = 5, constant flux",
            (0.0, 10.0),
            "exact",
            0.8,
            (0.5, 0.2, 0.05),
            _piecewise,
            steps=30_000,
            eps=STEADY_EPS,
            limits={"augmented": {"q": 1e-12}},
        ),
        CaseSpec(
            "heat-steady-source",
            "uniform heat source phi = 0.5, quadratic temperature",
            (0.0, 10.0),
            "exact",
            0.9,
            (0.5, 0.05),
            _source,
            steps=500_000,
            eps=STEADY_EPS,
            limits={"augmented": {"u": 1e-12, "q": 1e-12}},
        ),
        CaseSpec(
            "heat-rp-const-k",
            "temperature step -1 | 1 in k = 0.05 (erf profile)",
            (0.0, 10.0),
            "exact",
            0.5,
            (0.5, 0.1),
            _riemann(0.05, 0.05, exact=True),
            t_end=5.0,
        ),
        CaseSpec(
            "heat-rp-a",
            "temperature step across k = 0.1 | 0.01",
            (0.0, 10.0),
            "fine-grid-self",
            0.5,
            (0.5, 0.1),
            _riemann(0.1, 0.01),
            t_end=8.0,
            reference_dx=0.001,
        ),
        CaseSpec(
            "heat-rp-b",
            "temperature step across k = 0.1 | 0.05",
            (0.0, 10.0),
            "fine-grid-self",
            0.5,
            (0.5, 0.1),
            _riemann(0.1, 0.05),
            t_end=8.0,
            reference_dx=0.001,
        ),
    ]
}


def get_case(case_id: str) -> CaseSpec:
    try:
        return CASES[case_id]
    except KeyError:
        raise ConfigurationError(
            f"unknown case {case_id!r}; choose from {', '.join(CASES)}"
        ) from None


def block_average(fine: np.ndarray, ratio: int) -> np.ndarray:
    """Average consecutive groups of ``ratio`` fine cells."""
    if fine.shape[0] % ratio:
        raise ConfigurationError(f"{fine.shape[0]} cells do not split into groups of {ratio}")
    return fine.reshape(fine.shape[0] // ratio, ratio, *fine.shape[1:]).mean(axis=1)


def refinement_ratio(coarse_dx: float, fine_dx: float) -> int:
    ratio = coarse_dx / fine_dx
    r = int(round(ratio))
    if r < 1 or not math.isclose(ratio, r, rel_tol=1e-9):
        raise ConfigurationError(f"dx={coarse_dx} is not a multiple of the reference dx={fine_dx}")
    return r
