"""Non-well-balanced baseline: homogeneous Roe step, then an explicit source step.

Kept only to show what the augmented solvers fix; steady states drift
because the source is not part of the Riemann problem.
"""

from __future__ import annotations

from .fluctuation import FluctuationSolver
from .grid import FieldState


class UnbalancedSolver(FluctuationSolver):
    scheme = "unbalanced"

    def __init__(self, system, grid, bc, cfl=0.8, *, fast=True, case=None):
        super().__init__(system, grid, bc, cfl, balanced=False, fast=fast, case=case)
        self.s0_cells, self.G_cells = system.source_terms()

    def increment(self, U, dt):
        U_star = U + super().increment(U, dt)
        S = self.s0_cells + (self.G_cells @ U_star[..., None])[..., 0]
        return U_star + dt * S - U


def step_unbalanced(state: FieldState, system, grid, bc, cfl: float) -> FieldState:
    return UnbalancedSolver(system, grid, bc, cfl).step(state)
