"""Uniform 1D mesh, cell-averaged state, ghost cells and the CFL step."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from .errors import ConfigurationError
from .linalg import solve


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.b > self.a:
            raise ConfigurationError(f"need b > a, got a={self.a}, b={self.b}")
        if int(self.N) != self.N or self.N < 2:
            raise ConfigurationError(f"need an integer N >= 2, got {self.N}")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.N

    @property
    def centers(self) -> np.ndarray:
        return self.a + (np.arange(1, self.N + 1) - 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.a + np.arange(self.N + 1) * self.dx


def build_grid(a: float, b: float, N: int) -> Grid:
    return Grid(float(a), float(b), int(N) if float(N).is_integer() else N)


def grid_from_dx(a: float, b: float, dx: float) -> Grid:
    """Grid whose cell size is ``dx``; ``(b - a) / dx`` must be an integer."""
    if not dx > 0:
        raise ConfigurationError(f"dx must be positive, got {dx}")
    n = (b - a) / dx
    N = int(round(n))
    if abs(n - N) > 1e-9 * max(1.0, n):
        raise ConfigurationError(f"dx={dx} does not divide [{a}, {b}] into whole cells")
    return build_grid(a, b, N)


@dataclass(frozen=True)
class FieldState:
    """Cell averages ``U`` (shape N x n) at time ``t``; ghosts are (left, right)."""

    t: float
    step: int
    U: np.ndarray
    ghosts: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        U = np.array(self.U, dtype=float)
        if U.ndim != 2:
            raise ConfigurationError(f"state must be N x n, got shape {U.shape}")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)
        if self.ghosts is not None:
            g = np.array(self.ghosts, dtype=float)
            g.setflags(write=False)
            object.__setattr__(self, "ghosts", g)

    @property
    def N(self) -> int:
        return self.U.shape[0]

    @property
    def n(self) -> int:
        return self.U.shape[1]

    def with_ghosts(self) -> np.ndarray:
        """Array of N + 2 rows: left ghost, cells, right ghost."""
        if self.ghosts is None:
            raise ValueError("ghost cells have not been filled")
        return np.vstack([self.ghosts[0], self.U, self.ghosts[1]])


@dataclass(frozen=True)
class Dirichlet:
    value: float


@dataclass(frozen=True)
class Extrapolate:
    pass


Rule = Union[Dirichlet, Extrapolate]


@dataclass(frozen=True)
class BoundarySpec:
    """One rule per (side, component)."""

    left: tuple[Rule, ...]
    right: tuple[Rule, ...]

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise ConfigurationError("left and right boundary rules differ in length")
        for r in (*self.left, *self.right):
            if not isinstance(r, (Dirichlet, Extrapolate)):
                raise ConfigurationError(f"unknown boundary rule {r!r}")

    @classmethod
    def transmissive(cls, n: int) -> "BoundarySpec":
        return cls((Extrapolate(),) * n, (Extrapolate(),) * n)

    @property
    def n(self) -> int:
        return len(self.left)


def cfl_dt(grid: Grid, max_abs_lambda: float, cfl: float) -> float:
    if not 0.0 < cfl <= 1.0:
        raise ConfigurationError(f"CFL number must lie in (0, 1], got {cfl}")
    if not max_abs_lambda > 0.0 or not math.isfinite(max_abs_lambda):
        raise ConfigurationError(f"degenerate system: max |lambda| = {max_abs_lambda}")
    return cfl * grid.dx / max_abs_lambda


def _equilibrium_neighbour(U, A, s0, G, h, sigma):
    # Solve  A (U_right - U_left) = (S_left + S_right) h / 2  for the neighbour
    # at distance h on side sigma (+1 right, -1 left), with S = s0 + G U.
    lhs = A - 0.5 * sigma * h * G
    rhs = A @ U + sigma * h * (s0 + 0.5 * G @ U)
    return solve(lhs, rhs)


def _ghost(U, A, s0, G, dx, sigma, rules: Sequence[Rule]):
    full = _equilibrium_neighbour(U, A, s0, G, dx, sigma)
    half = _equilibrium_neighbour(U, A, s0, G, 0.5 * dx, sigma)
    ghost = full.copy()
    for g, rule in enumerate(rules):
        if isinstance(rule, Dirichlet):
            ghost[g] = full[g] + 2.0 * (rule.value - half[g])
    return ghost


class BoundaryClosure:
    """Affine ghost-cell maps ``ghost = T @ U_adjacent + c`` for both sides.

    The ghost is the discrete-equilibrium continuation of the adjacent cell
    (so a balanced state produces no boundary fluctuation). A Dirichlet
    component is additionally shifted by twice the mismatch between its
    target and the equilibrium value at the boundary face. Without sources
    and with uniform coefficients this is exactly ghost = 2*target - cell for
    Dirichlet components and ghost = cell for extrapolated ones.
    """

    def __init__(self, spec: BoundarySpec, dx: float, A_edges, s0_edges, G_edges):
        self.spec = spec
        n = spec.n
        self.maps = []
        for side, sigma in ((0, -1.0), (1, 1.0)):
            rules = spec.left if side == 0 else spec.right
            A, s0, G = A_edges[side], s0_edges[side], G_edges[side]
            c = _ghost(np.zeros(n), A, s0, G, dx, sigma, rules)
            T = np.column_stack(
                [_ghost(e, A, s0, G, dx, sigma, rules) - c for e in np.eye(n)]
            )
            self.maps.append((T, c))

    @classmethod
    def for_system(cls, spec: BoundarySpec, dx: float, system) -> "BoundaryClosure":
        if spec.n != system.n:
            raise ConfigurationError(
                f"boundary spec has {spec.n} components, system has {system.n}"
            )
        A = system.coefficient_matrices()
        s0, G = system.source_terms()
        idx = [0, -1]
        return cls(spec, dx, A[idx], s0[idx], G[idx])

    def ghosts(self, U) -> np.ndarray:
        (TL, cL), (TR, cR) = self.maps
        return np.stack([TL @ U[0] + cL, TR @ U[-1] + cR])


def apply_boundaries(state: FieldState, spec: BoundarySpec, system, dx: float) -> FieldState:
    closure = BoundaryClosure.for_system(spec, dx, system)
    return replace(state, ghosts=closure.ghosts(state.U))
