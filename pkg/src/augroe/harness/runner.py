"""Run configurations, error norms, convergence tables and file output."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import ConfigurationError, NumericalFailure
from ..fluctuation import FluctuationSolver
from ..flux import FluxSolver
from ..grid import FieldState, Grid, build_grid, grid_from_dx
from ..unbalanced import UnbalancedSolver
from .cases import CaseSpec, block_average, get_case, refinement_ratio

log = logging.getLogger(__name__)

SCHEMES = ("augmented-fluctuation", "augmented-flux", "unbalanced")
EXACT_FLOOR = 1e-12


@dataclass(frozen=True)
class RunConfig:
    scheme: str = "augmented-fluctuation"
    dx: Optional[float] = None
    cells: Optional[int] = None
    cfl: Optional[float] = None
    steps: Optional[int] = None
    t_end: Optional[float] = None
    residual: Optional[float] = None
    eps_safety: Optional[float] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}; choose from {', '.join(SCHEMES)}")
        if self.dx is not None and self.cells is not None:
            raise ConfigurationError("give either dx or cells, not both")
        if sum(v is not None for v in (self.steps, self.t_end, self.residual)) > 1:
            raise ConfigurationError("give at most one of steps, t_end, residual")
        if self.cfl is not None and not 0.0 < self.cfl <= 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.eps_safety is not None and not self.eps_safety > 0:
            raise ConfigurationError("eps safety factor must be positive")

    def resolve(self, case: CaseSpec) -> "RunConfig":
        """Fill unset fields from the case defaults."""
        cfg = self
        if cfg.dx is None and cfg.cells is None:
            cfg = replace(cfg, dx=case.grids[0])
        if cfg.cfl is None:
            cfg = replace(cfg, cfl=case.cfl)
        if cfg.steps is None and cfg.t_end is None and cfg.residual is None:
            cfg = replace(cfg, steps=case.steps, t_end=case.t_end)
        return cfg

    def grid(self, case: CaseSpec) -> Grid:
        a, b = case.domain
        if self.cells is not None:
            return build_grid(a, b, self.cells)
        return grid_from_dx(a, b, self.dx)


@dataclass
class ErrorReport:
    case: str
    scheme: str
    N: int
    dx: float
    steps: int
    t: float
    wall_time: float
    names: tuple[str, ...]
    # reference name -> {"linf": [...], "l1": [...]}
    norms: dict = field(default_factory=dict)
    identity_residual: float = 0.0
    roe_residual: float = 0.0
    # reference samples at the cell centres, same keys as norms
    references: dict = field(default_factory=dict, repr=False)

    def linf(self, ref: Optional[str] = None) -> np.ndarray:
        return np.asarray(self.norms[ref or self.primary]["linf"])

    def l1(self, ref: Optional[str] = None) -> np.ndarray:
        return np.asarray(self.norms[ref or self.primary]["l1"])

    @property
    def primary(self) -> str:
        return next(iter(self.norms))

    def lines(self) -> list[str]:
        out = [
            f"case: {self.case}",
            f"scheme: {self.scheme}",
            f"cells: {self.N}",
            f"dx: {self.dx:.17g}",
            f"steps: {self.steps}",
            f"t: {self.t:.17g}",
            f"wall_time_s: {self.wall_time:.3f}",
            f"fluctuation_identity_residual: {self.identity_residual:.3e}",
        ]
        if self.scheme == "augmented-flux":
            out.append(f"roe_residual: {self.roe_residual:.3e}")
        for ref, nm in self.norms.items():
            for kind in ("linf", "l1"):
                vals = ", ".join(f"{n}={v:.6e}" for n, v in zip(self.names, nm[kind]))
                out.append(f"{kind}[{ref}]: {vals}")
        return out


def linf_norm(U, ref) -> np.ndarray:
    return np.max(np.abs(np.asarray(U) - np.asarray(ref)), axis=0)


def l1_norm(U, ref, dx: float) -> np.ndarray:
    return dx * np.sum(np.abs(np.asarray(U) - np.asarray(ref)), axis=0)


def make_solver(scheme: str, model, grid, bc, cfl, case_id=None):
    if scheme == "augmented-fluctuation":
        return FluctuationSolver(model, grid, bc, cfl, case=case_id)
    if scheme == "augmented-flux":
        return FluxSolver(model, grid, bc, cfl, check_identity=True, case=case_id)
    if scheme == "unbalanced":
        return UnbalancedSolver(model, grid, bc, cfl, case=case_id)
    raise ConfigurationError(f"unknown scheme {scheme!r}")


def simulate(case: CaseSpec, cfg: RunConfig):
    """Run one configuration; returns (grid, setup, final physical state, solver, seconds)."""
    cfg = cfg.resolve(case)
    grid = cfg.grid(case)
    setup = case.build(grid, cfg.eps_safety)
    solver = make_solver(cfg.scheme, setup.model, grid, setup.bc, cfg.cfl, case.id)
    if isinstance(solver, FluxSolver):
        state0 = solver.initial_state(setup.U0)
    else:
        state0 = FieldState(0.0, 0, setup.U0)
    t0 = time.perf_counter()
    try:
        final = solver.run(state0, steps=cfg.steps, t_end=cfg.t_end, residual=cfg.residual)
    except NumericalFailure as exc:
        if exc.case is None:
            exc.case = case.id
        raise
    elapsed = time.perf_counter() - t0
    if isinstance(solver, FluxSolver):
        theta0 = solver.aug.theta
        if not np.array_equal(final.U[:, solver.n :], theta0):
            raise NumericalFailure("augmented coefficients changed during the run", case=case.id)
        final = solver.physical(final)
    return grid, setup, final, solver, elapsed


_reference_cache: dict = {}


def fine_grid_reference(case: CaseSpec, t_end: float, eps_safety=None) -> np.ndarray:
    """Cell averages of the well-balanced solution at the case's reference dx."""
    key = (case.id, case.reference_dx, t_end, eps_safety)
    if key not in _reference_cache:
        log.info("computing %s reference at dx=%g", case.id, case.reference_dx)
        cfg = RunConfig("augmented-fluctuation", dx=case.reference_dx, t_end=t_end, eps_safety=eps_safety)
        _, _, final, _, _ = simulate(case, cfg)
        _reference_cache[key] = np.array(final.U)
    return _reference_cache[key]


def run_case(case: CaseSpec | str, cfg: RunConfig) -> tuple[FieldState, ErrorReport]:
    if isinstance(case, str):
        case = get_case(case)
    cfg = cfg.resolve(case)
    grid, setup, final, solver, elapsed = simulate(case, cfg)
    x = grid.centers
    refs: dict[str, np.ndarray] = {}
    if case.reference == "fine-grid-self":
        if cfg.t_end is None:
            raise ConfigurationError("fine-grid references need a t_end termination")
        fine = fine_grid_reference(case, cfg.t_end, cfg.eps_safety)
        refs["fine-grid"] = block_average(fine, refinement_ratio(grid.dx, case.reference_dx))
    for name, ev in setup.references.items():
        if getattr(ev, "kind", "steady") == "transient" and final.t <= 0:
            continue
        refs[name] = ev(x, final.t)
    norms = {
        name: {"linf": linf_norm(final.U, ref).tolist(), "l1": l1_norm(final.U, ref, grid.dx).tolist()}
        for name, ref in refs.items()
    }
    for nm in norms.values():
        if not np.all(np.isfinite(nm["linf"])):
            raise NumericalFailure("non-finite error norm", case=case.id)
    report = ErrorReport(
        case.id,
        cfg.scheme,
        grid.N,
        grid.dx,
        final.step,
        final.t,
        elapsed,
        case.names,
        norms,
        identity_residual=getattr(solver, "identity_residual", 0.0),
        roe_residual=getattr(solver, "roe_residual", 0.0),
        references=refs,
    )
    if cfg.out:
        write_outputs(Path(cfg.out), grid, final, report)
    return final, report


def write_outputs(out: Path, grid: Grid, state: FieldState, report: ErrorReport):
    out.mkdir(parents=True, exist_ok=True)
    names = report.names
    refs = report.references
    cols = [grid.centers[:, None], np.asarray(state.U)]
    header = ["x", *names]
    if refs:
        ref = refs[report.primary]
        cols += [ref, np.abs(np.asarray(state.U) - ref)]
        header += [f"{n}_ref" for n in names] + [f"{n}_abs_err" for n in names]
    np.savetxt(
        out / "solution.csv", np.hstack(cols), delimiter=",", fmt="%.17g",
        header=",".join(header), comments="",
    )
    (out / "report.txt").write_text("\n".join(report.lines()) + "\n")


@dataclass
class ConvergenceRow:
    dx: float
    linf: np.ndarray
    l1: np.ndarray
    order: list  # per component: float, "exact" or None on the first row


def observed_order(e1: float, e2: float, dx1: float, dx2: float):
    if e1 < EXACT_FLOOR and e2 < EXACT_FLOOR:
        return "exact"
    if e1 <= 0 or e2 <= 0:
        return math.nan
    return math.log(e1 / e2) / math.log(dx1 / dx2)


def convergence_study(
    case: CaseSpec | str,
    scheme: str,
    dxs: Sequence[float],
    reference: Optional[str] = None,
    out: Optional[str] = None,
    **cfg_kw,
) -> list[ConvergenceRow]:
    if isinstance(case, str):
        case = get_case(case)
    if len(dxs) < 2:
        raise ConfigurationError("a convergence study needs at least two grids")
    rows: list[ConvergenceRow] = []
    for dx in dxs:
        _, rep = run_case(case, RunConfig(scheme, dx=dx, **cfg_kw))
        ref = reference or rep.primary
        linf, l1 = rep.linf(ref), rep.l1(ref)
        if rows:
            prev = rows[-1]
            order = [observed_order(a, b, prev.dx, dx) for a, b in zip(prev.linf, linf)]
        else:
            order = [None] * len(linf)
        rows.append(ConvergenceRow(dx, linf, l1, order))
    if out:
        write_convergence(Path(out), case, rows)
    return rows


def format_convergence(case: CaseSpec, rows: list[ConvergenceRow]) -> list[str]:
    names = case.names
    header = ["dx"] + [f"linf_{n}" for n in names] + [f"l1_{n}" for n in names] + [f"order_{n}" for n in names]
    lines = [",".join(header)]
    for r in rows:
        orders = ["" if o is None else (o if isinstance(o, str) else f"{o:.4f}") for o in r.order]
        vals = [f"{r.dx:.17g}"] + [f"{v:.6e}" for v in r.linf] + [f"{v:.6e}" for v in r.l1] + orders
        lines.append(",".join(vals))
    return lines


def write_convergence(out: Path, case: CaseSpec, rows: list[ConvergenceRow]):
    out.mkdir(parents=True, exist_ok=True)
    (out / "convergence.csv").write_text("\n".join(format_convergence(case, rows)) + "\n")


def exceeded_limits(case: CaseSpec, report: ErrorReport) -> list[str]:
    """Components whose L-inf error breaks the case's limits for this scheme."""
    family = "augmented" if report.scheme.startswith("augmented") else report.scheme
    limits = case.limits.get(family, {})
    bad = []
    for name, lim in limits.items():
        v = report.linf()[report.names.index(name)]
        if not v <= lim:
            bad.append(f"L-inf({name}) = {v:.3e} > {lim:.1e}")
    return bad
