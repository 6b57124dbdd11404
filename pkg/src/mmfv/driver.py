"""The rezoning moving-mesh loop: evolve, rezone, remap, repeat.

Each physical step advances the solution on the frozen mesh, asks the
rezoner for the next mesh, and conservatively remaps onto it. The final
pseudo-time equals the physical step, which the remapped solution is
provably independent of.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .boundary import BoundarySpec
from .config import RunConfig
from .equations import Advection, Euler
from .errors import ConfigError
from .evolve import evolve_step, physical_dt
from .mesh import Mesh, cell_corners
from .output import snapshot_fields, write_diagnostics_csv, write_error_csv, write_vtk
from .problems import (
    DoubleMachReflection,
    EulerSine,
    QuadraticAdvection,
    blast_primitive,
    project_pointwise,
    riemann2d_primitive,
    shu_osher_primitive,
)
from .remap import RemapConfig, remap
from .rezone import RezonePlan, lagrangian_smooth_rezone, random_rezone
from .rng import SplitMix64


@dataclass
class FieldState:
    """Mesh vertices with per-cell averages and geometric moments."""

    verts: np.ndarray
    averages: np.ndarray
    moments: np.ndarray

    def integrated(self) -> np.ndarray:
        return self.averages * self.moments[..., 0:1]


def exact_advected_averages(coeffs, ax: float, ay: float, t: float, moments: np.ndarray):
    """Cell averages of the advected quadratic p(x - a t) from the moment
    translation identity (binomial double sum)."""
    return QuadraticAdvection(coeffs, ax, ay).exact_averages(moments, t)[..., 0]


def error_norms(averages: np.ndarray, moments: np.ndarray, reference: np.ndarray):
    """(volume-weighted L1, plain Linf) of averages - reference."""
    diff = np.abs(averages - reference)
    vol = moments[..., 0]
    l1 = float(np.sum(diff * vol) / np.sum(vol))
    linf = float(np.max(diff))
    return l1, linf


def lipschitz_estimate(velocities: np.ndarray, verts: np.ndarray) -> float:
    """Max one-sided difference quotient of the vertex velocity field.

    Largest component jump of w between index-adjacent vertices divided
    by the current edge length; grows like 1/h for random rezoning.
    """
    est = 0.0
    for axis in (0, 1):
        dw = np.diff(velocities, axis=axis)
        dx = np.diff(verts, axis=axis)
        ln = np.linalg.norm(dx, axis=-1)
        est = max(est, float(np.max(np.max(np.abs(dw), axis=-1) / ln)))
    return est


@dataclass
class ProblemSetup:
    model: object
    bc: BoundarySpec
    initial_averages: object  # corners -> (nx, ny, m)
    reference_averages: object | None = None  # (corners, moments, t) -> (nx, ny, m)
    error_component: int = 0


def build_problem(cfg: RunConfig) -> ProblemSetup:
    period = (cfg.xmax - cfg.xmin, cfg.ymax - cfg.ymin)
    if cfg.problem == "advection_quadratic":
        model = Advection(cfg.ax, cfg.ay)
        prob = QuadraticAdvection(np.asarray(cfg.coeffs), cfg.ax, cfg.ay)
        kind = "exact" if cfg.boundary == "default" else cfg.boundary
        bc = BoundarySpec.all_sides(kind, period=period, analytic=prob.boundary_handle())
        return ProblemSetup(
            model,
            bc,
            lambda corners: prob.exact_averages(geo.exact_moments(corners), 0.0),
            lambda corners, moments, t: prob.exact_averages(moments, t),
        )
    if cfg.problem == "euler_sine":
        model = Euler(cfg.gamma)
        prob = EulerSine(model)
        kind = "periodic" if cfg.boundary == "default" else cfg.boundary
        bc = BoundarySpec.all_sides(kind, period=period)
        return ProblemSetup(
            model,
            bc,
            lambda corners: prob.averages(corners, 0.0),
            lambda corners, moments, t: prob.averages(corners, t),
        )
    model = Euler(cfg.gamma)
    if cfg.problem == "blast":
        bc = BoundarySpec(
            left="reflective", right="reflective", bottom="outflow", top="outflow",
            period=period,
        )
        prim = blast_primitive
    elif cfg.problem == "shu_osher":
        bc = BoundarySpec.all_sides("outflow", period=period)
        prim = shu_osher_primitive
    elif cfg.problem == "riemann2d":
        bc = BoundarySpec.all_sides("outflow", period=period)
        prim = riemann2d_primitive
    elif cfg.problem == "dmr":
        dmr = DoubleMachReflection(model)
        bc = BoundarySpec(
            left="exact", right="outflow", bottom="dmr_bottom", top="dmr_top",
            period=period, analytic=dmr.left_handle(), dmr=dmr,
        )
        prim = dmr.primitive
    else:
        raise ConfigError(f"unhandled problem {cfg.problem}")
    init = lambda corners: project_pointwise(
        lambda x, y: model.from_primitive(prim(x, y)), corners
    )
    return ProblemSetup(model, bc, init)


def initial_state(cfg: RunConfig, setup: ProblemSetup) -> FieldState:
    mesh = Mesh.uniform(cfg.nx, cfg.ny, cfg.bounds)
    corners = mesh.corners()
    moments = geo.exact_moments(corners)
    averages = setup.initial_averages(corners)
    return FieldState(mesh.verts, averages, moments)


@dataclass
class StepDiagnostics:
    step: int
    t: float
    dt: float
    n_levels: int
    min_volume: float
    conservation_residual: float
    lw_max: float = 0.0


@dataclass
class RunResult:
    state: FieldState
    diagnostics: list
    steps: int
    l1: float | None = None
    linf: float | None = None
    levels_mean: float = 1.0
    lw_max: float = 0.0
    runtime_s: float = 0.0
    config: RunConfig | None = None


class Driver:
    """Owns the per-run mutable pieces: RNG stream, rezoner, diagnostics."""

    def __init__(self, cfg: RunConfig, setup: ProblemSetup | None = None):
        self.cfg = cfg
        self.setup = setup or build_problem(cfg)
        self.rng = SplitMix64(cfg.seed)
        self.verts0 = Mesh.uniform(cfg.nx, cfg.ny, cfg.bounds).verts
        self.spacing = Mesh.uniform(cfg.nx, cfg.ny, cfg.bounds).spacing

    def make_plan(self, state: FieldState, t_next: float, dt: float) -> RezonePlan | None:
        cfg = self.cfg
        if cfg.rezoner == "none":
            return None
        if cfg.rezoner == "random":
            return random_rezone(
                self.verts0, t_next, cfg.cr, (cfg.bx, cfg.by), self.rng, self.spacing, dt
            )
        return lagrangian_smooth_rezone(
            state.verts, state.averages, state.moments, self.setup.model,
            dt, cfg.passes, dt,
        )

    def rmm_step(self, state: FieldState, t: float, dt: float, step: int):
        cfg = self.cfg
        setup = self.setup
        v_before = float(np.sum(np.abs(state.integrated())))
        total_before = state.integrated().sum(axis=(0, 1))

        avg1, bflux = evolve_step(
            state.averages, state.moments, state.verts, setup.model, setup.bc, dt, t
        )
        new_state = FieldState(state.verts, avg1, state.moments)
        boundary_total = bflux.copy()
        levels = 1
        lw = 0.0

        plan = self.make_plan(new_state, t + dt, dt)
        iters = 0 if plan is None else 1 + cfg.relax_iters
        for it in range(iters):
            rconf = RemapConfig(
                cfl=cfg.cfl_pseudo, mode=cfg.geometry_mode, forced_levels=cfg.forced_levels
            )
            lw = max(lw, lipschitz_estimate(plan.velocities(new_state.verts), new_state.verts))
            avg2, mom2, info = remap(
                new_state.averages, new_state.moments, new_state.verts,
                plan.target_verts, setup.model, setup.bc, rconf,
                t_phys=t + dt, tau_final=plan.tau_final,
            )
            new_state = FieldState(plan.target_verts, avg2, mom2)
            boundary_total += info["boundary_flux"]
            levels = info["levels"]
            if it < iters - 1:
                plan = self.make_plan(new_state, t + dt, dt)

        total_after = new_state.integrated().sum(axis=(0, 1))
        residual = float(np.max(np.abs(total_after - total_before - boundary_total)))
        residual /= max(v_before, 1e-300)
        diag = StepDiagnostics(
            step=step,
            t=t + dt,
            dt=dt,
            n_levels=levels,
            min_volume=float(np.min(new_state.moments[..., 0])),
            conservation_residual=residual,
            lw_max=lw,
        )
        return new_state, diag

    def run(self) -> RunResult:
        cfg = self.cfg
        setup = self.setup
        t_start = time.perf_counter()
        state = initial_state(cfg, setup)
        diags = []
        t = 0.0
        step = 0
        while t < cfg.final_time - 1e-14 * max(cfg.final_time, 1.0):
            dt = physical_dt(state.verts, state.averages, setup.model, cfg.cfl_physical)
            dt = min(dt, cfg.final_time - t)
            state, diag = self.rmm_step(state, t, dt, step)
            diags.append(diag)
            t += dt
            step += 1
            if cfg.snapshot_every and step % cfg.snapshot_every == 0:
                self._snapshot(state, step)
        result = RunResult(
            state=state, diagnostics=diags, steps=step, config=cfg,
            runtime_s=time.perf_counter() - t_start,
        )
        if diags:
            result.levels_mean = float(np.mean([d.n_levels for d in diags]))
            result.lw_max = float(np.max([d.lw_max for d in diags]))
        if setup.reference_averages is not None:
            corners = cell_corners(state.verts)
            exact_mom = geo.exact_moments(corners)
            ref = setup.reference_averages(corners, exact_mom, t)
            comp = setup.error_component
            result.l1, result.linf = error_norms(
                state.averages[..., comp], exact_mom, ref[..., comp]
            )
        if cfg.snapshot_every:
            self._snapshot(state, step)
        if cfg.diagnostics_csv:
            write_diagnostics_csv(
                cfg.diagnostics_csv,
                [
                    {
                        "step": d.step, "t": d.t, "dt": d.dt, "n_levels": d.n_levels,
                        "min_volume": d.min_volume,
                        "conservation_residual": d.conservation_residual,
                    }
                    for d in diags
                ],
            )
        if cfg.error_csv and result.l1 is not None:
            write_error_csv(
                cfg.error_csv,
                [
                    (
                        f"{cfg.nx}x{cfg.ny}", cfg.nx, cfg.ny, result.l1, result.linf,
                        None, None, result.levels_mean, result.lw_max, result.runtime_s,
                    )
                ],
            )
        return result

    def _snapshot(self, state: FieldState, step: int) -> None:
        cfg = self.cfg
        if not cfg.snapshot_dir:
            return
        path = f"{cfg.snapshot_dir}/{cfg.problem}_{step:06d}.vtk"
        write_vtk(path, state.verts, snapshot_fields(self.setup.model, state.averages))


def run(cfg: RunConfig) -> RunResult:
    return Driver(cfg).run()
