"""Right-hand sides, RK4 time stepping, energy diagnostic, breakdown monitor.

The first-order system in (u, v) is

    u_t = Kd v_x,     v_t = Kd (u + eps^n u^(n+1))_x,

where Kd is the Fourier multiplier with symbol sqrt(b(delta*xi)).  The
classical (dispersionless) counterpart drops Kd.  `delta=None` in ModelConfig
selects the classical system; any positive delta selects the nonlocal one.
Nonlinear products are dealiased by zero padding, and the classical
right-hand side is written in the same conservative form so a delta-sweep
isolates the kernel effect alone.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import shapes
from .errors import BreakdownError, HyperbolicityError, NonFiniteError
from .kernels import Kernel
from .spectral import (
    Field,
    Grid,
    apply_multiplier,
    dealiased_power,
    derivative,
    linf_norm,
    sobolev_scale,
)

_STEP_ROUNDING = 1e-9  # fraction of dt tolerated when counting steps


@dataclass(frozen=True)
class State:
    """Solution snapshot: strain u, auxiliary variable v, current time."""

    u: Field
    v: Field
    t: float

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ValueError("u and v live on different grids")

    @property
    def grid(self) -> Grid:
        return self.u.grid


@dataclass(frozen=True)
class ModelConfig:
    """Model and integration parameters for one run.

    delta=None selects the classical elasticity system (the Dirac limit);
    delta>0 selects the nonlocal system with the configured kernel.  The
    nonlinearity is g(u) = eps^n * u^(n+1); eps=0 gives the linear system.
    """

    kernel: Kernel
    delta: float | None
    dt: float
    t_end: float
    epsilon: float = 0.0
    n: int = 1
    s: float = 3.0
    breakdown_threshold: float = 1e3

    def __post_init__(self):
        if self.delta is not None and self.delta <= 0:
            raise ValueError(f"delta must be positive or None, got {self.delta}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.s <= 2.5:
            raise ValueError(f"diagnostic Sobolev index must exceed 5/2, got {self.s}")
        if self.breakdown_threshold <= 0:
            raise ValueError("breakdown_threshold must be positive")

    @property
    def nonlinear_coefficient(self) -> float:
        return self.epsilon**self.n


def cfl_dt(grid: Grid, kernel: Kernel, delta: float | None, safety: float = 0.25) -> float:
    """Time step from the unit-wave-speed CFL guard: safety * h / max(k)."""
    if delta is None:
        speed = 1.0
    else:
        speed = float(np.max(kernel.scaled_sqrt_symbol(delta, grid.freqs)))
    return safety * grid.spacing / max(speed, 1e-12)


def _stress_field(state: State, cfg: ModelConfig) -> Field:
    """u + eps^n u^(n+1), the quantity whose gradient drives v_t."""
    coef = cfg.nonlinear_coefficient
    if coef == 0.0:
        return state.u
    return state.u + coef * dealiased_power(state.u, cfg.n + 1)


def nonlocal_rhs(state: State, cfg: ModelConfig) -> tuple[Field, Field]:
    """Time derivatives (u_t, v_t) of the nonlocal system at scale cfg.delta."""
    if cfg.delta is None:
        raise ValueError("nonlocal right-hand side needs a positive delta")
    kvals = cfg.kernel.scaled_sqrt_symbol(cfg.delta, state.grid.freqs)
    du = apply_multiplier(derivative(state.v), kvals)
    dv = apply_multiplier(derivative(_stress_field(state, cfg)), kvals)
    return du, dv


def classical_rhs(state: State, cfg: ModelConfig) -> tuple[Field, Field]:
    """Time derivatives of the classical elasticity system (conservative form)."""
    du = derivative(state.v)
    dv = derivative(_stress_field(state, cfg))
    return du, dv


def select_rhs(cfg: ModelConfig):
    return classical_rhs if cfg.delta is None else nonlocal_rhs


def rk4_step(state: State, cfg: ModelConfig, rhs, dt: float | None = None) -> State:
    """One classical fourth-order Runge-Kutta step of length dt (default cfg.dt)."""
    h = cfg.dt if dt is None else dt
    u, v, t = state.u, state.v, state.t

    k1u, k1v = rhs(state, cfg)
    s2 = State(u + (0.5 * h) * k1u, v + (0.5 * h) * k1v, t + 0.5 * h)
    k2u, k2v = rhs(s2, cfg)
    s3 = State(u + (0.5 * h) * k2u, v + (0.5 * h) * k2v, t + 0.5 * h)
    k3u, k3v = rhs(s3, cfg)
    s4 = State(u + h * k3u, v + h * k3v, t + h)
    k4u, k4v = rhs(s4, cfg)

    w = h / 6.0
    u_new = u + w * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    v_new = v + w * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return State(u_new, v_new, t + h)


def breakdown_monitor(state: State, cfg: ModelConfig) -> float:
    """Wave-breaking indicator: |u|_inf + |u_t|_inf + |u_x|_inf.

    u_t is recomputed from the active right-hand side rather than stored,
    matching the system definition.
    """
    du, _ = select_rhs(cfg)(state, cfg)
    return linf_norm(state.u) + linf_norm(du) + linf_norm(derivative(state.u))


def energy(state: State, cfg: ModelConfig, s: float | None = None) -> float:
    """Weighted Sobolev energy: sqrt(0.5 * int((1+w)(S u)^2 + (S v)^2) dx)
    with S the order-s smoothing multiplier and w = (n+1) eps^n u^n.

    Conserved exactly by the linear (eps=0) semi-discrete flow; a diagnostic
    otherwise.  Raises HyperbolicityError when 1 + w <= 0 anywhere.
    """
    order = cfg.s if s is None else s
    coef = (cfg.n + 1) * cfg.nonlinear_coefficient
    w = coef * state.u.samples**cfg.n if coef != 0.0 else 0.0
    one_plus_w = 1.0 + w
    if np.min(one_plus_w) <= 0.0:
        raise HyperbolicityError(
            f"1 + g'(u) reaches {np.min(one_plus_w):.3e} <= 0 at t={state.t:.6g}"
        )
    lu = sobolev_scale(state.u, order).samples
    lv = sobolev_scale(state.v, order).samples
    h = state.grid.spacing
    return float(np.sqrt(0.5 * h * np.sum(one_plus_w * lu**2 + lv**2)))


def make_initial(u0_spec, v0_spec, grid: Grid) -> State:
    """Build the t=0 state from initial-data specs.

    Only (u0, v0) are stored; the initial strain rate is implied by the
    system and never supplied directly.
    """
    u = Field(grid, shapes.evaluate_on_nodes(u0_spec, grid.nodes, grid.half_length))
    v = Field(grid, shapes.evaluate_on_nodes(v0_spec, grid.nodes, grid.half_length))
    return State(u, v, 0.0)


def integrate(cfg: ModelConfig, initial: State, observers=()) -> State:
    """March the configured system from initial.t to cfg.t_end with RK4.

    The last step is shortened to land on t_end exactly.  Observers are
    invoked on the initial state and after every step.  Raises BreakdownError
    when the wave-breaking monitor exceeds cfg.breakdown_threshold and
    NonFiniteError if the state stops being finite.
    """
    if cfg.t_end < initial.t:
        raise ValueError(f"t_end {cfg.t_end} precedes initial time {initial.t}")
    rhs = select_rhs(cfg)
    span = cfg.t_end - initial.t
    n_steps = int(np.ceil(span / cfg.dt - _STEP_ROUNDING)) if span > 0 else 0

    state = initial
    for observer in observers:
        observer(state)
    for i in range(n_steps):
        monitor = breakdown_monitor(state, cfg)
        if not np.isfinite(monitor):
            raise NonFiniteError(f"state became non-finite at t={state.t:.6g}")
        if monitor > cfg.breakdown_threshold:
            raise BreakdownError(state.t, monitor, cfg.breakdown_threshold)
        if i == n_steps - 1:
            dt = cfg.t_end - state.t
        else:
            dt = cfg.dt
        state = rk4_step(state, cfg, rhs, dt=dt)
        if i == n_steps - 1:
            state = replace(state, t=cfg.t_end)
        for observer in observers:
            observer(state)
    return state
