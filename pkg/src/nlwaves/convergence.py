"""Sweep orchestration and log-log rate estimation.

Three studies, one per quantitative claim:

- ``operator_error``: how far the scaled convolution operator is from the
  identity on a fixed field, against the delta^theta bound.
- ``zero_dispersion_sweep``: nonlocal runs against one classical run with the
  same data, terminal Sobolev error per delta, fitted slope.
- ``lattice_sweep``: chain runs against one classical run, strain and strain
  rate compared on the grid-aligned chain sites.

Both runs of a pair share grid, dt, and dealiasing so discretization error
cancels to leading order in the difference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dynamics, lattice
from .errors import AlignmentError, DegenerateDataError, DegenerateFitError
from .kernels import Kernel
from .spectral import Field, Grid, apply_multiplier, derivative, sobolev_norm

#: errors below this are treated as exact zeros and excluded from log fits
ZERO_ERROR_FLOOR = 1e-14


@dataclass(frozen=True)
class RateFit:
    """Least-squares line through (log delta, log error)."""

    slope: float
    intercept: float
    r_squared: float
    excluded: tuple[float, ...] = ()


@dataclass(frozen=True)
class SweepConfig:
    """Configuration for one convergence sweep."""

    kernel: Kernel
    deltas: tuple[float, ...]
    grid: Grid
    t_end: float
    epsilon: float = 0.1
    n: int = 1
    s: float = 3.0
    theta_expected: float = 2.0
    dt: float | None = None
    u0: object = None
    v0: object = None
    sample_stride: int = 10
    breakdown_threshold: float = 1e3

    def __post_init__(self):
        deltas = tuple(float(d) for d in self.deltas)
        object.__setattr__(self, "deltas", deltas)
        if not deltas or any(d <= 0 for d in deltas):
            raise ValueError("deltas must be positive")
        if any(later >= earlier for later, earlier in zip(deltas[1:], deltas)):
            raise ValueError("deltas must be strictly decreasing")
        if not 0 < self.theta_expected <= 2:
            raise ValueError("theta_expected must be in (0, 2]")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-delta terminal errors, optional time series, and the fitted rate."""

    deltas: tuple[float, ...]
    errors: tuple[float, ...]
    fit: RateFit | None
    degenerate: bool
    times: tuple[float, ...] = ()
    series: tuple[tuple[float, ...], ...] = field(default=())

    def to_dict(self) -> dict:
        d = {
            "deltas": list(self.deltas),
            "errors": list(self.errors),
            "degenerate": self.degenerate,
            "slope": None if self.fit is None else self.fit.slope,
            "intercept": None if self.fit is None else self.fit.intercept,
            "r2": None if self.fit is None else self.fit.r_squared,
            "excluded": [] if self.fit is None else list(self.fit.excluded),
        }
        return d


def fit_rate(pairs) -> RateFit:
    """Fit log(error) = slope * log(delta) + intercept by least squares.

    Pairs with error at or below the zero floor are excluded (and reported in
    the fit's `excluded` field); fewer than two usable pairs raises
    DegenerateFitError.
    """
    pairs = [(float(d), float(e)) for d, e in pairs]
    if any(e < 0 for _, e in pairs):
        raise ValueError("errors must be nonnegative")
    usable = [(d, e) for d, e in pairs if e > ZERO_ERROR_FLOOR]
    excluded = tuple(d for d, e in pairs if e <= ZERO_ERROR_FLOOR)
    if len(usable) < 2:
        raise DegenerateFitError(
            f"need >= 2 positive errors, have {len(usable)}"
        )
    logd = np.log([d for d, _ in usable])
    loge = np.log([e for _, e in usable])
    slope, intercept = np.polyfit(logd, loge, 1)
    pred = slope * logd + intercept
    ss_res = float(np.sum((loge - pred) ** 2))
    ss_tot = float(np.sum((loge - np.mean(loge)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(float(slope), float(intercept), r2, excluded)


def operator_error(
    kernel: Kernel, delta: float, v: Field, s: float, theta: float
) -> tuple[float, float]:
    """Distance of the scaled convolution operator from the identity on v.

    Returns (error, bound_ratio) where error = |Kd v - v| in the order-s
    Sobolev norm and bound_ratio = error / (delta^theta * |v|_{s+theta}).
    A constant bound_ratio across delta is the signature of a sharp rate.
    """
    reference = sobolev_norm(v, s + theta)
    if reference == 0.0:
        raise DegenerateDataError("field has zero norm; bound ratio undefined")
    kv = apply_multiplier(v, lambda xi: kernel.scaled_sqrt_symbol(delta, xi))
    err = sobolev_norm(kv - v, s)
    return err, err / (delta**theta * reference)


class _SnapshotRecorder:
    """Observer that keeps (t, u, v) every `stride` steps plus the last step."""

    def __init__(self, stride: int, n_steps: int):
        self.stride = stride
        self.n_steps = n_steps
        self.count = -1
        self.times = []
        self.snaps = []

    def __call__(self, state):
        self.count += 1
        if self.count % self.stride == 0 or self.count == self.n_steps:
            self.times.append(state.t)
            self.snaps.append((state.u, state.v))


def _n_steps(t_end: float, dt: float) -> int:
    return int(np.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0


def _sweep_dt(cfg: SweepConfig) -> float:
    """Shared step size: the most restrictive CFL guard across the pair."""
    if cfg.dt is not None:
        return cfg.dt
    candidates = [dynamics.cfl_dt(cfg.grid, cfg.kernel, None)]
    candidates += [dynamics.cfl_dt(cfg.grid, cfg.kernel, d) for d in cfg.deltas]
    return min(candidates)


def zero_dispersion_sweep(cfg: SweepConfig) -> ConvergenceReport:
    """Error of the nonlocal system against the classical one, per delta.

    Runs the classical system once, then the nonlocal system for each delta
    with identical initial data, grid, and dt.  The error at each sampled
    time is |u_d - u| + |v_d - v| in the order-(s-1) Sobolev norm; terminal
    errors feed the log-log slope fit.
    """
    dt = _sweep_dt(cfg)
    initial = dynamics.make_initial(cfg.u0, cfg.v0, cfg.grid)
    n_steps = _n_steps(cfg.t_end, dt)

    def run(delta):
        mc = dynamics.ModelConfig(
            kernel=cfg.kernel,
            delta=delta,
            dt=dt,
            t_end=cfg.t_end,
            epsilon=cfg.epsilon,
            n=cfg.n,
            s=cfg.s,
            breakdown_threshold=cfg.breakdown_threshold,
        )
        rec = _SnapshotRecorder(cfg.sample_stride, n_steps)
        dynamics.integrate(mc, initial, observers=(rec,))
        return rec

    reference = run(None)
    order = cfg.s - 1.0
    errors = []
    series = []
    for delta in cfg.deltas:
        rec = run(delta)
        if rec.times != reference.times:
            raise AssertionError("sample times diverged between paired runs")
        errs = tuple(
            sobolev_norm(ud - uc, order) + sobolev_norm(vd - vc, order)
            for (ud, vd), (uc, vc) in zip(rec.snaps, reference.snaps)
        )
        series.append(errs)
        errors.append(errs[-1])

    return _assemble_report(cfg.deltas, errors, tuple(reference.times), series)


def lattice_sweep(cfg: SweepConfig) -> ConvergenceReport:
    """Error of the particle chain against the classical system, per delta.

    Every delta must equal the spectral spacing times an integer so chain
    sites coincide with grid nodes.  The error compares strain and strain
    rate on the chain sites in the order-(s-1) Sobolev norm of the aligned
    coarse grid; the classical strain rate is the spectral derivative of v.
    """
    grid = cfg.grid
    strides = []
    for delta in cfg.deltas:
        ratio = delta / grid.spacing
        stride = int(round(ratio))
        if stride < 1 or abs(ratio - stride) > 1e-9 or grid.size % stride != 0:
            raise AlignmentError(
                f"delta {delta} is not an integer multiple of grid spacing "
                f"{grid.spacing}"
            )
        strides.append(stride)

    dt = _sweep_dt(cfg)
    n_steps = _n_steps(cfg.t_end, dt)
    initial = dynamics.make_initial(cfg.u0, cfg.v0, grid)
    mc = dynamics.ModelConfig(
        kernel=cfg.kernel,
        delta=None,
        dt=dt,
        t_end=cfg.t_end,
        epsilon=cfg.epsilon,
        n=cfg.n,
        s=cfg.s,
        breakdown_threshold=cfg.breakdown_threshold,
    )
    reference = _SnapshotRecorder(cfg.sample_stride, n_steps)
    dynamics.integrate(mc, initial, observers=(reference,))
    # classical strain rate u_t = v_x, sampled once per snapshot
    ref_rate = [derivative(v).samples for _, v in reference.snaps]

    order = cfg.s - 1.0
    errors = []
    series = []
    for delta, stride in zip(cfg.deltas, strides):
        sites = grid.size // stride
        chain = lattice.make_chain(cfg.u0, cfg.v0, grid.half_length, sites)
        rec = _ChainRecorder(cfg.sample_stride, n_steps)
        lattice.integrate_chain(
            chain, cfg.epsilon, cfg.n, dt, cfg.t_end, observers=(rec,)
        )
        if rec.times != reference.times:
            raise AssertionError("sample times diverged between paired runs")
        coarse = Grid(grid.half_length, sites)
        errs = []
        for (cu, cut), (u, _), ut in zip(rec.snaps, reference.snaps, ref_rate):
            du = Field(coarse, cu - u.samples[::stride])
            dut = Field(coarse, cut - ut[::stride])
            errs.append(sobolev_norm(du, order) + sobolev_norm(dut, order))
        series.append(tuple(errs))
        errors.append(errs[-1])

    return _assemble_report(cfg.deltas, errors, tuple(reference.times), series)


class _ChainRecorder:
    """Observer keeping (strain, velocity) every `stride` steps plus the last."""

    def __init__(self, stride: int, n_steps: int):
        self.stride = stride
        self.n_steps = n_steps
        self.count = -1
        self.times = []
        self.snaps = []

    def __call__(self, chain):
        self.count += 1
        if self.count % self.stride == 0 or self.count == self.n_steps:
            self.times.append(chain.t)
            self.snaps.append((chain.strain.copy(), chain.velocity.copy()))


def _assemble_report(deltas, errors, times, series) -> ConvergenceReport:
    try:
        fit = fit_rate(list(zip(deltas, errors)))
        degenerate = False
    except DegenerateFitError:
        fit = None
        degenerate = True
    return ConvergenceReport(
        deltas=tuple(deltas),
        errors=tuple(float(e) for e in errors),
        fit=fit,
        degenerate=degenerate,
        times=times,
        series=tuple(series),
    )
