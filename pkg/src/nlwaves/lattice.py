"""Direct particle-chain model: periodic nearest-neighbor lattice in strain form.

The chain integrates

    u_tt = D2 (u + eps^n u^(n+1)),   D2 g = (g_{j+1} - 2 g_j + g_{j-1}) / delta^2

on M sites with spacing delta = 2L/M, independent of the spectral solver so
the two can cross-validate.  The RK4 inner loop is the hot kernel: it carries
a numba-jitted implementation with a pure-numpy fallback, selected at import
time by the NLWAVES_DISABLE_NUMBA environment variable (any value other than
"0" disables the JIT).  ``benchmarks/bench_chain.py`` compares the two paths.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

from . import shapes
from .errors import CompatibilityError, InvalidSpecError, NonFiniteError

NUMBA_ENV_VAR = "NLWAVES_DISABLE_NUMBA"

_use_numba = os.environ.get(NUMBA_ENV_VAR, "0") == "0"
if _use_numba:
    try:
        from numba import njit
    except ImportError:
        _use_numba = False

NUMBA_ENABLED = _use_numba

_STEP_ROUNDING = 1e-9


@dataclass(frozen=True)
class Chain:
    """Periodic particle chain: strains and strain velocities at M sites."""

    half_length: float
    strain: np.ndarray
    velocity: np.ndarray
    t: float

    def __post_init__(self):
        strain = np.asarray(self.strain, dtype=float)
        velocity = np.asarray(self.velocity, dtype=float)
        if strain.ndim != 1 or strain.shape != velocity.shape:
            raise ValueError("strain and velocity must be equal-length 1-d arrays")
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        object.__setattr__(self, "strain", strain)
        object.__setattr__(self, "velocity", velocity)

    @property
    def sites(self) -> int:
        return self.strain.shape[0]

    @property
    def delta(self) -> float:
        # spacing is defined as 2L/M so M * delta = 2L holds exactly
        return 2.0 * self.half_length / self.sites

    @property
    def positions(self) -> np.ndarray:
        return -self.half_length + self.delta * np.arange(self.sites)


def second_difference(values: np.ndarray, delta: float) -> np.ndarray:
    """Centered second difference with periodic wraparound."""
    values = np.asarray(values, dtype=float)
    inv = 1.0 / (delta * delta)
    return (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) * inv


def lattice_rhs(chain: Chain, epsilon: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Strain-form right-hand side: (du/dt, d(u_t)/dt)."""
    coef = epsilon**n
    with np.errstate(over="ignore", invalid="ignore"):
        g = chain.strain + coef * chain.strain ** (n + 1)
    return chain.velocity.copy(), second_difference(g, chain.delta)


def initial_velocity(v0_spec, delta: float, sites: np.ndarray, half_length: float) -> np.ndarray:
    """Discrete initial strain rate: symmetric quotient of v0 at half-offsets.

    v0 must be evaluable at x +/- delta/2 analytically; sample arrays are
    rejected because interpolation would pollute the quotient.
    """
    if isinstance(v0_spec, (list, tuple, np.ndarray)) or (
        isinstance(v0_spec, dict) and v0_spec.get("shape") == "samples"
    ):
        raise InvalidSpecError("initial velocity needs an analytic v0, not samples")
    v0 = shapes.make_callable(v0_spec, half_length)
    return (v0(sites + delta / 2.0) - v0(sites - delta / 2.0)) / delta


def make_chain(u0_spec, v0_spec, half_length: float, sites: int) -> Chain:
    """Chain at t=0: strains from u0, velocities from the discrete quotient of v0."""
    delta = 2.0 * half_length / sites
    x = -half_length + delta * np.arange(sites)
    strain = shapes.evaluate_on_nodes(u0_spec, x, half_length)
    velocity = initial_velocity(v0_spec, delta, x, half_length)
    return Chain(half_length, strain, velocity, 0.0)


def displacement_to_strain(displacement: np.ndarray, delta: float) -> np.ndarray:
    """Forward difference quotient (w_{j+1} - w_j)/delta with wraparound."""
    w = np.asarray(displacement, dtype=float)
    return (np.roll(w, -1) - w) / delta


def strain_to_displacement(strain: np.ndarray, delta: float) -> np.ndarray:
    """Discrete anti-difference with the w_0 = 0 gauge.

    Requires the periodic strain sum to vanish (tolerance 1e-10 * M);
    otherwise no periodic displacement exists.
    """
    u = np.asarray(strain, dtype=float)
    total = float(np.sum(u))
    if abs(total) > 1e-10 * u.size:
        raise CompatibilityError(
            f"strain sums to {total:.3e} over the period; cannot integrate"
        )
    w = np.empty_like(u)
    w[0] = 0.0
    np.cumsum(u[:-1] * delta, out=w[1:])
    return w


# --- RK4 chain stepper: numpy fallback and numba twin -----------------------
#
# Both implementations share the same arithmetic structure so their results
# agree to round-off; keep edits in sync.


def _accel_numpy(u, delta, coef, n):
    with np.errstate(over="ignore", invalid="ignore"):
        g = u + coef * u ** (n + 1)
    inv = 1.0 / (delta * delta)
    return (np.roll(g, -1) - 2.0 * g + np.roll(g, 1)) * inv


def _rk4_chain_step_numpy(u, ut, delta, coef, n, dt):
    a1 = _accel_numpy(u, delta, coef, n)
    u2 = u + 0.5 * dt * ut
    ut2 = ut + 0.5 * dt * a1
    a2 = _accel_numpy(u2, delta, coef, n)
    u3 = u + 0.5 * dt * ut2
    ut3 = ut + 0.5 * dt * a2
    a3 = _accel_numpy(u3, delta, coef, n)
    u4 = u + dt * ut3
    ut4 = ut + dt * a3
    a4 = _accel_numpy(u4, delta, coef, n)
    w = dt / 6.0
    return (
        u + w * (ut + 2.0 * ut2 + 2.0 * ut3 + ut4),
        ut + w * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
    )


def _accel_loops(u, delta, coef, n):
    m = u.shape[0]
    g = u + coef * u ** (n + 1)
    inv = 1.0 / (delta * delta)
    out = np.empty(m)
    for j in range(m):
        jp = j + 1 if j + 1 < m else 0
        jm = j - 1 if j >= 1 else m - 1
        out[j] = (g[jp] - 2.0 * g[j] + g[jm]) * inv
    return out


def _rk4_chain_step_loops(u, ut, delta, coef, n, dt):
    a1 = _accel_loops(u, delta, coef, n)
    u2 = u + 0.5 * dt * ut
    ut2 = ut + 0.5 * dt * a1
    a2 = _accel_loops(u2, delta, coef, n)
    u3 = u + 0.5 * dt * ut2
    ut3 = ut + 0.5 * dt * a2
    a3 = _accel_loops(u3, delta, coef, n)
    u4 = u + dt * ut3
    ut4 = ut + dt * a3
    a4 = _accel_loops(u4, delta, coef, n)
    w = dt / 6.0
    return (
        u + w * (ut + 2.0 * ut2 + 2.0 * ut3 + ut4),
        ut + w * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
    )


if NUMBA_ENABLED:
    _accel_loops = njit(cache=True)(_accel_loops)
    _rk4_chain_step_loops = njit(cache=True)(_rk4_chain_step_loops)
    _rk4_chain_step = _rk4_chain_step_loops
else:
    _rk4_chain_step = _rk4_chain_step_numpy


def integrate_chain(
    chain: Chain,
    epsilon: float,
    n: int,
    dt: float,
    t_end: float,
    observers=(),
) -> Chain:
    """March the chain to t_end with RK4; last step shortened to land exactly.

    Observers see the initial chain and every stepped snapshot.  Raises
    NonFiniteError when the state blows up to NaN/inf.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < chain.t:
        raise ValueError(f"t_end {t_end} precedes chain time {chain.t}")
    span = t_end - chain.t
    n_steps = int(np.ceil(span / dt - _STEP_ROUNDING)) if span > 0 else 0
    coef = epsilon**n

    state = chain
    for observer in observers:
        observer(state)
    u, ut, t = state.strain, state.velocity, state.t
    for i in range(n_steps):
        step = (t_end - t) if i == n_steps - 1 else dt
        u, ut = _rk4_chain_step(u, ut, state.delta, coef, n, step)
        t = t_end if i == n_steps - 1 else t + step
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(ut))):
            raise NonFiniteError(f"chain became non-finite at t={t:.6g}")
        state = replace(state, strain=u, velocity=ut, t=t)
        for observer in observers:
            observer(state)
    return state


def write_chain_csv(chain: Chain, path) -> None:
    """Dump a chain as CSV with header ``j,x,u,u_t``."""
    with open(path, "w") as fh:
        fh.write("j,x,u,u_t\n")
        for j, (x, u, ut) in enumerate(
            zip(chain.positions, chain.strain, chain.velocity)
        ):
            fh.write(f"{j},{x:.17g},{u:.17g},{ut:.17g}\n")
