"""Periodic grid, real fields, and Fourier-multiplier operations.

The domain is the periodic box [-L, L) sampled at N uniform nodes.  Discrete
frequencies are xi_m = m*pi/L for m = -N/2 .. N/2-1 (stored in FFT order).
Fields are value-semantics snapshots: every operation returns a new Field and
never mutates its inputs.  The spectrum is cached lazily and linear field
arithmetic propagates cached spectra, so chained multiplier operations do not
re-transform.

Norm convention: sobolev_norm(f, 0) equals the physical-space L2 norm
(sqrt(h * sum f_j^2)) exactly, i.e. the frequency quadrature carries the
measure weight that makes the discrete Parseval identity exact.
"""

from __future__ import annotations

import numpy as np

from .errors import NonFiniteError


class Grid:
    """Uniform periodic grid on [-L, L) with an even number of nodes."""

    def __init__(self, half_length: float, size: int):
        if half_length <= 0:
            raise ValueError(f"half_length must be positive, got {half_length}")
        if size < 8 or size % 2 != 0:
            raise ValueError(f"size must be even and >= 8, got {size}")
        self.half_length = float(half_length)
        self.size = int(size)
        self.spacing = 2.0 * self.half_length / self.size
        self.nodes = -self.half_length + self.spacing * np.arange(self.size)
        self.nodes.setflags(write=False)
        # FFT-ordered frequencies m*pi/L, m = 0..N/2-1, -N/2..-1
        self.freqs = 2.0 * np.pi * np.fft.fftfreq(self.size, d=self.spacing)
        self.freqs.setflags(write=False)
        self.nyquist_index = self.size // 2

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.half_length == other.half_length
            and self.size == other.size
        )

    def __hash__(self):
        return hash((self.half_length, self.size))

    def __repr__(self):
        return f"Grid(half_length={self.half_length}, size={self.size})"


class Field:
    """Real-valued samples on a Grid with a lazily cached spectrum."""

    __slots__ = ("grid", "_samples", "_spectrum")

    def __init__(self, grid: Grid, samples, spectrum=None):
        samples = np.asarray(samples, dtype=float)
        if samples.shape != (grid.size,):
            raise ValueError(
                f"samples have shape {samples.shape}, expected ({grid.size},)"
            )
        samples = samples.copy() if samples.flags.writeable else samples
        samples.setflags(write=False)
        self.grid = grid
        self._samples = samples
        self._spectrum = spectrum

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.size))

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum) -> "Field":
        """Build a field from FFT coefficients; keeps them cached."""
        spectrum = np.asarray(spectrum, dtype=complex)
        samples = np.fft.ifft(spectrum).real
        samples.setflags(write=False)
        return cls(grid, samples, spectrum=spectrum)

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            self._spectrum = np.fft.fft(self._samples)
        return self._spectrum

    def _combine(self, other_samples, other_spectrum, a, b):
        # linearity: cached spectra combine without a transform
        samples = a * self._samples + b * other_samples
        spectrum = None
        if self._spectrum is not None and other_spectrum is not None:
            spectrum = a * self._spectrum + b * other_spectrum
        samples.setflags(write=False)
        return Field(self.grid, samples, spectrum=spectrum)

    def __add__(self, other):
        if not isinstance(other, Field):
            return NotImplemented
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return self._combine(other._samples, other._spectrum, 1.0, 1.0)

    def __sub__(self, other):
        if not isinstance(other, Field):
            return NotImplemented
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return self._combine(other._samples, other._spectrum, 1.0, -1.0)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        samples = self._samples * scalar
        spectrum = None if self._spectrum is None else self._spectrum * scalar
        samples.setflags(write=False)
        return Field(self.grid, samples, spectrum=spectrum)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def apply_multiplier(f: Field, multiplier) -> Field:
    """Multiply the spectrum pointwise by multiplier(xi) and transform back.

    `multiplier` is a callable evaluated at every grid frequency, or an array
    already aligned with ``f.grid.freqs``.  Real output is guaranteed only for
    even multipliers (kernel symbols are even by construction).
    """
    m = multiplier(f.grid.freqs) if callable(multiplier) else np.asarray(multiplier)
    if m.shape != f.grid.freqs.shape:
        raise ValueError("multiplier values do not match the grid frequency set")
    # non-finite intermediates surface as a typed error, not numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        out = Field.from_spectrum(f.grid, m * f.spectrum)
    if not np.all(np.isfinite(out.samples)):
        raise NonFiniteError("multiplier application produced non-finite samples")
    return out


def derivative(f: Field) -> Field:
    """Spectral x-derivative; the Nyquist mode is zeroed (odd multiplier)."""
    m = 1j * f.grid.freqs.copy()
    m[f.grid.nyquist_index] = 0.0
    return Field.from_spectrum(f.grid, m * f.spectrum)


def sobolev_scale(f: Field, s: float) -> Field:
    """Apply the smoothing/roughening multiplier (1 + xi^2)^(s/2)."""
    return Field.from_spectrum(f.grid, (1.0 + f.grid.freqs**2) ** (s / 2.0) * f.spectrum)


def sobolev_norm(f: Field, s: float) -> float:
    """Discrete Sobolev norm of order s.

    Quadrature of the defining frequency integral with the grid's frequency
    spacing as measure weight, normalized so that s = 0 reproduces the
    physical-space L2 norm exactly.
    """
    g = f.grid
    weights = (1.0 + g.freqs**2) ** s
    return float(np.sqrt(g.spacing / g.size * np.sum(weights * np.abs(f.spectrum) ** 2)))


def linf_norm(f: Field) -> float:
    """Max absolute sample value."""
    return float(np.max(np.abs(f.samples)))


def dealiased_power(f: Field, power: int) -> Field:
    """Pointwise integer power computed without aliasing.

    The product is evaluated on a zero-padded grid of at least
    (power+1)/2 * N points and truncated back, which removes aliasing of a
    degree-`power` product exactly.  Contributions at the +/- Nyquist pair of
    the coarse grid fold into its single shared bin.
    """
    if power < 1 or int(power) != power:
        raise ValueError(f"power must be a positive integer, got {power}")
    if power == 1:
        return f
    n = f.grid.size
    half = n // 2
    padded = int(np.ceil((power + 1) * n / 2))
    padded += padded % 2

    spec = f.spectrum
    fine = np.zeros(padded, dtype=complex)
    fine[:half] = spec[:half]
    fine[padded - half:] = spec[half:]
    with np.errstate(over="ignore", invalid="ignore"):
        product = np.fft.ifft(fine).real * (padded / n)
        product **= power
        fine_spec = np.fft.fft(product) * (n / padded)
        out = np.empty(n, dtype=complex)
        out[:half] = fine_spec[:half]
        out[half] = fine_spec[half] + fine_spec[padded - half]
        out[half + 1:] = fine_spec[padded - half + 1:]
        return Field.from_spectrum(f.grid, out)


def write_field_csv(f: Field, path) -> None:
    """Dump a field as CSV with header ``x,value``, 17 significant digits."""
    with open(path, "w") as fh:
        fh.write("x,value\n")
        for x, v in zip(f.grid.nodes, f.samples):
            fh.write(f"{x:.17g},{v:.17g}\n")
