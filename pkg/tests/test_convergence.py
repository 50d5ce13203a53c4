"""Rate fitting, operator error, and sweep plumbing (full sweeps live in acceptance)."""

import numpy as np
import pytest

from nlwaves import (
    AlignmentError,
    DegenerateDataError,
    DegenerateFitError,
    Field,
    Grid,
    Kernel,
    SweepConfig,
    fit_rate,
    lattice_sweep,
    operator_error,
    zero_dispersion_sweep,
)

TRI = Kernel.from_name("triangular")
DIRAC = Kernel.from_name("dirac")


class TestFitRate:
    def test_quadratic_synthetic(self):
        deltas = [0.4, 0.2, 0.1, 0.05]
        fit = fit_rate([(d, d**2) for d in deltas])
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.excluded == ()

    def test_linear_synthetic_with_constant(self):
        deltas = [0.4, 0.2, 0.1, 0.05]
        fit = fit_rate([(d, 3.0 * d) for d in deltas])
        assert fit.slope == pytest.approx(1.0, abs=1e-12)
        assert fit.intercept == pytest.approx(np.log(3.0), abs=1e-12)

    def test_zero_entry_excluded_with_flag(self):
        pairs = [(0.4, 0.16), (0.2, 0.04), (0.1, 0.0), (0.05, 0.0025)]
        fit = fit_rate(pairs)
        assert fit.excluded == (0.1,)
        assert fit.slope == pytest.approx(2.0, abs=1e-12)

    def test_fewer_than_two_positive_errors_degenerate(self):
        with pytest.raises(DegenerateFitError):
            fit_rate([(0.4, 0.0), (0.2, 0.0), (0.1, 1e-3)])

    def test_negative_errors_rejected(self):
        with pytest.raises(ValueError):
            fit_rate([(0.4, -1.0), (0.2, 0.1)])


class TestOperatorError:
    @pytest.fixture
    def gaussian_field(self):
        g = Grid(20.0, 1024)
        return Field(g, np.exp(-4.0 * g.nodes**2))

    def test_dirac_error_is_zero(self, gaussian_field):
        err, ratio = operator_error(DIRAC, 0.3, gaussian_field, 3.0, 2.0)
        assert err == 0.0
        assert ratio == 0.0

    def test_zero_field_degenerate(self):
        g = Grid(20.0, 64)
        with pytest.raises(DegenerateDataError):
            operator_error(TRI, 0.3, Field.zeros(g), 3.0, 2.0)

    def test_triangular_error_ratios_near_four_per_halving(self, gaussian_field):
        deltas = [0.4, 0.2, 0.1, 0.05]
        errs = [operator_error(TRI, d, gaussian_field, 3.0, 2.0)[0] for d in deltas]
        ratios = [a / b for a, b in zip(errs, errs[1:])]
        assert all(3.5 < r < 4.3 for r in ratios)

    def test_bound_ratio_plateau_signals_sharp_rate(self, gaussian_field):
        # empirical constancy of the rate constant across a 3-octave range
        deltas = [0.4, 0.2, 0.1, 0.05]
        ratios = [operator_error(TRI, d, gaussian_field, 3.0, 2.0)[1] for d in deltas]
        assert max(ratios) / min(ratios) < 2.0


def small_sweep_config(**kw):
    base = dict(
        kernel=TRI,
        deltas=(0.4, 0.2),
        grid=Grid(10.0, 128),
        t_end=0.2,
        epsilon=0.1,
        n=1,
        s=3.0,
        u0={"shape": "gaussian", "a": 0.5, "b": 2.0},
        v0={"shape": "zero"},
        sample_stride=5,
    )
    base.update(kw)
    return SweepConfig(**base)


class TestSweepConfig:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            small_sweep_config(deltas=(0.1, 0.2))
        with pytest.raises(ValueError):
            small_sweep_config(deltas=(0.2, -0.1))

    def test_theta_range_enforced(self):
        with pytest.raises(ValueError):
            small_sweep_config(theta_expected=3.0)


class TestZeroDispersionSweep:
    def test_dirac_control_errors_vanish(self):
        report = zero_dispersion_sweep(small_sweep_config(kernel=DIRAC))
        assert all(e < 1e-12 for e in report.errors)
        assert report.degenerate
        assert report.fit is None

    def test_initial_error_is_exactly_zero(self):
        report = zero_dispersion_sweep(small_sweep_config())
        for series in report.series:
            assert series[0] == 0.0

    def test_errors_decrease_with_delta(self):
        report = zero_dispersion_sweep(small_sweep_config(deltas=(0.4, 0.2, 0.1)))
        assert report.errors[0] > report.errors[1] > report.errors[2]
        assert report.fit is not None

    def test_times_cover_the_run(self):
        report = zero_dispersion_sweep(small_sweep_config())
        assert report.times[0] == 0.0
        assert report.times[-1] == 0.2


class TestLatticeSweep:
    def test_zero_data_gives_zero_errors(self):
        grid = Grid(10.0, 128)
        h = grid.spacing
        cfg = small_sweep_config(
            grid=grid,
            deltas=(4 * h, 2 * h),
            u0={"shape": "zero"},
            v0={"shape": "zero"},
        )
        report = lattice_sweep(cfg)
        assert all(e == 0.0 for e in report.errors)
        assert report.degenerate

    def test_initial_u_error_zero_but_rate_error_quadratic(self):
        """At t=0 the strain matches exactly; the strain rate differs O(delta^2)."""
        grid = Grid(10.0, 512)
        h = grid.spacing
        deltas = (8 * h, 4 * h, 2 * h)  # coarsest chain still resolves the data
        cfg = small_sweep_config(
            grid=grid,
            deltas=deltas,
            t_end=0.1,
            v0={"shape": "gaussian", "a": 0.5, "b": 1.0},
            sample_stride=10,
        )
        report = lattice_sweep(cfg)
        initial_errors = [series[0] for series in report.series]
        assert all(e > 0 for e in initial_errors)
        slope = np.polyfit(np.log(deltas), np.log(initial_errors), 1)[0]
        assert 1.8 < slope < 2.2

    def test_unaligned_delta_rejected(self):
        grid = Grid(10.0, 128)
        cfg = small_sweep_config(grid=grid, deltas=(0.31, 0.155))
        with pytest.raises(AlignmentError):
            lattice_sweep(cfg)


def test_report_serialization_round_trip():
    report = zero_dispersion_sweep(small_sweep_config())
    d = report.to_dict()
    assert d["deltas"] == [0.4, 0.2]
    assert len(d["errors"]) == 2
    assert d["slope"] is not None
    assert isinstance(d["r2"], float)
