"""
Unit tests for the experiment records, the discretization firewall and
small runs of every study.

Author: Ahmad Yateem
"""

import math

import numpy as np
import pytest

from configs.config import Config
from experiments import (
    ExperimentReport, ExperimentSpec, ForcingSpec, Resolution, discretization_firewall,
    run_homogenization, run_mass_concentration, run_nonsqueezing_probe, run_stability_check,
    run_torus_approx, run_weak_convergence,
)
from experiments.base import (
    FIREWALL_FLOOR, boundary_clear, decays, difference_trajectory, finite_or_none,
    max_boundary_mass, non_increasing, relative_change, snapshot_at, stride_for,
)
from experiments.torus_approx import band_limited_data, torus_length, torus_points
from propagators import StepScheme, evolve
from propagators.models import free, quintic, rescaled_truncated
from spectral_core.field import mass, sample_profile
from spectral_core.grid import TorusGrid
from symmetries import build_cutoffs
from utils.exceptions import GridMismatchError, HypothesisCheckError, ValidationError


@pytest.fixture
def tiny_trajectory(small_grid):
    """Free evolution of a gaussian sampled at four steps."""
    u0 = sample_profile(small_grid, 'gaussian')
    return evolve(free(), u0, 0.25, StepScheme('strang_exact', 1.0 / 16))


class TestExperimentRecords:
    """Tests for specs, reports and resolutions."""

    def test_unknown_kind(self):
        """Test that an unknown experiment kind is rejected."""
        with pytest.raises(ValidationError) as exc_info:
            ExperimentSpec('scattering', 'n', [1, 2])
        assert exc_info.value.field == 'experiment.kind'

    @pytest.mark.parametrize('sweep', [[], [1, 3, 2]])
    def test_bad_sweep(self, sweep):
        """Test that empty and unsorted sweeps are rejected."""
        with pytest.raises(ValidationError):
            ExperimentSpec('homogenization', 'n', sweep)

    def test_descending_sweep_allowed(self):
        """Test that a descending sweep is kept as given."""
        assert ExperimentSpec('stability', 'eps', [0.4, 0.2, 0.1]).sweep == [0.4, 0.2, 0.1]

    def test_report_verdicts(self):
        """Test no-data, pass and fail verdicts."""
        report = ExperimentReport('stability', 'eps', ['difference'], ['difference_error'])
        assert report.verdict == 'no-data'
        assert report.header == ['eps', 'difference', 'difference_error']
        report.rows = [{'eps': 0.1, 'difference': 1.0}]
        report.flags = {'firewall': True, 'linear_response': True}
        assert report.verdict == 'pass'
        report.flags['linear_response'] = False
        assert report.verdict == 'fail'
        assert report.column('difference_error') == [None]

    def test_refined_resolution(self, small_grid):
        """Test that refinement doubles nodes and halves the step."""
        refined = Resolution(small_grid, 0.01).refined()
        assert refined.grid.points == 128
        assert refined.grid.length == small_grid.length
        assert refined.dt == 0.005
        assert Resolution(small_grid, 0.01).at(False).dt == 0.01

    def test_place_keeps_mass(self, small_grid):
        """Test that placing data on the refined grid is exact for band-limited fields."""
        u = sample_profile(small_grid, 'gaussian')
        placed = Resolution(small_grid, 0.01).refined().place(u)
        assert placed.grid.points == 128
        assert mass(placed) == pytest.approx(mass(u), rel=1e-12)


class TestFirewall:
    """Tests for the re-run at doubled resolution."""

    def test_relative_change_floor(self):
        """Test that tiny absolute changes count as agreement."""
        assert relative_change(1e-12, 2e-12) == 0.0
        assert relative_change(1.0, 1.5) == pytest.approx(0.5)
        assert relative_change(0.0, 1.0) == pytest.approx(1.0 / FIREWALL_FLOOR)

    def test_only_end_rows_rerun(self, mocker):
        """Test that the first and last sweep values are re-run once each."""
        run_row = mocker.Mock(side_effect=lambda value, refined: {'value': float(value)})
        rows = [{'value': float(v)} for v in (1, 2, 3)]
        firewall = discretization_firewall(run_row, [1, 2, 3], rows, ['value'], tolerance=0.1)
        assert firewall['passed']
        assert [call.args for call in run_row.call_args_list] == [(1, True), (3, True)]
        assert len(firewall['checks']) == 2

    def test_large_change_fails(self):
        """Test that a 20% change fails a 10% tolerance."""
        rows = [{'value': 1.0}]
        firewall = discretization_firewall(lambda value, refined: {'value': 1.2}, [1], rows,
                                           ['value'], tolerance=0.1)
        assert not firewall['passed']
        assert firewall['checks'][0]['change'] == pytest.approx(0.2)

    def test_missing_cells_skipped(self):
        """Test that diverged (None) cells are not compared."""
        rows = [{'value': None}]
        firewall = discretization_firewall(lambda value, refined: {'value': 5.0}, [1], rows, ['value'])
        assert firewall['passed']
        assert firewall['checks'] == []


class TestHelpers:
    """Tests for trajectory helpers and verdict predicates."""

    def test_difference_of_equal_runs(self, tiny_trajectory):
        """Test that a trajectory minus itself is zero."""
        difference = difference_trajectory(tiny_trajectory, tiny_trajectory)
        assert all(mass(s) == 0.0 for s in difference.snapshots)

    def test_difference_needs_same_times(self, tiny_trajectory, small_grid):
        """Test that trajectories sampled differently are refused."""
        other = evolve(free(), tiny_trajectory.initial, 0.5, StepScheme('strang_exact', 1.0 / 16))
        with pytest.raises(ValidationError):
            difference_trajectory(tiny_trajectory, other)

    def test_snapshot_at(self, tiny_trajectory):
        """Test lookup of a stored time and refusal of a missing one."""
        assert snapshot_at(tiny_trajectory, 0.125) is tiny_trajectory.snapshots[2]
        with pytest.raises(ValidationError):
            snapshot_at(tiny_trajectory, 0.1)

    def test_predicates(self):
        """Test the monotonicity and decay predicates."""
        assert non_increasing([1.0, 1.05, 0.5], slack=0.10)
        assert not non_increasing([1.0, 1.2], slack=0.10)
        assert decays([1.0, 0.5, 0.2], 0.25)
        assert not decays([1.0, 0.5], 0.25)
        assert decays([0.0, 0.0], 0.25)
        assert not decays([], 0.25)

    def test_finite_or_none(self):
        """Test that non-finite values become None."""
        assert finite_or_none(math.nan) is None
        assert finite_or_none(None) is None
        assert finite_or_none(np.float64(2.0)) == 2.0

    def test_stride_for(self):
        """Test that halving dt doubles the stride."""
        assert stride_for(1.0, 1.0 / 64) == 2
        assert stride_for(1.0, 1.0 / 128) == 4
        assert stride_for(1.0, 0.5) == 1

    def test_max_boundary_mass(self, medium_grid):
        """Test that centered data stays clear of the edge band and edge data is caught."""
        scheme = StepScheme('strang_exact', 1.0 / 32)
        centered = evolve(free(), sample_profile(medium_grid, 'sech'), 0.125, scheme)
        edge = evolve(free(), sample_profile(medium_grid, 'sech', center=15.0), 0.125, scheme)
        assert max_boundary_mass([centered]) < Config.BOUNDARY_MASS_LIMIT
        assert max_boundary_mass([centered, edge]) > 0.1
        assert max_boundary_mass([]) == 0.0

    def test_boundary_clear(self, mocker):
        """Test the limit and the warning on failure."""
        warning = mocker.patch('experiments.base.logger.warning')
        assert boundary_clear(0.0)
        warning.assert_not_called()
        assert not boundary_clear(10 * Config.BOUNDARY_MASS_LIMIT)
        assert warning.call_args.kwargs['extra']['boundary_mass'] == 10 * Config.BOUNDARY_MASS_LIMIT


class TestHomogenizationRun:
    """Tests for the oscillatory-coefficient sweep."""

    def test_small_sweep(self, cosine_coefficient):
        """Test rows, columns and the hypothesis column for two frequencies."""
        u0 = sample_profile(TorusGrid(8.0, 128), 'sech', amplitude=0.5)
        report = run_homogenization(cosine_coefficient, [1, 2], u0, 0.0625, dt=0.0625 / 16)
        assert report.header == ['n', 'hypothesis', 'l6_difference', 'linf_l2_difference',
                                 'l6_error', 'linf_l2_error']
        assert report.column('n') == [1, 2]
        for row in report.rows:
            expected = 1.0 / (1.0 + 4 * math.pi ** 2 * row['n'] ** 2)
            assert row['hypothesis'] == pytest.approx(expected, abs=1e-10)
            assert row['l6_difference'] > 0
        assert report.summary['averaged_lam'] == pytest.approx(1.0)
        assert set(report.flags) == {'firewall', 'decay', 'no_increase', 'boundary_mass'}
        assert report.provenance['scheme'] == 'strang_exact'

    def test_short_torus_fails_on_boundary_mass(self, cosine_coefficient):
        """Test that sech tails at the edge of a length-8 torus fail the verdict."""
        u0 = sample_profile(TorusGrid(8.0, 128), 'sech', amplitude=0.5)
        report = run_homogenization(cosine_coefficient, [1, 2], u0, 0.0625, dt=0.0625 / 16)
        assert report.summary['max_boundary_mass'] > Config.BOUNDARY_MASS_LIMIT
        assert report.flags['boundary_mass'] is False
        assert report.verdict == 'fail'

    def test_long_torus_clears_boundary(self, cosine_coefficient, medium_grid):
        """Test that the same data on a length-32 torus keep the edge band empty."""
        u0 = sample_profile(medium_grid, 'sech', amplitude=0.5)
        report = run_homogenization(cosine_coefficient, [1, 2], u0, 0.0625, dt=0.0625 / 16)
        assert report.summary['max_boundary_mass'] < Config.BOUNDARY_MASS_LIMIT
        assert report.flags['boundary_mass'] is True

    def test_hypothesis_failure(self, cosine_coefficient, mocker):
        """Test that a coefficient that does not homogenize stops the run."""
        mocker.patch('experiments.homogenization.homogenizes', return_value=False)
        u0 = sample_profile(TorusGrid(8.0, 64), 'sech')
        with pytest.raises(HypothesisCheckError):
            run_homogenization(cosine_coefficient, [1, 2], u0, 0.0625)

    def test_non_positive_time(self, cosine_coefficient, small_grid):
        """Test that T must be positive."""
        with pytest.raises(ValidationError):
            run_homogenization(cosine_coefficient, [1], sample_profile(small_grid, 'sech'), 0.0)


class TestStabilityRun:
    """Tests for the linear-response sweep."""

    @pytest.mark.parametrize('mode', ['forcing', 'data', 'both'])
    def test_free_flow_responds_linearly(self, small_grid, mode):
        """Test that the linear equation gives slope one in every mode."""
        u0 = sample_profile(small_grid, 'gaussian')
        report = run_stability_check(free(), u0, ForcingSpec(), [0.0, 0.01, 0.02, 0.04], 0.25,
                                     mode=mode, dt=0.25 / 32)
        assert report.summary['usable_rows'] == 3
        assert report.summary['slope'] == pytest.approx(1.0, abs=1e-6)
        assert report.flags['linear_response']
        assert report.column('diverged') == [0, 0, 0, 0]

    def test_unknown_mode(self, small_grid):
        """Test that an unknown mode is rejected."""
        with pytest.raises(ValidationError) as exc_info:
            run_stability_check(free(), sample_profile(small_grid, 'gaussian'), ForcingSpec(),
                                [0.1], 0.25, mode='noise')
        assert exc_info.value.field == 'mode'

    def test_negative_eps(self, small_grid):
        """Test that negative amplitudes are rejected."""
        with pytest.raises(ValidationError):
            run_stability_check(free(), sample_profile(small_grid, 'gaussian'), ForcingSpec(),
                                [-0.1, 0.1], 0.25)

    def test_forcing_profile(self, small_grid):
        """Test the forcing record and its sampled profile."""
        spec = ForcingSpec(amplitude=2.0, center=1.0)
        assert spec.as_dict()['amplitude'] == 2.0
        samples = np.abs(spec.field(small_grid).samples())
        assert small_grid.nodes[int(np.argmax(samples))] == pytest.approx(1.0)


class TestNonsqueezingRun:
    """Tests for the cylinder-defect search."""

    def test_aligned_direction_attains_free_prediction(self, small_grid):
        """Test that the aligned direction reaches |base| + r for the free flow."""
        z_star = sample_profile(small_grid, 'gaussian', center=-1.0)
        ell = sample_profile(small_grid, 'gaussian', center=1.0)
        report = run_nonsqueezing_probe(z_star, ell, 0.1 + 0.2j, 0.5, 0.25, free(),
                                        sample_count=4, seed=3)
        assert len(report.rows) == 5
        assert report.rows[0]['aligned'] == 1
        assert report.summary['argmax_direction'] == 0
        assert report.summary['free_prediction_gap'] < 1e-10
        assert report.summary['witness']
        assert report.flags['radius_attained']

    def test_time_zero_skips_evolution(self, small_grid):
        """Test that T = 0 pairs the data directly."""
        z_star = sample_profile(small_grid, 'gaussian')
        report = run_nonsqueezing_probe(z_star, z_star, 0.0, 0.25, 0.0, free(), sample_count=2)
        assert report.rows[0]['defect'] == pytest.approx(report.summary['free_prediction'])

    def test_invalid_radius(self, small_grid):
        """Test that the ball radius must be positive."""
        z_star = sample_profile(small_grid, 'gaussian')
        with pytest.raises(ValidationError):
            run_nonsqueezing_probe(z_star, z_star, 0.0, 0.0, 0.25, free())

    def test_grid_mismatch(self, small_grid, medium_grid):
        """Test that the functional must live on the data grid."""
        with pytest.raises(GridMismatchError):
            run_nonsqueezing_probe(sample_profile(small_grid, 'gaussian'),
                                   sample_profile(medium_grid, 'gaussian'), 0.0, 0.5, 0.25, free())


class TestWeakConvergenceRun:
    """Tests for pairings of truncated flows with escaping bumps."""

    @pytest.fixture
    def weak_grid(self):
        """Grid with a safe shift window of |x| <= 12."""
        return TorusGrid(32.0, 128)

    def test_small_sweep(self, weak_grid):
        """Test the gap columns for one functional and one time."""
        core = sample_profile(weak_grid, 'gaussian', amplitude=0.5)
        bump = sample_profile(weak_grid, 'gaussian', amplitude=0.5)
        report = run_weak_convergence(core, bump, [2.0, 8.0], [4.0, 8.0], [core], [0.0625])
        assert report.header == ['x_shift', 'M', 'gap_g0_t0.0625', 'max_gap']
        assert report.column('M') == [4.0, 8.0]
        assert all(row['max_gap'] == row['gap_g0_t0.0625'] for row in report.rows)
        assert set(report.flags) == {'firewall', 'monotone', 'decay', 'boundary_mass'}
        assert report.flags['boundary_mass']
        assert all(row['boundary_mass'] < Config.BOUNDARY_MASS_LIMIT for row in report.rows)

    def test_shift_outside_safe_window(self, weak_grid):
        """Test that a shift reaching the edge is refused."""
        core = sample_profile(weak_grid, 'gaussian')
        with pytest.raises(ValidationError) as exc_info:
            run_weak_convergence(core, core, [13.0], [4.0], [core], [0.0625])
        assert exc_info.value.field == 'x_shift_list'

    def test_list_length_mismatch(self, weak_grid):
        """Test that every shift needs a truncation scale."""
        core = sample_profile(weak_grid, 'gaussian')
        with pytest.raises(ValidationError):
            run_weak_convergence(core, core, [2.0, 4.0], [4.0], [core], [0.0625])


class TestTorusApproxRun:
    """Tests for the line-to-torus comparison."""

    def test_length_and_points(self):
        """Test the power-of-two circumference and node count."""
        assert torus_length(2.0, 1.0, 0.1, 1.0) == 32.0
        assert torus_length(2.0, 2.0, 0.05, 0.25) == 64.0
        assert torus_points(2.0, 1.0, 32.0) == 512

    def test_band_limited_data_mass(self):
        """Test that data are scaled to the requested L^2 norm."""
        u0 = band_limited_data(TorusGrid(32.0, 512), 4.0, 0.5, 'sech')
        assert math.sqrt(mass(u0)) == pytest.approx(0.5, rel=1e-12)
        assert mass(band_limited_data(TorusGrid(32.0, 512), 4.0, 0.0)) == 0.0

    def test_single_row(self):
        """Test one (K, eps) pair end to end."""
        report = run_torus_approx(0.5, 2.0, [1.0], [1.0], 0.1, profile='sech')
        row = report.rows[0]
        assert row['length'] == 32.0
        assert row['points'] == 512
        assert row['discrepancy'] >= 0.0
        assert row['initial_residual'] < 1.0
        assert row['boundary_mass'] < Config.BOUNDARY_MASS_LIMIT
        assert report.flags['boundary_mass']
        assert 'firewall' in report.provenance

    def test_list_length_mismatch(self):
        """Test that K and eps lists must pair up."""
        with pytest.raises(ValidationError) as exc_info:
            run_torus_approx(0.5, 2.0, [1.0, 2.0], [1.0], 0.1)
        assert exc_info.value.field == 'eps_list'

    def test_mass_concentration(self):
        """Test that the mass outside nested cutoffs is small and ordered."""
        u0 = band_limited_data(TorusGrid(32.0, 512), 4.0, 0.5, 'sech')
        cutoffs = build_cutoffs(2.0, 1.0, 0.1, 1.0, 32.0, u0)
        report = run_mass_concentration(u0, cutoffs, rescaled_truncated(2.0, 1.0), 0.1)
        assert report.column('level') == [1, 2, 3, 4]
        assert report.flags['below_eps']
        assert report.flags['nested']


@pytest.mark.slow
class TestExperimentTrends:
    """Tests that each study reports its expected trend with a passing verdict."""

    def test_homogenization_distance_decays(self, cosine_coefficient):
        """Test that the distance to the averaged flow falls at least fourfold from n=1 to n=4."""
        u0 = sample_profile(TorusGrid(32.0, 512), 'sech')
        report = run_homogenization(cosine_coefficient, [1, 2, 4], u0, 0.25, dt=2.0 ** -14)
        column = report.column('l6_difference')
        assert non_increasing(column, 0.10)
        assert decays(column, 0.25)
        assert report.verdict == 'pass'

    def test_torus_discrepancy_falls(self):
        """Test that the line-to-torus discrepancy falls along (K, eps)."""
        report = run_torus_approx(1.0, 2.0, [1.0, 2.0, 4.0], [0.5, 0.25, 0.125], 0.1)
        column = report.column('discrepancy')
        assert non_increasing(column, 0.0)
        assert decays(column, 0.5)
        assert report.flags['concentration_below_eps']
        assert report.verdict == 'pass'

    def test_weak_limit_gap_decays(self):
        """Test that pairing gaps shrink as the bump escapes and the truncation lifts."""
        grid = TorusGrid(256.0, 2048)
        core = sample_profile(grid, 'sech')
        bump = sample_profile(grid, 'gaussian', amplitude=0.5)
        functionals = [sample_profile(grid, 'gaussian'), sample_profile(grid, 'gaussian', center=2.0)]
        report = run_weak_convergence(core, bump, [8.0, 16.0, 32.0, 64.0], [0.25, 0.5, 1.0, 2.0],
                                      functionals, [0.25, 0.5])
        gaps = report.column('max_gap')
        assert non_increasing(gaps, 0.10)
        assert decays(gaps, 0.25)
        assert report.verdict == 'pass'

    def test_nonsqueezing_radius_attained(self, medium_grid):
        """Test that the quintic flow still pushes the functional at least r away from alpha."""
        z_star = sample_profile(medium_grid, 'gaussian', amplitude=0.5, center=-1.0)
        ell = sample_profile(medium_grid, 'gaussian', center=1.0)
        r = 0.25
        report = run_nonsqueezing_probe(z_star, ell, 0.0, r, 0.5, quintic(1.0), sample_count=16, seed=7)
        assert report.summary['max_defect'] >= r
        assert report.summary['witness']
        assert report.flags['radius_attained']
        assert report.verdict == 'pass'

    def test_stability_response_proportional_to_eps(self, sech_data):
        """Test slope one of the quintic response to forcing amplitude."""
        report = run_stability_check(quintic(1.0), sech_data, ForcingSpec(frequency=1.0),
                                     [1e-4, 2e-4, 4e-4, 8e-4], 0.5)
        differences = report.column('difference')
        assert all(b > a for a, b in zip(differences, differences[1:]))
        assert report.summary['slope'] == pytest.approx(1.0, abs=0.05)
        assert report.verdict == 'pass'
