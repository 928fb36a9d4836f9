"""
Unit tests for space-time norms, dispersive kernels, bilinear ratios,
operator norms and the homogenization functional.

Author: Hassan Fouani
"""

import math

import numpy as np
import pytest

from configs.config import Config
from estimates import (
    Commutator, Identity, Mask, Multiplier, NormReport, TorusConjugation, bilinear_check,
    bilinear_ratio, bilinear_sweep, commutator_operator, cross_manifold_operator, dense_norm,
    dispersive_kernel, doubling_ratios, dual_constituents, find_dispersive_length,
    homogenization_defect, homogenizes, indicator,
    kernel_dispersive_constant, kernel_on_nodes, line_kernel, loglog_slope, mismatch_operator,
    operator_norm_L2, oscillatory_sum_check, plateau, scaling_law, spacetime_norm, strichartz_S,
)
from estimates.bilinear import bilinear_grid
from estimates.kernels import kernel_points
from propagators import CoefficientSpec, StepScheme, evolve
from propagators.integrators import Trajectory
from propagators.models import free
from spectral_core.field import SpectralField, inner, sample_profile, synthesize
from spectral_core.grid import TorusGrid
from spectral_core.symbols import bump, custom, mD, sharp_low
from utils.exceptions import ValidationError


@pytest.fixture
def plane_wave_trajectory(small_grid):
    """Free evolution of a unit plane wave over [0, 1]."""
    u0 = sample_profile(small_grid, 'plane_wave', frequency=0.25)
    return evolve(free(), u0, 1.0, StepScheme('strang_exact', 1.0 / 16))


def random_field(grid, seed):
    rng = np.random.default_rng(seed)
    return synthesize(grid, rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points))


class TestReports:
    """Tests for the measured-quantity helpers."""

    def test_norm_report_normalizes_fields(self):
        """Test that the value is a float and the error estimate non-negative."""
        report = NormReport('x', np.float32(2.5), {'b': 1, 'a': 2}, (64, 3), -0.5)
        assert isinstance(report.value, float)
        assert report.quadrature_error_estimate == 0.5
        row = report.as_row()
        assert row['points'] == 64
        assert row['time_samples'] == 3
        assert list(row)[-2:] == ['param_a', 'param_b']

    def test_loglog_slope_of_power_law(self):
        """Test that y = 3 x^2 has slope 2."""
        xs = [1.0, 2.0, 4.0, 8.0]
        assert loglog_slope(xs, [3 * x ** 2 for x in xs]) == pytest.approx(2.0)

    def test_loglog_slope_ignores_non_positive_pairs(self):
        """Test that zero entries are dropped before fitting."""
        assert loglog_slope([0.0, 1.0, 2.0], [5.0, 1.0, 0.5]) == pytest.approx(-1.0)

    def test_loglog_slope_needs_two_points(self):
        """Test that a single usable point raises."""
        with pytest.raises(ValidationError):
            loglog_slope([1.0, 2.0], [1.0, 0.0])

    def test_doubling_ratios(self):
        """Test successive ratios with a zero denominator."""
        assert doubling_ratios([8.0, 4.0, 0.0]) == [2.0, math.inf]


class TestSpacetimeNorms:
    """Tests for Lebesgue norms of sampled trajectories."""

    def test_plane_wave_norms(self, plane_wave_trajectory):
        """Test closed forms for a field of constant modulus one."""
        L = plane_wave_trajectory.grid.length
        energy_norm = spacetime_norm(plane_wave_trajectory, math.inf, 2)
        dispersive = spacetime_norm(plane_wave_trajectory, 5, 10)
        assert energy_norm.value == pytest.approx(math.sqrt(L), rel=1e-12)
        assert dispersive.value == pytest.approx(L ** 0.1, rel=1e-10)
        assert dispersive.quadrature_error_estimate < 1e-10
        assert dispersive.resolution == (64, 17)

    def test_strichartz_sum(self, plane_wave_trajectory):
        """Test that S adds its two constituents."""
        report = strichartz_S(plane_wave_trajectory)
        assert report.value == pytest.approx(report.details['C0L2'] + report.details['L5L10'])
        assert report.details['C0L2'] == pytest.approx(4.0, rel=1e-12)

    def test_dual_constituents(self, plane_wave_trajectory):
        """Test the L^1 L^2 piece on a unit time interval."""
        first, second = dual_constituents(plane_wave_trajectory)
        assert first.value == pytest.approx(4.0, rel=1e-10)
        assert first.params['q'] == 1
        assert second.params['r'] == pytest.approx(10.0 / 9.0)

    def test_single_sample_rejected(self, small_grid):
        """Test that one time sample cannot carry a time integral."""
        u = sample_profile(small_grid, 'gaussian')
        trajectory = Trajectory(None, small_grid, [0.0], [u])
        with pytest.raises(ValidationError):
            spacetime_norm(trajectory, 2, 2)

    def test_exponent_below_one_rejected(self, plane_wave_trajectory):
        """Test that q < 1 raises."""
        with pytest.raises(ValidationError) as exc_info:
            spacetime_norm(plane_wave_trajectory, 0.5, 2)
        assert exc_info.value.field == 'q'


class TestDispersiveKernel:
    """Tests for the frequency-localized torus kernel."""

    def test_fft_matches_direct_sum(self):
        """Test that the node evaluation agrees with direct summation."""
        L, N, t = 8.0, 2.0, 0.3
        points = kernel_points(L, N)
        nodes = -L / 2 + np.arange(points) * L / points
        direct = dispersive_kernel(L, N, t, nodes)
        assert np.max(np.abs(kernel_on_nodes(L, N, t) - direct)) < 1e-12

    def test_time_zero_peak(self):
        """Test that K(0, 0) is the Riemann sum of phi, close to 3 N."""
        assert abs(dispersive_kernel(64.0, 1.0, 0.0, 0.0)) == pytest.approx(3.0, rel=1e-5)
        assert abs(line_kernel(1.0, 0.0, 0.0)) == pytest.approx(3.0, rel=1e-8)

    def test_long_torus_matches_line(self):
        """Test the torus kernel against the oscillatory integral on the line."""
        torus = abs(dispersive_kernel(512.0, 2.0, 1.0, 0.0))
        line = abs(line_kernel(2.0, 1.0, 0.0))
        assert abs(torus - line) / line < 0.05

    def test_too_few_points(self):
        """Test that node counts not exceeding 4LN raise."""
        with pytest.raises(ValidationError):
            kernel_on_nodes(8.0, 2.0, 0.1, points=64)

    @pytest.mark.parametrize('t_min', [0.0, 1.0, 2.0])
    def test_bad_t_min(self, t_min):
        """Test that t_min outside (0, T) raises."""
        with pytest.raises(ValidationError):
            kernel_dispersive_constant(16.0, 1.0, 1.0, t_min)

    def test_dispersive_constant_report(self):
        """Test the sup location and the per-time record."""
        report = kernel_dispersive_constant(32.0, 1.0, 1.0, t_samples=8)
        assert report.value > 0
        assert 0.05 <= report.details['argmax_t'] <= 1.0
        assert -16.0 <= report.details['argmax_x'] < 16.0
        assert max(report.details['per_time']) == report.value
        assert report.params['t_min'] == pytest.approx(0.05)

    def test_length_search_stabilizes(self):
        """Test that the constant is stable once the torus contains the light cone."""
        result = find_dispersive_length(1.0, 1.0, start_length=64.0, max_length=256.0)
        assert result['stable']
        assert result['L0'] == 64.0
        assert result['lengths'] == [64.0, 128.0]


class TestOscillatorySum:
    """Tests for the summation-by-parts comparison."""

    def test_stationary_phase_is_vacuous(self):
        """Test that a constant phase flags the bound as vacuous."""
        result = oscillatory_sum_check(0.0, 0.0, 16.0, bump, 8.0)
        assert result.vacuous
        assert result.ratio == math.inf

    def test_linear_phase_obeys_bound(self):
        """Test a quarter-turn phase step with a smooth profile."""
        result = oscillatory_sum_check(4.0, 0.0, 16.0, bump, 16.0)
        assert not result.vacuous
        assert result.s1 == pytest.approx(math.pi / 2)
        assert result.s2 == pytest.approx(0.0, abs=1e-12)
        assert result.ratio <= 1.0


class TestBilinear:
    """Tests for the bilinear Strichartz ratio."""

    def test_requires_frequency_separation(self):
        """Test that N < 10 M raises."""
        with pytest.raises(ValidationError) as exc_info:
            bilinear_check(1.0, 5.0, trial_count=1)
        assert exc_info.value.field == 'N'

    def test_grid_holds_packets(self):
        """Test the power-of-two grid for M=1, N=16."""
        grid = bilinear_grid(1.0, 16.0, 1.0 / 16)
        assert grid.length == 64.0
        assert grid.points == 8192

    def test_small_check_is_reproducible(self):
        """Test that two runs with one seed give identical ratios."""
        first = bilinear_check(1.0, 16.0, trial_count=2, seed=7, time_samples=17)
        second = bilinear_check(1.0, 16.0, trial_count=2, seed=7, time_samples=17)
        assert first.details['ratios'] == second.details['ratios']
        assert first.value == max(first.details['ratios'])
        assert 0 < first.value < math.inf

    def test_zero_factor_ratio(self, small_grid):
        """Test that a vanishing factor gives ratio zero."""
        zero = SpectralField(small_grid, np.zeros(small_grid.points, dtype=np.complex128))
        g = sample_profile(small_grid, 'gaussian')
        assert bilinear_ratio(zero, g, 1.0, 16.0, 0.1) == 0.0

    def test_small_sweep_pairs_up(self):
        """Test that separations, ratios and reports line up along N."""
        sweep = bilinear_sweep(1.0, [10.0, 20.0], trial_count=2, time_samples=17)
        assert sweep['separations'] == pytest.approx([0.1, 0.05])
        assert [report.params['N'] for report in sweep['reports']] == [10.0, 20.0]
        assert sweep['ratios'] == [report.value for report in sweep['reports']]
        assert sweep['slope'] == pytest.approx(loglog_slope(sweep['separations'], sweep['ratios']))

    @pytest.mark.slow
    def test_ratio_has_no_trend_in_separation(self):
        """Test that the worst ratio is flat in M/N, so the quarter-power gain is sharp."""
        sweep = bilinear_sweep(1.0, [16.0, 64.0, 256.0])
        assert abs(sweep['slope']) <= 0.15
        assert max(sweep['ratios']) < math.inf


class TestOperatorNorms:
    """Tests for power iteration and the dense oracle."""

    def test_averaged_multiplier_has_norm_one(self):
        """Test that m_D attains one on low frequencies."""
        grid = TorusGrid(16.0, 256)
        op = Multiplier(mD(4))
        estimate = operator_norm_L2(op, grid, oracle=False).value
        assert abs(estimate - dense_norm(op, grid)) / dense_norm(op, grid) < 0.02
        assert estimate == pytest.approx(1.0, rel=1e-3)

    def test_identity(self, small_grid):
        """Test the identity norm and convergence flag."""
        report = operator_norm_L2(Identity(), small_grid)
        assert report.value == pytest.approx(1.0, rel=1e-12)
        assert report.details['converged']
        assert report.details['dense'] == pytest.approx(1.0)

    def test_difference_of_equal_operators(self, small_grid):
        """Test that A - A has norm zero."""
        op = Multiplier(sharp_low(1.0))
        report = operator_norm_L2(op - op, small_grid)
        assert report.value == 0.0
        assert report.details['converged']

    def test_commutator_against_dense(self, small_grid):
        """Test power iteration on a mask-multiplier commutator."""
        op = Commutator(Mask(indicator((-2.0, 2.0)), 'chi'), Multiplier(sharp_low(1.0)))
        report = operator_norm_L2(op, small_grid, iterations=500, tolerance=1e-12)
        dense = report.details['dense']
        assert report.value <= dense * (1 + 1e-9)
        assert report.value >= 0.95 * dense
        assert op.label == '[chi, sharp_low(N=1)]'

    def test_too_few_iterations(self, small_grid):
        """Test that fewer than 20 iterations raise."""
        with pytest.raises(ValidationError):
            operator_norm_L2(Identity(), small_grid, iterations=10)

    def test_iteration_cap_from_config(self, small_grid, monkeypatch):
        """Test that the default iteration cap is read from the configuration."""
        monkeypatch.setattr(Config, 'POWER_ITERATION_MAX', 10)
        with pytest.raises(ValidationError):
            operator_norm_L2(Identity(), small_grid)
        monkeypatch.setattr(Config, 'POWER_ITERATION_MAX', 30)
        op = Commutator(Mask(indicator((-2.0, 2.0)), 'chi'), Multiplier(sharp_low(1.0)))
        assert operator_norm_L2(op, small_grid, tolerance=0.0).details['iterations'] <= 30

    def test_mask_length_mismatch(self, small_grid):
        """Test that an array mask must match the grid."""
        with pytest.raises(ValidationError):
            Mask(np.ones(8)).apply(sample_profile(small_grid, 'gaussian'))

    def test_torus_conjugation_adjoint(self):
        """Test <T f, g> = <f, T* g> for the line-torus conjugation."""
        line_grid = TorusGrid(128.0, 1024)
        op = TorusConjugation(Multiplier(mD(2)), 32.0, (-16.0, 16.0))
        f = random_field(line_grid, 1)
        g = random_field(line_grid, 2)
        left = inner(op.apply(f), g)
        right = inner(f, op.adjoint(g))
        assert abs(left - right) < 1e-10 * abs(left)


class TestScalingLaws:
    """Tests for the decay of mismatch, commutator and cross-manifold norms."""

    def test_law_record(self, small_grid):
        """Test norms, doubling ratios and slope for multipliers of norm 1/c."""
        law = scaling_law(lambda c: Multiplier(custom(lambda xi: np.full_like(xi, 1.0 / c), 'flat', c=c)),
                          [1.0, 2.0, 4.0], small_grid)
        assert law['values'] == [1.0, 2.0, 4.0]
        assert law['norms'] == pytest.approx([1.0, 0.5, 0.25], rel=1e-9)
        assert law['ratios'] == pytest.approx([2.0, 2.0], rel=1e-9)
        assert law['slope'] == pytest.approx(-1.0, abs=1e-9)
        assert len(law['reports']) == 3

    def test_single_value_rejected(self, small_grid):
        """Test that a law needs two parameter values."""
        with pytest.raises(ValidationError):
            scaling_law(lambda c: Identity(), [1.0], small_grid)

    def test_plateau_profile(self):
        """Test that the plateau is one inside, zero beyond the ramp and monotone between."""
        chi = plateau(0.0, 2.0, 4.0)
        x = np.linspace(0.0, 8.0, 81)
        values = chi(x)
        assert np.all(values[x <= 2.0] == 1.0)
        assert np.all(values[x >= 6.0] == 0.0)
        assert np.all(np.diff(values) <= 0.0)
        with pytest.raises(ValidationError):
            plateau(0.0, 1.0, 0.0)


class TestMismatchLaw:
    """Tests for ||chi_E P_K chi_F|| on disjoint windows."""

    @pytest.fixture
    def mismatch_grid(self):
        return TorusGrid(64.0, 1024)

    def test_decays_when_K_doubles(self, mismatch_grid):
        """Test that doubling K at least divides the norm by 1.5."""
        law = scaling_law(lambda K: mismatch_operator(K, 8.0), [0.5, 1.0, 2.0], mismatch_grid)
        assert all(norm > 0 for norm in law['norms'])
        assert all(ratio >= 1.5 for ratio in law['ratios'])

    def test_decays_when_distance_doubles(self, mismatch_grid):
        """Test that doubling the window distance at least divides the norm by 1.5."""
        law = scaling_law(lambda s: mismatch_operator(1.0, s), [4.0, 8.0, 16.0], mismatch_grid)
        assert all(ratio >= 1.5 for ratio in law['ratios'])

    def test_overlapping_windows_do_not_decay(self, mismatch_grid):
        """Test that touching windows keep an order-one norm."""
        assert operator_norm_L2(mismatch_operator(1.0, 0.0), mismatch_grid).value > 0.1


class TestCommutatorLaw:
    """Tests for ||[chi, P_K]|| and ||[(1 - chi)^2, P_K]||."""

    @pytest.mark.parametrize('squared_complement', [False, True])
    def test_decays_when_K_doubles(self, squared_complement):
        """Test the 1/K law at fixed cutoff slope."""
        grid = TorusGrid(128.0, 2048)
        chi = plateau(0.0, 8.0, 32.0)
        law = scaling_law(lambda K: commutator_operator(K, chi, squared_complement),
                          [0.25, 0.5, 1.0], grid)
        assert all(ratio >= 1.5 for ratio in law['ratios'])
        assert law['slope'] == pytest.approx(-1.0, abs=0.35)

    def test_labels(self):
        """Test that the commutator names its mask."""
        chi = plateau(0.0, 1.0, 1.0)
        assert commutator_operator(1.0, chi).label.startswith('[chi, mD_rescaled')
        assert commutator_operator(1.0, chi, True).label.startswith('[(1-chi)^2, mD_rescaled')


class TestCrossManifoldLaw:
    """Tests for ||chi (P_K - p^* P_K^L p_*) chi|| between the line and a torus."""

    def test_decays_when_K_doubles(self):
        """Test that doubling K at least divides the norm by 1.5."""
        line_grid = TorusGrid(128.0, 1024)
        chi = plateau(0.0, 2.0, 4.0)
        law = scaling_law(lambda K: cross_manifold_operator(K, chi, 32.0, (-16.0, 16.0)),
                          [0.25, 0.5, 1.0], line_grid)
        assert all(norm > 0 for norm in law['norms'])
        assert all(ratio >= 1.5 for ratio in law['ratios'])

    def test_torus_copy_of_itself(self):
        """Test that a torus as long as the line grid reproduces the line multiplier."""
        line_grid = TorusGrid(64.0, 512)
        op = cross_manifold_operator(1.0, plateau(0.0, 2.0, 4.0), 64.0, (-32.0, 32.0))
        assert operator_norm_L2(op, line_grid).value < 1e-10


class TestHomogenization:
    """Tests for the Helmholtz-smoothed oscillation."""

    @pytest.mark.parametrize('n', [1, 2, 4])
    def test_cosine_closed_form(self, cosine_coefficient, n):
        """Test the defect of a cosine against 1/(1 + 4 pi^2 n^2)."""
        value = homogenization_defect(cosine_coefficient, n).value
        assert abs(value - 1.0 / (1.0 + 4 * math.pi ** 2 * n ** 2)) < 1e-10

    @pytest.mark.parametrize('n', [1, 2])
    def test_derivative_variant(self, cosine_coefficient, n):
        """Test that the derivative keeps a factor 2 pi n."""
        report = homogenization_defect(cosine_coefficient, n, derivative_variant=True)
        expected = 2 * math.pi * n / (1.0 + 4 * math.pi ** 2 * n ** 2)
        assert report.value == pytest.approx(expected, rel=1e-10)
        assert report.label == 'd_helmholtz_oscillation'

    def test_constant_coefficient(self):
        """Test that a constant coefficient has no defect."""
        h = CoefficientSpec('constant', 2.0)
        assert homogenization_defect(h, 3).value < 1e-14
        assert homogenizes(h, [1, 2, 4])

    def test_cosine_homogenizes(self, cosine_coefficient):
        """Test that the defect decreases along doubling n."""
        assert homogenizes(cosine_coefficient, [1, 2, 4, 8])

    def test_bad_n(self, cosine_coefficient):
        """Test that n must be a positive integer."""
        with pytest.raises(ValidationError):
            homogenization_defect(cosine_coefficient, 0)
