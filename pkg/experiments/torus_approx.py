"""
Line-versus-torus comparison for the frequency-truncated flow.

A row fixes (K, eps). The torus system of circumference L evolves band-
limited data ``u0``; the line flow (a torus of twice the length standing in
for R) evolves ``chi^0 u0`` placed on the cutoff window. The distance
``|| P_{<=2DK} p_*(chi^2 u_line) - u_torus ||`` is measured in the sampled
Strichartz norm, together with the mass the line solution leaves outside
``chi^1``. Any mass the line run carries into the outer band of its grid
fails the verdict through the ``boundary_mass`` flag.

Author: Ahmad Yateem
"""

import math
from functools import lru_cache
from typing import Dict, Sequence, Tuple

import numpy as np

from estimates.norms import strichartz_S
from experiments.base import (
    ExperimentReport, ExperimentSpec, Resolution, boundary_clear, decays, discretization_firewall,
    max_boundary_mass, non_increasing, stride_for,
)
from propagators.integrators import StepScheme, Trajectory, evolve
from propagators.models import ModelSpec, rescaled_truncated, torus_truncated
from spectral_core.field import SpectralField, analyze, mass, refine, sample_profile, synthesize
from spectral_core.grid import TorusGrid
from spectral_core.symbols import apply_multiplier, sharp_low
from symmetries.cutoffs import LEVELS, CutoffSet, build_cutoffs
from symmetries.transfer import pull_back, push_forward, window_from_cutoffs
from utils.decorators import measure_time
from utils.exceptions import ValidationError
from utils.logger import setup_logger
from utils.parallel import ordered_map
from utils.validators import validate_positive

logger = setup_logger(__name__)

SCHEME = 'lawson_rk4'
LENGTH_MARGIN = 1.25
RAMP_UNITS = 20
DEFAULT_STEPS = 64


def _power_of_two_at_least(value: float) -> int:
    return 1 << max(0, math.ceil(math.log2(value)))


def torus_length(D: float, K: float, T: float, eps: float, min_length: float = 32.0) -> float:
    """Power-of-two circumference leaving room for the five nested cutoffs."""
    unit = 2.0 * D * K * T / eps
    return float(max(min_length, _power_of_two_at_least(LENGTH_MARGIN * RAMP_UNITS * unit)))


def torus_points(D: float, K: float, L: float) -> int:
    """Node count whose top frequency is twice the outer cut ``2 D K``."""
    return max(64, _power_of_two_at_least(8 * D * K * L))


def band_limited_data(grid: TorusGrid, n_cut: float, M: float, profile: str = 'lorentzian',
                      width: float = 1.0) -> SpectralField:
    """Profile projected onto ``|xi| <= n_cut`` and scaled to ``||u0||_{L^2} = M``."""
    raw = apply_multiplier(sample_profile(grid, profile, width=width), sharp_low(n_cut))
    total = mass(raw)
    if total == 0 or M == 0:
        return SpectralField.zeros(grid)
    return raw * (M / math.sqrt(total))


def line_grid_for(grid: TorusGrid) -> TorusGrid:
    return TorusGrid(2 * grid.length, 2 * grid.points)


def line_data(u0: SpectralField, cutoffs: CutoffSet, line_grid: TorusGrid) -> SpectralField:
    """``chi^0 u0`` on the line: one period of ``u0`` on the cutoff window, times chi^0."""
    window = window_from_cutoffs(cutoffs.center, cutoffs.params['L'])
    periodic = analyze(pull_back(u0, window, line_grid))
    return synthesize(line_grid, cutoffs.line_mask(0, line_grid.nodes) * periodic)


def outside_mass(trajectory: Trajectory, cutoffs: CutoffSet, level: int) -> float:
    """``sup_t ||(1 - chi^level) u(t)||_{L^2}`` over the stored samples."""
    grid = trajectory.grid
    outside = 1.0 - cutoffs.line_mask(level, grid.nodes)
    return max(
        float(np.sqrt(grid.spacing * np.sum(np.abs(outside * analyze(s)) ** 2)))
        for s in trajectory.snapshots
    )


def compare_on_torus(line: Trajectory, torus: Trajectory, cutoffs: CutoffSet,
                     n_cut: float) -> Trajectory:
    """Snapshots of ``P_{<=n_cut} p_*(chi^2 u_line) - u_torus``."""
    L = torus.grid.length
    chi2 = cutoffs.line_mask(2, line.grid.nodes)
    projection = sharp_low(n_cut)
    differences = []
    for line_snapshot, torus_snapshot in zip(line.snapshots, torus.snapshots):
        localized = synthesize(line.grid, chi2 * analyze(line_snapshot))
        pushed = apply_multiplier(push_forward(localized, L), projection)
        differences.append(pushed - torus_snapshot)
    return Trajectory(torus.model, torus.grid, torus.times, differences, torus.scheme_id, torus.dt_used)


def _run_pair(u0: SpectralField, cutoffs: CutoffSet, line_model: ModelSpec, torus_model: ModelSpec,
              T: float, dt: float) -> Tuple[Trajectory, Trajectory]:
    stride = stride_for(T, dt)
    scheme = StepScheme(SCHEME, dt)
    torus = evolve(torus_model, u0, T, scheme, stride)
    line = evolve(line_model, line_data(u0, cutoffs, line_grid_for(u0.grid)), T, scheme, stride)
    return line, torus


@measure_time
def run_torus_approx(M: float, D: float, K_list: Sequence[float], eps_list: Sequence[float],
                     T: float, profile: str = 'lorentzian', width: float = 1.0,
                     min_length: float = 32.0, dt: float = None, seed: int = 0) -> ExperimentReport:
    """
    Sweep ``(K, eps)`` pairs and measure the line-to-torus discrepancy.

    Args:
        M: L^2 norm of the data
        D: Averaging depth of the truncation symbol
        K_list: Increasing frequency scales
        eps_list: Matching decreasing cutoff tolerances
        T: Final time
        profile: Data envelope (``lorentzian``, ``gaussian`` or ``sech``)
        width: Envelope width
        min_length: Smallest torus circumference considered
        dt: Step (default ``T / 64``)
        seed: Recorded for provenance

    Returns:
        ExperimentReport with one row per ``K``

    Raises:
        ValidationError: If the sweep lists differ in length
        CutoffConstructionError: If no cutoff window keeps the data mass below eps
    """
    T = validate_positive(T, 'T')
    M = float(M)
    if len(K_list) != len(eps_list):
        raise ValidationError("K_list and eps_list must have equal length", field='eps_list')
    spec = ExperimentSpec('torus_approx', 'K', list(K_list),
                          {'M': M, 'D': D, 'T': T, 'eps_list': list(eps_list), 'profile': profile},
                          seed)
    eps_by_K = dict(zip(spec.sweep, eps_list))
    step = dt or T / DEFAULT_STEPS

    @lru_cache(maxsize=None)
    def setup(K: float, refined: bool):
        eps = eps_by_K[K]
        n_cut = 2 * D * K
        L = torus_length(D, K, T, eps, min_length)
        base = Resolution(TorusGrid(L, torus_points(D, K, L)), step)
        resolution = base.at(refined)
        u0 = resolution.place(band_limited_data(base.grid, n_cut, M, profile, width))
        cutoffs = build_cutoffs(D, K, T, eps, L, u0, eps=eps)
        return resolution, u0, cutoffs

    def run_row(K: float, refined: bool = False) -> Dict[str, object]:
        resolution, u0, cutoffs = setup(K, refined)
        eps = eps_by_K[K]
        n_cut = 2 * D * K
        line, torus = _run_pair(u0, cutoffs, rescaled_truncated(D, K),
                                torus_truncated(n_cut, D, K), T, resolution.dt)
        discrepancy = strichartz_S(compare_on_torus(line, torus, cutoffs, n_cut))
        return {
            'K': K,
            'eps': eps,
            'length': resolution.grid.length,
            'points': resolution.grid.points,
            'initial_residual': cutoffs.report['residual_masses'][0],
            'discrepancy': discrepancy.value,
            'concentration': outside_mass(line, cutoffs, 1),
            'discrepancy_error': discrepancy.quadrature_error_estimate,
            'boundary_mass': max_boundary_mass([line]),
        }

    rows = ordered_map(lambda K: run_row(K), spec.sweep)
    firewall = discretization_firewall(run_row, spec.sweep, rows, ['discrepancy'])

    report = ExperimentReport(
        kind=spec.kind,
        sweep_key='K',
        columns=['eps', 'length', 'points', 'initial_residual', 'discrepancy', 'concentration'],
        error_columns=['discrepancy_error'],
        rows=rows,
    )
    discrepancies = report.column('discrepancy')
    boundary = max(row['boundary_mass'] for row in rows)
    report.flags = {
        'firewall': firewall['passed'],
        'decreasing': non_increasing(discrepancies, 0.0) and decays(discrepancies, 0.5),
        'concentration_below_eps': all(row['concentration'] < row['eps'] for row in rows),
        'boundary_mass': boundary_clear(boundary),
    }
    report.summary = {'first': discrepancies[0], 'final': discrepancies[-1],
                      'max_boundary_mass': boundary}
    report.provenance = {'params': spec.params, 'seed': seed, 'dt': step, 'scheme': SCHEME,
                         'lengths': report.column('length'), 'firewall': firewall}
    return report.finalize()


@measure_time
def run_mass_concentration(u0: SpectralField, cutoffs: CutoffSet, model: ModelSpec, T: float,
                           dt: float = None) -> ExperimentReport:
    """
    ``sup_t ||(1 - chi^j) u_line(t)||_{L^2}`` for ``j = 1..4``.

    The line flow starts from ``chi^0 u0``; the bound should sit below the
    cutoff tolerance and shrink as ``j`` grows.

    Args:
        u0: Torus data the cutoffs were built for
        cutoffs: Output of :func:`build_cutoffs`
        model: Line model, usually ``rescaled_truncated(D, K)``
        T: Final time
        dt: Step (default ``T / 64``)

    Returns:
        ExperimentReport with one row per cutoff level
    """
    T = validate_positive(T, 'T')
    eps = cutoffs.params['eps']
    levels = list(range(1, LEVELS))
    spec = ExperimentSpec('mass_concentration', 'level', levels,
                          {'T': T, 'model': model.as_dict(), 'eps': eps})
    base = Resolution(line_grid_for(u0.grid), dt or T / DEFAULT_STEPS)

    @lru_cache(maxsize=2)
    def trajectory(refined: bool) -> Trajectory:
        resolution = base.at(refined)
        torus_data = refine(u0, 2 * u0.grid.points) if refined else u0
        start = line_data(torus_data, cutoffs, resolution.grid)
        return evolve(model, start, T, resolution.scheme(SCHEME), stride_for(T, resolution.dt))

    def run_row(level: int, refined: bool = False) -> Dict[str, object]:
        return {'level': level, 'outside_mass': outside_mass(trajectory(refined), cutoffs, level)}

    rows = [run_row(level) for level in levels]
    firewall = discretization_firewall(run_row, levels, rows, ['outside_mass'])
    report = ExperimentReport(kind=spec.kind, sweep_key='level', columns=['outside_mass'], rows=rows)
    values = report.column('outside_mass')
    boundary = max_boundary_mass([trajectory(False)])
    report.flags = {
        'firewall': firewall['passed'],
        'below_eps': values[0] < eps,
        'nested': non_increasing(values, 0.0),
        'boundary_mass': boundary_clear(boundary),
    }
    report.summary = {'sup_outside_chi1': values[0], 'eps': eps, 'max_boundary_mass': boundary}
    report.provenance = {'params': spec.params, 'resolution': base.as_dict(), 'firewall': firewall}
    return report.finalize()
