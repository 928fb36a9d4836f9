"""
Fast invariant suite run by ``nlslab check``.

Each check is a small, deterministic computation with a stated threshold.
The suite covers every primary package and finishes in seconds.

Author: Hassan Fouani
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from cli_io.trajectory_io import decode_trajectory, encode_trajectory
from estimates.bilinear import bilinear_sweep
from estimates.homogenization import homogenization_defect
from estimates.kernels import dispersive_kernel, line_kernel
from estimates.operators import (
    Multiplier, commutator_operator, dense_norm, operator_norm_L2, plateau, scaling_law,
)
from propagators.coefficients import CoefficientSpec
from propagators.flows import linear_flow
from propagators.integrators import StepScheme, evolve, reverse_check
from propagators.models import quintic
from spectral_core.field import analyze, mass, sample_profile, synthesize
from spectral_core.grid import TorusGrid
from spectral_core.symbols import eval_mD, mD
from symmetries.cutoffs import build_cutoffs
from symmetries.frames import SymmetryFrame, apply_g, orthogonality_defect
from symmetries.transfer import pull_back, push_forward
from utils.logger import setup_logger
from utils.parallel import spawn_generators

logger = setup_logger(__name__)


@dataclass
class CheckResult:
    """Outcome of one invariant check."""

    name: str
    passed: bool
    value: float
    threshold: float
    details: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, object]:
        return {'check': self.name, 'passed': self.passed, 'value': self.value,
                'threshold': self.threshold, 'details': self.details}


def _below(name: str, value: float, threshold: float, **details) -> CheckResult:
    value = float(value)
    return CheckResult(name, bool(value < threshold), value, threshold, details)


def check_plancherel() -> CheckResult:
    grid = TorusGrid(10.0, 64)
    rng = spawn_generators(0, 1)[0]
    u = synthesize(grid, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    direct = grid.spacing * float(np.sum(np.abs(analyze(u)) ** 2))
    return _below('plancherel', abs(mass(u) - direct) / direct, 1e-12)


def check_mD_symbol() -> CheckResult:
    grid = TorusGrid(1.0, 8192)
    xi = np.abs(grid.frequencies)
    order = np.argsort(xi, kind='stable')
    worst = 0.0
    for D in (2, 16, 1024):
        values = eval_mD(xi, D)
        worst = max(worst,
                    float(np.max(np.clip(values - 1.0, 0.0, None), initial=0.0)),
                    float(np.max(np.clip(-values, 0.0, None), initial=0.0)),
                    float(np.max(np.abs(values[xi <= 1.0] - 1.0), initial=0.0)),
                    float(np.max(np.abs(values[xi >= 2 * D]), initial=0.0)),
                    float(np.max(np.clip(np.diff(values[order]), 0.0, None), initial=0.0)))
    worst = max(worst, abs(eval_mD(2.0, 1024) - 10.0 / 11.0))
    return _below('mD_symbol', worst, 1e-12)


def check_free_gaussian() -> CheckResult:
    grid = TorusGrid(40.0, 256)
    u0 = sample_profile(grid, 'gaussian')
    width = 1.0 + 2.0j
    exact = synthesize(grid, np.exp(-grid.nodes ** 2 / (2 * width)) / np.sqrt(width))
    return _below('free_gaussian', math.sqrt(mass(linear_flow(u0, 1.0) - exact)), 1e-6)


def check_mass_conservation() -> CheckResult:
    grid = TorusGrid(32.0, 256)
    trajectory = evolve(quintic(1.0), sample_profile(grid, 'sech'), 0.25)
    return _below('mass_conservation', trajectory.max_relative_mass_drift(), 1e-8,
                  dt=trajectory.dt_used)


def check_reversibility() -> CheckResult:
    grid = TorusGrid(32.0, 256)
    u0 = sample_profile(grid, 'sech')
    distance = reverse_check(quintic(1.0), u0, 0.25, StepScheme('strang_exact', 2.0 ** -8))
    return _below('reversibility', distance, 1e-3)


def check_symmetry_unitarity() -> CheckResult:
    grid = TorusGrid(32.0, 256)
    u = sample_profile(grid, 'gaussian', center=-2.0)
    frame = SymmetryFrame(scale=2.0, boost=0.25, translation=1.0)
    moved = apply_g(frame, u)
    return _below('symmetry_unitarity', abs(mass(moved) - mass(u)), 1e-10)


def check_trajectory_codec() -> CheckResult:
    grid = TorusGrid(16.0, 64)
    trajectory = evolve(quintic(1.0), sample_profile(grid, 'sech'), 0.125,
                        StepScheme('strang_exact', 2.0 ** -6), sample_stride=2)
    loaded = decode_trajectory(encode_trajectory(trajectory))
    identical = (np.array_equal(loaded.times, trajectory.times)
                 and np.array_equal(loaded.coefficient_matrix(), trajectory.coefficient_matrix()))
    return CheckResult('trajectory_codec', identical, float(not identical), 1.0,
                       {'samples': len(trajectory)})


def check_homogenization_formula() -> CheckResult:
    h = CoefficientSpec('cosine', 1.0, 1.0)
    worst = max(abs(homogenization_defect(h, n).value - 1.0 / (1.0 + 4 * math.pi ** 2 * n ** 2))
                for n in (1, 2, 4))
    return _below('homogenization_formula', worst, 1e-10)


def check_power_iteration() -> CheckResult:
    grid = TorusGrid(16.0, 256)
    op = Multiplier(mD(4))
    estimate = operator_norm_L2(op, grid, oracle=False).value
    dense = dense_norm(op, grid)
    return _below('power_iteration', abs(estimate - dense) / dense, 0.02, dense=dense)


def check_kernel_line_oracle() -> CheckResult:
    torus = abs(dispersive_kernel(512.0, 8.0, 1.0, 0.0))
    line = abs(line_kernel(8.0, 1.0, 0.0))
    return _below('kernel_line_oracle', abs(torus - line) / line, 0.05, torus=torus, line=line)


def check_frame_group() -> CheckResult:
    """``g^{-1} g = id`` and ``g_a g_b = g_{a o b}`` on a lattice-compatible pair."""
    grid = TorusGrid(64.0, 512)
    u = sample_profile(grid, 'gaussian', center=1.0, frequency=0.5)
    a = SymmetryFrame(scale=2.0, boost=0.25, translation=2.0, phase=0.3)
    b = SymmetryFrame(boost=-0.25, translation=-4.0, phase=-1.0)
    inverse_gap = math.sqrt(mass(apply_g(a.inverse(), apply_g(a, u)) - u))
    compose_gap = math.sqrt(mass(apply_g(a.compose(b), u) - apply_g(a, apply_g(b, u))))
    return _below('frame_group', max(inverse_gap, compose_gap), 1e-10,
                  inverse=inverse_gap, compose=compose_gap)


def check_orthogonality_symmetry() -> CheckResult:
    a = SymmetryFrame(scale=1.0, boost=0.5, translation=-3.0, time_shift=0.4)
    b = SymmetryFrame(scale=2.0, boost=-1.0, translation=5.0, time_shift=0.1)
    forward, backward = orthogonality_defect(a, b), orthogonality_defect(b, a)
    return _below('orthogonality_symmetry', abs(forward - backward) / forward, 1e-12,
                  defect=forward)


def check_cutoff_nesting() -> CheckResult:
    """Nested cutoffs whose slopes stay under ``eta / (D K T)``."""
    grid = TorusGrid(32.0, 256)
    cutoffs = build_cutoffs(D=2, K=1, T=0.1, eta=1.0, L=32.0, u0=sample_profile(grid, 'sech'))
    report = cutoffs.report
    ratio = report['max_slope'] / report['slope_bound']
    return CheckResult('cutoff_nesting', bool(report['nested'] and ratio < 1.0), ratio, 1.0,
                       {'nested': report['nested'], 'max_slope': report['max_slope']})


def check_transfer_roundtrip() -> CheckResult:
    line_grid = TorusGrid(128.0, 1024)
    f = sample_profile(line_grid, 'gaussian', frequency=0.5)
    back = pull_back(push_forward(f, 32.0), (-16.0, 16.0), line_grid)
    return _below('transfer_roundtrip', math.sqrt(mass(back - f)), 1e-8)


def check_commutator_scaling() -> CheckResult:
    """Each doubling of K shrinks ``||[chi, P_K]||`` by at least 1.5."""
    grid = TorusGrid(128.0, 2048)
    chi = plateau(0.0, 8.0, 32.0)
    law = scaling_law(lambda K: commutator_operator(K, chi), [0.25, 0.5, 1.0], grid)
    worst = min(law['ratios'])
    return CheckResult('commutator_scaling', bool(worst >= 1.5), worst, 1.5,
                       {'norms': law['norms'], 'slope': law['slope']})


def check_bilinear_trend() -> CheckResult:
    """Worst bilinear ratio shows no trend in ``M/N``."""
    sweep = bilinear_sweep(1.0, [10.0, 20.0, 40.0], trial_count=4, time_samples=33)
    return _below('bilinear_trend', abs(sweep['slope']), 0.25, ratios=sweep['ratios'])


CHECKS: Tuple[Callable[[], CheckResult], ...] = (
    check_plancherel,
    check_mD_symbol,
    check_free_gaussian,
    check_mass_conservation,
    check_reversibility,
    check_symmetry_unitarity,
    check_trajectory_codec,
    check_homogenization_formula,
    check_power_iteration,
    check_kernel_line_oracle,
    check_frame_group,
    check_orthogonality_symmetry,
    check_cutoff_nesting,
    check_transfer_roundtrip,
    check_commutator_scaling,
    check_bilinear_trend,
)


def run_checks() -> List[CheckResult]:
    """
    Run every check in order.

    A check that raises is reported as failed with the error in ``details``.
    """
    results = []
    for check in CHECKS:
        try:
            result = check()
        except Exception as e:
            logger.error('Check raised', extra={'event_type': 'check', 'check': check.__name__,
                                                'error_type': type(e).__name__})
            result = CheckResult(check.__name__.replace('check_', ''), False, math.nan, math.nan,
                                 {'error': f"{type(e).__name__}: {e}"})
        results.append(result)
    return results
