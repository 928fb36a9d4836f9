"""
Convergence of the oscillatory-coefficient equation to its averaged limit.

For each ``n`` the run solves ``i u_t + u_xx = lam h(n x)|u|^4 u`` and the
averaged equation with weight ``lam * mean(h)`` from the same data, and
measures their distance in ``L^6_{t,x}`` and ``L^inf_t L^2_x``. Both runs
live on the data grid, which must be long enough that no mass reaches
its outer band.

Author: Hassan Fouani
"""

import math
from functools import lru_cache
from typing import Sequence

from estimates.homogenization import homogenization_defect, homogenizes
from estimates.norms import spacetime_norm
from experiments.base import (
    ExperimentReport, ExperimentSpec, Resolution, boundary_clear, decays, difference_trajectory,
    discretization_firewall, max_boundary_mass, non_increasing, stride_for,
)
from propagators.coefficients import CoefficientSpec
from propagators.integrators import evolve
from propagators.models import inhomogeneous
from spectral_core.field import SpectralField
from utils.decorators import measure_time
from utils.exceptions import HypothesisCheckError
from utils.logger import setup_logger
from utils.parallel import ordered_map
from utils.validators import validate_positive

logger = setup_logger(__name__)

SCHEME = 'strang_exact'
DEFAULT_DT_EXPONENT = 8


@measure_time
def run_homogenization(h: CoefficientSpec, n_list: Sequence[int], u0: SpectralField, T: float,
                       dt: float = None, lam: float = 1.0, R: float = 4.0,
                       seed: int = 0) -> ExperimentReport:
    """
    Sweep the oscillation frequency and compare against the averaged flow.

    Args:
        h: One-periodic coefficient
        n_list: Sorted oscillation frequencies
        u0: Initial data
        T: Final time
        dt: Splitting step (default ``T / 256``)
        lam: Coupling
        R: Window of the hypothesis functional
        seed: Recorded for provenance

    Returns:
        ExperimentReport with one row per ``n``

    Raises:
        HypothesisCheckError: If the Helmholtz-smoothed oscillation of ``h``
            does not decrease along ``n_list``
    """
    T = validate_positive(T, 'T')
    spec = ExperimentSpec('homogenization', 'n', [int(n) for n in n_list],
                          {'h': h.as_dict(), 'lam': lam, 'T': T, 'R': R}, seed)
    if not homogenizes(h, spec.sweep, R):
        defects = [homogenization_defect(h, n, R).value for n in spec.sweep]
        raise HypothesisCheckError(
            f"Coefficient does not homogenize along n={spec.sweep}: "
            f"Helmholtz-smoothed oscillation {['%.3e' % d for d in defects]}"
        )

    base = Resolution(u0.grid, dt or T * 2.0 ** -DEFAULT_DT_EXPONENT)
    averaged = inhomogeneous(h, 1, lam).averaged()

    @lru_cache(maxsize=2)
    def reference(refined: bool):
        resolution = base.at(refined)
        return evolve(averaged, resolution.place(u0), T, resolution.scheme(SCHEME),
                      stride_for(T, resolution.dt))

    def run_row(n: int, refined: bool = False):
        resolution = base.at(refined)
        trajectory = evolve(inhomogeneous(h, n, lam), resolution.place(u0), T,
                            resolution.scheme(SCHEME), stride_for(T, resolution.dt))
        difference = difference_trajectory(trajectory, reference(refined))
        l6 = spacetime_norm(difference, 6, 6)
        sup_l2 = spacetime_norm(difference, math.inf, 2)
        return {
            'n': n,
            'hypothesis': homogenization_defect(h, n, R).value,
            'l6_difference': l6.value,
            'linf_l2_difference': sup_l2.value,
            'l6_error': l6.quadrature_error_estimate,
            'linf_l2_error': sup_l2.quadrature_error_estimate,
            'boundary_mass': max_boundary_mass([trajectory]),
        }

    reference(False)
    rows = ordered_map(lambda n: run_row(n), spec.sweep)
    firewall = discretization_firewall(run_row, spec.sweep, rows, ['l6_difference'])

    report = ExperimentReport(
        kind=spec.kind,
        sweep_key='n',
        columns=['hypothesis', 'l6_difference', 'linf_l2_difference'],
        error_columns=['l6_error', 'linf_l2_error'],
        rows=rows,
    )
    column = report.column('l6_difference')
    boundary = max([max_boundary_mass([reference(False)])] + [row['boundary_mass'] for row in rows])
    report.flags = {
        'firewall': firewall['passed'],
        'decay': decays(column, 0.25),
        'no_increase': non_increasing(column, 0.10),
        'boundary_mass': boundary_clear(boundary),
    }
    report.summary = {'first': column[0], 'final': column[-1], 'averaged_lam': averaged.lam,
                      'max_boundary_mass': boundary}
    report.provenance = {'params': spec.params, 'seed': seed, 'resolution': base.as_dict(),
                         'scheme': SCHEME, 'firewall': firewall}
    logger.info('Homogenization sweep done', extra={'event_type': 'experiment', 'rows': len(rows)})
    return report.finalize()
