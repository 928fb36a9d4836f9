"""
Linear response of the flow to forcing and data perturbations.

An approximate solution solves the equation with an added source
``eps * e(t, x)``; the exact solution starts from data perturbed by
``eps * v0``. Their ``L^6_{t,x}`` distance should grow linearly in ``eps``.

Author: Hassan Fouani
"""

import math
from dataclasses import dataclass
from typing import Dict, Sequence

from estimates.norms import spacetime_norm
from estimates.reports import loglog_slope
from experiments.base import (
    ExperimentReport, ExperimentSpec, Resolution, difference_trajectory,
    discretization_firewall, stride_for,
)
from propagators.integrators import evolve
from propagators.models import ModelSpec
from spectral_core.field import SpectralField, sample_profile
from spectral_core.grid import TorusGrid
from utils.decorators import measure_time
from utils.exceptions import IntegrationDivergenceError, ValidationError
from utils.logger import setup_logger
from utils.parallel import ordered_map
from utils.validators import validate_positive

logger = setup_logger(__name__)

SCHEME = 'lawson_rk4'
MODES = ('forcing', 'data', 'both')
SLOPE_TOLERANCE = 0.2
DEFAULT_DT_EXPONENT = 8


@dataclass(frozen=True)
class ForcingSpec:
    """
    Smooth source ``amplitude * exp(-(x - center)^2 / (2 width^2)) * cos(2 pi frequency t)``.
    """

    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0
    frequency: float = 1.0

    def field(self, grid: TorusGrid) -> SpectralField:
        return sample_profile(grid, 'gaussian', self.amplitude, self.center, self.width)

    def as_dict(self) -> dict:
        return {'amplitude': self.amplitude, 'center': self.center, 'width': self.width,
                'frequency': self.frequency}


def scaled_forcing(spec: ForcingSpec, grid: TorusGrid, eps: float):
    """Time-dependent source ``eps * e(t)`` as the integrator expects it."""
    profile = spec.field(grid) * eps

    def source(t: float) -> SpectralField:
        return profile * math.cos(2 * math.pi * spec.frequency * t)

    return source


@measure_time
def run_stability_check(model: ModelSpec, u0: SpectralField, forcing: ForcingSpec,
                        eps_list: Sequence[float], T: float, mode: str = 'forcing',
                        perturbation: SpectralField = None, dt: float = None) -> ExperimentReport:
    """
    Sweep ``eps`` and fit the log-log slope of the response.

    Args:
        model: Equation
        u0: Unperturbed data
        forcing: Source profile scaled by ``eps`` in ``forcing``/``both`` modes
        eps_list: Sorted non-negative amplitudes
        T: Final time
        mode: ``forcing``, ``data`` or ``both``
        perturbation: Data direction ``v0`` (default: unit gaussian at x = 1)
        dt: Step (default ``T / 256``)

    Returns:
        ExperimentReport with one row per ``eps``; diverged rows are flagged
        and left out of the slope
    """
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}", field='mode')
    T = validate_positive(T, 'T')
    if any(eps < 0 for eps in eps_list):
        raise ValidationError("eps values must be non-negative", field='eps_list')
    spec = ExperimentSpec('stability', 'eps', list(eps_list),
                          {'model': model.as_dict(), 'T': T, 'mode': mode,
                           'forcing': forcing.as_dict()})
    v0 = perturbation if perturbation is not None else sample_profile(u0.grid, 'gaussian', center=1.0)
    base = Resolution(u0.grid, dt or T * 2.0 ** -DEFAULT_DT_EXPONENT)

    def run_row(eps: float, refined: bool = False) -> Dict[str, object]:
        resolution = base.at(refined)
        data = resolution.place(u0)
        scheme = resolution.scheme(SCHEME)
        stride = stride_for(T, resolution.dt)
        source = scaled_forcing(forcing, resolution.grid, eps) if mode != 'data' else None
        perturbed = data + resolution.place(v0) * eps if mode != 'forcing' else data
        try:
            approximate = evolve(model, data, T, scheme, stride, forcing=source)
            exact = evolve(model, perturbed, T, scheme, stride)
        except IntegrationDivergenceError as e:
            logger.warning('Stability row diverged', extra={'event_type': 'divergence', 'eps': eps,
                                                            'time': e.time})
            return {'eps': eps, 'difference': None, 'difference_error': None, 'diverged': 1}
        norm = spacetime_norm(difference_trajectory(exact, approximate), 6, 6)
        return {'eps': eps, 'difference': norm.value,
                'difference_error': norm.quadrature_error_estimate, 'diverged': 0}

    rows = ordered_map(lambda eps: run_row(eps), spec.sweep)
    usable = [row for row in rows if not row['diverged'] and row['eps'] > 0]
    firewall = discretization_firewall(run_row, spec.sweep, rows, ['difference'])

    report = ExperimentReport(kind=spec.kind, sweep_key='eps', columns=['difference', 'diverged'],
                              error_columns=['difference_error'], rows=rows)
    slope = None
    if len(usable) >= 2:
        slope = loglog_slope([row['eps'] for row in usable], [row['difference'] for row in usable])
    report.flags = {
        'firewall': firewall['passed'],
        'linear_response': slope is not None and abs(slope - 1.0) <= SLOPE_TOLERANCE,
    }
    report.summary = {'slope': slope, 'usable_rows': len(usable)}
    report.provenance = {'params': spec.params, 'resolution': base.as_dict(), 'scheme': SCHEME,
                         'firewall': firewall}
    return report.finalize()
