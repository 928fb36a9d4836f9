"""
Search for the non-squeezing witness of a linear functional.

Data ``z* + r d`` for unit directions ``d`` are evolved to time ``T`` and
the defect ``|<l, u(T)> - alpha|`` is recorded. Direction 0 is the aligned
candidate ``d* = e^{i theta} e^{-iT d_xx} l`` with ``theta`` chosen from the
free-flow prediction, which makes the defect exactly ``|base| + r`` for the
free equation; the remaining directions are random band-limited fields.

Author: Ahmad Yateem
"""

import cmath
import math
from functools import lru_cache
from typing import Dict, List

import numpy as np

from experiments.base import (
    ExperimentReport, ExperimentSpec, Resolution, discretization_firewall,
)
from propagators.flows import linear_flow
from propagators.integrators import default_scheme_kind, evolve
from propagators.models import ModelSpec
from spectral_core.field import SpectralField, inner, mass
from spectral_core.grid import require_same_grid
from spectral_core.symbols import smooth_low, symbol_values
from utils.decorators import measure_time
from utils.exceptions import ValidationError
from utils.logger import setup_logger
from utils.parallel import ordered_map, spawn_generators
from utils.validators import validate_positive, validate_positive_integer

logger = setup_logger(__name__)

DEFAULT_DT = 2.0 ** -8
# Random directions live below this fraction of the grid's top frequency.
DIRECTION_BAND = 0.25
RADIUS_TOLERANCE = 1e-9


def unit_field(field_: SpectralField) -> SpectralField:
    total = mass(field_)
    if total == 0:
        raise ValidationError("Cannot normalize a zero field", field='ell')
    return field_ * (1.0 / math.sqrt(total))


def pairing(ell: SpectralField, u: SpectralField) -> complex:
    """``<l, u> = integral of conj(l) u``."""
    return inner(u, ell)


def aligned_direction(ell: SpectralField, z_star: SpectralField, alpha: complex, T: float) -> SpectralField:
    """``e^{i theta} e^{-iT d_xx} l`` with ``theta`` the phase of the free-flow offset."""
    base = pairing(ell, linear_flow(z_star, T)) - alpha
    theta = cmath.phase(base) if abs(base) > 0 else 0.0
    return linear_flow(ell, -T) * cmath.exp(1j * theta)


def random_directions(ell: SpectralField, count: int, seed: int) -> List[SpectralField]:
    grid = ell.grid
    band = symbol_values(smooth_low(DIRECTION_BAND * grid.max_frequency), grid)
    directions = []
    for rng in spawn_generators(seed, count):
        noise = rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points)
        directions.append(unit_field(SpectralField(grid, band * noise)))
    return directions


@measure_time
def run_nonsqueezing_probe(z_star: SpectralField, ell: SpectralField, alpha: complex, r: float,
                           T: float, model: ModelSpec, sample_count: int = 64, seed: int = 0,
                           dt: float = None) -> ExperimentReport:
    """
    Largest ``|<l, u(T)> - alpha|`` over the ball of radius ``r`` around ``z*``.

    Args:
        z_star: Center of the ball
        ell: Functional, normalized internally to unit L^2 norm
        alpha: Center of the target cylinder
        r: Ball radius
        T: Final time (0 skips evolution)
        model: Equation
        sample_count: Number of random directions besides ``d*``
        seed: Root seed of the random directions
        dt: Step (default ``2**-8``)

    Returns:
        ExperimentReport with one row per direction; ``summary['witness']``
        is true when a defect above ``r`` was found
    """
    grid = require_same_grid(z_star.grid, ell.grid)
    r = validate_positive(r, 'r')
    sample_count = validate_positive_integer(sample_count, 'sample_count')
    if T < 0:
        raise ValidationError("T must be non-negative", field='T')
    ell = unit_field(ell)
    alpha = complex(alpha)

    directions = [aligned_direction(ell, z_star, alpha, T)] + random_directions(ell, sample_count, seed)
    indices = list(range(len(directions)))
    spec = ExperimentSpec('nonsqueezing', 'direction', indices,
                          {'alpha': [alpha.real, alpha.imag], 'r': r, 'T': T,
                           'model': model.as_dict(), 'sample_count': sample_count}, seed)
    kind = default_scheme_kind(model)
    base = Resolution(grid, dt or DEFAULT_DT)

    @lru_cache(maxsize=None)
    def functional(refined: bool) -> SpectralField:
        return base.at(refined).place(ell)

    def run_row(index: int, refined: bool = False) -> Dict[str, object]:
        resolution = base.at(refined)
        data = resolution.place(z_star + directions[index] * r)
        final = data if T == 0 else evolve(model, data, T, resolution.scheme(kind)).final
        defect = abs(pairing(functional(refined), final) - alpha)
        return {'direction': index, 'aligned': int(index == 0), 'defect': defect, 'excess': defect - r}

    rows = ordered_map(lambda index: run_row(index), spec.sweep)
    firewall = discretization_firewall(run_row, spec.sweep, rows, ['defect'])

    report = ExperimentReport(kind=spec.kind, sweep_key='direction',
                              columns=['aligned', 'defect', 'excess'], rows=rows)
    defects = np.array(report.column('defect'))
    best = int(np.argmax(defects))
    free_prediction = abs(pairing(ell, linear_flow(z_star, T)) - alpha) + r
    max_defect = float(defects[best])
    report.flags = {
        'firewall': firewall['passed'],
        'radius_attained': max_defect >= r * (1 - RADIUS_TOLERANCE),
    }
    report.summary = {
        'max_defect': max_defect,
        'argmax_direction': best,
        'witness': max_defect > r * (1 + RADIUS_TOLERANCE),
        'free_prediction': free_prediction,
        'free_prediction_gap': abs(max_defect - free_prediction) / free_prediction,
    }
    report.provenance = {'params': spec.params, 'seed': seed, 'resolution': base.as_dict(),
                         'scheme': kind, 'firewall': firewall}
    return report.finalize()
