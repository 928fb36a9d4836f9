"""
Helmholtz-smoothed oscillation of a periodic coefficient.

``(-d^2 + 1)^{-1}(h(n x) - mean h)`` tends to zero locally uniformly when
``h`` homogenizes; the derivative variant applies ``d/dx`` first and stays
bounded instead.

Author: Hassan Fouani
"""

import math

import numpy as np

from estimates.reports import NormReport
from propagators.coefficients import CoefficientSpec
from spectral_core.field import SpectralField, analyze, derivative, synthesize
from spectral_core.grid import TorusGrid
from spectral_core.symbols import helmholtz_inverse, symbol_values
from utils.validators import validate_positive, validate_positive_integer

POINTS_PER_PERIOD = 32


def _torus(n: int, radius: float) -> TorusGrid:
    # Integer length keeps h(n x) exactly periodic on the torus.
    length = float(max(4, 2 ** math.ceil(math.log2(4 * radius + 4))))
    points = 1 << math.ceil(math.log2(POINTS_PER_PERIOD * n * length))
    return TorusGrid(length, points)


def homogenization_defect(h: CoefficientSpec, n: int, R: float = 4.0,
                          derivative_variant: bool = False) -> NormReport:
    """
    ``sup_{|x| <= R} |(-d^2 + 1)^{-1}(h(n x) - h_bar)|``.

    Args:
        h: One-periodic coefficient
        n: Oscillation frequency, at least 1
        R: Half-width of the window
        derivative_variant: Apply ``d/dx`` after the Helmholtz inverse

    Returns:
        NormReport with the supremum
    """
    n = validate_positive_integer(n, 'n')
    R = validate_positive(R, 'R')
    grid = _torus(n, R)
    x = grid.nodes

    oscillation = synthesize(grid, h(n * x) - h.mean())
    smoothed = SpectralField(grid, symbol_values(helmholtz_inverse(), grid) * oscillation.coefficients)
    if derivative_variant:
        smoothed = derivative(smoothed, 1)

    values = np.abs(analyze(smoothed))[np.abs(x) <= R]
    label = 'd_helmholtz_oscillation' if derivative_variant else 'helmholtz_oscillation'
    return NormReport(
        label=label,
        value=float(values.max(initial=0.0)),
        params={'n': n, 'R': R, 'h': h.kind},
        resolution=(grid.points, 0),
    )


def homogenizes(h: CoefficientSpec, n_list, R: float = 4.0) -> bool:
    """True when the defect is non-increasing along ``n_list`` and ends below its start."""
    defects = [homogenization_defect(h, n, R).value for n in n_list]
    if max(defects) <= 1e-14:
        return True
    non_increasing = all(b <= a * (1 + 1e-9) + 1e-14 for a, b in zip(defects, defects[1:]))
    return non_increasing and defects[-1] < defects[0]
