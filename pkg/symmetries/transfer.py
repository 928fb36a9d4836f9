"""
Push-forward and pullback between a line grid and a torus.

The line R is represented by a long grid with the same node spacing as the
torus. ``push_forward`` sums the values of all line nodes congruent modulo
L; ``pull_back`` samples the periodic extension of a torus field inside a
window of length at most L and sets it to zero elsewhere.

Author: Hassan Fouani
"""

from typing import Tuple

import numpy as np

from spectral_core.field import SpectralField, analyze, synthesize
from spectral_core.grid import TorusGrid
from utils.exceptions import GridMismatchError, ValidationError

SPACING_TOLERANCE = 1e-12


def _offset(line_grid: TorusGrid, torus_grid: TorusGrid) -> int:
    """Index shift between line nodes and torus nodes; both share the spacing."""
    if abs(line_grid.spacing - torus_grid.spacing) > SPACING_TOLERANCE * torus_grid.spacing:
        raise GridMismatchError(
            f"Line spacing {line_grid.spacing:g} differs from torus spacing {torus_grid.spacing:g}"
        )
    shift = (line_grid.length - torus_grid.length) / (2 * torus_grid.spacing)
    if abs(shift - round(shift)) > 1e-9:
        raise GridMismatchError("Line nodes are not aligned with torus nodes")
    return int(round(shift))


def torus_for(line_grid: TorusGrid, L: float) -> TorusGrid:
    """Torus of circumference L with the line grid's spacing."""
    points = L / line_grid.spacing
    if abs(points - round(points)) > 1e-9:
        raise GridMismatchError(f"L={L:g} is not a whole number of line nodes")
    return TorusGrid(L, int(round(points)))


def push_forward(line_field: SpectralField, L: float) -> SpectralField:
    """
    ``[p_* f](x + LZ) = sum over y ~ x of f(y)``.

    Args:
        line_field: Field on the long grid standing in for the line
        L: Torus circumference

    Returns:
        Field on the torus of circumference L with the same spacing

    Raises:
        GridMismatchError: If spacings or node positions are incompatible
    """
    line_grid = line_field.grid
    torus_grid = torus_for(line_grid, L)
    shift = _offset(line_grid, torus_grid)
    indices = (np.arange(line_grid.points) - shift) % torus_grid.points
    values = np.zeros(torus_grid.points, dtype=np.complex128)
    np.add.at(values, indices, analyze(line_field))
    return synthesize(torus_grid, values)


def pull_back(torus_field: SpectralField, window: Tuple[float, float],
              line_grid: TorusGrid) -> SpectralField:
    """
    ``[p^* g](x) = g(x + LZ)`` for ``x`` in ``window``, zero elsewhere.

    Args:
        torus_field: Field on the torus
        window: Half-open interval ``[a, b)`` with ``b - a <= L``
        line_grid: Long grid with the torus spacing

    Returns:
        Field on the line grid

    Raises:
        ValidationError: If the window is longer than L or empty
        GridMismatchError: If the grids are incompatible
    """
    torus_grid = torus_field.grid
    a, b = float(window[0]), float(window[1])
    if not b > a:
        raise ValidationError("Window must have positive length", field='window')
    if b - a > torus_grid.length * (1 + 1e-12):
        raise ValidationError(
            f"Window length {b - a:g} exceeds the torus circumference {torus_grid.length:g}",
            field='window'
        )
    shift = _offset(line_grid, torus_grid)
    indices = (np.arange(line_grid.points) - shift) % torus_grid.points
    periodic = analyze(torus_field)[indices]
    y = line_grid.nodes
    eps = 1e-9 * line_grid.spacing
    inside = (y >= a - eps) & (y < b - eps)
    return synthesize(line_grid, np.where(inside, periodic, 0.0))


def window_from_cutoffs(center: float, L: float) -> Tuple[float, float]:
    """One-period window ``[c - L, c)`` carrying the cutoff supports."""
    return center - L, center
