"""
Building blocks of the evolution: the free flow, the nonlinearity and the
exact pointwise phase rotation.

Author: Hassan Fouani
"""

from typing import Union

import numpy as np

from propagators.models import ModelSpec
from spectral_core.field import (
    SpectralField, analyze, pad_coefficients, synthesize, truncate_coefficients,
)
from spectral_core.functionals import PAD_FACTOR
from spectral_core.grid import TorusGrid
from spectral_core.symbols import symbol_values
from utils.logger import setup_logger

logger = setup_logger(__name__)

TRUNCATION_WARN_MASS = 1e-20


def linear_symbol(grid: TorusGrid, t: float) -> np.ndarray:
    """``exp(-4 pi^2 i t xi^2)`` per mode, FFT order."""
    return np.exp(-4j * np.pi ** 2 * t * grid.xi ** 2)


def linear_flow(field: SpectralField, t: float) -> SpectralField:
    """
    Free Schrodinger flow ``exp(i t d_xx)``.

    Args:
        field: Initial state
        t: Time, any sign

    Returns:
        Evolved field; the map is unitary
    """
    if t == 0:
        return field
    return SpectralField(field.grid, linear_symbol(field.grid, t) * field.coefficients)


def _padded_nodes(grid: TorusGrid) -> np.ndarray:
    m = PAD_FACTOR * grid.points
    return -grid.length / 2 + grid.length / m * np.arange(m)


def nonlinear_coefficients(model: ModelSpec, grid: TorusGrid, coefficients: np.ndarray) -> np.ndarray:
    """
    Array form of :func:`nonlinear_term`, used inside the integrators.

    The quintic product is formed on the 3x padded grid and truncated back.
    """
    if model.is_free:
        return np.zeros_like(coefficients)

    projection = model.projection()
    projection_values = symbol_values(projection, grid) if projection is not None else None
    projected = coefficients * projection_values if projection_values is not None else coefficients

    samples = pad_coefficients(grid, projected, PAD_FACTOR)
    weight = model.weight_at(_padded_nodes(grid)) if model.variant == 'inhomogeneous' else model.weight
    product = weight * np.abs(samples) ** 4 * samples
    result = truncate_coefficients(grid, product)

    if projection_values is not None:
        result *= projection_values
    outer = model.outer_projection()
    if outer is not None:
        result *= symbol_values(outer, grid)
    return result


def nonlinear_term(model: ModelSpec, field: SpectralField) -> SpectralField:
    """
    Nonlinearity ``N(u) = w Q P F(P u)`` of the model.

    Args:
        model: Model variant
        field: State

    Returns:
        SpectralField of N(u)
    """
    outer = model.outer_projection()
    if outer is not None:
        leaked = np.abs(field.coefficients) ** 2 * (1.0 - symbol_values(outer, field.grid))
        leaked_mass = float(field.grid.length * leaked.sum())
        if leaked_mass > TRUNCATION_WARN_MASS:
            logger.warning(
                'State has mass above the truncation cut',
                extra={'event_type': 'truncation', 'n_cut': model.n_cut, 'mass': leaked_mass}
            )
    return SpectralField(field.grid, nonlinear_coefficients(model, field.grid, field.coefficients))


def weight_samples(model: ModelSpec, grid: TorusGrid) -> Union[float, np.ndarray]:
    """Weight at the collocation nodes: a scalar or one value per node."""
    if model.variant == 'inhomogeneous':
        return model.weight_at(grid.nodes)
    return model.weight


def phase_rotation(samples: np.ndarray, dt: float, weight) -> np.ndarray:
    return samples * np.exp(-1j * weight * np.abs(samples) ** 4 * dt)


def quintic_phase_substep(field: SpectralField, dt: float, weight) -> SpectralField:
    """
    Exact flow of ``i u_t = w(x) |u|^4 u`` over ``dt`` at the nodes.

    Args:
        field: State
        dt: Time step, any sign
        weight: Scalar weight or one real value per node

    Returns:
        Field with ``u(x) exp(-i w(x) |u(x)|^4 dt)``; the pointwise modulus is unchanged
    """
    if dt == 0:
        return field
    return synthesize(field.grid, phase_rotation(analyze(field), dt, np.asarray(weight, dtype=float)))
