"""
Hamiltonian functional and pointwise diagnostics.

Author: Ahmad Yateem
"""

import numpy as np

from spectral_core.field import SpectralField, analyze, padded_samples
from spectral_core.symbols import MultiplierSymbol, apply_multiplier

PAD_FACTOR = 3


def kinetic_energy(field: SpectralField) -> float:
    """``(1/2) * integral |u_x|^2`` computed on the Fourier side."""
    grid = field.grid
    return float(0.5 * grid.length * np.sum((2 * np.pi * grid.xi) ** 2 * np.abs(field.coefficients) ** 2))


def potential_energy(field: SpectralField, model) -> float:
    """
    ``(w/6) * integral |P u|^6`` for the model's weight ``w`` and projection ``P``.

    The sextic integrand is evaluated on the 3x zero-padded grid.
    """
    projection = model.projection()
    projected = apply_multiplier(field, projection) if projection is not None else field
    samples = padded_samples(projected, PAD_FACTOR)
    m = samples.shape[0]
    x = -field.grid.length / 2 + field.grid.length / m * np.arange(m)
    weight = model.weight_at(x)
    return float(np.sum(weight * np.abs(samples) ** 6) * field.grid.length / m / 6.0)


def energy(field: SpectralField, model) -> float:
    """
    Hamiltonian ``E = (1/2) int |u_x|^2 + (w/6) int |P u|^6`` of ``model``.

    Args:
        field: State
        model: A :class:`propagators.models.ModelSpec`

    Returns:
        Energy value
    """
    return kinetic_energy(field) + potential_energy(field, model)


def pointwise_tail(field: SpectralField, symbol: MultiplierSymbol, radius: float) -> float:
    """
    Largest ``|P f(x)|`` over nodes with ``|x| >= radius``.

    Used to observe the polynomial decay of Littlewood-Paley projections of
    compactly supported data.
    """
    values = np.abs(analyze(apply_multiplier(field, symbol)))
    outside = np.abs(field.grid.nodes) >= radius
    return float(values[outside].max(initial=0.0))
