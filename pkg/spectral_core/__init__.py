"""
Grids, Fourier analysis/synthesis, multipliers and basic functionals.
"""

from spectral_core.grid import TorusGrid, make_grid, require_same_grid
from spectral_core.field import (
    SpectralField, synthesize, analyze, refine, mass, inner, lp_norm, derivative,
    high_frequency_tail, boundary_mass, sample_profile, padded_samples, truncate_samples,
)
from spectral_core.symbols import (
    MultiplierSymbol, bump, smoothstep, eval_mD, sharp_low, smooth_low, dyadic, mD,
    mD_rescaled, mD_difference, helmholtz_inverse, custom, identity, apply_multiplier,
    symbol_values,
)
from spectral_core.functionals import energy, kinetic_energy, potential_energy, pointwise_tail

__all__ = [
    'TorusGrid', 'make_grid', 'require_same_grid',
    'SpectralField', 'synthesize', 'analyze', 'refine', 'mass', 'inner', 'lp_norm',
    'derivative', 'high_frequency_tail', 'boundary_mass', 'sample_profile',
    'padded_samples', 'truncate_samples',
    'MultiplierSymbol', 'bump', 'smoothstep', 'eval_mD', 'sharp_low', 'smooth_low',
    'dyadic', 'mD', 'mD_rescaled', 'mD_difference', 'helmholtz_inverse', 'custom',
    'identity', 'apply_multiplier', 'symbol_values',
    'energy', 'kinetic_energy', 'potential_energy', 'pointwise_tail',
]
