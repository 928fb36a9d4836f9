"""
Time evolution for every model variant.
"""

from propagators.coefficients import CoefficientSpec
from propagators.models import (
    ModelSpec, VARIANTS, free, quintic, alpha_truncated, d_truncated, rescaled_truncated,
    torus_truncated, inhomogeneous,
)
from propagators.flows import linear_flow, nonlinear_term, quintic_phase_substep
from propagators.integrators import (
    StepScheme, Trajectory, SCHEMES, step, evolve, reverse_check, richardson_order,
    default_scheme_kind, default_dt,
)

__all__ = [
    'CoefficientSpec', 'ModelSpec', 'VARIANTS', 'free', 'quintic', 'alpha_truncated',
    'd_truncated', 'rescaled_truncated', 'torus_truncated', 'inhomogeneous',
    'linear_flow', 'nonlinear_term', 'quintic_phase_substep',
    'StepScheme', 'Trajectory', 'SCHEMES', 'step', 'evolve', 'reverse_check',
    'richardson_order', 'default_scheme_kind', 'default_dt',
]
