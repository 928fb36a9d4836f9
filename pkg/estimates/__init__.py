"""
Space-time norms, dispersive kernels, bilinear ratios, operator norms and
the homogenization functional.
"""

from estimates.reports import NormReport, loglog_slope, doubling_ratios
from estimates.norms import spacetime_norm, strichartz_S, dual_constituents
from estimates.kernels import (
    dispersive_kernel, kernel_on_nodes, line_kernel, kernel_dispersive_constant,
    find_dispersive_length, OscillatorySum, oscillatory_sum_check,
)
from estimates.bilinear import bilinear_check, bilinear_ratio, bilinear_sweep
from estimates.operators import (
    OperatorSpec, Identity, Multiplier, Mask, Difference, Composition, Commutator,
    TorusConjugation, operator_norm_L2, dense_norm, indicator, plateau, mismatch_operator,
    commutator_operator, cross_manifold_operator, scaling_law,
)
from estimates.homogenization import homogenization_defect, homogenizes

__all__ = [
    'NormReport', 'loglog_slope', 'doubling_ratios',
    'spacetime_norm', 'strichartz_S', 'dual_constituents',
    'dispersive_kernel', 'kernel_on_nodes', 'line_kernel', 'kernel_dispersive_constant',
    'find_dispersive_length', 'OscillatorySum', 'oscillatory_sum_check',
    'bilinear_check', 'bilinear_ratio', 'bilinear_sweep',
    'OperatorSpec', 'Identity', 'Multiplier', 'Mask', 'Difference', 'Composition',
    'Commutator', 'TorusConjugation', 'operator_norm_L2', 'dense_norm', 'indicator',
    'plateau', 'mismatch_operator', 'commutator_operator', 'cross_manifold_operator', 'scaling_law',
    'homogenization_defect', 'homogenizes',
]
