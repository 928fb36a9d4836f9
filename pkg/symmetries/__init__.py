"""
Symmetry group, cutoff factory and line/torus transfer maps.
"""

from symmetries.frames import (
    SymmetryFrame, apply_g, apply_G, apply_T, free_sampler, orthogonality_defect,
)
from symmetries.cutoffs import CutoffSet, build_cutoffs, torus_masks
from symmetries.transfer import push_forward, pull_back, torus_for, window_from_cutoffs

__all__ = [
    'SymmetryFrame', 'apply_g', 'apply_G', 'apply_T', 'free_sampler', 'orthogonality_defect',
    'CutoffSet', 'build_cutoffs', 'torus_masks',
    'push_forward', 'pull_back', 'torus_for', 'window_from_cutoffs',
]
