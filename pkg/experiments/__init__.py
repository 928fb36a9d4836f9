"""
Sweep studies built on the propagators and estimates.
"""

from experiments.base import (
    EXPERIMENT_KINDS, ExperimentSpec, ExperimentReport, Resolution, discretization_firewall,
)
from experiments.homogenization import run_homogenization
from experiments.torus_approx import run_torus_approx, run_mass_concentration
from experiments.weak_convergence import run_weak_convergence
from experiments.nonsqueezing import run_nonsqueezing_probe
from experiments.stability import ForcingSpec, run_stability_check

__all__ = [
    'EXPERIMENT_KINDS', 'ExperimentSpec', 'ExperimentReport', 'Resolution',
    'discretization_firewall',
    'run_homogenization', 'run_torus_approx', 'run_mass_concentration',
    'run_weak_convergence', 'run_nonsqueezing_probe', 'ForcingSpec', 'run_stability_check',
]
