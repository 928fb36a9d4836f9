"""
Space-time Lebesgue norms of sampled trajectories.

Space integrals use node quadrature; time integrals use the trapezoid rule
over the stored samples. The error estimate is the change when every other
sample is dropped (the last sample is always kept).

Author: Hassan Fouani
"""

import math
from typing import List, Tuple

import numpy as np
from scipy.integrate import trapezoid

from estimates.reports import NormReport
from propagators.integrators import Trajectory
from spectral_core.field import lp_norm
from utils.exceptions import ValidationError


def _check_exponent(value: float, name: str) -> float:
    if not (value == math.inf or value >= 1):
        raise ValidationError(f"{name} must lie in [1, inf], got {value}", field=name)
    return value


def _time_norm(times: np.ndarray, values: np.ndarray, q: float) -> float:
    if math.isinf(q):
        return float(values.max(initial=0.0))
    integral = trapezoid(values ** q, times)
    return float(integral ** (1.0 / q))


def _halved(count: int) -> List[int]:
    indices = list(range(0, count, 2))
    if indices[-1] != count - 1:
        indices.append(count - 1)
    return indices


def spacetime_norm(traj: Trajectory, q: float, r: float) -> NormReport:
    """
    ``L^q_t L^r_x`` norm over the trajectory's time span.

    Args:
        traj: Trajectory with at least two samples
        q: Time exponent in [1, inf]
        r: Space exponent in [1, inf]

    Returns:
        NormReport with a sample-halving error estimate

    Raises:
        ValidationError: With fewer than two samples or bad exponents
    """
    _check_exponent(q, 'q')
    _check_exponent(r, 'r')
    if len(traj) < 2:
        raise ValidationError("Space-time norms need at least two time samples", field='trajectory')

    spatial = np.array([lp_norm(snapshot, r) for snapshot in traj.snapshots])
    value = _time_norm(traj.times, spatial, q)
    coarse = _halved(len(traj))
    coarse_value = _time_norm(traj.times[coarse], spatial[coarse], q)

    return NormReport(
        label=f"L^{q:g}_t L^{r:g}_x",
        value=value,
        params={'q': q, 'r': r, 'T': traj.duration},
        resolution=(traj.grid.points, len(traj)),
        quadrature_error_estimate=abs(value - coarse_value),
        details={'spatial_norms': spatial.tolist()},
    )


def strichartz_S(traj: Trajectory) -> NormReport:
    """Sum of the ``C^0_t L^2_x`` and ``L^5_t L^10_x`` norms."""
    energy_part = spacetime_norm(traj, math.inf, 2)
    dispersive_part = spacetime_norm(traj, 5, 10)
    return NormReport(
        label='S',
        value=energy_part.value + dispersive_part.value,
        params={'T': traj.duration},
        resolution=(traj.grid.points, len(traj)),
        quadrature_error_estimate=energy_part.quadrature_error_estimate
        + dispersive_part.quadrature_error_estimate,
        details={'C0L2': energy_part.value, 'L5L10': dispersive_part.value},
    )


def dual_constituents(traj: Trajectory) -> Tuple[NormReport, NormReport]:
    """
    The two concrete pieces ``L^1_t L^2_x`` and ``L^{5/4}_t L^{10/9}_x`` of
    the dual Strichartz norm, evaluated on a sampled source term.
    """
    return spacetime_norm(traj, 1, 2), spacetime_norm(traj, 5.0 / 4.0, 10.0 / 9.0)
