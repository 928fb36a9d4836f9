"""
Experiment records and the discretization firewall shared by all studies.

Author: Ahmad Yateem
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from configs.config import Config
from propagators.integrators import StepScheme, Trajectory
from spectral_core.field import SpectralField, boundary_mass, refine
from spectral_core.grid import TorusGrid
from utils.exceptions import ValidationError
from utils.logger import log_verdict, setup_logger
from utils.validators import validate_sweep

logger = setup_logger(__name__)

EXPERIMENT_KINDS = (
    'homogenization', 'torus_approx', 'weak_convergence', 'nonsqueezing', 'stability',
    'mass_concentration',
)

# Changes below this absolute level count as agreement in the firewall.
FIREWALL_FLOOR = 1e-8

RowFn = Callable[[object, bool], Dict[str, object]]


@dataclass
class ExperimentSpec:
    """
    One study: kind, fixed parameters, the sweep and the seed.

    Attributes:
        kind: One of :data:`EXPERIMENT_KINDS`
        params: Model, grid and time parameters recorded in the report
        sweep_key: Name of the swept quantity
        sweep: Sorted nonempty sweep values
        seed: Root seed
    """

    kind: str
    sweep_key: str
    sweep: List[object]
    params: Dict[str, object] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValidationError(f"Unknown experiment kind {self.kind!r}", field='experiment.kind')
        self.sweep = validate_sweep(self.sweep, self.sweep_key)


@dataclass
class ExperimentReport:
    """
    Rows of measured quantities, verdict flags and provenance.

    Attributes:
        kind: Experiment kind
        sweep_key: First CSV column
        columns: Measured quantities in CSV order
        error_columns: Error estimates, written after the measured columns
        rows: One dict per sweep value, ordered like the sweep
        flags: Named boolean verdict flags
        summary: Scalar results that are not per-row (slopes, maxima)
        provenance: Resolutions, seed and parameters
    """

    kind: str
    sweep_key: str
    columns: List[str]
    error_columns: List[str] = field(default_factory=list)
    rows: List[Dict[str, object]] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)
    summary: Dict[str, object] = field(default_factory=dict)
    provenance: Dict[str, object] = field(default_factory=dict)

    @property
    def header(self) -> List[str]:
        return [self.sweep_key] + list(self.columns) + list(self.error_columns)

    @property
    def verdict(self) -> str:
        if not self.rows:
            return 'no-data'
        return 'pass' if all(self.flags.values()) else 'fail'

    def column(self, name: str) -> List[object]:
        return [row.get(name) for row in self.rows]

    def finalize(self) -> 'ExperimentReport':
        log_verdict(logger, self.kind, self.verdict, dict(self.flags))
        return self


@dataclass(frozen=True)
class Resolution:
    """Grid and time step of one run; ``refined()`` doubles nodes and halves dt."""

    grid: TorusGrid
    dt: float

    def refined(self) -> 'Resolution':
        return Resolution(self.grid.with_points(2 * self.grid.points), self.dt / 2)

    def at(self, refined: bool) -> 'Resolution':
        return self.refined() if refined else self

    def scheme(self, kind: str) -> StepScheme:
        return StepScheme(kind, self.dt)

    def place(self, u: SpectralField) -> SpectralField:
        """Move ``u`` onto this resolution's node count."""
        if u.grid.points == self.grid.points:
            return u
        return refine(u, self.grid.points)

    def as_dict(self) -> Dict[str, object]:
        return {'length': self.grid.length, 'points': self.grid.points, 'dt': self.dt}


def relative_change(base: float, refined: float) -> float:
    difference = abs(refined - base)
    if difference <= FIREWALL_FLOOR:
        return 0.0
    return difference / max(abs(base), FIREWALL_FLOOR)


def discretization_firewall(run_row: RowFn, sweep: Sequence[object], rows: List[Dict[str, object]],
                            columns: Sequence[str], tolerance: float = None) -> Dict[str, object]:
    """
    Re-run the first and last rows at (dt/2, 2x nodes) and compare.

    Args:
        run_row: ``run_row(value, refined)`` returning a row dict
        sweep: Sweep values
        rows: Rows already measured at base resolution
        columns: Columns compared
        tolerance: Allowed relative change (default ``Config.DISCRETIZATION_TOLERANCE``)

    Returns:
        Dict with ``passed`` and one check record per compared cell
    """
    tolerance = Config.DISCRETIZATION_TOLERANCE if tolerance is None else tolerance
    indices = sorted({0, len(sweep) - 1}) if sweep else []
    checks = []
    for index in indices:
        refined_row = run_row(sweep[index], True)
        for name in columns:
            base_value, refined_value = rows[index].get(name), refined_row.get(name)
            if base_value is None or refined_value is None:
                continue
            change = relative_change(float(base_value), float(refined_value))
            checks.append({'row': index, 'column': name, 'base': float(base_value),
                           'refined': float(refined_value), 'change': change,
                           'passed': change <= tolerance})

    passed = all(check['passed'] for check in checks)
    if not passed:
        logger.warning('Discretization firewall failed',
                       extra={'event_type': 'firewall',
                              'failures': [c for c in checks if not c['passed']]})
    return {'passed': passed, 'tolerance': tolerance, 'checks': checks}


def difference_trajectory(a: Trajectory, b: Trajectory) -> Trajectory:
    """Snapshot-wise ``a - b`` for runs sampled at the same times."""
    if len(a) != len(b) or not np.allclose(a.times, b.times, rtol=0, atol=1e-12):
        raise ValidationError("Trajectories are sampled at different times", field='times')
    snapshots = [x - y for x, y in zip(a.snapshots, b.snapshots)]
    return Trajectory(a.model, a.grid, a.times, snapshots, a.scheme_id, a.dt_used)


def snapshot_at(traj: Trajectory, t: float) -> SpectralField:
    """Snapshot stored at time ``t``."""
    matches = np.flatnonzero(np.isclose(traj.times, t, rtol=0, atol=1e-9))
    if matches.size == 0:
        raise ValidationError(f"No snapshot stored at t={t:g}", field='t_list')
    return traj.snapshots[int(matches[0])]


def non_increasing(values: Sequence[float], slack: float = 0.10) -> bool:
    """No value exceeds its predecessor by more than ``slack`` (relative)."""
    return all(b <= a * (1 + slack) + FIREWALL_FLOOR for a, b in zip(values, values[1:]))


def decays(values: Sequence[float], factor: float) -> bool:
    """Last value below ``factor`` times the first (both zero counts as decay)."""
    if not values:
        return False
    first, last = float(values[0]), float(values[-1])
    if first <= FIREWALL_FLOOR:
        return last <= FIREWALL_FLOOR
    return last < factor * first


def finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def stride_for(T: float, dt: float, samples: int = 32) -> int:
    """Sample stride keeping about ``samples`` snapshots; doubles when dt halves."""
    steps = max(1, int(math.ceil(T / dt - 1e-9)))
    return max(1, steps // samples)


def max_boundary_mass(trajectories: Iterable[Trajectory], fraction: float = None) -> float:
    """
    Largest mass found in the outer band ``|x| >= L/2 - fraction * L`` over
    every snapshot of every trajectory.

    Args:
        trajectories: Runs on tori standing in for the line
        fraction: Band width as a fraction of the circumference
            (default ``Config.BOUNDARY_MARGIN_FRACTION``)

    Returns:
        The worst boundary mass, 0.0 for no snapshots
    """
    fraction = Config.BOUNDARY_MARGIN_FRACTION if fraction is None else fraction
    worst = 0.0
    for trajectory in trajectories:
        margin = fraction * trajectory.grid.length
        for snapshot in trajectory.snapshots:
            worst = max(worst, boundary_mass(snapshot, margin))
    return worst


def boundary_clear(value: float) -> bool:
    """True while the boundary mass stays under ``Config.BOUNDARY_MASS_LIMIT``."""
    passed = value < Config.BOUNDARY_MASS_LIMIT
    if not passed:
        logger.warning('Mass reached the torus boundary',
                       extra={'event_type': 'boundary_mass', 'boundary_mass': value,
                              'limit': Config.BOUNDARY_MASS_LIMIT})
    return passed
