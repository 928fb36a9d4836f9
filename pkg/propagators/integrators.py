"""
Time stepping: Strang splitting with the exact phase substep and a
fourth-order Lawson (integrating-factor Runge-Kutta) scheme.

Author: Hassan Fouani
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from configs.config import Config
from propagators.flows import (
    linear_symbol, nonlinear_coefficients, phase_rotation, weight_samples,
)
from propagators.models import ModelSpec
from spectral_core.field import SpectralField, mass
from spectral_core.functionals import energy
from spectral_core.grid import TorusGrid
from utils.exceptions import (
    IntegrationDivergenceError, SchemeMismatchError, ValidationError,
)
from utils.logger import setup_logger
from utils.validators import validate_positive

logger = setup_logger(__name__)

SCHEMES = ('strang_exact', 'lawson_rk4')
SCHEME_ORDER = {'strang_exact': 2, 'lawson_rk4': 4}
DEFAULT_SAMPLE_COUNT = 128

Forcing = Callable[[float], SpectralField]


@dataclass(frozen=True)
class StepScheme:
    """
    Integrator choice and time step.

    Attributes:
        kind: ``strang_exact`` or ``lawson_rk4``
        dt: Positive step
    """

    kind: str
    dt: float

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValidationError(f"Unknown scheme {self.kind!r}", field='scheme')
        object.__setattr__(self, 'dt', validate_positive(self.dt, 'dt'))

    @property
    def order(self) -> int:
        return SCHEME_ORDER[self.kind]


@dataclass
class Trajectory:
    """
    Time-stamped snapshots of one evolution.

    Attributes:
        model: Model that produced the snapshots (None when loaded from disk)
        grid: Shared grid
        times: Strictly increasing sample times starting at 0
        snapshots: One SpectralField per time
        scheme_id: Integrator name
        dt_used: Step actually taken
    """

    model: Optional[ModelSpec]
    grid: TorusGrid
    times: np.ndarray
    snapshots: List[SpectralField]
    scheme_id: str = 'none'
    dt_used: float = 0.0
    details: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or len(self.times) != len(self.snapshots):
            raise ValidationError("times and snapshots must have equal length", field='times')
        if len(self.times) and self.times[0] != 0.0:
            raise ValidationError("Trajectory must start at t=0", field='times')
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("Trajectory times must be strictly increasing", field='times')
        for snapshot in self.snapshots:
            if snapshot.grid != self.grid:
                raise ValidationError("Snapshots must share the trajectory grid", field='snapshots')

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def initial(self) -> SpectralField:
        return self.snapshots[0]

    @property
    def final(self) -> SpectralField:
        return self.snapshots[-1]

    @property
    def duration(self) -> float:
        return float(self.times[-1]) if len(self.times) else 0.0

    def coefficient_matrix(self) -> np.ndarray:
        """Snapshots stacked as rows, FFT order."""
        return np.stack([snapshot.coefficients for snapshot in self.snapshots])

    def map(self, fn: Callable[[SpectralField], SpectralField]) -> 'Trajectory':
        """Apply ``fn`` to every snapshot."""
        return Trajectory(self.model, self.grid, self.times, [fn(s) for s in self.snapshots],
                          self.scheme_id, self.dt_used)

    def mass_series(self) -> np.ndarray:
        return np.array([mass(snapshot) for snapshot in self.snapshots])

    def energy_series(self) -> np.ndarray:
        return np.array([energy(snapshot, self.model) for snapshot in self.snapshots])

    def max_relative_mass_drift(self) -> float:
        series = self.mass_series()
        if series[0] == 0:
            return float(np.max(np.abs(series)))
        return float(np.max(np.abs(series - series[0])) / series[0])


def default_scheme_kind(model: ModelSpec) -> str:
    return 'strang_exact' if model.is_pointwise else 'lawson_rk4'


def check_scheme(model: ModelSpec, kind: str, forcing: Optional[Forcing] = None) -> None:
    """
    Raises:
        SchemeMismatchError: If ``kind`` cannot integrate ``model``
    """
    if kind == 'strang_exact' and (not model.is_pointwise or forcing is not None):
        raise SchemeMismatchError(kind, model.variant if forcing is None else f"forced {model.variant}")


class _Stepper:
    """Array-level stepping for one model on one grid."""

    def __init__(self, model: ModelSpec, grid: TorusGrid, kind: str, forcing: Optional[Forcing] = None):
        self.model = model
        self.grid = grid
        self.kind = kind
        self.forcing = forcing
        self.weight = weight_samples(model, grid)
        self._linear: Dict[float, np.ndarray] = {}

    def linear(self, t: float) -> np.ndarray:
        if t not in self._linear:
            self._linear[t] = linear_symbol(self.grid, t)
        return self._linear[t]

    def _to_samples(self, c: np.ndarray) -> np.ndarray:
        return np.fft.ifft(self.grid.sign * c) * self.grid.points

    def _to_coefficients(self, samples: np.ndarray) -> np.ndarray:
        return self.grid.sign * np.fft.fft(samples) / self.grid.points

    def _phase(self, c: np.ndarray, h: float) -> np.ndarray:
        if self.model.is_free:
            return c
        return self._to_coefficients(phase_rotation(self._to_samples(c), h, self.weight))

    def rhs(self, t: float, c: np.ndarray) -> np.ndarray:
        value = nonlinear_coefficients(self.model, self.grid, c)
        if self.forcing is not None:
            value = value + self.forcing(t).coefficients
        return -1j * value

    def strang(self, c: np.ndarray, t: float, h: float) -> np.ndarray:
        half = self.linear(h / 2)
        return half * self._phase(half * c, h)

    def strang_transposed(self, c: np.ndarray, t: float, h: float) -> np.ndarray:
        return self._phase(self.linear(h) * self._phase(c, h / 2), h / 2)

    def lawson(self, c: np.ndarray, t: float, h: float) -> np.ndarray:
        half = self.linear(h / 2)
        full = self.linear(h)
        k1 = self.rhs(t, c)
        k2 = self.rhs(t + h / 2, half * (c + h / 2 * k1))
        k3 = self.rhs(t + h / 2, half * c + h / 2 * k2)
        k4 = self.rhs(t + h, full * c + h * half * k3)
        return full * c + h / 6 * (full * k1 + 2 * half * (k2 + k3) + k4)

    def advance(self, c: np.ndarray, t: float, h: float, transposed: bool = False) -> np.ndarray:
        if self.kind == 'strang_exact':
            return self.strang_transposed(c, t, h) if transposed else self.strang(c, t, h)
        return self.lawson(c, t, h)


def _check_finite(c: np.ndarray, t: float, step_index: int) -> None:
    if not np.all(np.isfinite(c)):
        logger.error('Evolution diverged', extra={'event_type': 'divergence', 'time': t, 'step': step_index})
        raise IntegrationDivergenceError(
            f"Non-finite state at t={t:.6g} (step {step_index})", time=t, step=step_index
        )


def step(field: SpectralField, model: ModelSpec, scheme: StepScheme) -> SpectralField:
    """
    Advance ``field`` by one step of ``scheme``.

    Raises:
        SchemeMismatchError: If the scheme cannot integrate the model
        IntegrationDivergenceError: If the result is not finite
    """
    check_scheme(model, scheme.kind)
    stepper = _Stepper(model, field.grid, scheme.kind)
    with np.errstate(over='ignore', invalid='ignore'):
        c = stepper.advance(field.coefficients, 0.0, scheme.dt)
    _check_finite(c, scheme.dt, 1)
    return SpectralField(field.grid, c)


def _run(model: ModelSpec, u0: SpectralField, T: float, kind: str, dt: float,
         sample_stride: Optional[int], forcing: Optional[Forcing]) -> Trajectory:
    steps = max(1, int(math.ceil(T / dt - 1e-9)))
    h = T / steps
    stride = sample_stride or max(1, steps // DEFAULT_SAMPLE_COUNT)
    stepper = _Stepper(model, u0.grid, kind, forcing)

    c = u0.coefficients
    times = [0.0]
    snapshots = [u0]
    with np.errstate(over='ignore', invalid='ignore'):
        for index in range(1, steps + 1):
            t = (index - 1) * h
            c = stepper.advance(c, t, h)
            _check_finite(c, index * h, index)
            if index % stride == 0 or index == steps:
                times.append(T if index == steps else index * h)
                snapshots.append(SpectralField(u0.grid, c))

    return Trajectory(model, u0.grid, np.array(times), snapshots, kind, h)


def evolve(model: ModelSpec, u0: SpectralField, T: float, scheme: StepScheme = None,
           sample_stride: int = None, forcing: Forcing = None) -> Trajectory:
    """
    Evolve ``u0`` under ``model`` on [0, T].

    Without an explicit scheme the integrator is chosen from the model and
    the step starts at ``T * 2**-14``, halved until the relative mass drift
    falls below ``Config.MASS_DRIFT_TARGET``.

    Args:
        model: Model variant
        u0: Initial data
        T: Final time, non-negative
        scheme: Optional integrator and step
        sample_stride: Keep every ``sample_stride``-th step (t=0 and t=T always kept)
        forcing: Optional source ``e(t)`` for ``i u_t + u_xx = N(u) + e``; lawson_rk4 only

    Returns:
        Trajectory

    Raises:
        SchemeMismatchError: On an incompatible scheme
        IntegrationDivergenceError: On non-finite values
    """
    if T < 0:
        raise ValidationError("T must be non-negative", field='T')
    kind = scheme.kind if scheme is not None else default_scheme_kind(model)
    if forcing is not None and scheme is None:
        kind = 'lawson_rk4'
    check_scheme(model, kind, forcing)

    if T == 0:
        return Trajectory(model, u0.grid, np.array([0.0]), [u0], kind, 0.0)

    if scheme is not None:
        return _run(model, u0, T, kind, scheme.dt, sample_stride, forcing)
    return _halving_run(model, u0, T, kind, sample_stride, forcing)


def _halving_run(model: ModelSpec, u0: SpectralField, T: float, kind: str,
                 sample_stride: Optional[int], forcing: Optional[Forcing]) -> Trajectory:
    dt = T * 2.0 ** -Config.DEFAULT_DT_EXPONENT
    trajectory = None
    for halving in range(Config.MAX_DT_HALVINGS + 1):
        trajectory = _run(model, u0, T, kind, dt, sample_stride, forcing)
        drift = trajectory.max_relative_mass_drift()
        trajectory.details['mass_drift'] = drift
        if drift < Config.MASS_DRIFT_TARGET or forcing is not None:
            return trajectory
        logger.info('Halving time step', extra={'event_type': 'dt_halving', 'dt': dt,
                                                'mass_drift': drift, 'halving': halving + 1})
        dt /= 2
    logger.warning('Mass drift target not reached', extra={'event_type': 'dt_halving',
                                                           'dt': trajectory.dt_used})
    return trajectory


def default_dt(model: ModelSpec, u0: SpectralField, T: float) -> Tuple[float, float]:
    """
    Step accepted by the halving rule of :func:`evolve`.

    Returns:
        (dt, relative mass drift measured at that dt)
    """
    if T <= 0:
        raise ValidationError("T must be positive", field='T')
    kind = default_scheme_kind(model)
    check_scheme(model, kind)
    trajectory = _halving_run(model, u0, T, kind, None, None)
    return trajectory.dt_used, trajectory.details['mass_drift']


def reverse_check(model: ModelSpec, u0: SpectralField, T: float, scheme: StepScheme) -> float:
    """
    L^2 distance between ``u0`` and its forward-then-backward evolution.

    The backward pass of the splitting scheme uses the transposed ordering
    (phase / linear / phase) so the round trip measures truncation error
    instead of cancelling exactly.

    Returns:
        ``||backward(forward(u0)) - u0||_{L^2}``
    """
    check_scheme(model, scheme.kind)
    steps = max(1, int(math.ceil(T / scheme.dt - 1e-9)))
    h = T / steps
    stepper = _Stepper(model, u0.grid, scheme.kind)
    c = u0.coefficients
    with np.errstate(over='ignore', invalid='ignore'):
        for index in range(steps):
            c = stepper.advance(c, index * h, h)
        for index in range(steps):
            c = stepper.advance(c, T - index * h, -h, transposed=True)
    _check_finite(c, 0.0, 2 * steps)
    difference = c - u0.coefficients
    return float(math.sqrt(u0.grid.length * np.sum(np.abs(difference) ** 2)))


def richardson_order(model: ModelSpec, u0: SpectralField, T: float, kind: str,
                     dts: List[float]) -> Dict[str, object]:
    """
    Observed convergence order from successive step refinements.

    Args:
        model: Model variant
        u0: Initial data
        T: Final time
        kind: Integrator
        dts: Decreasing steps (each half the previous one)

    Returns:
        Dict with ``differences``, per-pair ``slopes`` and their ``mean``
    """
    finals = [_run(model, u0, T, kind, dt, None, None).final for dt in dts]
    differences = [math.sqrt(mass(a - b)) for a, b in zip(finals, finals[1:])]
    slopes = [math.log2(a / b) for a, b in zip(differences, differences[1:]) if a > 0 and b > 0]
    return {
        'differences': differences,
        'slopes': slopes,
        'mean': float(np.mean(slopes)) if slopes else float('nan'),
    }
