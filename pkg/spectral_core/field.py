"""
Spectral fields and the Fourier analysis/synthesis pair.

Normalization: ``u_hat_k = (1/L) * integral of u(x) exp(-2 pi i k x / L) dx``
so that ``u(x) = sum_k u_hat_k exp(2 pi i k x / L)`` and
``||u||^2_{L^2} = L * sum_k |u_hat_k|^2``.

Author: Ahmad Yateem
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from spectral_core.grid import TorusGrid, require_same_grid
from utils.exceptions import ValidationError

Number = Union[int, float, complex]


@dataclass(frozen=True, eq=False)
class SpectralField:
    """
    One complex coefficient per lattice mode, stored in FFT order.

    Instances are immutable; arithmetic returns new fields.

    Attributes:
        grid: Grid the coefficients live on
        coefficients: Complex array of length ``grid.points``
    """

    grid: TorusGrid
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=np.complex128, copy=True)
        if coefficients.shape != (self.grid.points,):
            raise ValidationError(
                f"Expected {self.grid.points} coefficients, got shape {coefficients.shape}",
                field='coefficients'
            )
        if not np.all(np.isfinite(coefficients)):
            raise ValidationError("Coefficients must be finite", field='coefficients')
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def zeros(cls, grid: TorusGrid) -> 'SpectralField':
        return cls(grid, np.zeros(grid.points, dtype=np.complex128))

    def samples(self) -> np.ndarray:
        return analyze(self)

    def coefficient(self, k: int) -> complex:
        """Coefficient of integer mode ``k``."""
        return complex(self.coefficients[int(k) % self.grid.points])

    def sorted_coefficients(self) -> np.ndarray:
        """Coefficients ordered by mode -points/2 .. points/2 - 1."""
        return np.fft.fftshift(self.coefficients)

    def _combine(self, other: 'SpectralField', sign: float) -> 'SpectralField':
        require_same_grid(self.grid, other.grid)
        return SpectralField(self.grid, self.coefficients + sign * other.coefficients)

    def __add__(self, other: 'SpectralField') -> 'SpectralField':
        return self._combine(other, 1.0)

    def __sub__(self, other: 'SpectralField') -> 'SpectralField':
        return self._combine(other, -1.0)

    def __mul__(self, scalar: Number) -> 'SpectralField':
        return SpectralField(self.grid, self.coefficients * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> 'SpectralField':
        return SpectralField(self.grid, -self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectralField):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None


def synthesize(grid: TorusGrid, samples) -> SpectralField:
    """
    Turn node samples into a spectral field.

    Args:
        grid: Target grid
        samples: Complex value per node, nodes ordered left to right

    Returns:
        SpectralField with the normalized coefficients

    Raises:
        ValidationError: If the sample count differs from ``grid.points``
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.shape != (grid.points,):
        raise ValidationError(
            f"Expected {grid.points} samples, got shape {samples.shape}", field='samples'
        )
    return SpectralField(grid, grid.sign * np.fft.fft(samples) / grid.points)


def analyze(field: SpectralField) -> np.ndarray:
    """Return the node samples of ``field``."""
    grid = field.grid
    return np.fft.ifft(grid.sign * field.coefficients) * grid.points


def pad_coefficients(grid: TorusGrid, coefficients: np.ndarray, factor: int = 3) -> np.ndarray:
    """Array form of :func:`padded_samples`; no finiteness check."""
    m = factor * grid.points
    padded = np.zeros(m, dtype=np.complex128)
    padded[grid.modes % m] = coefficients
    sign = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    return np.fft.ifft(sign * padded) * m


def truncate_coefficients(grid: TorusGrid, samples: np.ndarray) -> np.ndarray:
    """Array form of :func:`truncate_samples`."""
    m = samples.shape[0]
    sign = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    full = sign * np.fft.fft(samples) / m
    return full[grid.modes % m]


def padded_samples(field: SpectralField, factor: int = 3) -> np.ndarray:
    """
    Samples on a ``factor``-times finer grid of the same length.

    Products of degree up to ``2*factor - 1`` evaluated on these nodes are
    alias-free once truncated back with :func:`truncate_samples`.
    """
    return pad_coefficients(field.grid, field.coefficients, factor)


def truncate_samples(grid: TorusGrid, samples: np.ndarray) -> SpectralField:
    """Inverse of :func:`padded_samples`: keep the modes resolved on ``grid``."""
    return SpectralField(grid, truncate_coefficients(grid, samples))


def refine(field: SpectralField, points: int) -> SpectralField:
    """
    Move ``field`` to another node count on the same circumference.

    Modes that do not fit on the target grid are dropped; new modes are zero.
    """
    target = field.grid.with_points(points)
    coefficients = np.zeros(points, dtype=np.complex128)
    source_modes = field.grid.modes
    keep = (source_modes >= -points // 2) & (source_modes < points // 2)
    coefficients[source_modes[keep] % points] = field.coefficients[keep]
    return SpectralField(target, coefficients)


def mass(field: SpectralField) -> float:
    """L^2 mass via Plancherel."""
    return float(field.grid.length * np.sum(np.abs(field.coefficients) ** 2))


def inner(f: SpectralField, g: SpectralField) -> complex:
    """
    L^2 pairing ``integral of f * conj(g)``.

    Raises:
        GridMismatchError: If the fields live on different grids
    """
    grid = require_same_grid(f.grid, g.grid)
    return complex(grid.length * np.vdot(g.coefficients, f.coefficients))


def lp_norm(field: SpectralField, p: float) -> float:
    """
    L^p norm by node quadrature with weight ``length/points``.

    Args:
        field: Field to measure
        p: Exponent in [1, inf]

    Returns:
        The norm
    """
    if not (p == np.inf or p >= 1):
        raise ValidationError(f"p must lie in [1, inf], got {p}", field='p')
    modulus = np.abs(analyze(field))
    if np.isinf(p):
        return float(modulus.max(initial=0.0))
    return float((field.grid.spacing * np.sum(modulus ** p)) ** (1.0 / p))


def derivative(field: SpectralField, order: int = 1) -> SpectralField:
    """Spectral derivative ``d^order/dx^order``."""
    return SpectralField(field.grid, (2j * np.pi * field.grid.xi) ** order * field.coefficients)


def high_frequency_tail(field: SpectralField, cutoff: float) -> float:
    """Mass carried by modes with ``|xi| > cutoff``."""
    mask = np.abs(field.grid.xi) > cutoff
    return float(field.grid.length * np.sum(np.abs(field.coefficients[mask]) ** 2))


def boundary_mass(field: SpectralField, margin: float) -> float:
    """Mass within ``margin`` of the grid's edge at x = +-L/2."""
    grid = field.grid
    outer = np.abs(grid.nodes) >= grid.length / 2 - margin
    return float(grid.spacing * np.sum(np.abs(analyze(field)[outer]) ** 2))


def sample_profile(grid: TorusGrid, kind: str, amplitude: float = 1.0, center: float = 0.0,
                   width: float = 1.0, frequency: float = 0.0) -> SpectralField:
    """
    Sample a standard initial profile.

    Args:
        grid: Target grid
        kind: ``gaussian``, ``sech``, ``lorentzian`` or ``plane_wave``
        amplitude: Peak amplitude
        center: Center of the envelope
        width: Envelope width
        frequency: Carrier frequency, rounded to the lattice

    Returns:
        SpectralField of the profile

    Raises:
        ValidationError: For an unknown profile kind
    """
    x = grid.nodes
    k0 = int(np.round(frequency * grid.length))
    carrier = np.exp(2j * np.pi * k0 * x / grid.length)
    y = (x - center) / width

    if kind == 'gaussian':
        envelope = np.exp(-y ** 2 / 2)
    elif kind == 'sech':
        envelope = 1.0 / np.cosh(y)
    elif kind == 'lorentzian':
        envelope = 1.0 / (1.0 + y ** 2)
    elif kind == 'plane_wave':
        envelope = np.ones_like(x)
    else:
        raise ValidationError(f"Unknown profile kind {kind!r}", field='kind')

    return synthesize(grid, amplitude * envelope * carrier)
