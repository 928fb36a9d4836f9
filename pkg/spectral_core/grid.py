"""
Periodic collocation grids.

A :class:`TorusGrid` discretizes the circle of circumference ``length``
with ``points`` equispaced nodes ``x_j = -length/2 + j*length/points`` and
lattice frequencies ``xi_k = k/length`` (cycles per unit length). Arrays
indexed by mode are kept in FFT order throughout the package.

Author: Ahmad Yateem
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from utils.exceptions import GridMismatchError
from utils.validators import validate_positive, validate_power_of_two

MIN_POINTS = 8


@dataclass(frozen=True)
class TorusGrid:
    """
    Discretized circle T_L = R / (L Z).

    Attributes:
        length: Circumference L
        points: Number of collocation nodes (power of two, at least 8)
    """

    length: float
    points: int

    def __post_init__(self):
        object.__setattr__(self, 'length', validate_positive(self.length, 'length'))
        object.__setattr__(self, 'points', validate_power_of_two(self.points, 'points', MIN_POINTS))

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def frequency_spacing(self) -> float:
        return 1.0 / self.length

    @cached_property
    def nodes(self) -> np.ndarray:
        return -self.length / 2 + self.spacing * np.arange(self.points)

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode numbers k in FFT order."""
        return np.fft.fftfreq(self.points, d=1.0 / self.points).astype(np.int64)

    @cached_property
    def xi(self) -> np.ndarray:
        """Frequencies k/L in FFT order."""
        return np.fft.fftfreq(self.points, d=self.spacing)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Frequencies k/L sorted ascending, k = -points/2 .. points/2 - 1."""
        return np.fft.fftshift(self.xi)

    @cached_property
    def sign(self) -> np.ndarray:
        """(-1)^k per mode; shifts the FFT origin to the left end node."""
        return np.where(self.modes % 2 == 0, 1.0, -1.0)

    @property
    def max_frequency(self) -> float:
        return self.points / (2 * self.length)

    def with_points(self, points: int) -> 'TorusGrid':
        return TorusGrid(self.length, points)

    def with_length(self, length: float) -> 'TorusGrid':
        return TorusGrid(length, self.points)

    def node_index(self, x: float) -> int:
        """Index of the node nearest to ``x`` (periodically wrapped)."""
        return int(np.round((x + self.length / 2) / self.spacing)) % self.points

    def as_dict(self) -> dict:
        return {'length': self.length, 'points': self.points}


def make_grid(length: float, points: int) -> TorusGrid:
    """
    Build a torus grid.

    Args:
        length: Circumference, must be positive
        points: Node count, power of two no smaller than 8

    Returns:
        TorusGrid with frequencies k/length

    Raises:
        ValidationError: On non-positive length or invalid node count
    """
    return TorusGrid(length, points)


def require_same_grid(*grids: TorusGrid) -> TorusGrid:
    """
    Check that all grids coincide.

    Raises:
        GridMismatchError: If any two grids differ
    """
    first = grids[0]
    for other in grids[1:]:
        if other != first:
            raise GridMismatchError(f"Grid mismatch: {first.as_dict()} vs {other.as_dict()}")
    return first
