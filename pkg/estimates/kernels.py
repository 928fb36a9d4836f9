"""
Dispersive kernel of the frequency-localized free flow on rescaled tori.

``K_N^L(t, x) = (1/L) sum_n exp(i(2 pi x n/L - 4 pi^2 t n^2/L^2)) phi(n/(L N))``
is the convolution kernel of ``exp(i t d_xx) P_{<=N}`` on the torus of
circumference L. The routines here evaluate it pointwise, on whole node
grids via the FFT, against the line kernel obtained by adaptive
quadrature, and measure the constant in ``|K| <= C |t|^{-1/2}``.

Author: Hassan Fouani
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.integrate import quad

from estimates.reports import NormReport
from spectral_core.symbols import bump
from utils.exceptions import ValidationError
from utils.logger import setup_logger
from utils.parallel import ordered_map
from utils.validators import validate_positive

logger = setup_logger(__name__)

DEFAULT_T_MIN_FRACTION = 0.05
STABILITY_TOLERANCE = 0.10


def _support(L: float, N: float) -> np.ndarray:
    reach = int(math.floor(2 * L * N))
    return np.arange(-reach, reach + 1)


def kernel_phase(n: np.ndarray, x: float, t: float, L: float) -> np.ndarray:
    return 2 * np.pi * x * n / L - 4 * np.pi ** 2 * t * n ** 2 / L ** 2


def dispersive_kernel(L: float, N: float, t: float, x) -> np.ndarray:
    """
    Direct summation of ``K_N^L(t, x)`` over ``|n| <= 2 L N``.

    Args:
        L: Torus circumference
        N: Frequency scale
        t: Time
        x: Position or array of positions

    Returns:
        Complex value(s)
    """
    n = _support(L, N)
    weights = bump(n / (L * N))
    keep = weights > 0
    n, weights = n[keep], weights[keep]
    x = np.asarray(x, dtype=float)
    phases = np.multiply.outer(x, 2 * np.pi * n / L) - 4 * np.pi ** 2 * t * n ** 2 / L ** 2
    value = np.exp(1j * phases) @ weights / L
    return value if value.ndim else complex(value)


def kernel_points(L: float, N: float) -> int:
    """Power-of-two node count resolving every mode of the kernel."""
    return 1 << int(math.ceil(math.log2(4 * L * N + 2)))


def kernel_on_nodes(L: float, N: float, t: float, points: int = None) -> np.ndarray:
    """
    ``K_N^L(t, x_j)`` at the nodes ``x_j = -L/2 + j L/points`` via one FFT.
    """
    points = points or kernel_points(L, N)
    if points <= 4 * L * N:
        raise ValidationError(f"points={points} cannot resolve |n| <= 2LN", field='points')
    modes = np.fft.fftfreq(points, d=1.0 / points)
    coefficients = bump(modes / (L * N)) * np.exp(-4j * np.pi ** 2 * t * modes ** 2 / L ** 2) / L
    sign = np.where(modes.astype(np.int64) % 2 == 0, 1.0, -1.0)
    return np.fft.ifft(sign * coefficients) * points


def line_kernel(N: float, t: float, x: float) -> complex:
    """
    Line kernel ``int exp(2 pi i x xi - 4 pi^2 i t xi^2) phi(xi/N) d xi`` by
    adaptive quadrature over pieces spanning a few radians of phase each.
    """
    def phase(xi):
        return 2 * np.pi * x * xi - 4 * np.pi ** 2 * t * xi ** 2

    slope = abs(2 * np.pi * x) + 16 * np.pi ** 2 * abs(t) * N
    pieces = max(8, int(math.ceil(slope * 4 * N / (4 * np.pi))))
    edges = np.linspace(-2 * N, 2 * N, pieces + 1)

    real = imag = 0.0
    for a, b in zip(edges, edges[1:]):
        real += quad(lambda xi: math.cos(phase(xi)) * float(bump(xi / N)), a, b, limit=100)[0]
        imag += quad(lambda xi: math.sin(phase(xi)) * float(bump(xi / N)), a, b, limit=100)[0]
    return complex(real, imag)


def _sup_at_time(L: float, N: float, t: float, points: int, stride: int):
    values = np.abs(kernel_on_nodes(L, N, t, points))[::stride]
    index = int(np.argmax(values))
    return math.sqrt(abs(t)) * float(values[index]), index * stride


def kernel_dispersive_constant(L: float, N: float, T: float, t_min: float = None,
                               x_samples: int = None, t_samples: int = 64) -> NormReport:
    """
    ``sup |t|^{1/2} |K_N^L(t, x)|`` over ``t in [t_min, T]`` and sampled x.

    Args:
        L: Torus circumference
        N: Frequency scale
        T: Time horizon
        t_min: Smallest time (default ``0.05 T``)
        x_samples: Number of x positions (default all kernel nodes)
        t_samples: Number of times, evenly spaced

    Returns:
        NormReport with the argmax location in ``details``

    Raises:
        ValidationError: Unless ``0 < t_min < T``
    """
    validate_positive(L, 'L')
    validate_positive(N, 'N')
    validate_positive(T, 'T')
    t_min = DEFAULT_T_MIN_FRACTION * T if t_min is None else t_min
    if not 0 < t_min < T:
        raise ValidationError(f"Need 0 < t_min < T, got t_min={t_min}, T={T}", field='t_min')

    points = kernel_points(L, N)
    stride = max(1, points // x_samples) if x_samples else 1
    times = np.linspace(t_min, T, t_samples)
    results = ordered_map(lambda t: _sup_at_time(L, N, t, points, stride), times)

    best = int(np.argmax([value for value, _ in results]))
    value, node = results[best]
    return NormReport(
        label='dispersive_constant',
        value=value,
        params={'L': L, 'N': N, 'T': T, 't_min': t_min},
        resolution=(points // stride, t_samples),
        details={'argmax_t': float(times[best]), 'argmax_x': -L / 2 + node * L / points,
                 'per_time': [value for value, _ in results]},
    )


def find_dispersive_length(N: float, T: float, t_min: float = None, start_length: float = 64.0,
                           max_length: float = 2 ** 14, t_samples: int = 32) -> Dict[str, object]:
    """
    Double L until the dispersive constant changes by less than 10%.

    Returns:
        Dict with ``L0`` (first length of a stable pair, or None), the sweep of
        lengths and constants, and whether stability was reached
    """
    lengths: List[float] = []
    constants: List[float] = []
    L = start_length
    previous: Optional[float] = None
    while L <= max_length:
        constant = kernel_dispersive_constant(L, N, T, t_min, t_samples=t_samples).value
        lengths.append(L)
        constants.append(constant)
        if previous is not None and abs(constant - previous) <= STABILITY_TOLERANCE * previous:
            logger.info('Dispersive length found', extra={'N': N, 'T': T, 'L0': L / 2})
            return {'L0': L / 2, 'lengths': lengths, 'constants': constants, 'stable': True}
        previous = constant
        L *= 2
    logger.warning('Dispersive constant did not stabilize', extra={'N': N, 'T': T})
    return {'L0': None, 'lengths': lengths, 'constants': constants, 'stable': False}


@dataclass
class OscillatorySum:
    """Literal sum and its Van der Corput-type bound with constant 1."""

    value: float
    bound: float
    s1: float
    s2: float
    vacuous: bool

    @property
    def ratio(self) -> float:
        if self.vacuous or self.bound == 0:
            return math.inf if self.value else 0.0
        return self.value / self.bound


def oscillatory_sum_check(x: float, t: float, L: float, f: Callable[[np.ndarray], np.ndarray],
                          M: float) -> OscillatorySum:
    """
    Compare ``|(1/L) sum_{|n| <= 2M} exp(i Phi(n)) f(n/M)|`` with
    ``1/(L s1) + M s2/(L s1^2)`` for the kernel phase.

    ``s1`` is the smallest distance of a first phase difference to ``2 pi Z``
    over the support and ``s2`` the largest second difference.

    Args:
        x: Position
        t: Time
        L: Torus circumference
        f: Profile supported in ``|xi| <= 2``
        M: Support scale

    Returns:
        OscillatorySum; ``vacuous`` is set when ``s1 = 0``
    """
    validate_positive(L, 'L')
    validate_positive(M, 'M')
    reach = int(math.floor(2 * M))
    n = np.arange(-reach, reach + 1)
    weights = np.asarray(f(n / M), dtype=float)
    phase = kernel_phase(n.astype(float), x, t, L)
    value = abs(np.sum(np.exp(1j * phase) * weights)) / L

    extended = kernel_phase(np.arange(-reach - 1, reach + 2).astype(float), x, t, L)
    first = np.diff(extended)
    distance = np.abs((first + np.pi) % (2 * np.pi) - np.pi)
    s1 = float(distance.min())
    s2 = float(np.abs(np.diff(extended, 2)).max()) if extended.size > 2 else 0.0

    if s1 == 0:
        return OscillatorySum(float(value), math.inf, s1, s2, True)
    bound = 1.0 / (L * s1) + M * s2 / (L * s1 ** 2)
    return OscillatorySum(float(value), float(bound), s1, s2, False)
