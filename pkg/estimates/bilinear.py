"""
Bilinear Strichartz ratios for frequency-separated free waves.

For data localized at frequencies M and N >= 10 M the product of the two
free evolutions gains ``(M/N)^{1/4}`` in ``L^3_{t,x}``. The check draws
random unit-mass data, evolves both factors on a torus long enough that
neither wraps during ``[-T, T]`` and reports the worst ratio.

Author: Ahmad Yateem
"""

import math
from typing import Dict, List, Sequence

import numpy as np
from scipy.integrate import trapezoid

from estimates.reports import NormReport, loglog_slope
from propagators.flows import linear_symbol
from spectral_core.field import SpectralField, analyze, mass, synthesize
from spectral_core.grid import TorusGrid
from spectral_core.symbols import dyadic, symbol_values
from utils.exceptions import ValidationError
from utils.logger import setup_logger
from utils.parallel import ordered_map, spawn_generators
from utils.validators import validate_positive, validate_positive_integer

logger = setup_logger(__name__)

SEPARATION = 10
TIME_SAMPLES = 129


def _next_power_of_two(value: float) -> int:
    return 1 << max(0, math.ceil(math.log2(value)))


def bilinear_grid(M: float, N: float, T: float) -> TorusGrid:
    """Torus holding both wave packets on ``[-T, T]`` with ``N`` well resolved."""
    length = float(_next_power_of_two(1.25 * (8 * math.pi * N * T + 16.0 / M)))
    points = _next_power_of_two(8 * N * length)
    return TorusGrid(length, points)


def random_packet(grid: TorusGrid, frequency: float, rng: np.random.Generator) -> SpectralField:
    """Unit-mass noise in a window of width ``1/frequency`` projected onto ``P_frequency``."""
    x = grid.nodes
    window = np.exp(-(x * frequency) ** 2)
    noise = rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points)
    raw = synthesize(grid, noise * window)
    packet = SpectralField(grid, symbol_values(dyadic(frequency), grid) * raw.coefficients)
    total = mass(packet)
    if total == 0:
        return packet
    return packet * (1.0 / math.sqrt(total))


def product_L3(f: SpectralField, g: SpectralField, times: np.ndarray) -> float:
    """``|| e^{it d^2} f * e^{it d^2} g ||_{L^3}`` over ``times`` and the torus."""
    grid = f.grid
    values = np.empty(len(times))
    for index, t in enumerate(times):
        propagator = linear_symbol(grid, t)
        u = analyze(SpectralField(grid, propagator * f.coefficients))
        v = analyze(SpectralField(grid, propagator * g.coefficients))
        values[index] = grid.spacing * np.sum(np.abs(u * v) ** 3)
    return float(trapezoid(values, times) ** (1.0 / 3.0))


def bilinear_ratio(f: SpectralField, g: SpectralField, M: float, N: float, T: float,
                   time_samples: int = TIME_SAMPLES) -> float:
    """
    Ratio ``||u_M v_N||_{L^3} / ((M/N)^{1/4} ||f|| ||g||)``; zero when a factor vanishes.
    """
    norm_f, norm_g = math.sqrt(mass(f)), math.sqrt(mass(g))
    if norm_f == 0 or norm_g == 0:
        return 0.0
    times = np.linspace(-T, T, time_samples)
    return product_L3(f, g, times) / ((M / N) ** 0.25 * norm_f * norm_g)


def bilinear_check(M: float, N: float, trial_count: int = 16, seed: int = 0, T: float = None,
                   time_samples: int = TIME_SAMPLES) -> NormReport:
    """
    Worst bilinear ratio over random frequency-localized data.

    Args:
        M: Low frequency
        N: High frequency, at least ``10 M``
        trial_count: Number of random pairs
        seed: Root seed; trial ``k`` uses child stream ``k``
        T: Half-length of the time window (default ``1/(M N)``)
        time_samples: Time nodes on ``[-T, T]``

    Returns:
        NormReport whose value is the maximal ratio; ``details['ratios']``
        lists every trial

    Raises:
        ValidationError: If ``N < 10 M`` or a parameter is not positive
    """
    M = validate_positive(M, 'M')
    N = validate_positive(N, 'N')
    trial_count = validate_positive_integer(trial_count, 'trial_count')
    if N < SEPARATION * M:
        raise ValidationError(f"N must be at least {SEPARATION} M (got M={M:g}, N={N:g})", field='N')
    T = 1.0 / (M * N) if T is None else validate_positive(T, 'T')

    grid = bilinear_grid(M, N, T)
    generators = spawn_generators(seed, trial_count)

    def trial(rng):
        f = random_packet(grid, M, rng)
        g = random_packet(grid, N, rng)
        return bilinear_ratio(f, g, M, N, T, time_samples)

    ratios = ordered_map(trial, generators)
    logger.debug('Bilinear trials done', extra={'M': M, 'N': N, 'max_ratio': max(ratios)})

    return NormReport(
        label='bilinear_L3',
        value=max(ratios),
        params={'M': M, 'N': N, 'T': T, 'trials': trial_count, 'seed': seed},
        resolution=(grid.points, time_samples),
        details={'ratios': ratios, 'length': grid.length},
    )


def bilinear_sweep(M: float, N_list: Sequence[float], trial_count: int = 16,
                   seed: int = 0, time_samples: int = TIME_SAMPLES) -> Dict[str, object]:
    """
    Run :func:`bilinear_check` along ``N_list`` and fit the log-log slope of
    the worst ratio against ``M/N``. A slope near zero means the
    ``(M/N)^{1/4}`` gain is sharp.
    """
    reports: List[NormReport] = [bilinear_check(M, N, trial_count, seed, time_samples=time_samples)
                                 for N in N_list]
    separations = [M / N for N in N_list]
    ratios = [report.value for report in reports]
    return {
        'separations': separations,
        'ratios': ratios,
        'slope': loglog_slope(separations, ratios),
        'reports': reports,
    }
