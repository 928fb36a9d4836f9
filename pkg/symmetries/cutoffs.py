"""
Nested cutoff functions chi^0 .. chi^4 for comparing line and torus flows.

With ramp unit ``w = 2 D K T / eta``, ``chi^j`` equals 1 on
``[c - L + (10-2j) w, c - (10-2j) w]``, vanishes outside
``[c - L + (9-2j) w, c - (9-2j) w]`` and follows the quintic smoothstep on
the ramps. The ramp slope is at most ``1.875/w < eta/(D K T)``. The center
``c`` is chosen in ``[L/4, L/2]`` where the data carries the least mass.

Author: Ahmad Yateem
"""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from spectral_core.field import SpectralField, analyze
from spectral_core.symbols import smoothstep
from utils.exceptions import CutoffConstructionError, ValidationError
from utils.logger import setup_logger
from utils.validators import validate_positive

logger = setup_logger(__name__)

LEVELS = 5
RAMP_SLOPE = 1.875
SAMPLES_PER_RAMP = 64
SCAN_STEPS_PER_RAMP = 4


@dataclass
class CutoffSet:
    """
    Five nested cutoffs sampled on a torus grid.

    Attributes:
        masks: ``masks[j]`` holds chi^j at the torus nodes
        params: D, K, T, eta, L, eps and the ramp unit
        center: Chosen center c
        report: Measured slope, support gaps and residual masses
    """

    masks: List[np.ndarray]
    params: Dict[str, float]
    center: float
    report: Dict[str, object] = field(default_factory=dict)

    @property
    def unit(self) -> float:
        return self.params['unit']

    def line_mask(self, j: int, x) -> np.ndarray:
        """chi^j at arbitrary line positions ``x``."""
        return _profile(np.asarray(x, dtype=float), j, self.center, self.params['L'], self.unit)

    def support(self, j: int):
        c, L, w = self.center, self.params['L'], self.unit
        return c - L + (9 - 2 * j) * w, c - (9 - 2 * j) * w

    def plateau(self, j: int):
        c, L, w = self.center, self.params['L'], self.unit
        return c - L + (10 - 2 * j) * w, c - (10 - 2 * j) * w


def _profile(x: np.ndarray, j: int, c: float, L: float, w: float) -> np.ndarray:
    rise_start = c - L + (9 - 2 * j) * w
    fall_start = c - (10 - 2 * j) * w
    rising = smoothstep((x - rise_start) / w)
    falling = 1.0 - smoothstep((x - fall_start) / w)
    return rising * falling


def _profile_slope(x: np.ndarray, j: int, c: float, L: float, w: float) -> np.ndarray:
    def ramp(r):
        r = np.clip(r, 0.0, 1.0)
        return 30.0 * r ** 2 * (1.0 - r) ** 2 / w

    rise_start = c - L + (9 - 2 * j) * w
    fall_start = c - (10 - 2 * j) * w
    rising = smoothstep((x - rise_start) / w)
    falling = 1.0 - smoothstep((x - fall_start) / w)
    return ramp((x - rise_start) / w) * falling - rising * ramp((x - fall_start) / w)


def _period_coordinates(nodes: np.ndarray, c: float, L: float) -> np.ndarray:
    """Representatives of the torus nodes in ``[c - L, c)``."""
    return np.where(nodes >= c, nodes - L, nodes)


def torus_masks(center: float, L: float, unit: float, nodes: np.ndarray) -> List[np.ndarray]:
    coordinates = _period_coordinates(nodes, center, L)
    return [_profile(coordinates, j, center, L, unit) for j in range(LEVELS)]


def _measure(center: float, L: float, unit: float) -> Dict[str, object]:
    x = np.linspace(center - L, center, int(SAMPLES_PER_RAMP * L / unit) + 1)
    profiles = [_profile(x, j, center, L, unit) for j in range(LEVELS)]
    slopes = [float(np.max(np.abs(_profile_slope(x, j, center, L, unit)))) for j in range(LEVELS)]

    gaps = {}
    for i in range(LEVELS):
        inside_i = x[profiles[i] > 0]
        for j in range(i + 1, LEVELS):
            outside_j = x[profiles[j] < 1]
            distances = np.abs(np.subtract.outer(inside_i[[0, -1]], outside_j))
            gaps[f"{i}-{j}"] = float(distances.min())

    nested = all(
        bool(np.all(profiles[j][profiles[i] > 0] == 1.0))
        for i in range(LEVELS) for j in range(i + 1, LEVELS)
    )
    return {'max_slope': max(slopes), 'slopes': slopes, 'support_gaps': gaps, 'nested': nested}


def build_cutoffs(D: float, K: float, T: float, eta: float, L: float, u0: SpectralField,
                  eps: float = None) -> CutoffSet:
    """
    Construct the nested cutoffs and a low-mass window for ``u0``.

    Args:
        D: Averaging depth of the truncation
        K: Frequency scale
        T: Time horizon
        eta: Slope parameter
        L: Torus circumference (must match ``u0``)
        u0: Data on the torus
        eps: Allowed residual ``||(1 - chi^j) u0||``; defaults to ``eta``

    Returns:
        CutoffSet whose report records the measured slope bound, support gaps
        and residual masses

    Raises:
        CutoffConstructionError: If L is too short or no window holds mass below eps
    """
    for name, value in (('D', D), ('K', K), ('T', T), ('eta', eta), ('L', L)):
        validate_positive(value, name)
    eps = eta if eps is None else validate_positive(eps, 'eps')
    grid = u0.grid
    if abs(grid.length - L) > 1e-12 * L:
        raise ValidationError(f"u0 lives on a torus of length {grid.length}, expected {L}", field='L')

    scale = D * K * T / eta
    unit = 2.0 * scale
    required = 20.0 * unit
    if L <= required:
        raise CutoffConstructionError(
            f"L={L:g} too short for cutoffs with ramp unit {unit:g}; need L > {required:g}",
            required_length=required,
        )

    samples = analyze(u0)
    nodes = grid.nodes
    candidates = np.arange(L / 4, L / 2 + 1e-12, unit / SCAN_STEPS_PER_RAMP)

    best_center, best_residual = None, np.inf
    for center in candidates:
        chi0 = torus_masks(center, L, unit, nodes)[0]
        residual = float(np.sqrt(grid.spacing * np.sum(np.abs((1.0 - chi0) * samples) ** 2)))
        if residual < best_residual:
            best_center, best_residual = float(center), residual

    if best_residual > eps:
        raise CutoffConstructionError(
            f"No window in [L/4, L/2] keeps ||(1-chi)u0|| below {eps:g} "
            f"(best {best_residual:.3e}); increase L",
            required_length=2 * L,
        )

    masks = torus_masks(best_center, L, unit, nodes)
    residuals = [
        float(np.sqrt(grid.spacing * np.sum(np.abs((1.0 - mask) * samples) ** 2))) for mask in masks
    ]
    report = _measure(best_center, L, unit)
    report.update({
        'slope_bound': eta / (D * K * T),
        'gap_bound': scale,
        'residual_masses': residuals,
        'length_ratio': L / required,
    })
    logger.info('Cutoffs constructed', extra={'event_type': 'cutoffs', 'center': best_center,
                                              'unit': unit, 'max_residual': max(residuals)})

    params = {'D': D, 'K': K, 'T': T, 'eta': eta, 'L': L, 'eps': eps, 'unit': unit}
    return CutoffSet(masks, params, best_center, report)
