"""
Measured-quantity records shared by the estimate routines.

Author: Hassan Fouani
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from utils.exceptions import ValidationError


@dataclass
class NormReport:
    """
    One measured norm or operator norm.

    Attributes:
        label: What was measured
        value: Measured value
        params: Parameters of the measurement
        resolution: (grid points, time samples)
        quadrature_error_estimate: Non-negative discretization error estimate
        details: Auxiliary measurements (constituents, argmax, flags)
    """

    label: str
    value: float
    params: Dict[str, object] = field(default_factory=dict)
    resolution: Tuple[int, int] = (0, 0)
    quadrature_error_estimate: float = 0.0
    details: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        self.value = float(self.value)
        self.quadrature_error_estimate = abs(float(self.quadrature_error_estimate))

    def as_row(self) -> Dict[str, object]:
        row = {'label': self.label, 'value': self.value,
               'points': self.resolution[0], 'time_samples': self.resolution[1],
               'error_estimate': self.quadrature_error_estimate}
        row.update({f"param_{k}": v for k, v in sorted(self.params.items())})
        return row


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Least-squares slope of ``log y`` against ``log x``.

    Raises:
        ValidationError: With fewer than two positive pairs
    """
    pairs = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pairs) < 2:
        raise ValidationError("Need at least two positive points for a slope", field='values')
    lx, ly = np.log([p[0] for p in pairs]), np.log([p[1] for p in pairs])
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def doubling_ratios(values: List[float]) -> List[float]:
    """Successive ratios ``values[i] / values[i+1]`` (inf when the next one is 0)."""
    return [a / b if b else math.inf for a, b in zip(values, values[1:])]
