"""
Periodic coefficient functions h(y) of period 1 for the inhomogeneous model.

A coefficient is given either by a closed-form tag or by one period of
equispaced samples; samples are evaluated by trigonometric interpolation
and their mean is the spectrally accurate quadrature of one period.

Author: Hassan Fouani
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from utils.exceptions import ValidationError

COEFFICIENT_KINDS = ('constant', 'cosine', 'samples')


@dataclass(frozen=True)
class CoefficientSpec:
    """
    Bounded 1-periodic real function h.

    Attributes:
        kind: ``constant`` (h = value), ``cosine`` (h = value + amplitude*cos(2 pi y))
            or ``samples`` (one period of node values)
        value: Constant level
        amplitude: Cosine amplitude
        table: Samples of one period at y = j/len(table)
    """

    kind: str = 'cosine'
    value: float = 1.0
    amplitude: float = 1.0
    table: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in COEFFICIENT_KINDS:
            raise ValidationError(f"Unknown coefficient kind {self.kind!r}", field='h.kind')
        if self.kind == 'samples':
            table = tuple(float(v) for v in self.table)
            if len(table) < 2 or not np.all(np.isfinite(table)):
                raise ValidationError("h.table needs at least two finite samples", field='h.table')
            object.__setattr__(self, 'table', table)

    @property
    def is_constant(self) -> bool:
        if self.kind == 'constant':
            return True
        if self.kind == 'cosine':
            return self.amplitude == 0
        return bool(np.ptp(self.table) == 0)

    def _series(self):
        table = np.asarray(self.table)
        m = table.size
        coefficients = np.fft.fft(table) / m
        modes = np.fft.fftfreq(m, d=1.0 / m)
        if m % 2 == 0:
            # split the Nyquist term evenly so the interpolant stays real
            nyquist = m // 2
            coefficients = np.append(coefficients, coefficients[nyquist] / 2)
            coefficients[nyquist] /= 2
            modes = np.append(modes, nyquist)
            modes[nyquist] = -nyquist
        return coefficients, modes

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self.kind == 'constant':
            return np.full_like(y, self.value)
        if self.kind == 'cosine':
            return self.value + self.amplitude * np.cos(2 * np.pi * y)
        coefficients, modes = self._series()
        phases = np.exp(2j * np.pi * np.multiply.outer(y, modes))
        return np.real(phases @ coefficients)

    def mean(self) -> float:
        """Average of h over one period."""
        if self.kind in ('constant', 'cosine'):
            return float(self.value)
        return float(np.mean(self.table))

    def bound(self) -> float:
        if self.kind == 'constant':
            return abs(self.value)
        if self.kind == 'cosine':
            return abs(self.value) + abs(self.amplitude)
        return float(np.max(np.abs(self(np.linspace(0, 1, 16 * len(self.table), endpoint=False)))))

    def as_dict(self) -> dict:
        data = {'kind': self.kind, 'value': self.value, 'amplitude': self.amplitude}
        if self.kind == 'samples':
            data['table'] = list(self.table)
        return data
