"""
Model variants of the defocusing quintic Schrodinger equation.

Every variant is written ``i u_t + u_xx = w * Q P F(P u)`` with
``F(v) = |v|^4 v``, a real weight ``w`` (possibly depending on x), a
smooth projection ``P`` and an outer sharp cut ``Q``. The Hamiltonian is
``E = (1/2) int |u_x|^2 + (w/6) int |P u|^6``.

Author: Hassan Fouani
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from propagators.coefficients import CoefficientSpec
from spectral_core.symbols import MultiplierSymbol, identity, mD, mD_rescaled, sharp_low
from utils.exceptions import ValidationError
from utils.validators import validate_dyadic, validate_positive, validate_positive_integer, validate_range

VARIANTS = (
    'free', 'quintic', 'alpha_truncated', 'd_truncated',
    'rescaled_truncated', 'torus_truncated', 'inhomogeneous',
)

POINTWISE_VARIANTS = ('free', 'quintic', 'inhomogeneous')


@dataclass(frozen=True)
class ModelSpec:
    """
    Equation variant plus parameters.

    Attributes:
        variant: One of :data:`VARIANTS`
        lam: Coupling for ``quintic`` and ``inhomogeneous``
        alpha: Scale for ``alpha_truncated``
        symbol: Projection for ``alpha_truncated`` (identity when omitted)
        D: Averaging depth for the m_D truncations
        K: Frequency rescaling for ``rescaled_truncated``/``torus_truncated``
        n_cut: Outer sharp cut for ``torus_truncated``
        h: Coefficient for ``inhomogeneous``
        n: Oscillation frequency of ``h(n x)``
    """

    variant: str
    lam: float = 1.0
    alpha: float = 1.0
    symbol: Optional[MultiplierSymbol] = None
    D: float = 2.0
    K: float = 1.0
    n_cut: float = 0.0
    h: Optional[CoefficientSpec] = None
    n: int = 1
    sign: int = field(default=1, init=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValidationError(f"Unknown model variant {self.variant!r}", field='model.variant')
        if self.variant in ('quintic', 'inhomogeneous'):
            validate_positive(self.lam, 'lam')
        if self.variant == 'alpha_truncated':
            validate_range(self.alpha, 'alpha', 0.0, 1.0, low_inclusive=False)
        if self.variant in ('d_truncated', 'rescaled_truncated', 'torus_truncated'):
            validate_dyadic(self.D, 'D', minimum=2)
        if self.variant in ('rescaled_truncated', 'torus_truncated'):
            validate_positive(self.K, 'K')
        if self.variant == 'torus_truncated':
            validate_dyadic(self.n_cut, 'n_cut')
        if self.variant == 'inhomogeneous':
            if self.h is None:
                raise ValidationError("inhomogeneous model needs a coefficient h", field='h')
            validate_positive_integer(self.n, 'n')

    @property
    def is_pointwise(self) -> bool:
        return self.variant in POINTWISE_VARIANTS

    @property
    def translation_invariant(self) -> bool:
        return self.variant != 'inhomogeneous'

    @property
    def is_free(self) -> bool:
        return self.variant == 'free'

    def projection(self) -> Optional[MultiplierSymbol]:
        """Smooth projection P, or None for the identity."""
        if self.variant == 'alpha_truncated':
            return self.symbol
        if self.variant == 'd_truncated':
            return mD(self.D)
        if self.variant in ('rescaled_truncated', 'torus_truncated'):
            return mD_rescaled(self.D, self.K)
        return None

    def outer_projection(self) -> Optional[MultiplierSymbol]:
        if self.variant == 'torus_truncated':
            return sharp_low(self.n_cut)
        return None

    @property
    def weight(self) -> float:
        """Constant part of the weight w."""
        if self.variant == 'free':
            return 0.0
        if self.variant == 'alpha_truncated':
            return self.alpha ** 6
        if self.variant in ('quintic', 'inhomogeneous'):
            return self.lam
        return 1.0

    def weight_at(self, x) -> np.ndarray:
        """Weight ``w(x)`` sampled at positions ``x``."""
        x = np.asarray(x, dtype=float)
        if self.variant == 'inhomogeneous':
            return self.lam * self.h(self.n * x)
        return np.full_like(x, self.weight)

    def averaged(self) -> 'ModelSpec':
        """Quintic model with the mean weight ``lam * mean(h)``."""
        if self.variant != 'inhomogeneous':
            return self
        return quintic(self.lam * self.h.mean())

    def as_dict(self) -> dict:
        data = {'variant': self.variant}
        if self.variant in ('quintic', 'inhomogeneous'):
            data['lam'] = self.lam
        if self.variant == 'alpha_truncated':
            data['alpha'] = self.alpha
            data['symbol'] = self.symbol.label if self.symbol is not None else 'identity'
        if self.variant in ('d_truncated', 'rescaled_truncated', 'torus_truncated'):
            data['D'] = self.D
        if self.variant in ('rescaled_truncated', 'torus_truncated'):
            data['K'] = self.K
        if self.variant == 'torus_truncated':
            data['n_cut'] = self.n_cut
        if self.variant == 'inhomogeneous':
            data['h'] = self.h.as_dict()
            data['n'] = self.n
        return data


def free() -> ModelSpec:
    return ModelSpec('free')


def quintic(lam: float = 1.0) -> ModelSpec:
    return ModelSpec('quintic', lam=lam)


def alpha_truncated(alpha: float, symbol: MultiplierSymbol = None) -> ModelSpec:
    return ModelSpec('alpha_truncated', alpha=alpha, symbol=symbol or identity())


def d_truncated(D: float) -> ModelSpec:
    return ModelSpec('d_truncated', D=D)


def rescaled_truncated(D: float, K: float) -> ModelSpec:
    return ModelSpec('rescaled_truncated', D=D, K=K)


def torus_truncated(n_cut: float, D: float, K: float) -> ModelSpec:
    return ModelSpec('torus_truncated', n_cut=n_cut, D=D, K=K)


def inhomogeneous(h: CoefficientSpec, n: int, lam: float = 1.0) -> ModelSpec:
    return ModelSpec('inhomogeneous', h=h, n=n, lam=lam)
