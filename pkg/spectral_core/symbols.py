"""
Fourier multiplier symbols.

The fixed bump ``phi`` equals 1 on ``|xi| <= 1``, vanishes on ``|xi| >= 2``
and follows the quintic smoothstep in between. Every smooth projection in
the package (Littlewood-Paley pieces, the averaged symbol ``m_D``, the
cutoff ramps in :mod:`symmetries.cutoffs`) is built from it.

Author: Hassan Fouani
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np

from spectral_core.field import SpectralField
from utils.exceptions import ValidationError
from utils.validators import validate_dyadic, validate_positive

SymbolFn = Callable[[np.ndarray], np.ndarray]


def smoothstep(r: np.ndarray) -> np.ndarray:
    """Quintic smoothstep 6r^5 - 15r^4 + 10r^3, clipped to [0, 1]."""
    r = np.clip(r, 0.0, 1.0)
    return r ** 3 * (10.0 - 15.0 * r + 6.0 * r ** 2)


def bump(xi) -> np.ndarray:
    """The bump phi evaluated elementwise."""
    return 1.0 - smoothstep(np.abs(np.asarray(xi, dtype=float)) - 1.0)


def _dyadic_levels(D: float) -> np.ndarray:
    return 2.0 ** np.arange(int(round(math.log2(D))) + 1)


def _check_D(D) -> float:
    D = validate_dyadic(D, 'D', minimum=2)
    return D


def eval_mD(xi, D) -> np.ndarray:
    """
    Averaged truncation symbol ``m_D(xi) = mean over N=1,2,..,D of phi(xi/N)``.

    Args:
        xi: Frequency or array of frequencies
        D: Dyadic integer, at least 2

    Returns:
        Values in [0, 1], even and non-increasing in ``|xi|``

    Raises:
        ValidationError: If D is not dyadic or smaller than 2
    """
    D = _check_D(D)
    xi = np.asarray(xi, dtype=float)
    levels = _dyadic_levels(D)
    total = sum(bump(xi / level) for level in levels)
    value = total / math.log2(2 * D)
    return value if value.ndim else float(value)


@dataclass(frozen=True)
class MultiplierSymbol:
    """
    Real bounded symbol m(xi) acting diagonally on Fourier coefficients.

    Attributes:
        kind: Symbol family name
        params: Family parameters, recorded in reports
        evaluator: Vectorized function of xi
    """

    kind: str
    params: Dict[str, float] = field(default_factory=dict)
    evaluator: SymbolFn = field(default=None, compare=False, repr=False)

    def __call__(self, xi) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(xi, dtype=float)), dtype=float)

    @property
    def label(self) -> str:
        if not self.params:
            return self.kind
        args = ','.join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({args})"


def sharp_low(N: float) -> MultiplierSymbol:
    """Indicator of ``|xi| <= N``."""
    N = validate_positive(N, 'N')
    return MultiplierSymbol('sharp_low', {'N': N}, lambda xi: (np.abs(xi) <= N).astype(float))


def smooth_low(N: float) -> MultiplierSymbol:
    """Smooth projection P_{<=N} with symbol phi(xi/N)."""
    N = validate_positive(N, 'N')
    return MultiplierSymbol('smooth_low', {'N': N}, lambda xi: bump(xi / N))


def dyadic(N: float, sharp: bool = False) -> MultiplierSymbol:
    """
    Littlewood-Paley piece P_N.

    The smooth piece has symbol ``phi(xi/N) - phi(2 xi/N)``; the sharp piece
    is the indicator of ``N/2 < |xi| <= N``. Both telescope to the identity
    on band-limited fields when summed over dyadic N.
    """
    N = validate_positive(N, 'N')
    if sharp:
        return MultiplierSymbol('dyadic_sharp', {'N': N},
                                lambda xi: ((np.abs(xi) > N / 2) & (np.abs(xi) <= N)).astype(float))
    return MultiplierSymbol('dyadic', {'N': N}, lambda xi: bump(xi / N) - bump(2 * xi / N))


def mD(D: float) -> MultiplierSymbol:
    """Averaged truncation symbol m_D."""
    D = _check_D(D)
    return MultiplierSymbol('mD', {'D': D}, lambda xi: eval_mD(xi, D))


def mD_rescaled(D: float, K: float) -> MultiplierSymbol:
    """Rescaled symbol ``m_D(xi/K)``."""
    D = _check_D(D)
    K = validate_positive(K, 'K')
    return MultiplierSymbol('mD_rescaled', {'D': D, 'K': K}, lambda xi: eval_mD(xi / K, D))


def mD_difference(D: float, factor: float = 2.0) -> MultiplierSymbol:
    """Symbol ``m_D(xi) - m_D(factor * xi)``."""
    D = _check_D(D)
    return MultiplierSymbol('mD_difference', {'D': D, 'factor': factor},
                            lambda xi: eval_mD(xi, D) - eval_mD(factor * xi, D))


def helmholtz_inverse() -> MultiplierSymbol:
    """Symbol of ``(-d^2/dx^2 + 1)^{-1}``."""
    return MultiplierSymbol('helmholtz_inverse', {},
                            lambda xi: 1.0 / (1.0 + 4.0 * np.pi ** 2 * xi ** 2))


def custom(evaluator: Union[SymbolFn, Tuple[Sequence[float], Sequence[float]]], name: str = 'custom',
           **params) -> MultiplierSymbol:
    """
    Wrap an arbitrary real bounded symbol.

    Args:
        evaluator: Vectorized callable of xi, or a table ``(xi, values)`` with
            strictly increasing nodes, interpolated linearly and held constant
            past either end
        name: Symbol family name
        **params: Recorded in reports

    Raises:
        ValidationError: If the evaluator is neither callable nor a valid table
    """
    if callable(evaluator):
        return MultiplierSymbol(name, dict(params), evaluator)
    try:
        nodes, values = (np.asarray(part, dtype=float) for part in evaluator)
    except (TypeError, ValueError):
        raise ValidationError("custom symbol needs a callable or an (xi, values) table",
                              field='evaluator')
    if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
        raise ValidationError("symbol table needs two equal-length 1-D arrays of at least two nodes",
                              field='evaluator')
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(values))):
        raise ValidationError("symbol table must be finite", field='evaluator')
    if np.any(np.diff(nodes) <= 0):
        raise ValidationError("symbol table nodes must be strictly increasing", field='evaluator')
    return MultiplierSymbol(name, dict(params), lambda xi: np.interp(xi, nodes, values))


def identity() -> MultiplierSymbol:
    return MultiplierSymbol('identity', {}, lambda xi: np.ones_like(xi, dtype=float))


def symbol_values(symbol: MultiplierSymbol, grid) -> np.ndarray:
    """Symbol sampled on the grid's lattice frequencies, FFT order."""
    return symbol(grid.xi)


def apply_multiplier(field_: SpectralField, symbol: MultiplierSymbol) -> SpectralField:
    """
    Multiply every coefficient by the symbol at its frequency.

    Args:
        field_: Input field
        symbol: Real symbol

    Returns:
        New field with coefficients ``m(xi_k) * u_hat_k``
    """
    return SpectralField(field_.grid, symbol_values(symbol, field_.grid) * field_.coefficients)
