"""
The symmetry group of the mass-critical equation acting on spectral fields.

A frame ``(scale, boost, translation, time_shift)`` acts by
``g f(x) = exp(i phase) scale^{-1/2} exp(2 pi i boost x) f((x - translation)/scale)``
and ``G f = g exp(i time_shift d_xx) f``. Boosts are rounded to the lattice
and translations to the nodes; the rounding residuals are kept on the frame.

Author: Ahmad Yateem
"""

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from propagators.flows import linear_flow
from spectral_core.field import SpectralField, mass
from spectral_core.grid import TorusGrid
from utils.exceptions import ScaleCompatibilityError
from utils.validators import validate_dyadic

Sampler = Callable[[float, np.ndarray], np.ndarray]

MASS_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SymmetryFrame:
    """
    Group element with optional global phase.

    Attributes:
        scale: Positive dilation factor (a power of two when applied on a grid)
        boost: Frequency shift in cycles per unit length
        translation: Spatial shift
        time_shift: Free-flow time applied before ``g``
        phase: Global phase in radians
        boost_residual: Boost minus its lattice rounding
        translation_residual: Translation minus its node rounding
    """

    scale: float = 1.0
    boost: float = 0.0
    translation: float = 0.0
    time_shift: float = 0.0
    phase: float = 0.0
    boost_residual: float = 0.0
    translation_residual: float = 0.0

    def inverse(self) -> 'SymmetryFrame':
        """Exact inverse of the spatial element ``g`` (time shift dropped)."""
        lam = self.scale
        return SymmetryFrame(
            scale=1.0 / lam,
            boost=-lam * self.boost,
            translation=-self.translation / lam,
            phase=-self.phase - 2 * math.pi * self.boost * self.translation,
        )

    def compose(self, other: 'SymmetryFrame') -> 'SymmetryFrame':
        """Spatial frame of ``g_self o g_other``."""
        lam = self.scale * other.scale
        return SymmetryFrame(
            scale=lam,
            boost=self.boost + other.boost / self.scale,
            translation=self.translation + self.scale * other.translation,
            phase=self.phase + other.phase - 2 * math.pi * other.boost * self.translation / self.scale,
        )

    def on_grid(self, grid: TorusGrid) -> 'SymmetryFrame':
        """Round boost to the lattice and translation to the nodes."""
        k0 = round(self.boost * grid.length)
        j0 = round(self.translation / grid.spacing)
        boost = k0 / grid.length
        translation = j0 * grid.spacing
        return replace(
            self,
            boost=boost,
            translation=translation,
            boost_residual=self.boost - boost,
            translation_residual=self.translation - translation,
        )

    def as_dict(self) -> dict:
        return {
            'scale': self.scale, 'boost': self.boost, 'translation': self.translation,
            'time_shift': self.time_shift, 'phase': self.phase,
            'boost_residual': self.boost_residual,
            'translation_residual': self.translation_residual,
        }


def _rescale(field: SpectralField, scale: float) -> SpectralField:
    """
    ``f -> scale^{-1/2} f(x/scale)`` for a power-of-two scale.

    The new coefficient at mode k is ``scale^{1/2} F(scale k)`` where F is the
    Fourier transform of the one-period restriction of f at fractional mode.
    """
    if scale == 1.0:
        return field
    validate_dyadic(scale, 'scale')
    grid = field.grid
    n = grid.points
    if scale > 1:
        stride = int(round(scale))
        source = np.zeros(n, dtype=np.complex128)
        picked = grid.modes * stride
        inside = (picked >= -n // 2) & (picked < n // 2)
        source[inside] = field.coefficients[picked[inside] % n]
        coefficients = math.sqrt(scale) * source
    else:
        factor = int(round(1.0 / scale))
        m = factor * n
        samples = np.zeros(m, dtype=np.complex128)
        offset = (m - n) // 2
        samples[offset:offset + n] = field.samples()
        # wide grid keeps the node spacing, so its origin sits at node offset + n/2
        wide_sign = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
        wide = wide_sign * np.fft.fft(samples) / m
        coefficients = math.sqrt(factor) * wide[grid.modes % m]

    result = SpectralField(grid, coefficients)
    before, after = mass(field), mass(result)
    if abs(after - before) > MASS_TOLERANCE * max(before, 1e-300):
        raise ScaleCompatibilityError(
            f"Scale {scale} loses mass on this grid (relative change {abs(after - before) / before:.3e})"
        )
    return result


def apply_g(frame: SymmetryFrame, field: SpectralField) -> SpectralField:
    """
    Apply the spatial group element of ``frame``.

    Args:
        frame: Symmetry frame; boost and translation are rounded to the grid
        field: Input field

    Returns:
        Transformed field; mass preserved

    Raises:
        ScaleCompatibilityError: If the dilation cannot be represented on the grid
    """
    grid = field.grid
    frame = frame.on_grid(grid)
    result = _rescale(field, frame.scale)

    coefficients = result.coefficients * np.exp(-2j * np.pi * grid.xi * frame.translation)
    k0 = int(round(frame.boost * grid.length))
    if k0:
        coefficients = _shift_modes(coefficients, grid, k0)
    if frame.phase:
        coefficients = coefficients * np.exp(1j * frame.phase)
    return SpectralField(grid, coefficients)


def _shift_modes(coefficients: np.ndarray, grid: TorusGrid, k0: int) -> np.ndarray:
    shifted = np.zeros_like(coefficients)
    target = grid.modes + k0
    inside = (target >= -grid.points // 2) & (target < grid.points // 2)
    shifted[target[inside] % grid.points] = coefficients[inside]
    return shifted


def apply_G(frame: SymmetryFrame, field: SpectralField) -> SpectralField:
    """``g o exp(i time_shift d_xx)``."""
    return apply_g(frame, linear_flow(field, frame.time_shift))


def free_sampler(field: SpectralField) -> Sampler:
    """
    Evaluate the free evolution of ``field`` at arbitrary (t, x).

    Returns:
        Function ``(t, x) -> exp(i t d_xx) f (x)``
    """
    grid = field.grid
    xi = grid.xi
    coefficients = field.coefficients

    def sample(t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        evolved = coefficients * np.exp(-4j * np.pi ** 2 * t * xi ** 2)
        return np.exp(2j * np.pi * np.multiply.outer(x, xi)) @ evolved

    return sample


def apply_T(frame: SymmetryFrame, sampler: Sampler) -> Sampler:
    """
    Re-parameterize a free trajectory by the frame.

    ``(T v)(t, x) = exp(i phase) scale^{-1/2} exp(i w x - i w^2 t)
    v(time_shift + t/scale^2, (x - translation - 2 w t)/scale)`` with
    ``w = 2 pi boost``, so that ``exp(i t d_xx) G f = T[exp(i t d_xx) f]``.
    """
    lam = frame.scale
    omega = 2 * math.pi * frame.boost

    def sample(t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inner_x = (x - frame.translation - 2 * omega * t) / lam
        envelope = np.exp(1j * (frame.phase + omega * x - omega ** 2 * t)) / math.sqrt(lam)
        return envelope * sampler(frame.time_shift + t / lam ** 2, inner_x)

    return sample


def orthogonality_defect(frame_j: SymmetryFrame, frame_k: SymmetryFrame) -> float:
    """
    Five-term orthogonality expression of two frames.

    ``l_k/l_j + l_j/l_k + l_j l_k |b_j - b_k|^2 + |l_j^2 t_j - l_k^2 t_k|/(l_j l_k)
    + |x_j - x_k - 2 t_j l_j^2 (b_j - b_k)|^2/(l_j l_k)``; large values mean the
    frames are far apart. The value is at least 2.

    Frame boosts are stored in cycles per unit length; ``b`` here is the
    angular boost ``2 pi boost``.
    """
    lj, lk = frame_j.scale, frame_k.scale
    db = 2 * math.pi * (frame_j.boost - frame_k.boost)
    product = lj * lk
    return float(
        lk / lj + lj / lk
        + product * db ** 2
        + abs(lj ** 2 * frame_j.time_shift - lk ** 2 * frame_k.time_shift) / product
        + abs(frame_j.translation - frame_k.translation - 2 * frame_j.time_shift * lj ** 2 * db) ** 2 / product
    )
