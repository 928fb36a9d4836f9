"""
Operator compositions on spectral fields and their L^2 operator norms.

Operators act on coefficient arrays of a fixed domain grid. Each primitive
knows its adjoint, so the norm is estimated by power iteration on ``A* A``;
``||A x_k||`` with ``||x_k|| = 1`` is a non-decreasing lower bound. On grids
of at most ``Config.DENSE_ORACLE_MAX_POINTS`` modes the estimate is cross-
checked against the largest singular value of the assembled matrix.

Author: Hassan Fouani
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import svdvals

from configs.config import Config
from estimates.reports import NormReport, doubling_ratios, loglog_slope
from spectral_core.field import SpectralField, analyze, synthesize
from spectral_core.grid import TorusGrid
from spectral_core.symbols import MultiplierSymbol, mD_rescaled, smoothstep, symbol_values
from symmetries.transfer import pull_back, push_forward
from utils.exceptions import ValidationError
from utils.logger import setup_logger
from utils.parallel import ordered_map, spawn_generators

logger = setup_logger(__name__)

MIN_ITERATIONS = 20


class OperatorSpec:
    """Linear operator on fields of one grid."""

    label = 'operator'

    def apply(self, field: SpectralField) -> SpectralField:
        raise NotImplementedError

    def adjoint(self, field: SpectralField) -> SpectralField:
        raise NotImplementedError

    def __sub__(self, other: 'OperatorSpec') -> 'OperatorSpec':
        return Difference(self, other)

    def __matmul__(self, other: 'OperatorSpec') -> 'OperatorSpec':
        return Composition((self, other))


@dataclass
class Identity(OperatorSpec):
    label = 'identity'

    def apply(self, field):
        return field

    def adjoint(self, field):
        return field


@dataclass
class Multiplier(OperatorSpec):
    """Fourier multiplier with a real symbol."""

    symbol: MultiplierSymbol

    @property
    def label(self):
        return self.symbol.label

    def apply(self, field):
        return SpectralField(field.grid, symbol_values(self.symbol, field.grid) * field.coefficients)

    adjoint = apply


@dataclass
class Mask(OperatorSpec):
    """Pointwise multiplication by a real function of x at the nodes."""

    function: Union[Callable[[np.ndarray], np.ndarray], np.ndarray]
    name: str = 'mask'

    @property
    def label(self):
        return self.name

    def values(self, grid: TorusGrid) -> np.ndarray:
        if callable(self.function):
            return np.asarray(self.function(grid.nodes), dtype=float)
        values = np.asarray(self.function, dtype=float)
        if values.shape != (grid.points,):
            raise ValidationError("Mask length differs from the grid", field='mask')
        return values

    def apply(self, field):
        return synthesize(field.grid, self.values(field.grid) * analyze(field))

    adjoint = apply


@dataclass
class Difference(OperatorSpec):
    first: OperatorSpec
    second: OperatorSpec

    @property
    def label(self):
        return f"({self.first.label} - {self.second.label})"

    def apply(self, field):
        return self.first.apply(field) - self.second.apply(field)

    def adjoint(self, field):
        return self.first.adjoint(field) - self.second.adjoint(field)


@dataclass
class Composition(OperatorSpec):
    """``ops[0] o ops[1] o ... o ops[-1]``."""

    ops: Tuple[OperatorSpec, ...]

    @property
    def label(self):
        return ' '.join(op.label for op in self.ops)

    def apply(self, field):
        for op in reversed(self.ops):
            field = op.apply(field)
        return field

    def adjoint(self, field):
        for op in self.ops:
            field = op.adjoint(field)
        return field


@dataclass
class Commutator(OperatorSpec):
    """``[A, B] = AB - BA``."""

    first: OperatorSpec
    second: OperatorSpec

    @property
    def label(self):
        return f"[{self.first.label}, {self.second.label}]"

    def apply(self, field):
        return (self.first.apply(self.second.apply(field))
                - self.second.apply(self.first.apply(field)))

    def adjoint(self, field):
        return (self.second.adjoint(self.first.adjoint(field))
                - self.first.adjoint(self.second.adjoint(field)))


@dataclass
class TorusConjugation(OperatorSpec):
    """
    ``f -> p^*( A (p_* f) )`` on the line grid, with the pullback restricted
    to ``window``; ``A`` acts on the torus of circumference ``length``.
    """

    torus_op: OperatorSpec
    length: float
    window: Tuple[float, float]

    @property
    def label(self):
        return f"p^* {self.torus_op.label} p_*"

    def apply(self, field):
        torus_field = push_forward(field, self.length)
        return pull_back(self.torus_op.apply(torus_field), self.window, field.grid)

    def adjoint(self, field):
        line_grid = field.grid
        nodes = line_grid.nodes
        inside = (nodes >= self.window[0]) & (nodes < self.window[1])
        restricted = synthesize(line_grid, np.where(inside, analyze(field), 0.0))
        torus_field = self.torus_op.adjoint(push_forward(restricted, self.length))
        return _periodic_extension(torus_field, line_grid)


def _periodic_extension(torus_field: SpectralField, line_grid: TorusGrid) -> SpectralField:
    torus_grid = torus_field.grid
    shift = int(round((line_grid.length - torus_grid.length) / (2 * torus_grid.spacing)))
    indices = (np.arange(line_grid.points) - shift) % torus_grid.points
    return synthesize(line_grid, analyze(torus_field)[indices])


def _unit(field: SpectralField) -> Tuple[SpectralField, float]:
    norm = float(np.sqrt(field.grid.length) * np.linalg.norm(field.coefficients))
    if norm == 0:
        return field, 0.0
    return field * (1.0 / norm), norm


def dense_matrix(op: OperatorSpec, grid: TorusGrid) -> np.ndarray:
    """Matrix of ``op`` in the coefficient basis (columns are images of unit modes)."""
    columns = []
    for index in range(grid.points):
        basis = np.zeros(grid.points, dtype=np.complex128)
        basis[index] = 1.0
        columns.append(op.apply(SpectralField(grid, basis)).coefficients)
    return np.stack(columns, axis=1)


def dense_norm(op: OperatorSpec, grid: TorusGrid) -> float:
    """Largest singular value of the coefficient matrix; equals the L^2 norm for maps between equal-length grids."""
    return float(svdvals(dense_matrix(op, grid))[0])


def operator_norm_L2(op: OperatorSpec, grid: TorusGrid, iterations: int = None, seed: int = 0,
                     tolerance: float = None, oracle: bool = None) -> NormReport:
    """
    Estimate ``||op||_{L^2 -> L^2}`` by power iteration on ``op* op``.

    Args:
        op: Operator on fields of ``grid``
        grid: Domain grid
        iterations: Maximum iterations, at least 20 (default
            ``Config.POWER_ITERATION_MAX``)
        seed: Seed of the random start vector
        tolerance: Relative change declaring convergence
        oracle: Force or skip the dense cross-check (default: small grids only)

    Returns:
        NormReport; ``details`` holds the lower-bound sequence, the convergence
        flag and the dense value when computed

    Raises:
        ValidationError: If fewer than 20 iterations are requested
    """
    iterations = Config.POWER_ITERATION_MAX if iterations is None else iterations
    if iterations < MIN_ITERATIONS:
        raise ValidationError(f"iterations must be >= {MIN_ITERATIONS}", field='iterations')
    tolerance = Config.POWER_ITERATION_TOL if tolerance is None else tolerance

    rng = spawn_generators(seed, 1)[0]
    start = rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points)
    x, _ = _unit(SpectralField(grid, start))

    bounds = []
    estimate = 0.0
    converged = False
    for _ in range(iterations):
        image = op.apply(x)
        _, image_norm = _unit(image)
        estimate = max(estimate, image_norm)
        bounds.append(estimate)
        if image_norm == 0:
            break
        x, _ = _unit(op.adjoint(image))
        if len(bounds) > 5 and bounds[-1] - bounds[-2] <= tolerance * bounds[-1]:
            converged = True
            break

    details = {'lower_bounds': bounds, 'converged': converged or estimate == 0.0,
               'iterations': len(bounds)}
    if not details['converged']:
        logger.warning('Power iteration did not converge',
                       extra={'event_type': 'power_iteration', 'operator': op.label,
                              'estimate': estimate})

    run_oracle = grid.points <= Config.DENSE_ORACLE_MAX_POINTS if oracle is None else oracle
    if run_oracle:
        details['dense'] = dense_norm(op, grid)

    return NormReport(
        label=op.label,
        value=estimate,
        params={'seed': seed},
        resolution=(grid.points, 0),
        quadrature_error_estimate=abs(bounds[-1] - bounds[-2]) if len(bounds) > 1 else 0.0,
        details=details,
    )


def indicator(interval: Sequence[float]) -> Callable[[np.ndarray], np.ndarray]:
    """Indicator of ``[a, b]`` as a mask function."""
    a, b = interval

    def values(x):
        return ((x >= a) & (x <= b)).astype(float)

    return values


def plateau(center: float, inner: float, ramp: float) -> Callable[[np.ndarray], np.ndarray]:
    """Smooth cutoff equal to 1 on ``|x - center| <= inner``, falling to 0 over ``ramp``."""
    if inner < 0 or ramp <= 0:
        raise ValidationError("plateau needs inner >= 0 and ramp > 0", field='ramp')

    def values(x):
        return 1.0 - smoothstep((np.abs(x - center) - inner) / ramp)

    return values


def mismatch_operator(K: float, separation: float, width: float = 8.0, D: float = 2) -> OperatorSpec:
    """
    ``chi_E P_K chi_F`` for the windows ``E = [-s/2 - width, -s/2]`` and
    ``F = [s/2, s/2 + width]`` at distance ``s = separation``.
    """
    half = separation / 2.0
    return Composition((Mask(indicator((-half - width, -half)), 'chi_E'),
                        Multiplier(mD_rescaled(D, K)),
                        Mask(indicator((half, half + width)), 'chi_F')))


def commutator_operator(K: float, chi: Callable[[np.ndarray], np.ndarray], squared_complement: bool = False,
                        D: float = 2) -> OperatorSpec:
    """``[chi, P_K]``, or ``[(1 - chi)^2, P_K]`` with ``squared_complement``."""
    if squared_complement:
        mask = Mask(lambda x: (1.0 - chi(x)) ** 2, '(1-chi)^2')
    else:
        mask = Mask(chi, 'chi')
    return Commutator(mask, Multiplier(mD_rescaled(D, K)))


def cross_manifold_operator(K: float, chi: Callable[[np.ndarray], np.ndarray], length: float,
                            window: Tuple[float, float], D: float = 2) -> OperatorSpec:
    """``chi (P_K - p^* P_K^L p_*) chi`` comparing the line multiplier with its torus copy."""
    projection = Multiplier(mD_rescaled(D, K))
    return Composition((Mask(chi, 'chi'),
                        Difference(projection, TorusConjugation(projection, length, window)),
                        Mask(chi, 'chi')))


def scaling_law(op_factory: Callable[[float], OperatorSpec], values: Sequence[float], grid: TorusGrid,
                iterations: int = None, seed: int = 0) -> Dict[str, object]:
    """
    Operator norms along a parameter sweep.

    Args:
        op_factory: Builds the operator for one parameter value (K or a distance)
        values: Parameter values, each the double of the previous one
        grid: Domain grid of every operator
        iterations: Power-iteration cap (default ``Config.POWER_ITERATION_MAX``)
        seed: Seed of the start vectors

    Returns:
        Dict with ``values``, ``norms``, ``ratios`` (successive ``norm[i]/norm[i+1]``),
        the log-log ``slope`` and the per-value ``reports``
    """
    values = [float(v) for v in values]
    if len(values) < 2:
        raise ValidationError("A scaling law needs at least two parameter values", field='values')

    reports: List[NormReport] = ordered_map(
        lambda value: operator_norm_L2(op_factory(value), grid, iterations=iterations, seed=seed),
        values)
    norms = [report.value for report in reports]
    ratios = doubling_ratios(norms)
    logger.info('Scaling law measured',
                extra={'event_type': 'scaling_law', 'operator': reports[0].label,
                       'values': values, 'ratios': ratios})
    return {
        'values': values,
        'norms': norms,
        'ratios': ratios,
        'slope': loglog_slope(values, norms),
        'reports': reports,
    }
