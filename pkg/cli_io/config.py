"""
Run configuration: parsing, hashing and construction of domain objects.

Author: Ahmad Yateem
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from marshmallow import ValidationError as SchemaError

from cli_io.schemas import RunConfigSchema
from propagators.coefficients import CoefficientSpec
from propagators.integrators import StepScheme, default_scheme_kind
from propagators.models import (
    ModelSpec, alpha_truncated, d_truncated, free, inhomogeneous, quintic, rescaled_truncated,
    torus_truncated,
)
from spectral_core.field import SpectralField, refine, sample_profile
from spectral_core.grid import TorusGrid
from spectral_core.symbols import (
    MultiplierSymbol, dyadic, identity, mD, mD_rescaled, sharp_low, smooth_low,
)
from utils.exceptions import ConfigError, GridMismatchError
from utils.logger import setup_logger

logger = setup_logger(__name__)

PROFILE_DEFAULTS = {'kind': 'sech', 'amplitude': 1.0, 'center': 0.0, 'width': 1.0, 'frequency': 0.0}


@dataclass
class RunConfig:
    """
    Validated run configuration.

    Attributes:
        version: Schema version
        seed: 64-bit root seed
        model: Model block
        grid: Grid block (length, points)
        time: Time block (T, dt, sample_stride, scheme)
        init: Initial-data block
        experiment: Experiment block selected by its ``kind``
        outputs: Report file names inside the output directory
        base_dir: Directory that relative input paths resolve against
    """

    version: int
    seed: int
    model: Dict[str, object]
    grid: Dict[str, object]
    time: Dict[str, object]
    init: Dict[str, object]
    experiment: Optional[Dict[str, object]] = None
    outputs: Dict[str, str] = field(default_factory=dict)
    base_dir: Optional[Path] = None

    def with_seed(self, seed: Optional[int]) -> 'RunConfig':
        if seed is None:
            return self
        self.seed = int(seed)
        return self

    def build_grid(self) -> TorusGrid:
        return TorusGrid(float(self.grid['length']), int(self.grid['points']))

    def build_model(self) -> ModelSpec:
        return build_model(self.model)

    def build_scheme(self) -> Optional[StepScheme]:
        """Explicit scheme, or None to let ``evolve`` choose scheme and step."""
        dt = self.time.get('dt')
        if dt is None:
            return None
        kind = self.time.get('scheme') or default_scheme_kind(self.build_model())
        return StepScheme(kind, dt)

    def build_initial(self, grid: TorusGrid = None) -> SpectralField:
        grid = grid or self.build_grid()
        if self.init.get('kind') == 'file':
            return self._initial_from_file(grid)
        return build_profile(grid, self.init)

    def _initial_from_file(self, grid: TorusGrid) -> SpectralField:
        from cli_io.trajectory_io import load_trajectory

        trajectory = load_trajectory(self.resolve(self.init['path']))
        state = trajectory.final
        if state.grid.length != grid.length:
            raise GridMismatchError(
                f"Initial data file has length {state.grid.length:g}, config has {grid.length:g}"
            )
        return state if state.grid.points == grid.points else refine(state, grid.points)

    def resolve(self, path: str) -> Path:
        candidate = Path(path)
        if not candidate.is_absolute() and self.base_dir is not None:
            candidate = self.base_dir / candidate
        return candidate


def build_symbol(block: Optional[Dict[str, object]]) -> MultiplierSymbol:
    if not block or block['kind'] == 'identity':
        return identity()
    kind = block['kind']
    try:
        if kind == 'sharp_low':
            return sharp_low(block['N'])
        if kind == 'smooth_low':
            return smooth_low(block['N'])
        if kind == 'dyadic':
            return dyadic(block['N'])
        if kind == 'mD':
            return mD(block['D'])
        return mD_rescaled(block['D'], block['K'])
    except KeyError as e:
        raise ConfigError(f"Symbol {kind!r} needs parameter {e.args[0]}",
                          field=f"model.symbol.{e.args[0]}")


def build_coefficient(block: Dict[str, object]) -> CoefficientSpec:
    return CoefficientSpec(kind=block.get('kind', 'cosine'), value=block.get('value', 1.0),
                           amplitude=block.get('amplitude', 1.0), table=tuple(block.get('table') or ()))


def build_model(block: Dict[str, object]) -> ModelSpec:
    variant = block.get('variant', 'quintic')
    if variant == 'free':
        return free()
    if variant == 'quintic':
        return quintic(block.get('lam', 1.0))
    if variant == 'alpha_truncated':
        return alpha_truncated(block.get('alpha', 1.0), build_symbol(block.get('symbol')))
    if variant == 'd_truncated':
        return d_truncated(block.get('D', 2.0))
    if variant == 'rescaled_truncated':
        return rescaled_truncated(block.get('D', 2.0), block.get('K', 1.0))
    if variant == 'torus_truncated':
        return torus_truncated(block['n_cut'], block.get('D', 2.0), block.get('K', 1.0))
    return inhomogeneous(build_coefficient(block['h']), block.get('n', 1), block.get('lam', 1.0))


def build_profile(grid: TorusGrid, block: Optional[Dict[str, object]]) -> SpectralField:
    values = dict(PROFILE_DEFAULTS)
    values.update({k: v for k, v in (block or {}).items() if k in PROFILE_DEFAULTS})
    return sample_profile(grid, values['kind'], values['amplitude'], values['center'],
                          values['width'], values['frequency'])


def _flatten(messages: Union[Dict, List, str], prefix: str = '') -> List[str]:
    if isinstance(messages, dict):
        paths = []
        for key, value in messages.items():
            name = f"{prefix}.{key}" if prefix else str(key)
            paths.extend(_flatten(value, name))
        return paths
    if isinstance(messages, list) and messages and all(isinstance(m, str) for m in messages):
        return [f"{prefix}: {' '.join(messages)}"]
    if isinstance(messages, list):
        return [path for item in messages for path in _flatten(item, prefix)]
    return [f"{prefix}: {messages}"]


def parse_config(text: Union[str, bytes], base_dir: Union[str, Path] = None) -> RunConfig:
    """
    Parse and validate a JSON run configuration.

    Args:
        text: UTF-8 document
        base_dir: Directory for relative input paths (checked for existence)

    Returns:
        RunConfig with defaults applied

    Raises:
        ConfigError: On syntax errors (with line and column), unknown keys,
            out-of-range values or missing input files
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ConfigError(f"Configuration is not valid UTF-8: {e}")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                          line=e.lineno, column=e.colno)

    try:
        config = RunConfigSchema().load(document)
    except SchemaError as e:
        problems = _flatten(e.messages)
        first = problems[0].split(':', 1)[0] if problems else None
        raise ConfigError(f"Invalid configuration: {'; '.join(problems)}", field=first)

    config.base_dir = Path(base_dir) if base_dir is not None else None
    if config.init.get('kind') == 'file':
        path = config.resolve(config.init['path'])
        if not path.is_file():
            raise ConfigError(f"Initial data file not found: {path}", field='init.path')
    return config


def load_config(path: Union[str, Path]) -> Tuple[RunConfig, bytes]:
    """
    Read and parse a configuration file.

    Returns:
        (RunConfig, raw bytes) so the caller can hash exactly what was read
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}: {e.strerror or e}", field='config')
    return parse_config(raw, path.parent), raw


def config_hash(raw: bytes, seed: int) -> str:
    """SHA-256 over the configuration bytes and the effective seed."""
    digest = hashlib.sha256(raw)
    digest.update(f"|seed={seed}".encode('utf-8'))
    return digest.hexdigest()
