"""
Runtime configuration for the NLS numerical laboratory.

Values are read from the environment (optionally through a ``.env`` file)
once at import time. Run documents passed to the CLI are validated
separately by :mod:`cli_io.schemas`.

Author: Ahmad Yateem
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _env_int(key: str, default: int) -> int:
    value = os.getenv(key)
    if value is None or value == '':
        return default
    try:
        return max(1, int(value))
    except ValueError:
        return default


class Config:
    """Base configuration shared by every entry point."""

    LOG_LEVEL = os.getenv('NLSLAB_LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('NLSLAB_LOG_FILE') or None

    # Worker cap for sweep cells; NLSLAB_THREADS overrides the CPU count.
    THREADS = _env_int('NLSLAB_THREADS', os.cpu_count() or 1)

    # dt = T * 2**-DEFAULT_DT_EXPONENT before the halving rule kicks in
    DEFAULT_DT_EXPONENT = 14
    MASS_DRIFT_TARGET = 1e-9
    MAX_DT_HALVINGS = 6

    DENSE_ORACLE_MAX_POINTS = 512
    POWER_ITERATION_MAX = 500
    POWER_ITERATION_TOL = 1e-10

    # Relative change allowed by the discretization firewall
    DISCRETIZATION_TOLERANCE = 0.10

    # A torus standing in for the line must keep this little mass in its
    # outer band of width BOUNDARY_MARGIN_FRACTION * L.
    BOUNDARY_MASS_LIMIT = 1e-8
    BOUNDARY_MARGIN_FRACTION = 0.0625

    TOOL_VERSION = '1.0.0'


class DevelopmentConfig(Config):
    """Verbose logging for local work."""

    LOG_LEVEL = os.getenv('NLSLAB_LOG_LEVEL', 'DEBUG')


class TestingConfig(Config):
    """Quiet, small configuration used by the test suite."""

    LOG_LEVEL = 'WARNING'
    THREADS = 2


config_by_name = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': Config,
}


def get_config(name: str = None):
    """
    Return the configuration class for an environment name.

    Args:
        name: One of ``development``, ``testing``, ``production``.
            Falls back to ``NLSLAB_ENV`` and then to the base class.

    Returns:
        Configuration class
    """
    name = name or os.getenv('NLSLAB_ENV', 'production')
    return config_by_name.get(name, Config)
