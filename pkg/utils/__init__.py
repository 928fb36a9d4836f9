"""Utilities package initialization."""

from utils.logger import setup_logger, app_logger, set_quiet
from utils.exceptions import *
from utils.decorators import measure_time, handle_errors
from utils.parallel import ordered_map, spawn_generators, worker_count

__all__ = [
    'setup_logger',
    'app_logger',
    'set_quiet',
    'measure_time',
    'handle_errors',
    'ordered_map',
    'spawn_generators',
    'worker_count',
]
