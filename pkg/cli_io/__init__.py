"""
Run configuration, trajectory files, reports and the command-line interface.
"""

from cli_io.config import RunConfig, parse_config, load_config, config_hash
from cli_io.trajectory_io import save_trajectory, load_trajectory
from cli_io.reports import ReportWriter, emit_report

__all__ = [
    'RunConfig', 'parse_config', 'load_config', 'config_hash',
    'save_trajectory', 'load_trajectory',
    'ReportWriter', 'emit_report',
]
