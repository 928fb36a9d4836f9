"""
Logging utilities for structured application logging.

Author: Ahmad Yateem
"""

import logging
import sys
from pathlib import Path
from pythonjsonlogger.jsonlogger import JsonFormatter
from configs.config import Config

ROOT_LOGGER_NAMES = (
    'nlslab', 'spectral_core', 'propagators', 'symmetries',
    'estimates', 'experiments', 'cli_io', 'utils',
)


def setup_logger(name: str, log_file: str = None) -> logging.Logger:
    """
    Setup and configure logger with JSON formatting.

    Args:
        name: Logger name (typically the module name)
        log_file: Optional log file path

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    log_level = getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO)
    logger.setLevel(log_level)

    if logger.handlers:
        return logger

    formatter = JsonFormatter(
        '%(asctime)s %(name)s %(levelname)s %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # stderr keeps stdout free for the `check` command's JSON lines
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


app_logger = setup_logger('nlslab', Config.LOG_FILE)


def set_quiet(quiet: bool = True) -> None:
    """
    Raise every package logger to WARNING (or restore the configured level).

    Args:
        quiet: True to silence INFO/DEBUG output
    """
    level = logging.WARNING if quiet else getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if not isinstance(logger, logging.Logger):
            continue
        if name.split('.')[0] in ROOT_LOGGER_NAMES:
            logger.setLevel(level)
            for handler in logger.handlers:
                handler.setLevel(level)


def log_run(logger: logging.Logger, command: str, config_hash: str, seed: int = None):
    """
    Log the start of a CLI run.

    Args:
        logger: Logger instance
        command: Subcommand name
        config_hash: SHA-256 of the configuration bytes
        seed: Effective seed
    """
    logger.info(
        'Run started',
        extra={
            'event_type': 'run',
            'command': command,
            'config_hash': config_hash,
            'seed': seed
        }
    )


def log_verdict(logger: logging.Logger, experiment: str, verdict: str, details: dict = None):
    """
    Log an experiment verdict.

    Args:
        logger: Logger instance
        experiment: Experiment kind
        verdict: ``pass``, ``fail`` or ``no-data``
        details: Optional flag breakdown
    """
    log_data = {
        'event_type': 'verdict',
        'experiment': experiment,
        'verdict': verdict
    }

    if details:
        log_data['details'] = details

    if verdict == 'fail':
        logger.warning('Verdict issued', extra=log_data)
    else:
        logger.info('Verdict issued', extra=log_data)


def log_error(logger: logging.Logger, error: Exception, context: dict = None):
    """
    Log error with context.

    Args:
        logger: Logger instance
        error: Exception object
        context: Optional context dictionary
    """
    log_data = {
        'event_type': 'error',
        'error_type': type(error).__name__,
        'error_message': str(error)
    }

    if context:
        log_data.update(context)

    logger.error('Error occurred', extra=log_data, exc_info=True)
