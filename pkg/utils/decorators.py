"""
Custom decorators for cross-cutting concerns.

Author: Ahmad Yateem
"""

import time
from functools import wraps

from utils.exceptions import NLSLabError
from utils.logger import setup_logger, log_error

logger = setup_logger(__name__)


def measure_time(fn):
    """
    Log the wall time of an experiment run as ``duration_ms``.

    When the result is an experiment report its kind, row count and verdict
    are attached to the same record.

    Returns:
        Decorated function
    """
    @wraps(fn)
    def wrapper(*args, **kwargs):
        started = time.perf_counter()
        result = None
        try:
            result = fn(*args, **kwargs)
            return result
        finally:
            payload = {'function': fn.__name__,
                       'duration_ms': round((time.perf_counter() - started) * 1000, 3)}
            rows = getattr(result, 'rows', None)
            if rows is not None:
                payload.update(experiment=getattr(result, 'kind', None), rows=len(rows),
                               verdict=getattr(result, 'verdict', None))
            logger.info('Run timed', extra=payload)

    return wrapper


def handle_errors(fn):
    """
    Decorator turning exceptions into CLI exit codes.

    The wrapped function returns an exit code itself; laboratory errors map
    to their ``exit_code`` and anything unexpected to 1.

    Returns:
        Decorated function
    """
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NLSLabError as e:
            logger.error(f"{type(e).__name__} in {fn.__name__}: {e.message}",
                         extra={'exit_code': e.exit_code})
            return e.exit_code
        except Exception as e:
            log_error(logger, e, {'function': fn.__name__})
            return 1

    return wrapper
