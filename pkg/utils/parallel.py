"""
Worker pool and seed splitting for independent sweep cells.

Seeds expand through ``numpy.random.SeedSequence(seed).spawn(count)``:
child ``k`` of a given seed is fixed, so trial ``k`` draws the same stream
whatever the worker count or completion order.

Author: Hassan Fouani
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

import numpy as np

from configs.config import Config
from utils.logger import setup_logger

logger = setup_logger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def worker_count(requested: int = None) -> int:
    """Resolve the worker count, capped by ``NLSLAB_THREADS``."""
    cap = max(1, Config.THREADS)
    if requested is None:
        return cap
    return max(1, min(int(requested), cap))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = None) -> List[R]:
    """
    Apply ``fn`` to every item concurrently and return results in input order.

    NumPy FFTs release the GIL, so threads give real overlap for the
    transform-heavy cells run here.

    Args:
        fn: Pure function of one item
        items: Work items
        workers: Optional worker count (capped by configuration)

    Returns:
        List of results ordered like ``items``
    """
    items = list(items)
    count = worker_count(workers)
    if count == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug('Dispatching sweep cells', extra={'cells': len(items), 'workers': count})
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, items))


def spawn_seeds(seed: int, count: int) -> List[np.random.SeedSequence]:
    """
    Split one 64-bit seed into ``count`` independent child sequences.

    This is the repo's splitmix-style stream-splitting rule, realized with
    ``SeedSequence.spawn``: the root is the seed masked to 64 bits and child
    ``k`` is derived by hashing ``(seed, spawn_key=(k,))``. Child ``k`` is
    therefore fixed by ``(seed, k)`` alone, whatever the worker count.

    Args:
        seed: Root seed
        count: Number of children

    Returns:
        List of SeedSequence children
    """
    root = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
    return root.spawn(count)


def spawn_generators(seed: int, count: int) -> List[np.random.Generator]:
    """Return one ``numpy.random.Generator`` per child seed."""
    return [np.random.default_rng(child) for child in spawn_seeds(seed, count)]
