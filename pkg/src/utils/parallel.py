import logging
from itertools import islice
from multiprocessing import Pool
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def _batches(items: Iterable[T], size: int) -> Iterable[List[T]]:
    iterator = iter(items)
    while True:
        batch = list(islice(iterator, size))
        if not batch:
            return
        yield batch


def first_hit(func: Callable[[T], Optional[R]], items: Iterable[T], jobs: int = 1,
              batch_size: int = 64) -> Tuple[int, Optional[R]]:
    """
    Return the first non-None result of `func` in input order.

    Args:
        func: A picklable callable (module-level function or functools.partial of one).
        items: Candidates, consumed lazily in batches.
        jobs: Worker processes; 1 runs serially.
        batch_size: Candidates handed to the pool per round.

    Returns:
        (number of candidates examined, first result or None). The count includes the hit.
    """
    examined = 0
    if jobs <= 1:
        for item in items:
            examined += 1
            result = func(item)
            if result is not None:
                return examined, result
        return examined, None

    logger.debug(f"Searching with {jobs} workers, batch size {batch_size}")
    with Pool(processes=jobs) as pool:
        for batch in _batches(items, batch_size * jobs):
            results = pool.map(func, batch)
            for result in results:
                examined += 1
                if result is not None:
                    return examined, result
    return examined, None

