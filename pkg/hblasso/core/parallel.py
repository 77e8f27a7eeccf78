"""Worker pool for independent chains, replications and Monte Carlo datasets."""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], tasks: Iterable[T], num_workers: int = 1,
                 desc: str = None, progress: bool = False) -> List[R]:
    """Apply `func` to every task and return the results in task order.
    Args:
        func (callable): Picklable top-level function (or functools.partial of one)
        tasks (iterable): Task payloads; each carries its own seed/stream
        num_workers (int): Processes to use; 1 runs in the calling process
        desc (str, optional): Progress-bar label
        progress (bool): Show a progress bar
    Returns:
        list: One result per task
    """
    tasks = list(tasks)
    if num_workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tqdm(tasks, desc=desc, disable=not progress)]
    workers = min(num_workers, len(tasks))
    logger.info("Dispatching %d tasks to %d workers", len(tasks), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(func, tasks)
        return list(tqdm(results, total=len(tasks), desc=desc, disable=not progress))
