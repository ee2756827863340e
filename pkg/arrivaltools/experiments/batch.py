import logging
from concurrent.futures import ProcessPoolExecutor
from tqdm import tqdm

logger = logging.getLogger(__name__)

def run_batch(func, tasks, jobs=1, progress=False, desc=None):
    """Runs independent tasks and returns their results in task order.

    Args:
        func: A module level function accepting one task. It must not rely
            on shared mutable state.
        tasks: A list of picklable task arguments.
        jobs (int): Number of worker processes. With 1 the tasks run in the
            calling process. Default value is 1.
        progress (bool): Shows a progress bar if ``True``.
        desc (str): Label of the progress bar.

    Returns:
        list: ``[func(task) for task in tasks]``.
    """
    tasks = list(tasks)
    if jobs < 1:
        raise ValueError('jobs must be at least 1.')
    logger.debug('Running %d tasks with %d job(s).', len(tasks), jobs)
    if jobs == 1 or len(tasks) <= 1:
        results = map(func, tasks)
        if progress:
            results = tqdm(results, total=len(tasks), desc=desc)
        return list(results)
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        # map yields in submission order whatever the completion order.
        results = ex.map(func, tasks)
        if progress:
            results = tqdm(results, total=len(tasks), desc=desc)
        return list(results)
