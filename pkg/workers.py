# workers.py - Batching and ordered parallel execution

from concurrent.futures import ThreadPoolExecutor


def batch_operations(operations, batch_size=5):
    """Yield consecutive batches of ``operations``."""
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    for i in range(0, len(operations), batch_size):
        yield operations[i:i + batch_size]


def run_ordered(tasks, jobs=1, batch_size=None):
    """Run zero-argument callables and return their results in input order.

    With ``jobs > 1`` the tasks run on a thread pool, one batch of ``batch_size``
    (default ``jobs``) at a time.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]

    results = []
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for batch in batch_operations(tasks, batch_size or jobs):
            futures = [pool.submit(task) for task in batch]
            results.extend(f.result() for f in futures)
    return results
