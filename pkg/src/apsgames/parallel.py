"""Order-preserving map over a thread pool."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def pmap(fn, items, workers: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally on ``workers`` threads.

    Results keep the input order, so callers that give every item its
    own random substream get identical output for any worker count.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
