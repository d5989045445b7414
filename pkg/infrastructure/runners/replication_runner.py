#infrastructure/runners/replication_runner.py
from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor, as_completed
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class ReplicationRunner:
    """
    Run one callable per replication on a bounded thread pool and return the results
    in submission order, whatever order the workers finish in.
    """

    def __init__(self, max_workers: int = 1, logger: Optional[logging.Logger] = None, log_every: int = 10) -> None:
        self.max_workers = max(1, int(max_workers or 1))
        self.log = logger or logging.getLogger("runner")
        self.log_every = max(1, int(log_every))

    def run(
        self,
        fn: Callable[[T], R],
        items: Sequence[T],
        on_error: Optional[Callable[[T, Exception], R]] = None,
        label: str = "replications",
    ) -> List[R]:
        total = len(items)
        if total == 0:
            return []
        results: List[Tuple[int, R]] = []
        done = 0
        if self.max_workers == 1:
            for i, item in enumerate(items):
                results.append((i, self._one(fn, item, on_error)))
                done += 1
                self._progress(done, total, label)
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as ex:
                futs: Dict = {ex.submit(self._one, fn, item, on_error): i for i, item in enumerate(items)}
                for f in as_completed(futs):
                    results.append((futs[f], f.result()))
                    done += 1
                    self._progress(done, total, label)
        results.sort(key=lambda x: x[0])
        return [r for _, r in results]

    @staticmethod
    def _one(fn, item, on_error):
        if on_error is None:
            return fn(item)
        try:
            return fn(item)
        except Exception as e:
            return on_error(item, e)

    def _progress(self, done: int, total: int, label: str) -> None:
        if (done % self.log_every) == 0 or done == total:
            self.log.info("%s progress: %d / %d (%.1f%%)", label, done, total, 100.0 * done / max(1, total))
