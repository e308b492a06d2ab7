"""Base runner class."""

import logging
import os
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Generic, Iterable, List, TypeVar

from pydantic import BaseModel, Field

from .numeric import Backend

logger = logging.getLogger(__name__)

WORKERS_ENV = "SPLIT_ERROR_WORKERS"

ItemT = TypeVar("ItemT")
RowT = TypeVar("RowT")


def default_workers() -> int:
    """Thread count from the environment, falling back to 1."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", WORKERS_ENV, raw)
        return 1


class RunConfig(BaseModel):
    """Run configuration."""
    workers: int = Field(default_factory=default_workers, ge=1)
    backend: Backend = Backend.FLOAT


class BaseRunner(ABC, Generic[ItemT, RowT]):
    """Base class for exhaustive runners. Implement run_item()."""

    def __init__(self, config: RunConfig):
        self.config = config

    @abstractmethod
    def run_item(self, item: ItemT) -> RowT:
        """Evaluate a single item. Must not touch shared mutable state."""

    def run_all(self, items: Iterable[ItemT]) -> List[RowT]:
        """Evaluate every item; rows come back in input order."""
        items = list(items)
        workers = min(self.config.workers, len(items))
        if workers <= 1:
            rows = [self.run_item(item) for item in items]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(self.run_item, items))
        logger.debug("%s evaluated %d items on %d worker(s)", type(self).__name__, len(rows), max(workers, 1))
        return rows
