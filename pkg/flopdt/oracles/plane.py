"""Plane-partition counts by row-by-row depth-first enumeration."""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple

from flopdt.config import get_settings
from flopdt.errors import OracleLimitError

logger = logging.getLogger(__name__)

Shape = Tuple[int, ...]


def _sub_partitions(bound: Shape, budget: int) -> Iterator[Tuple[Shape, int]]:
    """Nonempty partitions mu inside ``bound`` with |mu| <= budget, with their sizes."""

    def extend(index: int, cap: int, remaining: int, parts: Tuple[int, ...]):
        if parts:
            yield parts, budget - remaining
        if index >= len(bound):
            return
        top = min(cap, bound[index], remaining)
        for part in range(top, 0, -1):
            yield from extend(index + 1, part, remaining - part, parts + (part,))

    yield from extend(0, budget, budget, ())


@lru_cache(maxsize=None)
def _stacked(remaining: int, bound: Shape) -> int:
    """Sequences of rows, each inside the previous one, with total size ``remaining``."""
    if remaining == 0:
        return 1
    total = 0
    for row, size in _sub_partitions(bound, remaining):
        total += _stacked(remaining - size, row)
    return total


def count_plane_partitions(n: int, limit: Optional[int] = None) -> int:
    """Number of plane partitions of n (finite order ideals of Z^3_{>=0} of size n)."""
    ceiling = get_settings().plane_partition_limit if limit is None else limit
    if n < 0:
        raise OracleLimitError(f"Plane partitions need n >= 0, got {n}")
    if n > ceiling:
        raise OracleLimitError(
            f"n = {n} exceeds the plane-partition limit {ceiling}",
            {"n": n, "limit": ceiling},
        )
    return _stacked(n, (n,) * n)


def plane_partition_table(limit: int, ceiling: Optional[int] = None) -> Dict[int, int]:
    table = {n: count_plane_partitions(n, ceiling) for n in range(limit + 1)}
    logger.debug(f"Plane partitions up to {limit}: {list(table.values())}")
    return table
