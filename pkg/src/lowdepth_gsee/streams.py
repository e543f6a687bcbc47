"""Deterministic random streams and a worker pool whose output ignores its size.

Work is cut into fixed-size blocks; block ``b`` of stage ``k`` always draws
from ``SeedSequence(seed, spawn_key=(k, b))``. Results are concatenated in
block order, so the number of workers never changes a single bit.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

BLOCK_SIZE = 1 << 16

STAGE_COARSE = 0
STAGE_MAIN = 1

R = TypeVar("R")


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def child(seed, *key: int) -> np.random.SeedSequence:
    """Deterministic child sequence addressed by ``key`` (no spawn counters)."""
    ss = as_seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(key))


def block_generator(seed, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(child(seed, block)))


def block_sizes(total: int, block_size: int = BLOCK_SIZE) -> list[int]:
    full, rest = divmod(total, block_size)
    return [block_size] * full + ([rest] if rest else [])


def map_blocks(
    fn: Callable[[int, int, np.random.Generator], R],
    total: int,
    seed,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> list[R]:
    """Run ``fn(block_index, n, rng)`` over all blocks; results in block order."""
    sizes = block_sizes(total, block_size)

    def task(b: int) -> R:
        return fn(b, sizes[b], block_generator(seed, b))

    if workers <= 1 or len(sizes) <= 1:
        return [task(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(len(sizes))))
