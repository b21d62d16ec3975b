"""Deterministic accumulation and thread-pool helpers.

Every reduction in this package must be bit-reproducible across runs and
across thread counts.  The rules used throughout:

* work is split into chunks whose boundaries depend only on the input size,
  never on the worker count;
* workers write results into preallocated slots keyed by chunk index;
* final reductions walk the slots sequentially in index order with
  compensated accumulation.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

THREADS_ENV_VAR = "SHANKSLAB_THREADS"

# np.sum on a fixed-length block uses pairwise summation with a fixed tree,
# so block sums are deterministic; fsum over the block sums is exactly
# rounded.  The combination is a compensated accumulation with error far
# below one ulp of the true sum.
_BLOCK = 4096


def compensated_sum(values: np.ndarray) -> float:
    """Deterministic compensated sum of a 1-D float array."""
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.size <= _BLOCK:
        return math.fsum(v) if v.size <= 64 else float(math.fsum(
            [float(np.sum(v[i:i + 64])) for i in range(0, v.size, 64)]
        ))
    blocks = [float(np.sum(v[i:i + _BLOCK])) for i in range(0, v.size, _BLOCK)]
    return math.fsum(blocks)


def compensated_complex_sum(values: np.ndarray) -> complex:
    v = np.asarray(values)
    return complex(compensated_sum(v.real), compensated_sum(v.imag))


def compensated_dot(weights: np.ndarray, values: np.ndarray) -> float:
    """Deterministic compensated sum of an elementwise product."""
    return compensated_sum(weights * values)


def kahan_running(values: Sequence[float]) -> list[float]:
    """Running Kahan prefix sums in index order (bit-reproducible)."""
    total = 0.0
    comp = 0.0
    out = []
    for x in values:
        y = x - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out.append(total)
    return out


def resolve_threads(requested: int | None = None,
                    config_value: int | None = None) -> int:
    """Thread count precedence: explicit argument, env var, config, auto.

    0 or None mean "auto" (cpu count).
    """
    def norm(v):
        if v is None:
            return None
        v = int(v)
        if v < 0:
            raise ValueError(f"thread count must be >= 0, got {v}")
        return v or None

    n = norm(requested)
    if n is None:
        env = os.environ.get(THREADS_ENV_VAR)
        if env is not None:
            try:
                n = norm(int(env))
            except ValueError as exc:
                raise ValueError(
                    f"{THREADS_ENV_VAR} must be an integer, got {env!r}"
                ) from exc
    if n is None:
        n = norm(config_value)
    return n if n is not None else (os.cpu_count() or 1)


def chunk_ranges(total: int, chunk: int) -> list[tuple[int, int]]:
    """Fixed chunk grid [start, stop) independent of worker count."""
    if chunk <= 0:
        raise ValueError("chunk size must be positive")
    return [(i, min(i + chunk, total)) for i in range(0, total, chunk)]


def parallel_chunk_map(fn: Callable[[int, int], object],
                       total: int, chunk: int, threads: int) -> list[object]:
    """Apply fn(start, stop) over a fixed chunk grid, results in grid order.

    With threads <= 1 the chunks run inline; otherwise on a pool.  Either way
    the returned list order (and therefore any downstream sequential
    reduction) is identical.
    """
    ranges = chunk_ranges(total, chunk)
    if threads <= 1 or len(ranges) <= 1:
        return [fn(a, b) for a, b in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, a, b) for a, b in ranges]
        return [f.result() for f in futures]
