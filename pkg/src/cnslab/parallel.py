"""
Band-partitioned execution for exhaustive sweeps.

The norm range (lo, n_max] is cut into contiguous bands of equal width (lattice point
counts grow linearly in the norm, so the bands carry similar work). Results come back
in band order, which is the global (norm, a, b) order.
"""
import logging
from typing import Any, Callable, Optional

from .settings import lab_settings

logger = logging.getLogger(__name__)

BANDS_PER_WORKER = 4


def split_bands(n_max: int, count: int, lo: int = 0) -> list[tuple[int, int]]:
    count = max(1, min(count, n_max - lo))
    width, extra = divmod(n_max - lo, count)
    bands = []
    start = lo
    for i in range(count):
        end = start + width + (1 if i < extra else 0)
        bands.append((start, end))
        start = end
    return bands


def ray_runtime(use_ray: bool):
    """The real ray module when asked for, else the local process-pool shim."""
    if use_ray:
        import ray

        return ray
    from .ray_mock import ray

    return ray


def resolve_workers(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, workers)
    return lab_settings().threads


def map_bands(
    fn: Callable[..., Any],
    *args,
    n_max: int,
    workers: Optional[int] = None,
    lo: int = 0,
) -> list[Any]:
    """Call fn(*args, band_lo, band_hi) over the bands of (lo, n_max]; results in band order."""
    workers = resolve_workers(workers)
    if n_max <= lo:
        return [fn(*args, lo, lo)]
    bands = split_bands(n_max, workers * BANDS_PER_WORKER if workers > 1 else 1, lo=lo)
    logger.info(f"{fn.__name__}: {len(bands)} bands over ({lo}, {n_max}] on {workers} worker(s)")
    ray = ray_runtime(lab_settings().use_ray)
    ray.init(num_cpus=workers, ignore_reinit_error=True)
    remote_fn = ray.remote(fn)
    return ray.get([remote_fn.remote(*args, band_lo, band_hi) for band_lo, band_hi in bands])
