"""
Local stand-in for the slice of the ray API the sweeps use: ``ray.init``,
``ray.remote(fn).remote(...)`` and ``ray.get``. Tasks run on a process pool, or inline
when a single worker is configured.
"""
from concurrent.futures import Future, ProcessPoolExecutor
from typing import Any, Callable, Optional


class RemoteFunction:
    def __init__(self, fn: Callable, runtime: "LocalRay"):
        self._fn = fn
        self._runtime = runtime

    def remote(self, *args, **kwargs) -> Future:
        return self._runtime.submit(self._fn, *args, **kwargs)


class LocalRay:
    def __init__(self):
        self.num_cpus = 1
        self._pool: Optional[ProcessPoolExecutor] = None

    def init(self, num_cpus: Optional[int] = None, **kwargs):
        num_cpus = max(1, num_cpus or 1)
        if num_cpus != self.num_cpus:
            self.shutdown()
            self.num_cpus = num_cpus

    def remote(self, fn: Optional[Callable] = None, **kwargs):
        # Handles both ray.remote(fn) and ray.remote(num_cpus=...)(fn)
        if fn is None:
            return lambda f: RemoteFunction(f, self)
        return RemoteFunction(fn, self)

    def submit(self, fn: Callable, *args, **kwargs) -> Future:
        if self.num_cpus <= 1:
            future: Future = Future()
            try:
                future.set_result(fn(*args, **kwargs))
            except Exception as e:
                future.set_exception(e)
            return future
        if self._pool is None:
            self._pool = ProcessPoolExecutor(max_workers=self.num_cpus)
        return self._pool.submit(fn, *args, **kwargs)

    def get(self, refs: Any):
        if isinstance(refs, list):
            return [ref.result() for ref in refs]
        return refs.result()

    def shutdown(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


ray = LocalRay()
