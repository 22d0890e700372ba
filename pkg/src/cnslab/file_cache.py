import logging
import pickle
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar

from .utils.directory_management import get_runtime_filepath

logger = logging.getLogger(__name__)

T = TypeVar("T")


class FileCache:
    """Pickle cache for expensive sweeps and envelopes, keyed by a string."""

    def __init__(self, cache_dir: Optional[str] = None, enabled: bool = True):
        self.cache_dir = Path(cache_dir).expanduser() if cache_dir else Path(get_runtime_filepath("cache"))
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.enabled = enabled

    def _get_cache_path(self, key: str) -> Path:
        safe_key = "".join(c if c.isalnum() or c in "-." else "_" for c in key)
        return self.cache_dir / f"{safe_key}.pickle"

    def get(
        self,
        key: str,
        fetch_fn: Optional[Callable[[], T]] = None,
        ttl_seconds: Optional[int] = None,
    ) -> Optional[T]:
        """
        Retrieve item from cache or compute and cache it if not found.

        Args:
            key: Cache key
            fetch_fn: Function that computes the value on a miss
            ttl_seconds: Time to live in seconds (optional)

        Returns:
            Cached or freshly computed value, None on a miss without fetch_fn
        """
        cache_path = self._get_cache_path(key)

        if self.enabled and cache_path.exists():
            try:
                with open(cache_path, "rb") as f:
                    timestamp, data = pickle.load(f)
                if ttl_seconds is None or datetime.now() - timestamp <= timedelta(seconds=ttl_seconds):
                    logger.debug(f"Cache hit for {key}")
                    return data
                cache_path.unlink()
            except (pickle.PickleError, EOFError, AttributeError) as e:
                logger.warning(f"Discarding unreadable cache entry {cache_path}: {e}")

        if fetch_fn is None:
            return None

        data = fetch_fn()
        if self.enabled:
            try:
                self.set(key, data)
            except RuntimeError as e:
                logger.warning(str(e))
        return data

    def set(self, key: str, value: Any) -> None:
        cache_path = self._get_cache_path(key)
        try:
            with open(cache_path, "wb") as f:
                pickle.dump((datetime.now(), value), f)
        except (pickle.PickleError, OSError, TypeError) as e:
            raise RuntimeError(f"Can't pickle object to cache, key {key}: {e}")

    def clear(self) -> int:
        removed = 0
        for path in self.cache_dir.glob("*.pickle"):
            path.unlink()
            removed += 1
        return removed
