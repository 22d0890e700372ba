import pickle
import shutil
import time

import pytest

from cnslab.file_cache import FileCache


@pytest.fixture
def temp_cache_dir(tmp_path):
    """Create a temporary cache directory for testing."""
    cache_dir = tmp_path / ".cnslab" / "cache"
    cache_dir.mkdir(parents=True)
    yield cache_dir
    shutil.rmtree(cache_dir, ignore_errors=True)


@pytest.fixture
def cache(temp_cache_dir):
    return FileCache(str(temp_cache_dir))


def test_cache_initialization(tmp_path):
    cache_dir = tmp_path / "fresh" / "cache"
    FileCache(str(cache_dir))
    assert cache_dir.is_dir()


def test_default_directory_follows_runtime_home(runtime_home):
    cache = FileCache()
    assert cache.cache_dir == runtime_home / "cache"


def test_basic_cache_operations(cache):
    cache.set("sweep-1-1000", {"rows": 3208})
    assert cache.get("sweep-1-1000") == {"rows": 3208}
    assert cache.get("nonexistent_key") is None


def test_cache_with_fetch_function(cache):
    call_count = 0

    def fetch_data():
        nonlocal call_count
        call_count += 1
        return "fetched_value"

    assert cache.get("fetch_key", fetch_data) == "fetched_value"
    assert cache.get("fetch_key", fetch_data) == "fetched_value"
    assert call_count == 1


def test_disabled_cache_always_fetches(temp_cache_dir):
    cache = FileCache(str(temp_cache_dir), enabled=False)
    calls = []
    assert cache.get("k", lambda: calls.append(1) or len(calls)) == 1
    assert cache.get("k", lambda: calls.append(1) or len(calls)) == 2
    assert list(temp_cache_dir.iterdir()) == []


def test_cache_ttl(cache):
    cache.set("ttl_key", "value")
    assert cache.get("ttl_key", ttl_seconds=60) == "value"
    time.sleep(1.1)
    assert cache.get("ttl_key", ttl_seconds=1) is None


def test_corrupted_cache_is_refetched(cache, temp_cache_dir):
    (temp_cache_dir / "broken.pickle").write_bytes(b"not a pickle")
    assert cache.get("broken", lambda: "fresh") == "fresh"
    with open(temp_cache_dir / "broken.pickle", "rb") as f:
        _, data = pickle.load(f)
    assert data == "fresh"


def test_unsafe_keys_are_sanitised(cache, temp_cache_dir):
    cache.set("kp/-1+1*w[1]", 1)
    assert cache.get("kp/-1+1*w[1]") == 1
    assert all(path.parent == temp_cache_dir for path in temp_cache_dir.iterdir())


def test_clear(cache):
    cache.set("a", 1)
    cache.set("b", 2)
    assert cache.clear() == 2
    assert cache.get("a") is None
