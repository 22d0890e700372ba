import pytest

from cnslab.parallel import map_bands, ray_runtime, resolve_workers, split_bands
from cnslab.ray_mock import LocalRay
from cnslab.ring import enumerate_norm_band, make_field


def _band_keys(d, lo, hi):
    return [(x.a, x.b) for x in enumerate_norm_band(make_field(d), lo, hi)]


def _fail(lo, hi):
    raise ValueError(f"band {lo}..{hi}")


def test_split_bands_cover_the_range():
    bands = split_bands(103, 10)
    assert bands[0][0] == 0 and bands[-1][1] == 103
    assert all(a[1] == b[0] for a, b in zip(bands, bands[1:]))
    widths = [hi - lo for lo, hi in bands]
    assert max(widths) - min(widths) <= 1


def test_split_bands_never_empty():
    assert split_bands(3, 10) == [(0, 1), (1, 2), (2, 3)]
    assert split_bands(10, 1, lo=4) == [(4, 10)]


def test_resolve_workers(monkeypatch):
    assert resolve_workers(3) == 3
    assert resolve_workers(0) == 1
    monkeypatch.setenv("CNSLAB_THREADS", "5")
    assert resolve_workers(None) == 5


@pytest.mark.parametrize("workers", [1, 2, 3])
def test_map_bands_preserves_order(workers):
    parts = map_bands(_band_keys, 5, n_max=500, workers=workers)
    joined = [key for part in parts for key in part]
    assert joined == _band_keys(5, 0, 500)


def test_map_bands_empty_range():
    assert map_bands(_band_keys, 1, n_max=0, workers=1) == [[]]


def test_local_ray_inline_and_errors():
    ray = LocalRay()
    ray.init(num_cpus=1)
    remote = ray.remote(_fail)
    with pytest.raises(ValueError, match="band 1..2"):
        ray.get(remote.remote(1, 2))
    assert ray.get([ray.remote(pow).remote(2, 10)]) == [1024]
    ray.shutdown()


def test_ray_runtime_defaults_to_local_shim():
    assert isinstance(ray_runtime(False), LocalRay)


@pytest.mark.parametrize("env, expected", [("1", True), ("", False)])
def test_map_bands_backend_follows_settings(monkeypatch, env, expected):
    requested = []

    def fake_runtime(use_ray):
        requested.append(use_ray)
        return ray_runtime(False)

    monkeypatch.setenv("CNSLAB_USE_RAY", env)
    monkeypatch.setattr("cnslab.parallel.ray_runtime", fake_runtime)
    parts = map_bands(_band_keys, 1, n_max=50, workers=1)
    assert requested == [expected]
    assert [key for part in parts for key in part] == _band_keys(1, 0, 50)
