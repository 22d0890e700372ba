import os

import pytest

# Bands run inline unless a test asks for workers explicitly
os.environ.setdefault("CNSLAB_THREADS", "1")
os.environ.pop("CNSLAB_USE_RAY", None)


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run full-scale sweeps up to norm 10^6"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale sweep, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--runslow"):
        skip_slow = pytest.mark.skip(reason="need --runslow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)


@pytest.fixture
def runtime_home(tmp_path, monkeypatch):
    """Point CNSLAB_HOME at a throwaway runtime directory."""
    home = tmp_path / "cnslab-home"
    monkeypatch.setenv("CNSLAB_HOME", str(home))
    return home


@pytest.fixture
def gaussian():
    from cnslab.ring import make_field

    return make_field(1)
