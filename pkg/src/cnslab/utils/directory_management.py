import os
from pathlib import Path

DEFAULT_RUNTIME_DIR = "~/.cnslab"


def get_runtime_directory() -> Path:
    """
    Gets or creates the runtime directory for fixtures and cached sweeps.
    CNSLAB_HOME wins over the default ~/.cnslab.
    """
    runtime_dir = Path(os.environ.get("CNSLAB_HOME", DEFAULT_RUNTIME_DIR)).expanduser()
    runtime_dir.mkdir(parents=True, exist_ok=True)
    return runtime_dir


def get_runtime_filepath(filename: str) -> Path:
    return get_runtime_directory() / filename
