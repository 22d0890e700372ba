import json
import logging
import os
import sqlite3
from pathlib import Path
from typing import Any, Optional, TypeVar, overload

from pydantic import BaseModel, Field, ValidationError, field_validator

from .errors import FixtureMismatch
from .utils.directory_management import get_runtime_filepath

logger = logging.getLogger(__name__)

T = TypeVar("T")


class LabSettings(BaseModel):
    """Runtime configuration resolved from CNSLAB_* environment variables."""

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    use_ray: bool = False

    @field_validator("threads", mode="before")
    @classmethod
    def _blank_threads(cls, value):
        if value in (None, ""):
            return os.cpu_count() or 1
        return value

    @classmethod
    def from_env(cls) -> "LabSettings":
        return cls(
            threads=os.environ.get("CNSLAB_THREADS"),
            use_ray=bool(os.environ.get("CNSLAB_USE_RAY")),
        )


class InvalidSettings(ValueError):
    pass


def lab_settings() -> LabSettings:
    try:
        return LabSettings.from_env()
    except ValidationError as e:
        raise InvalidSettings(f"Invalid CNSLAB_THREADS: {os.environ.get('CNSLAB_THREADS')!r}") from e


class FixtureStore:
    """Regression fixtures in SQLite: first run stores, later runs must match exactly."""

    def __init__(self, db_path: str | Path | None = None):
        if db_path is None:
            db_path = get_runtime_filepath("fixtures.db")
        self.db_path = str(db_path)
        # :memory: databases vanish with their connection, so keep one open
        self._memory = sqlite3.connect(self.db_path) if self.db_path == ":memory:" else None

        connection = self._get_connection()
        connection.cursor().execute(
            "CREATE TABLE IF NOT EXISTS fixtures (name TEXT PRIMARY KEY, value TEXT)"
        )
        connection.commit()
        self._release(connection)

    def _get_connection(self):
        return self._memory or sqlite3.connect(self.db_path)

    def _release(self, connection):
        if connection is not self._memory:
            connection.close()

    def set(self, name: str, value: Any) -> None:
        connection = self._get_connection()
        connection.cursor().execute(
            "INSERT OR REPLACE INTO fixtures (name, value) VALUES (?, ?)",
            (name, json.dumps(value)),
        )
        connection.commit()
        self._release(connection)

    @overload
    def get(self, name: str) -> Optional[Any]: ...

    @overload
    def get(self, name: str, default: T) -> T: ...

    def get(self, name, default=None):
        connection = self._get_connection()
        cursor = connection.cursor()
        cursor.execute("SELECT value FROM fixtures WHERE name=?", (name,))
        result = cursor.fetchone()
        self._release(connection)
        return json.loads(result[0]) if result else default

    def list_fixtures(self) -> list[str]:
        connection = self._get_connection()
        cursor = connection.cursor()
        cursor.execute("SELECT name FROM fixtures ORDER BY name")
        result = [row[0] for row in cursor.fetchall()]
        self._release(connection)
        return result

    def delete_fixture(self, name: str) -> None:
        connection = self._get_connection()
        connection.cursor().execute("DELETE FROM fixtures WHERE name=?", (name,))
        connection.commit()
        self._release(connection)

    def record(self, name: str, value: Any) -> Any:
        """Store value on first sight; raise FixtureMismatch if a stored value differs."""
        stored = self.get(name)
        # compare through JSON so tuples and lists agree
        observed = json.loads(json.dumps(value))
        if stored is None:
            logger.info(f"Recording fixture {name} = {observed!r}")
            self.set(name, observed)
            return observed
        if stored != observed:
            raise FixtureMismatch(name, stored, observed)
        logger.info(f"Fixture {name} reproduced")
        return stored
