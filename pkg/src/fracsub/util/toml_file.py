"""A TOML file that is parsed on first access."""

from __future__ import annotations

import typing as t
from pathlib import Path

from fracsub.errors import ConfigurationError


class TomlFile:
    def __init__(self, path: Path) -> None:
        self._path = path
        self._data: dict[str, t.Any] | None = None

    def __repr__(self) -> str:
        return f'TomlFile(path="{self._path}")'

    @property
    def path(self) -> Path:
        return self._path

    def exists(self) -> bool:
        return self._path.is_file()

    def load(self) -> dict[str, t.Any]:
        """Parses the file once and returns the cached document.

        @raises ConfigurationError: If the file is not valid TOML."""

        import tomli

        if self._data is None:
            with self._path.open("rb") as fp:
                try:
                    self._data = tomli.load(fp)
                except tomli.TOMLDecodeError as exc:
                    raise ConfigurationError(f"invalid TOML in {self._path}: {exc}")
        return self._data

    def table(self, *keys: str) -> dict[str, t.Any]:
        """Returns the nested table at *keys*, or an empty dictionary if any of them is missing."""

        node: t.Any = self.load()
        for key in keys:
            node = node.get(key, {}) if isinstance(node, dict) else {}
        if not isinstance(node, dict):
            raise ConfigurationError(f"[{'.'.join(keys)}] in {self._path} must be a table")
        return node
