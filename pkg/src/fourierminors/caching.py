"""Versioned JSON caches for polynomial tables.

Cache files have the shape {"version": 1, "entries": {key: value}}.
Writes go through a temp file and os.replace, so concurrent processes
sharing a cache directory never observe a torn file.
"""

import json
import os
import tempfile
from pathlib import Path

CACHE_VERSION = 1


def default_cache_dir() -> Path:
    base = os.environ.get("FOURIERMINORS_CACHE")
    if base:
        return Path(base)
    xdg = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(xdg) / "fourierminors"


class JsonCache:
    """One cache file; entries are looked up by string key."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._entries = None

    def _load(self) -> dict:
        if self._entries is not None:
            return self._entries
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            if data.get("version") == CACHE_VERSION and isinstance(data.get("entries"), dict):
                self._entries = data["entries"]
            else:
                self._entries = {}
        except (OSError, ValueError):
            self._entries = {}
        return self._entries

    def get(self, key: str):
        return self._load().get(key)

    def put(self, key: str, value) -> None:
        entries = self._load()
        entries[key] = value
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"version": CACHE_VERSION, "entries": entries}, fh, sort_keys=True)
            os.replace(tmp, self.path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
