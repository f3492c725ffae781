"""JSON-lines cache of per-(k, isogeny) Selmer records.

Each line is {"key": ..., "record": ..., "sha256": ...}; the checksum covers
the canonical JSON of key and record.  Corrupt lines are dropped on load, so
their entries are recomputed.  Writes go to a temp file that is renamed over
the cache file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "MORDELL_CACHE_DIR"
FILENAME = "selmer.jsonl"


def default_cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


def _digest(key: str, record: dict) -> str:
    blob = json.dumps({"key": key, "record": record}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_key(k: int, isogeny: str) -> str:
    return f"{k}:{isogeny}"


class SelmerCache:
    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.path = self.dir / FILENAME
        self.records: dict[str, dict] = {}
        self.corrupt = 0
        self._dirty = False
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    key, rec, digest = obj["key"], obj["record"], obj["sha256"]
                except (ValueError, KeyError, TypeError):
                    self.corrupt += 1
                    continue
                if _digest(key, rec) != digest:
                    self.corrupt += 1
                    continue
                self.records[key] = rec
        if self.corrupt:
            log.warning("dropped %d corrupt cache lines from %s", self.corrupt, self.path)

    def get(self, k: int, isogeny: str) -> dict | None:
        return self.records.get(cache_key(k, isogeny))

    def put(self, k: int, isogeny: str, record: dict):
        self.records[cache_key(k, isogeny)] = record
        self._dirty = True

    def flush(self):
        if not self._dirty:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".selmer-", suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            for key in sorted(self.records, key=_sort_key):
                rec = self.records[key]
                line = {"key": key, "record": rec, "sha256": _digest(key, rec)}
                fh.write(json.dumps(line, sort_keys=True, separators=(",", ":")) + "\n")
        os.replace(tmp, self.path)
        self._dirty = False

    def __len__(self):
        return len(self.records)


def _sort_key(key: str):
    k, iso = key.split(":")
    return (abs(int(k)), int(k), iso)
