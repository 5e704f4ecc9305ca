"""Line-oriented on-disk cache with per-line checksums.

Cache files are an optimization only: every consumer recomputes on any
mismatch, and recomputation must reproduce the file byte for byte.  Format:

    pmcong-cache/1 <kind> <canonical key>
    <record>|<crc32 of record, 8 hex digits>
    ...

Writes go through a temporary file in the same directory followed by
os.replace, so concurrent readers never observe a partial file.  The cache
directory is taken from the PMCONG_CACHE_DIR environment variable unless an
explicit directory is passed; with neither present, caching is disabled.
"""

from __future__ import annotations

import os
import tempfile
import zlib
from pathlib import Path

__all__ = ["ENV_VAR", "cache_directory", "cache_path", "load_records", "store_records"]

ENV_VAR = "PMCONG_CACHE_DIR"

_HEADER_PREFIX = "pmcong-cache/1"


def cache_directory(override: str | Path | None = None) -> Path | None:
    """Resolve the cache directory: explicit override, else env var, else None."""
    if override is not None:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return None


def _canonical_key(key: dict[str, object]) -> str:
    return " ".join(f"{k}={key[k]}" for k in sorted(key))


def cache_path(directory: Path, kind: str, key: dict[str, object]) -> Path:
    stem = "-".join([kind] + [f"{k}{key[k]}" for k in sorted(key)])
    safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in stem)
    return directory / f"{safe}.txt"


def _checksum(record: str) -> str:
    return format(zlib.crc32(record.encode("utf-8")) & 0xFFFFFFFF, "08x")


def load_records(directory: Path | None, kind: str, key: dict[str, object]) -> list[str] | None:
    """Return the cached records, or None when absent/stale/corrupt."""
    if directory is None:
        return None
    path = cache_path(directory, kind, key)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError):
        return None
    lines = text.splitlines()
    if not lines or lines[0] != f"{_HEADER_PREFIX} {kind} {_canonical_key(key)}":
        return None
    records = []
    for line in lines[1:]:
        payload, sep, crc = line.rpartition("|")
        if not sep or _checksum(payload) != crc:
            return None
        records.append(payload)
    return records


def store_records(
    directory: Path | None, kind: str, key: dict[str, object], records: list[str]
) -> Path | None:
    """Atomically write the records; returns the path (None if caching is off)."""
    if directory is None:
        return None
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(directory, kind, key)
    body = [f"{_HEADER_PREFIX} {kind} {_canonical_key(key)}"]
    body.extend(f"{r}|{_checksum(r)}" for r in records)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write("\n".join(body) + "\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path
