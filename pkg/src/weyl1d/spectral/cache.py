"""On-disk spectrum cache: a versioned header followed by raw float64 eigenvalues.

Layout::

    b"WEYL1DSP"              8-byte magic
    uint32 little-endian     format version
    uint32 little-endian     header length in bytes
    header                   UTF-8 JSON object
    float64 little-endian    eigenvalues, ``header["count"]`` of them

The directory comes from ``WEYL1D_CACHE_DIR``; caching is off when it is unset.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import struct
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

MAGIC = b"WEYL1DSP"
VERSION = 1
ENV_VAR = "WEYL1D_CACHE_DIR"

log = logging.getLogger(__name__)


def cache_dir() -> Optional[Path]:
    d = os.environ.get(ENV_VAR, "").strip()
    return Path(d) if d else None


def cache_key(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()


def write_spectrum(path: Path, values: np.ndarray, header: dict) -> None:
    values = np.ascontiguousarray(values, dtype="<f8")
    meta = json.dumps({**header, "count": int(values.size)}, sort_keys=True).encode()
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".bin")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<II", VERSION, len(meta)))
            fh.write(meta)
            fh.write(values.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_spectrum(path: Path) -> Optional[tuple[np.ndarray, dict]]:
    """Return ``(values, header)``, or ``None`` for a missing or unreadable entry."""
    try:
        blob = path.read_bytes()
    except FileNotFoundError:
        return None
    try:
        if blob[:8] != MAGIC:
            raise ValueError("bad magic")
        version, hlen = struct.unpack("<II", blob[8:16])
        if version != VERSION:
            raise ValueError(f"cache version {version}")
        header = json.loads(blob[16:16 + hlen].decode())
        values = np.frombuffer(blob, dtype="<f8", offset=16 + hlen).astype(float)
        if values.size != header["count"]:
            raise ValueError("truncated payload")
    except (ValueError, KeyError, struct.error, UnicodeDecodeError) as exc:
        log.warning("ignoring cache entry %s: %s", path, exc)
        return None
    return values, header
