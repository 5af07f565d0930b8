"""On-disk JSON cache for evaluated modules and suite cell results.

Entries live in one directory, one file per key.  Every write goes to a
temporary file in the same directory followed by an atomic rename, so
concurrent workers never observe a half-written entry.  Keys combine the
group (p, n, field polynomial), the canonical expression text, the kind of
result and the package version, so results from older code are ignored.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from .. import __version__
from ..modcore import GModule

log = logging.getLogger(__name__)

__all__ = ["ResultCache"]


class ResultCache:
    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, kind: str, ctx, text: str) -> Path:
        raw = f"{__version__}|{kind}|{ctx.key()}|m{ctx.m_from}|{text}"
        digest = hashlib.sha256(raw.encode()).hexdigest()[:32]
        return self.dir / f"{kind}-{digest}.json"

    def _read(self, path: Path):
        try:
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path.name, exc)
            return None

    def _write(self, path: Path, payload) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # generic results

    def get(self, kind: str, ctx, text: str):
        out = self._read(self._path(kind, ctx, text))
        if out is None:
            self.misses += 1
            return None
        self.hits += 1
        return out.get("value")

    def put(self, kind: str, ctx, text: str, value) -> None:
        self._write(self._path(kind, ctx, text), {"key": text, "kind": kind, "value": value})

    # modules

    def get_module(self, ctx, text: str) -> GModule | None:
        entry = self.get("module", ctx, text)
        if entry is None:
            return None
        dim = int(entry["dim"])
        gens = [np.array(g, dtype=np.int64).reshape(dim, dim) for g in entry["gens"]]
        return GModule(ctx.group, gens, text, validate=False, dim=dim)

    def put_module(self, ctx, text: str, mod: GModule) -> None:
        self.put("module", ctx, text, {"dim": mod.dim, "gens": [g.tolist() for g in mod.gens]})
