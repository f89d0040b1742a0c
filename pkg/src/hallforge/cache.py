"""Append-only JSON-lines store of Hall numbers.

One file per (quiver, q, budget); the file name is a hash of the canonical
quiver JSON together with q and the budget, so a changed quiver simply misses.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import random
import warnings
from pathlib import Path
from typing import Callable

from .quiver import Quiver

ENV_VAR = "HALLFORGE_CACHE_DIR"
SPOT_CHECK_FRACTION = 0.01


class CacheWarning(UserWarning):
    pass


def cache_key(quiver: Quiver, q: int, budget: int) -> str:
    payload = json.dumps({"quiver": quiver.canonical_json(), "q": q, "budget": budget}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:32]


def default_cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


class HallCache:
    """Hall numbers alpha^L_{M,N} keyed by class ids."""

    def __init__(self, directory, quiver: Quiver, q: int, budget: int):
        self.directory = Path(directory)
        self.key = cache_key(quiver, q, budget)
        self.path = self.directory / f"hall-{self.key}.jsonl"
        self.verify: Callable[[str, str, str], int] | None = None

    def _parse(self, line: str):
        rec = json.loads(line)
        if rec.get("key") != self.key:
            raise ValueError("record belongs to another cache key")
        m, n, l, c = rec["M"], rec["N"], rec["L"], rec["count"]
        if not all(isinstance(x, str) for x in (m, n, l)) or not isinstance(c, int) or c < 0:
            raise ValueError("malformed record")
        return (m, n, l), c

    def load(self) -> dict[tuple[str, str, str], int]:
        """Read all valid records; corrupt lines are skipped with a warning (they
        get recomputed on demand).  If a verifier is set, about 1% of the entries
        are recounted and a mismatch discards the whole file."""
        if not self.path.exists():
            return {}
        out: dict = {}
        bad = 0
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    k, c = self._parse(line)
                except (ValueError, KeyError, TypeError):
                    bad += 1
                    warnings.warn(f"{self.path}: corrupt line {lineno} ignored, entry will be recomputed", CacheWarning)
                    continue
                out[k] = c
        if out and self.verify is not None:
            keys = sorted(out)
            n = max(1, math.ceil(SPOT_CHECK_FRACTION * len(keys)))
            for k in random.Random(self.key).sample(keys, n):
                if self.verify(*k) != out[k]:
                    warnings.warn(f"{self.path}: spot-check recount failed for {k}; rebuilding cache", CacheWarning)
                    self.clear()
                    return {}
        if bad:
            self._rewrite(out)
        return out

    def append(self, m_id: str, n_id: str, l_id: str, count: int):
        self.directory.mkdir(parents=True, exist_ok=True)
        rec = {"key": self.key, "M": m_id, "N": n_id, "L": l_id, "count": int(count)}
        with self.path.open("a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def _rewrite(self, records: dict):
        tmp = self.path.with_suffix(".tmp")
        with tmp.open("w") as fh:
            for (m, n, l), c in sorted(records.items()):
                fh.write(json.dumps({"key": self.key, "M": m, "N": n, "L": l, "count": c}, sort_keys=True) + "\n")
        tmp.replace(self.path)

    def clear(self):
        if self.path.exists():
            self.path.unlink()
