"""JSON-lines cache for enumerated marked diagrams.

One file per (class, s): a header line with the class, the marking size and
the generator version, then one line per canonical marked diagram carrying
its multiplicity (null for non-essential markings).  Writes go through a
temporary file and an atomic rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from ..tring import TPoly
from .diagrams import MarkedDiagram
from .engine import GEN_VERSION

ENV_VAR = "WW_CACHE_DIR"


def resolve_cache_dir(cache_dir=None) -> Path | None:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def _cache_path(cache_dir: Path, klass, s: int) -> Path:
    name = "-".join(map(str, klass))
    return cache_dir / f"fd-{name}-s{s}.jsonl"


def load(cache_dir: Path, klass, s: int):
    """Cached (diagram, multiplicity-or-None) pairs, or None on miss."""
    path = _cache_path(cache_dir, klass, s)
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return None
    header = json.loads(lines[0])
    if (
        tuple(header.get("class", ())) != tuple(klass)
        or header.get("s") != s
        or header.get("gen_version") != GEN_VERSION
    ):
        return None
    out = []
    for line in lines[1:]:
        rec = json.loads(line)
        diagram = MarkedDiagram.from_json(klass, s, rec)
        mult = rec["mult"]
        out.append((diagram, None if mult is None else TPoly.from_json(mult, s)))
    return out


def store(cache_dir: Path, klass, s: int, entries) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = _cache_path(cache_dir, klass, s)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            header = {"class": list(klass), "s": s, "gen_version": GEN_VERSION}
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for diagram, mult in entries:
                rec = diagram.to_json()
                rec["mult"] = None if mult is None else mult.to_json()
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
