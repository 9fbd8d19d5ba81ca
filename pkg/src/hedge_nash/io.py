"""Whole-file atomic writes and witness persistence."""

from __future__ import annotations

import io
import json
import os
import tempfile
from pathlib import Path


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def write_json(path: str | Path, obj) -> Path:
    return atomic_write_text(path, dumps(obj))


def write_trajectory_csv(path: str | Path, records) -> Path:
    from .hedge import write_records_csv

    buf = io.StringIO()
    write_records_csv(buf, records)
    return atomic_write_text(path, buf.getvalue())


def write_witnesses(directory: str | Path, prefix: str, reports) -> list[Path]:
    """One JSON file per failed report that carries a witness."""
    out = []
    for r in reports:
        if r.passed or r.witness is None:
            continue
        out.append(write_json(Path(directory) / f"{prefix}{r.lemma_id}.json", r.witness))
    return out
