"""Deterministic run artifacts: CSV tables and the JSON run manifest.

Every float is printed with 17 significant digits so values round-trip
exactly and identical configurations produce byte-identical files; manifests
carry no timestamps and are rewritten atomically.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path


def fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def jsonable(value):
    """Config echo: make every value JSON-representable and round-trippable."""
    if isinstance(value, float):
        return fmt(value)
    if isinstance(value, complex):
        return f"{fmt(value.real)}{value.imag:+.17g}j"
    if isinstance(value, (tuple, list)):
        return [jsonable(v) for v in value]
    return value


def write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(path, command: str, config: dict, out_dir, convention: dict,
                   version: str, extra: dict | None = None) -> dict:
    """Hash every artifact in the output directory and write the manifest."""
    out_dir = Path(out_dir)
    artifacts = {}
    for p in sorted(out_dir.iterdir()):
        if p.name == Path(path).name or not p.is_file():
            continue
        artifacts[p.name] = sha256_of(p)
    manifest = {
        "command": command,
        "config": {k: jsonable(v) for k, v in sorted(config.items())},
        "artifacts": artifacts,
        "convention": convention,
        "tool_version": version,
    }
    if extra:
        manifest.update(extra)
    tmp = str(path) + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
    return manifest
