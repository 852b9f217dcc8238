"""Deterministic CSV/JSON emission shared by the CLI subcommands.

Floats are formatted to 12 significant digits so that identical configurations
produce byte-identical files; writes go through a temp file and an atomic
rename.  CSV files start with '#'-prefixed metadata lines, one of which
carries the originating configuration as JSON so outputs re-parse into the
RunConfig that produced them.
"""

from __future__ import annotations

import json
import os
from typing import Iterable

FLOAT_FORMAT = "{:.12g}"


def fmt(value) -> str:
    """Render one CSV cell: floats at 12 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return FLOAT_FORMAT.format(value)
    if isinstance(value, complex):
        return FLOAT_FORMAT.format(value.real) + ("+" if value.imag >= 0 else "-") \
            + FLOAT_FORMAT.format(abs(value.imag)) + "j"
    return str(value)


def canonicalize(obj):
    """Round floats to the wire precision so JSON output is reproducible."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(FLOAT_FORMAT.format(obj))
    if isinstance(obj, complex):
        return {"real": canonicalize(obj.real), "imag": canonicalize(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): canonicalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonicalize(v) for v in obj]
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalar
        return canonicalize(obj.item())
    if hasattr(obj, "tolist"):                                # numpy array
        return canonicalize(obj.tolist())
    return obj


def strip_private(config: dict) -> dict:
    """Drop underscore-prefixed keys (execution details like thread counts)."""
    return {k: v for k, v in config.items() if not str(k).startswith("_")}


def dumps_json(obj) -> str:
    """Serialize a report: wire-precision floats, except the embedded config.

    The `config` subtree keeps full float precision so that the recorded
    configuration re-parses into exactly the one that produced the file.
    """
    if isinstance(obj, dict) and "config" in obj:
        out = {k: (strip_private(v) if k == "config" else canonicalize(v))
               for k, v in obj.items()}
    else:
        out = canonicalize(obj)
    return json.dumps(out, indent=2, sort_keys=True) + "\n"


def atomic_write(path: str, text: str):
    """Write-then-rename so readers never observe a partial file."""
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def csv_text(metadata: dict, columns: list, rows: Iterable) -> str:
    """Assemble a CSV with '#'-prefixed metadata lines and a config line."""
    lines = []
    config = metadata.pop("config", None)
    for key, value in metadata.items():
        lines.append(f"# {key} = {fmt(value)}")
    if config is not None:
        # full float precision: the config line must re-parse to exactly the
        # configuration that produced this file
        lines.append("# config: " + json.dumps(strip_private(config), sort_keys=True))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_metadata(text: str) -> dict:
    """Re-parse the '#'-prefixed header of an emitted CSV."""
    meta: dict = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if body.startswith("config:"):
            meta["config"] = json.loads(body[len("config:"):].strip())
        elif "=" in body:
            key, _, value = body.partition("=")
            meta[key.strip()] = value.strip()
    return meta


def read_csv(path: str):
    """Load an emitted CSV back into (metadata, columns, rows-of-strings)."""
    with open(path) as fh:
        text = fh.read()
    meta = parse_metadata(text)
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return meta, columns, rows
