"""Deterministic JSON/CSV emission.

Floats are printed with 17 significant digits (exact double round-trip),
keys keep insertion order, and files are written atomically (temp file in
the target directory, then rename), so identical inputs give byte-identical
outputs with no torn files.
"""

from __future__ import annotations

import math
import os
import tempfile

from .errors import ContractViolation

SCHEMA = "swanson/1"


def format_float(x: float) -> str:
    if isinstance(x, bool):  # guard: bool is an int subclass
        raise ContractViolation("bool is not a float")
    if math.isnan(x) or math.isinf(x):
        raise ContractViolation(f"non-finite value {x!r} in output payload")
    text = format(float(x), ".17g")
    return text


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def dumps(obj, indent: int = 0) -> str:
    """Minimal recursive JSON writer with fixed float formatting."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return f'"{_escape(obj)}"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  "{_escape(str(k))}": {dumps(v, indent + 2)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [dumps(v, indent + 2) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj) and \
                sum(len(p) for p in parts) < 100:
            return "[" + ", ".join(parts) + "]"
        items = [f"{pad}  {p}" for p in parts]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise ContractViolation(f"cannot serialize {type(obj).__name__}")


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, config: dict, data: dict) -> None:
    payload = {"schema": SCHEMA, "config": config, "data": data}
    write_text_atomic(path, dumps(payload) + "\n")


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    write_text_atomic(path, "\n".join(lines) + "\n")


def complex_pair(z) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def matrix_pairs(m) -> dict:
    return {"re": [[float(v.real) for v in row] for row in m],
            "im": [[float(v.imag) for v in row] for row in m]}
