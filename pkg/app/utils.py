import enum
import hashlib
import json
import math
import os
from fractions import Fraction

import numpy as np

from config import config


# Float with 17 significant digits; non-finite values become null
def format_float(value) -> str:
    value = float(value)
    if not math.isfinite(value):
        return "null"
    return config.FLOAT_FORMAT % value


def _escape(text) -> str:
    return json.dumps(str(text), ensure_ascii=False)


def _encode(obj, indent, depth):
    pad = " " * (indent * (depth + 1))
    end = " " * (indent * depth)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, enum.Enum):
        return _encode(obj.value, indent, depth)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, Fraction):
        return _escape(str(obj))
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{_escape(key)}: {_encode(obj[key], indent, depth + 1)}"
            for key in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(item, indent, depth + 1)}" for item in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# (Public) Sorted keys, %.17g floats, null for non-finite values
def canonical_json(obj, indent=2) -> str:
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(canonical_json(obj))


def write_csv(path, df):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df.to_csv(path, index=False, float_format=config.FLOAT_FORMAT, lineterminator="\n")


# sha256 of the canonical JSON text of `obj`
def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj, indent=0).encode("utf-8")).hexdigest()
