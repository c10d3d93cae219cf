"""JSON formats for boxes, matrices and operator bundles, plus a canonical dumper."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import box_model as bm
from . import operator_algebra as oa

OBSERVABLE_KEYS = ("A0", "A1", "B0", "B1")


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int | None = 2) -> str:
    """Canonical JSON: sorted keys, floats at 17 significant digits."""
    return _dump(_plain(obj), indent, 0)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": _plain(obj.real.tolist()), "im": _plain(obj.imag.tolist())}
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, bm.BipartiteBox):
        return {"p": _plain(obj.to_nested())}
    return obj


def _dump(obj, indent, level) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(obj[k], indent, level + 1)}"
                 for k in sorted(obj)]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        return "[" + sep.join(f"{pad}{_dump(v, indent, level + 1)}" for v in obj) + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- boxes --------------------------------------------------------------------

def box_to_json(box: bm.BipartiteBox) -> dict:
    return {"p": box.to_nested()}


def box_from_json(obj: dict, name: str = "box") -> bm.BipartiteBox:
    if not isinstance(obj, dict) or "p" not in obj:
        raise bm.BoxError('box JSON must be an object with key "p"')
    arr = np.asarray(obj["p"], dtype=float)
    if arr.shape != (2, 2, 2, 2):
        raise bm.BoxError(f'"p" must be nested [x][y][a][b] with shape (2,2,2,2), got {arr.shape}')
    return bm.BipartiteBox(arr, name=obj.get("name", name))


def read_box(path) -> bm.BipartiteBox:
    with open(path) as fh:
        return box_from_json(json.load(fh), name=Path(path).stem)


def write_box(box: bm.BipartiteBox, path) -> None:
    Path(path).write_text(dumps(box_to_json(box)) + "\n")


# -- matrices, states, operator bundles ---------------------------------------

def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValueError("re and im parts differ in shape")
        return re + 1j * im
    return np.asarray(obj, dtype=complex)


def bundle_from_json(obj: dict) -> dict:
    """Operator bundle: A0, A1, B0, B1 (and optionally "state", "form").

    ``form`` is "signed" (spectrum in [-1, 1]; default) or "zero_one"
    (observables with eigenvalues 0 and 1).
    """
    missing = [k for k in OBSERVABLE_KEYS if k not in obj]
    if missing:
        raise ValueError(f"operator file lacks {missing}")
    out = {k: matrix_from_json(obj[k]) for k in OBSERVABLE_KEYS}
    out["form"] = obj.get("form", "signed")
    if out["form"] not in ("signed", "zero_one"):
        raise ValueError('form must be "signed" or "zero_one"')
    if "state" in obj:
        out["state"] = matrix_from_json(obj["state"])
    return out


def bundle_to_json(bundle: dict) -> dict:
    out = {k: matrix_to_json(bundle[k]) for k in OBSERVABLE_KEYS}
    out["form"] = bundle.get("form", "signed")
    if bundle.get("state") is not None:
        out["state"] = matrix_to_json(bundle["state"])
    return out


def read_bundle(path) -> dict:
    with open(path) as fh:
        return bundle_from_json(json.load(fh))


def default_bundle(form: str = "signed") -> dict:
    cfg = oa.optimal_qubit_config()
    obs = cfg["signed"] if form == "signed" else cfg["zero_one"]
    return {**obs, "state": cfg["state"], "form": form}
