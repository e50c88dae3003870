"""JSON documents for models, partitions and decompositions.

Every document carries a ``"type"`` key.  Rationals travel as ``"num/den"``
strings; ``dumps`` sorts keys so equal objects give byte-identical text.
"""
from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .cantor import ClopenSet, Partition, PartitionError
from .dendroid import DendroidApprox, ModelError
from .fans import StepFunction
from .partition import NullPartitionRequest
from .quotient import Decomposition
from .rational import fmt, parse


class SchemaError(ValueError):
    """A document that does not match the expected layout; ``path`` names the field."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def dumps(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_doc(path: str | os.PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    return doc


def _require(doc: Mapping, key: str, kind: type, where: str = "$") -> Any:
    if key not in doc:
        raise SchemaError(f"{where}.{key}", "missing")
    if not isinstance(doc[key], kind):
        raise SchemaError(f"{where}.{key}", f"expected {kind.__name__}")
    return doc[key]


def _words(data: Any, where: str) -> list[str]:
    if not isinstance(data, list):
        raise SchemaError(where, "expected a list of words")
    for i, w in enumerate(data):
        if not isinstance(w, str) or w.strip("02"):
            raise SchemaError(f"{where}[{i}]", f"{w!r} is not a word over 0 and 2")
    return data


def _rational(data: Any, where: str) -> Fraction:
    try:
        return parse(data)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(where, f"{data!r} is not a rational") from exc


def doc_type(doc: Mapping) -> str:
    t = doc.get("type")
    if not isinstance(t, str):
        raise SchemaError("$.type", "missing document type")
    return t


# -- partitions ------------------------------------------------------------------


def partition_doc(p: Partition, req: NullPartitionRequest | None = None, seed: int | None = None) -> dict:
    doc: dict[str, Any] = {"type": "partition", "pieces": p.to_json()}
    if req is not None:
        doc["request"] = {"base": req.base.to_json(), "marked": [a.to_json() for a in req.marked],
                          "epsilon": fmt(req.epsilon)}
    if seed is not None:
        doc["seed"] = seed
    return doc


def load_partition(doc: Mapping) -> tuple[Partition, NullPartitionRequest | None]:
    pieces = _require(doc, "pieces", list)
    raw = [ClopenSet(_words(pc, f"$.pieces[{i}]")) for i, pc in enumerate(pieces)]
    p = Partition(raw, validate=False)
    req = None
    if "request" in doc:
        r = _require(doc, "request", dict)
        base = _require(r, "base", list, "$.request")
        marked = _require(r, "marked", list, "$.request")
        eps = _rational(_require(r, "epsilon", str, "$.request"), "$.request.epsilon")
        try:
            base_p = Partition([ClopenSet(_words(b, f"$.request.base[{i}]")) for i, b in enumerate(base)])
        except PartitionError as exc:
            raise SchemaError("$.request.base", str(exc)) from exc
        req = NullPartitionRequest(base_p, [ClopenSet(_words(a, f"$.request.marked[{i}]"))
                                            for i, a in enumerate(marked)], eps)
    return p, req


# -- models and decompositions ------------------------------------------------------


def load_model(doc: Mapping) -> DendroidApprox:
    t = doc_type(doc)
    if t == "decomposition":
        from .quotient import quotient_tree
        return quotient_tree(load_decomposition(doc))
    if t == "example20":
        from .quotient import quotient_tree
        return quotient_tree(load_decomposition(_require(doc, "decomposition", dict)))
    if t != "dendroid":
        raise SchemaError("$.type", f"expected a dendroid model, got {t!r}")
    for key, kind in (("nodes", dict), ("edges", list)):
        _require(doc, key, kind)
    try:
        return DendroidApprox.from_json(doc)
    except (ModelError, ValueError, TypeError) as exc:
        raise SchemaError("$", str(exc)) from exc


def load_decomposition(doc: Mapping) -> Decomposition:
    prof = _require(doc, "profile", dict)
    bands = _require(doc, "bands", list)
    for i, b in enumerate(bands):
        where = f"$.bands[{i}]"
        if not isinstance(b, dict):
            raise SchemaError(where, "expected an object")
        _words(_require(b, "piece", list, where), f"{where}.piece")
        for k in ("lo", "hi"):
            _rational(_require(b, k, str, where), f"{where}.{k}")
        _require(b, "stage", int, where)
    if not isinstance(prof.get("values"), dict):
        raise SchemaError("$.profile.values", "expected an object")
    try:
        StepFunction.from_json(prof)
        return Decomposition.from_json(doc)
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError("$", str(exc)) from exc


def profile_doc(f: StepFunction) -> dict:
    return {"type": "profile", **f.to_json()}
