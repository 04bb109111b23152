"""JSON interchange documents for matroids and construction witnesses.

A matroid document is a tree of nodes tagged by ``"type"``::

    {"type": "uniform", "r": 2, "n": 11}
    {"type": "linear", "q": 7, "columns": [[0, 0, 1], ...]}
    {"type": "line_set_rank3", "n": 12, "lines": [[0, 1, 2], ...]}
    {"type": "parallel_connection", "left": {...}, "right": {...},
     "basepoint_left": 0, "basepoint_right": 0}

Any node may carry ``"labels"``, a list of element names.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ParseError, SchemaError
from .finite_geometry import make_field
from .matroid_core import (
    Linear,
    LineSetRank3,
    Matroid,
    ParallelConn,
    Uniform,
    members,
    parallel_connection,
)


def _default_labels(M: Matroid) -> bool:
    return M.labels == tuple(str(i) for i in range(M.n))


def matroid_to_doc(M: Matroid) -> dict:
    if isinstance(M, Uniform):
        doc = {"type": "uniform", "r": M.r, "n": M.n}
    elif isinstance(M, Linear):
        doc = {"type": "linear", "q": M.spec.q, "columns": [list(c) for c in M.columns]}
    elif isinstance(M, LineSetRank3):
        doc = {
            "type": "line_set_rank3",
            "n": M.n,
            "lines": [members(ln) for ln in M.lines[: M.n_given]],
        }
    elif isinstance(M, ParallelConn):
        doc = {
            "type": "parallel_connection",
            "left": matroid_to_doc(M.left),
            "right": matroid_to_doc(M.right),
            "basepoint_left": M.b1,
            "basepoint_right": M.b2,
        }
    else:
        raise TypeError(f"cannot serialize {type(M).__name__}")
    if not _default_labels(M):
        doc["labels"] = list(M.labels)
    return doc


def _field(doc: dict, name: str, path: str, kind=int):
    where = f"{path}.{name}" if path else name
    if not isinstance(doc, dict):
        raise SchemaError(path or "<root>", "expected an object")
    if name not in doc:
        raise SchemaError(where, "missing")
    v = doc[name]
    if not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
        raise SchemaError(where, f"expected {kind.__name__}, got {type(v).__name__}")
    return v


def _int_list(v, where: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SchemaError(where, "expected a list of integers")
    return v


def matroid_from_doc(doc: Any, path: str = "") -> Matroid:
    kind = _field(doc, "type", path, kind=str)
    labels = doc.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or not all(isinstance(s, str) for s in labels)
    ):
        raise SchemaError(f"{path}.labels", "expected a list of strings")
    try:
        if kind == "uniform":
            M = Uniform(_field(doc, "r", path), _field(doc, "n", path))
        elif kind == "linear":
            q = _field(doc, "q", path)
            cols = _field(doc, "columns", path, kind=list)
            cols = [_int_list(c, f"{path}.columns[{i}]") for i, c in enumerate(cols)]
            M = Linear(make_field(q), cols)
        elif kind == "line_set_rank3":
            n = _field(doc, "n", path)
            lines = _field(doc, "lines", path, kind=list)
            lines = [_int_list(l, f"{path}.lines[{i}]") for i, l in enumerate(lines)]
            for i, l in enumerate(lines):
                if any(not 0 <= x < n for x in l):
                    raise SchemaError(f"{path}.lines[{i}]", f"index outside 0..{n - 1}")
            M = LineSetRank3(n, lines)
        elif kind == "parallel_connection":
            left = matroid_from_doc(_field(doc, "left", path, kind=dict), f"{path}.left")
            right = matroid_from_doc(_field(doc, "right", path, kind=dict), f"{path}.right")
            M = parallel_connection(
                left, _field(doc, "basepoint_left", path), right, _field(doc, "basepoint_right", path)
            )
        else:
            raise SchemaError(f"{path}.type" if path else "type", f"unknown matroid type {kind!r}")
    except SchemaError:
        raise
    except (ValueError, IndexError) as exc:
        raise SchemaError(path or "<root>", str(exc)) from exc
    if labels is not None:
        if len(labels) != M.n:
            raise SchemaError(f"{path}.labels", f"expected {M.n} labels, got {len(labels)}")
        M.labels = tuple(labels)
    return M


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=1) + "\n"


def read_document(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_document(doc: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def matroid_of(doc: Any) -> Matroid:
    """The matroid in a bare matroid document or in a report/witness wrapper."""
    if isinstance(doc, dict) and "type" not in doc and "matroid" in doc:
        return matroid_from_doc(doc["matroid"], "matroid")
    return matroid_from_doc(doc)


def io_roundtrip(path: str) -> Matroid:
    """Parse, re-serialize and re-parse ``path``; the documents must agree."""
    doc = read_document(path)
    M = matroid_of(doc)
    once = matroid_to_doc(M)
    again = matroid_to_doc(matroid_from_doc(loads(dumps(once))))
    if once != again:
        raise SchemaError("<root>", "document does not survive a roundtrip")
    return M
