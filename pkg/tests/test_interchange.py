import json
import random

import pytest

from hypercount.analysis import count_lines
from hypercount.constructions import MqtArtifacts, build_mqt, build_tower, check_mqt_witness
from hypercount.errors import ParseError, SchemaError
from hypercount.finite_geometry import make_field
from hypercount.interchange import (
    dumps,
    io_roundtrip,
    loads,
    matroid_from_doc,
    matroid_of,
    matroid_to_doc,
    write_document,
)
from hypercount.matroid_core import Linear, Uniform, parallel_connection

from corpus import small_corpus


def _same_rank(A, B, trials=300, seed=0):
    assert A.n == B.n and A.labels == B.labels
    rng = random.Random(seed)
    for _ in range(trials):
        X = rng.getrandbits(A.n)
        assert A.rank(X) == B.rank(X)


def test_uniform_roundtrip(tmp_path):
    p = tmp_path / "u.json"
    write_document({"type": "uniform", "r": 2, "n": 11}, p)
    M = io_roundtrip(p)
    assert matroid_to_doc(M) == {"type": "uniform", "r": 2, "n": 11}


def test_mqt_witness_roundtrip(tmp_path):
    N, art = build_mqt(7, 5)
    p = tmp_path / "m75.json"
    write_document({"matroid": matroid_to_doc(N), "witness": {"mqt": art.to_dict()}}, p)
    M = io_roundtrip(p)
    _same_rank(M, N)
    assert count_lines(M) == 129
    doc = json.loads(p.read_text())
    art2 = MqtArtifacts.from_dict(doc["witness"]["mqt"])
    assert art2 == art
    check_mqt_witness(art2)


@pytest.mark.parametrize("name", sorted(small_corpus()))
def test_corpus_roundtrip(name):
    M = small_corpus()[name]
    doc = matroid_to_doc(M)
    M2 = matroid_from_doc(loads(dumps(doc)))
    assert matroid_to_doc(M2) == doc
    for X in range(1 << M.n):
        assert M.rank(X) == M2.rank(X)


def test_linear_and_labelled_roundtrip():
    M = Linear(make_field(4), [(1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 3, 1)])
    M.labels = ("a", "b", "c", "d")
    doc = matroid_to_doc(M)
    assert doc["labels"] == ["a", "b", "c", "d"]
    _same_rank(matroid_from_doc(loads(dumps(doc))), M)


def test_tower_roundtrip():
    N, _ = build_mqt(3, 3)
    M, _ = build_tower(N, 0, 4, 5)
    M2 = matroid_from_doc(loads(dumps(matroid_to_doc(M))))
    _same_rank(M2, M, trials=2000)


def test_dumps_is_deterministic():
    M = parallel_connection(Uniform(2, 4), 0, Uniform(3, 5), 1)
    assert dumps(matroid_to_doc(M)) == dumps(matroid_to_doc(M))


def test_truncated_file_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    text = dumps(matroid_to_doc(build_mqt(3, 3)[0]))
    p.write_text(text[: len(text) // 2])
    with pytest.raises(ParseError) as exc:
        io_roundtrip(p)
    assert exc.value.line >= 1 and exc.value.column >= 1


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"r": 2, "n": 3}, "type"),
        ({"type": "uniform", "r": 2}, "n"),
        ({"type": "uniform", "r": "2", "n": 3}, "r"),
        ({"type": "hexagon"}, "type"),
        ({"type": "line_set_rank3", "n": 4, "lines": [[0, 1, 7]]}, "lines[0]"),
        ({"type": "line_set_rank3", "n": 4, "lines": [[0, "x"]]}, "lines[0]"),
        ({"type": "uniform", "r": 2, "n": 3, "labels": ["a"]}, "labels"),
        (
            {"type": "parallel_connection", "left": {"type": "uniform", "r": 2, "n": 3},
             "right": {"type": "uniform", "n": 3}, "basepoint_left": 0, "basepoint_right": 0},
            "right.r",
        ),
    ],
)
def test_schema_errors_name_the_field(doc, field):
    with pytest.raises(SchemaError) as exc:
        matroid_from_doc(doc)
    assert field in exc.value.field


def test_matroid_of_unwraps_wrapper():
    inner = {"type": "uniform", "r": 2, "n": 5}
    assert matroid_to_doc(matroid_of({"matroid": inner, "report": {}})) == inner
