"""Colorings: constructors, documents, enumeration, provenance rebuild."""

import json

import numpy as np
import pytest

from sqstar import (
    EnumerationCapError,
    OutOfDomainError,
    SchemaViolationError,
    enumerate_all,
    from_file,
    from_provenance,
    periodic_coloring,
    random_coloring,
    to_file,
)
from sqstar.colorings import Coloring, coloring_from_doc


def test_random_deterministic():
    a = random_coloring(42, 3, 1000)
    b = random_coloring(42, 3, 1000)
    assert np.array_equal(a.assignment, b.assignment)
    c = random_coloring(43, 3, 1000)
    assert not np.array_equal(a.assignment, c.assignment)
    assert set(np.unique(a.assignment)) <= {1, 2, 3}
    assert a.provenance == "random:pcg64:seed=42,r=3,bound=1000"


def test_periodic():
    c = periodic_coloring(2, [1, 2], 10)
    assert c.r == 2
    assert c.color_of(7) == 2
    assert c.color_of(6) == 1
    assert [c.color_of(i) for i in range(4)] == [1, 2, 1, 2]
    with pytest.raises(ValueError):
        periodic_coloring(2, [1], 10)
    with pytest.raises(ValueError):
        periodic_coloring(2, [0, 1], 10)


def test_color_of_domain():
    c = random_coloring(0, 2, 50)
    with pytest.raises(OutOfDomainError):
        c.color_of(50)
    with pytest.raises(OutOfDomainError):
        c.color_of(-1)


def test_file_roundtrip(tmp_path):
    c = random_coloring(5, 4, 200)
    path = str(tmp_path / "c.json")
    to_file(c, path)
    d = from_file(path)
    assert d.r == 4 and d.bound == 200
    assert np.array_equal(c.assignment, d.assignment)
    assert d.provenance == c.provenance


def test_file_schema_violations(tmp_path):
    path = str(tmp_path / "bad.json")

    def dump(doc):
        with open(path, "w") as fh:
            json.dump(doc, fh)

    dump({"r": 2, "bound": 3})
    with pytest.raises(SchemaViolationError):
        from_file(path)
    dump({"r": 2, "bound": 3, "colors": [1, 2]})
    with pytest.raises(SchemaViolationError):
        from_file(path)
    dump({"r": 2, "bound": 3, "colors": [1, 2, 3]})
    with pytest.raises(SchemaViolationError):
        from_file(path)
    dump({"r": "2", "bound": 3, "colors": [1, 2, 1]})
    with pytest.raises(SchemaViolationError):
        from_file(path)
    open(path, "w").write("{not json")
    with pytest.raises(SchemaViolationError):
        from_file(path)
    dump({"r": 2, "bound": 3, "colors": [1, 2, 1]})
    assert from_file(path).color_of(1) == 2


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring(0, 5, [1] * 5, "x")
    with pytest.raises(ValueError):
        Coloring(2, 5, [1, 2, 3, 1, 1], "x")
    with pytest.raises(ValueError):
        Coloring(2, 5, [1, 2], "x")


def test_enumerate_all():
    cs = list(enumerate_all(2, 3))
    assert len(cs) == 8
    # lexicographic, color 1 first
    assert list(cs[0].assignment) == [1, 1, 1]
    assert list(cs[-1].assignment) == [2, 2, 2]
    assert len({tuple(c.assignment) for c in cs}) == 8
    with pytest.raises(EnumerationCapError):
        next(enumerate_all(2, 30))
    assert len(list(enumerate_all(2, 4, cap=16))) == 16


def test_from_provenance_random():
    a = random_coloring(9, 2, 77)
    b = from_provenance(a.provenance)
    assert np.array_equal(a.assignment, b.assignment)
    assert (b.r, b.bound) == (2, 77)


def test_from_provenance_periodic():
    a = periodic_coloring(3, [1, 2, 2], 30)
    b = from_provenance(a.provenance)
    assert np.array_equal(a.assignment, b.assignment)


def test_from_provenance_unknown():
    with pytest.raises(SchemaViolationError):
        from_provenance("enumerated:r=2,bound=3,index=0")
    with pytest.raises(SchemaViolationError):
        from_provenance("file:/nowhere")


def test_doc_rejects_non_object():
    with pytest.raises(SchemaViolationError):
        coloring_from_doc([1, 2, 3])
