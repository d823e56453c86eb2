import json

import pytest

from data.loader import DataLoader, dump_document, module_document, with_schema
from engine.group_modules import ElementaryAbelianAlgebra, truncated_module


def test_fixture_by_name():
    m = DataLoader("kE_mod_z1_p2_r2").load_module()
    assert m.dim == 2
    assert m.algebra.p == 2
    assert DataLoader("kE_mod_z1_p2_r2.json").path == DataLoader("kE_mod_z1_p2_r2").path


def test_embedding_fixture():
    e = DataLoader("embedding_p2_r2_first").load_embedding()
    assert e.p == 2
    assert e.source_rank == 1
    assert e.target_rank == 2


def test_ideal_fixture():
    ideal = DataLoader("ideal_x2_p2_r2").load_ideal()
    assert ideal.contains(ideal.ring.parse("x2"))
    assert not ideal.contains(ideal.ring.parse("x1"))


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        DataLoader("no_such_fixture")


def test_bad_documents(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("[1, 2", encoding="utf-8")
    with pytest.raises(ValueError):
        DataLoader(broken).load_document()
    listed = tmp_path / "listed.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError):
        DataLoader(listed).load_document()
    future = tmp_path / "future.json"
    future.write_text(json.dumps({"schema": 2}), encoding="utf-8")
    with pytest.raises(ValueError):
        DataLoader(future).load_document()


def test_embedding_needs_its_prime(tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps({"matrix": [[1], [0]]}), encoding="utf-8")
    with pytest.raises(ValueError):
        DataLoader(path).load_embedding()


def test_module_document_survives_a_file(tmp_path):
    m = truncated_module(ElementaryAbelianAlgebra(3, 2), [2, 3])
    path = tmp_path / "m.json"
    path.write_text(dump_document(module_document(m)), encoding="utf-8")
    assert DataLoader(path).load_module().to_json() == m.to_json()


def test_canonical_dump():
    text = dump_document(with_schema({"b": 1, "a": [1]}))
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b", "schema"]
