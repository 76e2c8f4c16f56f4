from __future__ import annotations

import hashlib
import json

import pytest

from arrmono.cache import CacheInvalid, entry_dir, load, load_or_build, recipe_hash, store


@pytest.fixture
def stored(arr, tmp_path):
    store(arr, tmp_path)
    return tmp_path


def test_store_layout(stored):
    d = entry_dir(stored)
    assert d.name == recipe_hash()
    manifest = json.loads((d / "manifest.json").read_text())
    names = set(manifest["files"])
    assert {"f.poly4", "f4.poly4", "E_1_1.poly4", "E_4_4.poly4", "g_2.poly4", "mprime_1.poly4", "qprime_3.poly4"} <= names
    assert len(names) == 1 + 4 + 16 + 3 + 12
    assert all(manifest["checks"].values())


def test_load_roundtrip(arr, stored):
    data = load(stored)
    assert data.f == arr.f
    assert data.basic == arr.basic
    assert data.E.E == arr.E.E
    assert data.P.rows == arr.P.rows
    assert data.invariants is None
    data2, status = load_or_build(stored)
    assert status == "hit" and data2.f == arr.f


def test_store_is_idempotent(arr, stored):
    d = entry_dir(stored)
    before = {p.name: p.read_bytes() for p in d.iterdir()}
    store(arr, stored)
    assert {p.name: p.read_bytes() for p in d.iterdir()} == before


def test_tampered_file_is_rejected(stored):
    path = entry_dir(stored) / "E_2_3.poly4"
    path.write_text(path.read_text() + " ")
    with pytest.raises(CacheInvalid, match="hash mismatch"):
        load(stored)


def test_consistent_but_wrong_data_is_rejected(arr, stored):
    # rewrite a file and its manifest hash: only the re-verification can notice
    d = entry_dir(stored)
    manifest = json.loads((d / "manifest.json").read_text())
    wrong = (arr.E.E[1, 2] * 2).serialize().encode()
    (d / "E_2_3.poly4").write_bytes(wrong)
    manifest["files"]["E_2_3.poly4"] = hashlib.sha256(wrong).hexdigest()
    (d / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(CacheInvalid):
        load(stored)


def test_missing_file_and_bad_manifest(stored):
    d = entry_dir(stored)
    (d / "g_3.poly4").unlink()
    with pytest.raises(CacheInvalid, match="missing"):
        load(stored)
    (d / "manifest.json").write_text("{not json")
    with pytest.raises(CacheInvalid, match="unreadable"):
        load(stored)


def test_invalid_entry_is_rebuilt(arr, stored, caplog):
    (entry_dir(stored) / "f.poly4").write_text("garbage")
    data, status = load_or_build(stored)
    assert status == "rebuilt"
    assert data.f == arr.f
    assert "rebuilding" in caplog.text
    assert load_or_build(stored)[1] == "hit"


def test_empty_dir_builds(tmp_path, monkeypatch, arr):
    import arrmono.cache as cache

    monkeypatch.setattr(cache, "construct", lambda: arr)
    data, status = load_or_build(tmp_path / "new")
    assert status == "built" and (entry_dir(tmp_path / "new") / "manifest.json").exists()
    assert load_or_build(None)[1] == "nocache"
