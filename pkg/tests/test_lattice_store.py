import sqlite3

from nc_lattice import build_nc
from utils.lattice_store import LatticeStore, entry_key


def test_entry_key(a3):
    assert entry_key(a3) == "A3|3 2 1|perm|left_to_right"


def test_save_list_and_purge(a3, make_context, tmp_path):
    store = LatticeStore(str(tmp_path))
    build_nc(a3, store=store)
    build_nc(make_context("B", 3), store=store)

    entries = store.list_entries()
    assert [e["entry_key"] for e in entries] == [entry_key(a3), entry_key(make_context("B", 3))]
    assert entries[0]["n_elements"] == 14
    assert all(store.verify_entry(e["entry_key"]) is None for e in entries)

    assert store.purge(entry_key(a3)) == 1
    assert len(store.list_entries()) == 1
    assert store.purge() == 1
    assert store.list_entries() == []


def test_missing_entry(tmp_path):
    store = LatticeStore(str(tmp_path))
    assert store.verify_entry("nothing") == "missing"


def test_corrupt_entry_is_rebuilt(a3, tmp_path, capsys):
    store = LatticeStore(str(tmp_path))
    built = build_nc(a3, store=store)
    conn = sqlite3.connect(store.db_path)
    conn.execute("UPDATE lattice_tables SET ranks = ? WHERE entry_key = ?", (b"\x00" * 14, entry_key(a3)))
    conn.commit()
    conn.close()

    assert store.verify_entry(entry_key(a3)) == "checksum mismatch"
    assert store.load(a3) is None
    assert "checksum mismatch" in capsys.readouterr().err

    rebuilt = build_nc(a3, store=store)
    assert rebuilt.elements == built.elements
    assert store.verify_entry(entry_key(a3)) is None
