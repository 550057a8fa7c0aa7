import json

from pop_dynamics import DepthTable, forward_orbit
from utils.export_manager import ExportManager


def _table():
    return DepthTable(label="A2", counts=[1, 4, 1], group_order=6)


def test_tsv():
    assert ExportManager.render_table_tsv(_table()) == "depth\tcount\n0\t1\n1\t4\n2\t1\ninf\t0\n"


def test_json_round_trip():
    data = json.loads(ExportManager().render_table(_table(), "json"))
    assert data["counts"] == [1, 4, 1]
    assert data["periodic_count"] == 0
    assert data["group"] == "A2"


def test_text_table_mentions_periodic_orbits():
    table = DepthTable(label="F4", counts=[1, 2], periodic_count=24, periodic_cycle_lengths=[12, 12], group_order=27)
    text = ExportManager.render_table_text(table)
    assert text.startswith("F4 (order 27)")
    assert "periodic orbits: 2 (lengths 12)" in text


def test_dot_forest_drops_self_loops():
    dot = ExportManager.render_forest_dot("Pop_T A1", [("e", "e"), ("(12)", "e")], root="e")
    assert dot.startswith('digraph "Pop_T A1" {')
    assert '"e" [shape=doublecircle];' in dot
    assert '"(12)" -> "e";' in dot
    assert '"e" -> "e"' not in dot


def test_orbit_text(a3, make_lattice):
    orbit = forward_orbit(a3, make_lattice(a3), a3.c)
    text = ExportManager.render_orbit_text(orbit, a3.format)
    assert "(1234)" in text
    assert "reaches e after 1 steps (orbit size 2)" in text


def test_report_text():
    text = ExportManager.render_report_text("verify", [("PASS", "ok"), ("FAIL", "bad")])
    assert text == "verify\n  [PASS] ok\n  [FAIL] bad\n"


def test_write_relative_path_goes_to_export_dir(tmp_path):
    manager = ExportManager(str(tmp_path / "exports"))
    path = manager.write("hello\n", "out.txt")
    assert path == str(tmp_path / "exports" / "out.txt")
    assert (tmp_path / "exports" / "out.txt").read_text() == "hello\n"


def test_write_nested_path(tmp_path):
    manager = ExportManager(str(tmp_path / "exports"))
    target = tmp_path / "elsewhere" / "table.tsv"
    assert manager.write("x", str(target)) == str(target)
    assert target.read_text() == "x"
