import json

import pytest

from commands.verify_commands import _skipped
from poptsack import PopTsackRunner


@pytest.fixture
def run(config_file, monkeypatch, capsys):
    for var in ("POPTSACK_CACHE_DIR", "POPTSACK_JOBS", "POPTSACK_BUDGET_ORDER"):
        monkeypatch.delenv(var, raising=False)

    def _run(*argv):
        code = PopTsackRunner(config_path=config_file).run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run


def test_table_tsv(run):
    code, out, _ = run("table", "A", "3", "--format", "tsv")
    assert code == 0
    assert out == "depth\tcount\n0\t1\n1\t13\n2\t9\n3\t1\ninf\t0\n"


def test_table_flags_and_verify(run):
    code, _, err = run("table", "--type", "B", "--rank", "2", "--verify")
    assert code == 0
    assert "[PASS]" in err


def test_table_to_file(run, tmp_path):
    target = tmp_path / "a2.json"
    code, out, err = run("table", "A", "2", "--format", "json", "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["counts"] == [1, 4, 1]
    assert "[OK] Wrote" in err


@pytest.mark.parametrize("argv", [
    ("table", "A"),
    ("table", "X", "3"),
    ("table", "A", "3", "--format", "dot"),
    ("table", "A", "3", "--format", "yaml"),
    ("frobnicate",),
])
def test_usage_errors(run, argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_tree(run):
    code, out, _ = run("tree", "A", "2")
    assert code == 0
    assert out.startswith('digraph "Pop_T A2" {')


def test_sif(run):
    code, out, _ = run("sif", "A", "3", "--verify")
    assert code == 0
    assert out == "A3\tSIF\t7\n"


def test_orbit_json(run):
    code, out, _ = run("orbit", "A", "3", "c^-1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["size"] == 4
    assert payload["terminal"] == "reaches_identity"
    assert payload["trajectory"][-1] == "e"


def test_orbit_in_periodic_set(run):
    code, out, _ = run("orbit", "F", "4", "--in", "O5", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["set_size"] == 12
    assert payload["single_cycle"] is True
    assert payload["cycle_length"] == 12


def test_orbit_rejects_exponent_sharing_a_factor_with_h(run):
    code, _, err = run("orbit", "F", "4", "--in", "O2")
    assert code == 2
    assert "coprime" in err


def test_orbit_needs_an_element(run):
    code, _, _ = run("orbit", "A", "3")
    assert code == 2


def test_normal_form(run):
    code, out, _ = run("normal-form", "A", "5", "(135642)")
    assert code == 0
    assert out == "(135642) = (246)·(12346)·(123456)\n"


def test_partition_needs_a_classical_type(run):
    code, _, _ = run("partition", "H", "3", "c")
    assert code == 2


def test_partition_type_a(run):
    code, out, _ = run("partition", "A", "3", "c")
    assert code == 0
    assert "A4 circle: 1 2 3 4" in out


def test_blocks(run):
    code, out, _ = run("blocks", "A", "3", "(12)(34)")
    assert code == 0
    assert out.count("block c =") == 2


def test_conjecture_d(run):
    code, out, _ = run("conjecture", "D", "--max-rank", "5")
    assert code == 0
    assert "[MATCH]" in out
    assert "[MISMATCH]" in out


def test_conjecture_a_json(run):
    code, out, _ = run("conjecture", "A", "--max-rank", "4", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [row["status"] for row in rows] == ["MATCH"] * 3
    assert all(row["expected"] for row in rows)


def test_conjecture_fails_when_an_expected_formula_misses(run, monkeypatch):
    monkeypatch.setattr("commands.verify_commands.conjecture_a", lambda n: 0)
    code, out, err = run("conjecture", "A", "--max-rank", "3")
    assert code == 1
    assert "[MISMATCH]" in out
    assert "[ERROR] A2" in err


def test_quick_skip_names_the_flag(session):
    ctx = session.context("E", 6)
    passed, message = _skipped(ctx, "--quick")
    assert passed
    assert "--quick" in message
    assert "budget" not in message
    assert "budget" in _skipped(ctx)[1]


def test_verify_folding_quick(run):
    code, out, _ = run("verify", "folding", "--quick")
    assert code == 0
    assert "[FAIL]" not in out


@pytest.mark.slow
def test_verify_all(run):
    code, out, _ = run("verify", "all")
    assert code == 0
    assert "[FAIL]" not in out
