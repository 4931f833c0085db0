import json
import subprocess
import sys

import pytest

from pidlattice import cli
from pidlattice.distribution import load
from pidlattice.pid import decompose


@pytest.fixture
def exdir(tmp_path):
    assert cli.main(["examples", "--out", str(tmp_path)]) == 0
    return tmp_path


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_examples_written(exdir):
    names = sorted(p.name for p in exdir.iterdir())
    assert names == ["copies2.json", "copy3.json", "fig4a.json", "parity3.json", "xor.json"]
    for p in exdir.iterdir():
        assert json.loads(p.read_text())["comment"]
    xor = json.loads((exdir / "xor.json").read_text())
    assert len(xor["probs"]) == 4 and {e["p"] for e in xor["probs"]} == {0.25}
    copy3 = json.loads((exdir / "copy3.json").read_text())
    assert len(copy3["probs"]) == 2
    assert all(len(set(e["outcome"])) == 1 and len(e["outcome"]) == 4 for e in copy3["probs"])


EXPECTED_ATOMS = {
    "fig4a": {"{1}{2}": 0.584963, "{1}": 0.333333, "{2}": 0.333333, "{12}": 0.333333},
    "xor": {"{12}": 1.0},
    "copies2": {"{1}{2}": 1.0},
    "parity3": {"{123}": 1.0},
    "copy3": {"{1}{2}{3}": 1.0},
}


@pytest.mark.parametrize("name", sorted(EXPECTED_ATOMS))
def test_bundled_examples_round_trip(exdir, name):
    r = decompose(load(exdir / f"{name}.json"))
    for label, value in r.to_json_dict(decimals=12)["atoms"].items():
        assert value == pytest.approx(EXPECTED_ATOMS[name].get(label, 0.0), abs=1e-6)


def test_decompose_table(exdir, capsys):
    code, out, _ = run(capsys, "decompose", str(exdir / "fig4a.json"))
    assert code == 0
    assert "{1}{2} 0.584963" in out
    assert "{12} 0.333333" in out


def test_decompose_json(exdir, capsys):
    code, out, _ = run(capsys, "decompose", str(exdir / "xor.json"), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["atoms"]["{12}"] == 1.0
    assert list(doc) == ["target", "total_bits", "atoms", "imin"]


def test_decompose_parity_table(exdir, capsys):
    code, out, _ = run(capsys, "decompose", str(exdir / "parity3.json"))
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert "{123} 1.000000 1.000000" in rows
    assert sum(1 for r in rows if r.split()[1] == "0.000000") == 17


def test_decompose_prune_and_nats(exdir, capsys):
    code, out, _ = run(capsys, "decompose", str(exdir / "xor.json"), "--prune", "--nats")
    assert code == 0
    assert "# total_nats: 0.693147" in out
    assert "skipped: 1" in out


def test_decompose_target_option(exdir, capsys):
    code, out, _ = run(capsys, "decompose", str(exdir / "fig4a.json"), "--target", "R1", "--format", "json")
    doc = json.loads(out)
    assert doc["target"] == "R1" and doc["atoms"]["{12}"] == 0.0
    code, _, err = run(capsys, "decompose", str(exdir / "fig4a.json"), "--target", "Q")
    assert code == 2 and "Q" in err


def test_lattice_dot(capsys):
    code, out, _ = run(capsys, "lattice", "--predictors", "2")
    assert code == 0 and out.startswith("digraph")
    assert out.count("label=") == 4 and out.count("->") == 4


def test_lattice_annotated(exdir, capsys):
    code, out, _ = run(capsys, "lattice", "--predictors", "3", "--annotate", str(exdir / "parity3.json"))
    assert code == 0
    assert out.count("label=") == 18
    assert "Π=1.000000" in out


def test_lattice_json(capsys):
    code, out, _ = run(capsys, "lattice", "--predictors", "3", "--format", "json")
    doc = json.loads(out)
    assert len(doc["nodes"]) == 18 and len(doc["covers"]) == 30


def test_lattice_cap(capsys):
    code, _, err = run(capsys, "lattice", "--predictors", "6")
    assert code == 2 and "between 1 and 5" in err


@pytest.mark.parametrize(
    "name,expected", [("fig4a", "-0.251629"), ("parity3", "+1.000000"), ("copy3", "+1.000000")]
)
def test_interaction_table(exdir, capsys, name, expected):
    code, out, _ = run(capsys, "interaction", str(exdir / f"{name}.json"))
    assert code == 0
    assert f"interaction_bits: {expected}" in out


def test_interaction_json(exdir, capsys):
    code, out, _ = run(capsys, "interaction", str(exdir / "parity3.json"), "--format", "json")
    doc = json.loads(out)
    assert doc["interaction_bits"] == 1.0
    assert doc["signature"]["{12}{13}{23}"] == -2
    assert doc["signed_atoms"]["{123}"] == 1.0


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "decompose", str(bad))[0] == 2
    assert run(capsys, "decompose", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "decompose")[0] == 2
    unnorm = tmp_path / "unnorm.json"
    unnorm.write_text(json.dumps({
        "variables": ["S", "R1"], "states": [[0, 1], [0, 1]],
        "probs": [{"outcome": [0, 0], "p": 0.7}, {"outcome": [1, 1], "p": 0.7}],
    }))
    assert run(capsys, "decompose", str(unnorm))[0] == 3
    assert run(capsys, "decompose", str(unnorm), "--format", "dot")[0] == 2


def test_internal_consistency_exit_code(exdir, capsys, monkeypatch):
    from pidlattice.pid import ConsistencyError

    def broken(d):
        raise ConsistencyError("negative atom")

    monkeypatch.setattr(cli, "decompose", broken)
    code, _, err = run(capsys, "decompose", str(exdir / "xor.json"))
    assert code == 4 and "consistency" in err


def test_examples_io_failure(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run(capsys, "examples", "--out", str(blocker / "sub"))[0] == 5


def test_json_output_is_stable(exdir, capsys):
    _, first, _ = run(capsys, "decompose", str(exdir / "parity3.json"), "--format", "json")
    _, second, _ = run(capsys, "decompose", str(exdir / "parity3.json"), "--format", "json")
    assert first == second


def test_console_entry_point(exdir):
    proc = subprocess.run(
        [sys.executable, "-m", "pidlattice", "decompose", str(exdir / "fig4a.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "{12} 0.333333" in proc.stdout
