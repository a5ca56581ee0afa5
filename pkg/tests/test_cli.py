"""End-to-end checks of the command-line interface."""

import json
import math

import pytest

from quditphase.cli import main

HTH = {
    "d": 2,
    "n": 1,
    "input": {"kind": "computational", "index": 0},
    "gates": [
        {"kind": "FOURIER"},
        {"matrix": [[1, 0], [0, [0.7071067811865476, 0.7071067811865476]]]},
        {"kind": "FOURIER"},
    ],
    "measurement": {"kind": "computational", "indices": [0], "outcomes": [0]},
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_basis_json(capsys):
    code, out = run(capsys, "basis", "--d", "2", "--l", "1", "--m", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == 1
    assert doc["trace"] == 0.0
    # O_{1,1} at d = 2 is -Y
    assert abs(doc["matrix"][0][1][1] - 1.0) < 1e-12


def test_measure_t_state(capsys):
    code, out = run(capsys, "measure", "--d", "2", "--state", "T")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["negativity"] - (1 + math.sqrt(2)) / 2) < 1e-12
    assert abs(doc["renyi"]["2.0"] - math.log(4 / 3)) < 1e-12
    assert doc["hyperpolyhedral"] is False
    assert "wigner_negativity" not in doc  # even d


def test_measure_includes_wigner_for_odd_d(capsys):
    code, out = run(capsys, "measure", "--d", "3", "--state", "plus")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["wigner_negativity"] - 1.0) < 1e-9


def test_measure_csv(capsys):
    code, out = run(capsys, "measure", "--d", "2", "--state", "T", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "quantity,value"
    assert lines[1].startswith("negativity,1.207106781")


def test_wigner_rejects_even_d(capsys):
    code, out = run(capsys, "wigner", "--d", "2", "--state", "T")
    doc = json.loads(out)
    assert code == 2
    assert doc["error"]["type"] == "validation"
    assert "odd" in doc["error"]["message"]


def test_wigner_odd_d(capsys):
    code, out = run(capsys, "wigner", "--d", "3", "--state", "plus")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["negativity"] - 1.0) < 1e-9
    assert len(doc["values"]) == 3


def test_char_full_domain(capsys):
    code, out = run(capsys, "char", "--d", "2", "--state", "T", "--domain", "full")
    doc = json.loads(out)
    assert code == 0
    assert doc["domain"] == "FULL"
    assert len(doc["values"]) == 4


def test_enumerate_counts(capsys):
    for d, count in ((2, 6), (3, 12)):
        code, out = run(capsys, "enumerate-stabilizers", "--d", str(d))
        doc = json.loads(out)
        assert code == 0
        assert doc["count"] == count
        assert all("|" in g["lines"] for g in doc["groups"])


def test_gkp_check_single_cell(capsys):
    code, out = run(
        capsys, "gkp-check", "--d", "2", "--n", "1", "--p", "1", "2", "--samples", "2"
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["max_residual"] < 1e-9
    row = doc["results"][0]
    for key in ("d", "n", "p", "lhs", "rhs", "residual"):
        assert key in row
    assert abs(row["lhs"] - row["rhs"]) < 1e-9


def test_gkp_check_csv(capsys):
    code, out = run(capsys, "gkp-check", "--d", "2", "--p", "1", "--samples", "1", "--csv")
    assert code == 0
    assert out.splitlines()[0].startswith("d,n,p,")


def test_simulate_circuit(tmp_path, capsys):
    path = tmp_path / "hth.json"
    path.write_text(json.dumps(HTH))
    code, out = run(
        capsys, "simulate", "--circuit", str(path), "--epsilon", "0.3", "--seed", "1"
    )
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["estimate"] - math.cos(math.pi / 8) ** 2) < 0.3
    assert abs(doc["forward_norm"] - math.sqrt(2)) < 1e-12
    assert doc["frame"] == "o"


def test_simulate_deterministic_bytes(tmp_path, capsys):
    path = tmp_path / "hth.json"
    path.write_text(json.dumps(HTH))
    argv = ["simulate", "--circuit", str(path), "--epsilon", "0.3", "--seed", "6"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_simulate_char_frame(tmp_path, capsys):
    path = tmp_path / "hth.json"
    path.write_text(json.dumps(HTH))
    code, out = run(
        capsys,
        "simulate", "--circuit", str(path),
        "--epsilon", "0.3", "--seed", "1", "--frame", "char",
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["frame"] == "char"
    assert abs(doc["estimate"] - math.cos(math.pi / 8) ** 2) < 0.3


def test_simulate_rejects_bad_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, out = run(capsys, "simulate", "--circuit", str(path))
    assert code == 2
    assert json.loads(out)["error"]["type"] == "validation"


def test_simulate_rejects_missing_file(capsys):
    code, out = run(capsys, "simulate", "--circuit", "/nonexistent/x.json")
    assert code == 2


def test_gkp_sim_emits_json_lines(tmp_path, capsys):
    path = tmp_path / "sim.json"
    path.write_text(
        json.dumps(
            {
                "d": 2,
                "n": 1,
                "input": {"kind": "plus"},
                "gate": {"kind": "FOURIER"},
                "samples": 5,
                "seed": 11,
            }
        )
    )
    code, out = run(capsys, "gkp-sim", "--circuit", str(path))
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert len(lines) == 5
    for doc in lines:
        assert doc["schema_version"] == 1
        assert doc["sign"] in (-1, 1)
        assert doc["lattice_index"] is not None
        assert len(doc["x"]) == 1


def test_gkp_sim_generic_s(tmp_path, capsys):
    path = tmp_path / "sim.json"
    path.write_text(
        json.dumps(
            {
                "d": 2,
                "n": 1,
                "input": {"kind": "computational", "index": 0},
                "S": [[1.0, 0.0], [0.5, 1.0]],
                "displacement": [0.0, 0.0],
                "samples": 2,
                "seed": 5,
            }
        )
    )
    code, out = run(capsys, "gkp-sim", "--circuit", str(path))
    assert code == 0
    for line in out.strip().splitlines():
        assert json.loads(line)["lattice_index"] is None


def test_gkp_sim_rejects_non_symplectic(tmp_path, capsys):
    path = tmp_path / "sim.json"
    path.write_text(
        json.dumps(
            {
                "d": 2,
                "input": {"kind": "plus"},
                "S": [[1.0, 0.0], [0.0, 2.0]],
                "samples": 1,
                "seed": 0,
            }
        )
    )
    code, out = run(capsys, "gkp-sim", "--circuit", str(path))
    assert code == 2
    assert "symplectic" in json.loads(out)["error"]["message"]


def test_output_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, _ = run(capsys, "measure", "--d", "2", "--state", "T", "--output", str(target))
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["schema_version"] == 1


def test_unknown_state_is_validation_error(capsys):
    code, out = run(capsys, "measure", "--d", "2", "--state", "bogus")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "validation"


def test_stabilizer_input_from_generator_file(tmp_path, capsys):
    gen = tmp_path / "gens.txt"
    gen.write_text("# plus state\n1|0|0\n")
    code, out = run(capsys, "measure", "--d", "2", "--generators", str(gen))
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["negativity"] - 1.0) < 1e-12
    assert doc["hyperpolyhedral"] is True
