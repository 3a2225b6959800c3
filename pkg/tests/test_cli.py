import io
import json

import pytest

from kdcoinc import dft, dumps_matrix, loads_matrix
from kdcoinc.cli import main


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin=None: run(argv, stdin, monkeypatch, capsys)


def test_gen_pipes_into_coinc(cli):
    code, text, _ = cli(["gen", "dft", "--d", "7"])
    assert code == 0
    code, out, _ = cli(["coinc", "-"], stdin=text)
    assert code == 0 and out.splitlines()[0] == "COINC: true"


def test_gen_round_trip_bit_exact(cli):
    _, text, _ = cli(["gen", "tao"])
    assert dumps_matrix(loads_matrix(text)) + "\n" == text


def test_gen_mub4_phase(cli):
    code, text, _ = cli(["gen", "mub4", "--s", "0,1"])
    assert code == 0 and loads_matrix(text).U[2, 2] == 0.5j


def test_tao_diagram_csv(cli, tmp_path):
    _, text, _ = cli(["gen", "tao"])
    out = tmp_path / "out.csv"
    code, _, _ = cli(["diagram", "-", "--csv", str(out)], stdin=text)
    lines = out.read_text().strip().split("\n")
    assert code == 0 and len(lines) == 37 and lines[0] == "n_a,n_b,member,max_dim"


def test_diagram_oracle_json(cli):
    _, text, _ = cli(["gen", "spin1"])
    code, out, _ = cli(["diagram", "-", "--oracle", "--samples", "5", "--seed", "2", "--json"], stdin=text)
    doc = json.loads(out)
    assert code == 0 and doc["oracle"]["agrees"] and doc["n_min"] == 3


def test_hierarchy_json(cli):
    _, text, _ = cli(["gen", "mub4"])
    code, out, _ = cli(["--json", "hierarchy", "-"], stdin=text)
    assert code == 0 and json.loads(out)["first_commuting_pair"] == {"S": [1, 2], "T": [1, 2]}


def test_kd_json(cli, tmp_path):
    m = tmp_path / "m.json"
    s = tmp_path / "s.json"
    cli(["gen", "spin1", "--out", str(m)])
    s.write_text(json.dumps({"d": 3, "u": [[1, 0], [1, 0], [1, 0]]}))
    code, out, _ = cli(["kd", str(m), str(s), "--normalize", "--json"])
    doc = json.loads(out)
    assert code == 0
    assert doc["kd_classical"] is False
    assert doc["witness"]["outcome"] == "Nonclassical"
    assert doc["support"]["n_ab"] == 5


def test_kd_unnormalized_state_is_math_error(cli, tmp_path):
    m = tmp_path / "m.json"
    s = tmp_path / "s.json"
    cli(["gen", "spin1", "--out", str(m)])
    s.write_text(json.dumps({"d": 3, "u": [[1, 0], [1, 0], [1, 0]]}))
    code, _, err = cli(["kd", str(m), str(s)])
    assert code == 3 and "normalized" in err


def test_perturb(cli):
    text = dumps_matrix(dft(4))
    code, out, _ = cli(["perturb", "-", "--eps", "0.05", "--json"], stdin=text)
    doc = json.loads(out)
    assert code == 0 and doc["coinc"] and doc["trace"]["rounds"]


def test_perturb_target_mub(cli):
    code, out, _ = cli(["perturb", "-", "--target-mub", "--delta", "0.05"], stdin=dumps_matrix(dft(4)))
    doc = json.loads(out)
    assert code == 0 and doc["coinc"] and doc["m_ab"] >= 0.45


def test_json_output_is_byte_stable(cli):
    text = dumps_matrix(dft(6))
    outs = {cli(["coinc", "-", "--json"], stdin=text)[1] for _ in range(2)}
    outs |= {cli(["coinc", "-", "--json", "--threads", "1"], stdin=text)[1]}
    assert len(outs) == 1


@pytest.mark.parametrize("payload", ["{bad", "[1, 2]", '{"d": 2, "entries": [[1, 0]]}',
                                     '{"d": 2, "entries": [1, 0, 0, 1]}'])
def test_malformed_json_exit_2(cli, payload):
    code, _, err = cli(["coinc", "-"], stdin=payload)
    assert code == 2 and "error" in err


def test_non_unitary_exit_3(cli):
    code, _, _ = cli(["coinc", "-"], stdin='{"d": 2, "entries": [[1,0],[1,0],[0,0],[1,0]]}')
    assert code == 3


def test_size_cap_exit_3(cli):
    code, _, err = cli(["coinc", "-"], stdin=dumps_matrix(dft(13)))
    assert code == 3 and "SizeCapError" in err


def test_usage_errors_exit_2(cli):
    assert cli(["frobnicate"])[0] == 2
    assert cli(["gen", "dft"])[0] == 2
    assert cli(["coinc", "/nonexistent.json"])[0] == 2
    assert cli(["--tol-zero", "-1", "gen", "tao"])[0] == 2
    assert cli(["perturb", "-"], stdin=dumps_matrix(dft(4)))[0] == 2


def test_verify_quick(cli):
    code, out, _ = cli(["verify", "--quick"])
    assert code == 0
    assert out.count("[PASS]") == 11
