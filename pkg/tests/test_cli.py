import json

import numpy as np
import pytest

from upb.basis import ProductBasis
from upb.cli import main
from upb.numerics import parse_matrix


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


class TestBounds:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "bounds", "4", "4")
        assert code == 0
        assert "f_N:    7" in out and "Exact 8" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "bounds", "2", "2", "3", "--json")
        data = json.loads(out)
        assert code == 0 and data["f_m"] == {"status": "Exact", "value": 6}

    def test_open_case(self, capsys):
        code, out, _ = run(capsys, "bounds", "3", "4", "4")
        assert code == 0 and "LowerBoundOnly 10" in out and "open case (3)" in out

    @pytest.mark.parametrize("argv", [["bounds", "1", "3"], ["bounds", "4"], ["bounds", "x"], ["nope"], []])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 64


class TestConstruct:
    def test_writes_verified_file(self, capsys, tmp_path):
        path = tmp_path / "a.json"
        code, _, err = run(capsys, "construct", "4", "6", "--seed", "1", "--out", str(path))
        assert code == 0 and "PASS" in err
        pb = ProductBasis.load(path)
        assert pb.n == 10 and pb.seed == 1

    def test_theorem2(self, capsys):
        code, out, _ = run(capsys, "construct", "2", "2", "9", "--seed", "1")
        assert code == 0 and json.loads(out)["size"] == 12

    def test_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "construct", "2", "3", "3", "8", "--seed", "4", "--out", str(a))
        run(capsys, "construct", "2", "3", "3", "8", "--seed", "4", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_output(self, capsys):
        _, out1, _ = run(capsys, "construct", "4", "8", "--seed", "1")
        _, out2, _ = run(capsys, "construct", "4", "8", "--seed", "2")
        assert out1 != out2

    def test_open_case_exit(self, capsys, tmp_path):
        path = tmp_path / "x.json"
        code, _, err = run(capsys, "construct", "2", "2", "7", "--out", str(path))
        assert code == 65 and "open case (1)" in err
        assert not path.exists()


class TestVerify:
    @pytest.fixture
    def upb_file(self, capsys, tmp_path):
        path = tmp_path / "upb.json"
        run(capsys, "construct", "4", "6", "--out", str(path))
        return path

    def test_round_trip(self, capsys, upb_file):
        code, out, _ = run(capsys, "verify", str(upb_file))
        assert code == 0 and "PASS (exact)" in out

    def test_sufficient(self, capsys, upb_file):
        code, out, _ = run(capsys, "verify", str(upb_file), "--sufficient", "--json")
        assert code == 0 and json.loads(out)["mode"] == "sufficient"

    def test_not_upb(self, capsys, upb_file, tmp_path):
        pb = ProductBasis.load(upb_file).without(0)
        path = tmp_path / "minus.json"
        pb.save(path)
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 1 and "witness" in out

    def test_budget_exhausted(self, capsys, upb_file):
        code, _, err = run(capsys, "verify", str(upb_file), "--exact", "--budget", "5")
        assert code == 2 and "inconclusive" in err

    def test_sufficient_inconclusive(self, capsys, tmp_path):
        e = np.eye(2)
        pb = ProductBasis((2, 2), [[e[0], e[0]], [e[1], e[1]]])
        path = tmp_path / "p.json"
        pb.save(path)
        code, _, _ = run(capsys, "verify", str(path), "--sufficient")
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "verify", str(tmp_path / "nope.json"))
        assert code == 64

    def test_exclusive_modes(self, capsys, upb_file):
        assert run(capsys, "verify", str(upb_file), "--exact", "--sufficient")[0] == 64


class TestGadget:
    def test_fourier_matrix_text(self, capsys):
        code, out, _ = run(capsys, "gadget", "u-fourier", "5")
        U = parse_matrix(out)
        assert code == 0 and U.shape == (5, 5)
        assert np.allclose(U.conj().T @ U, np.eye(5), atol=1e-12)

    def test_certify(self, capsys):
        code, out, _ = run(capsys, "gadget", "v", "5", "3", "2", "--certify")
        assert code == 0 and "PASS" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "gadget", "w", "1", "--json")
        data = json.loads(out)
        assert np.array(data["matrix"]).shape == (5, 8, 2)

    def test_arity(self, capsys):
        code, _, _ = run(capsys, "gadget", "v", "5", "3")
        assert code == 64

    def test_bad_domain(self, capsys):
        code, _, _ = run(capsys, "gadget", "u-fourier", "3")
        assert code == 64


class TestGraph:
    def test_dot(self, capsys):
        code, out, _ = run(capsys, "graph", "Y", "2", "--dot")
        assert code == 0 and out.startswith("graph {") and out.count("--") == 18

    def test_edge_list(self, capsys):
        code, out, _ = run(capsys, "graph", "C-layer", "6", "0", "2", "1")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 12 and lines[0] == "v0 w1"

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "graph", "D", "6", "0", "--dot")
        _, b, _ = run(capsys, "graph", "D", "6", "0", "--dot")
        assert a == b

    def test_bad_params(self, capsys):
        assert run(capsys, "graph", "D", "5", "1")[0] == 64
        assert run(capsys, "graph", "Y", "1", "2")[0] == 64


class TestFixtures:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "fixtures")
        assert code == 0
        assert out.count("PASS") == 3
        assert "4 10\n3 3 3 1 1 -1 -1 2 -2 0\n" in out

    def test_json(self, capsys):
        _, out, _ = run(capsys, "fixtures", "--json")
        data = json.loads(out)
        assert data["U_6_1"]["u10"] == pytest.approx(1.6445, abs=1e-3)
        assert all(data[k]["certificate"]["verdict"] == "pass" for k in ("W_5_3_2", "W_2", "U_6_1"))
