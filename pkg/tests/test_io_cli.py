import json
import math
import subprocess
import sys

import numpy as np
import pytest

from boxlab import box_model as bm
from boxlab import cli, io
from boxlab import operator_algebra as oa


def run(*argv):
    return subprocess.run([sys.executable, "-m", "boxlab", *argv],
                          capture_output=True, text=True)


class TestDumps:
    def test_sorted_keys_and_17_digits(self):
        s = io.dumps({"b": 0.1, "a": 1})
        assert s.index('"a"') < s.index('"b"')
        assert "0.10000000000000001" in s

    def test_round_trip_floats(self):
        vals = [1 / 3, 2 * math.sqrt(2), 1e-300, -0.0, 4.0]
        assert json.loads(io.dumps(vals)) == vals

    def test_numpy_and_special_values(self):
        out = json.loads(io.dumps({"x": np.float64(0.5), "n": np.int8(3), "b": np.bool_(True),
                                   "nan": float("nan"), "arr": np.eye(2)}))
        assert out == {"x": 0.5, "n": 3, "b": True, "nan": "NaN", "arr": [[1.0, 0.0], [0.0, 1.0]]}

    def test_compact(self):
        assert io.dumps({"a": [1, 2]}, indent=None) == '{"a": [1, 2]}'

    def test_unserializable(self):
        with pytest.raises(TypeError):
            io.dumps({"a": object()})


class TestBoxJson:
    def test_round_trip(self, tmp_path):
        box = bm.mix([bm.pr_box(), bm.uniform_box()], [0.3, 0.7])
        path = tmp_path / "b.json"
        io.write_box(box, path)
        back = io.read_box(path)
        assert np.array_equal(back.p, box.p)

    def test_bad_shape(self):
        with pytest.raises(bm.BoxError):
            io.box_from_json({"p": [0.25] * 16})

    def test_missing_key(self):
        with pytest.raises(bm.BoxError):
            io.box_from_json({"q": 1})

    def test_bundle_round_trip(self):
        b = io.default_bundle()
        back = io.bundle_from_json(json.loads(io.dumps(io.bundle_to_json(b))))
        for k in io.OBSERVABLE_KEYS + ("state",):
            assert np.allclose(back[k], b[k])

    def test_bundle_missing(self):
        with pytest.raises(ValueError):
            io.bundle_from_json({"A0": [[1]]})


class TestCli:
    @pytest.mark.parametrize("argv, code", [
        (["box", "chsh", "--pr"], 0),
        (["box", "check", "--pr"], 0),
        (["box", "check", "--signaling"], 2),
        (["box", "check", "--table", ",".join(["0.3"] * 16)], 2),
        (["box", "new", "--table", "1,2"], 1),
        (["op", "landau"], 0),
        (["op", "tsirelson"], 0),
        (["op", "born"], 0),
        (["opt", "classical"], 0),
        (["opt", "ns"], 0),
        (["toy", "report"], 0),
        (["toy", "feasibility", "--targets", "1,1,1,-1"], 2),
        (["toy", "feasibility", "--targets", "0.25,0.5,0.5,1"], 0),
        (["toy", "feasibility", "--targets", "a,b"], 1),
        (["logic", "demo"], 0),
        (["logic", "eval", "--prop", "and(A:0=0, A:1=0)"], 0),
        (["logic", "eval", "--prop", "and(A:0=0"], 1),
        (["nonsense"], 1),
        ([], 1),
    ])
    def test_exit_codes(self, argv, code):
        result, _ = cli.dispatch(argv)
        assert result.exit_code == code

    def test_chsh_payload(self, capsys):
        assert cli.main(["box", "chsh", "--pr"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == 4.0 and out["status"] == "ok"

    def test_check_payload(self, capsys):
        assert cli.main(["box", "check", "--signaling"]) == 2
        out = json.loads(capsys.readouterr().out)
        assert out["nonsignaling"] is False
        assert out["sequential_symmetry_ok"] is False
        assert len(out["violations"]) == 4

    def test_box_file_round_trip(self, tmp_path, capsys):
        path = tmp_path / "box.json"
        assert cli.main(["box", "new", "--uniform", "--out", str(path)]) == 0
        capsys.readouterr()
        assert cli.main(["box", "chsh", "--in", str(path)]) == 0
        assert json.loads(capsys.readouterr().out)["value"] == 0.0

    def test_text_and_json_modes(self, capsys):
        cli.main(["toy", "report"])
        assert "verdict: Infeasible" in capsys.readouterr().out
        cli.main(["toy", "report", "--json"])
        assert json.loads(capsys.readouterr().out)["certificate"]["verdict"] == "Infeasible"

    def test_landau_on_file(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        bundle = {k: oa.random_involution(3, rng) for k in io.OBSERVABLE_KEYS}
        path = tmp_path / "ops.json"
        path.write_text(io.dumps(io.bundle_to_json(bundle)))
        assert cli.main(["op", "landau", "--file", str(path)]) == 0
        assert json.loads(capsys.readouterr().out)["identity_residual"] <= 1e-10

    def test_tsirelson_violation_needs_bad_input(self, tmp_path, capsys):
        bundle = {k: 2 * oa.PAULI_Z for k in io.OBSERVABLE_KEYS}
        bundle["state"] = oa.PHI_PLUS
        path = tmp_path / "bad.json"
        path.write_text(io.dumps(io.bundle_to_json(bundle)))
        # unbounded spectra are an input error, not a bound violation
        assert cli.main(["op", "tsirelson", "--file", str(path)]) == 1

    def test_game_round_trip(self, tmp_path, capsys):
        path = tmp_path / "t.jsonl"
        assert cli.main(["game", "play", "--pr", "--rounds", "2000", "--seed", "3",
                         "--out", str(path)]) == 0
        capsys.readouterr()
        assert cli.main(["game", "analyze", "--in", str(path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["correlators"]["chsh"] == 4.0
        assert out["signaling"]["reject"] is False

    def test_game_analyze_signaling(self, tmp_path, capsys):
        path = tmp_path / "s.jsonl"
        cli.main(["game", "play", "--signaling", "--rounds", "2000", "--out", str(path)])
        capsys.readouterr()
        assert cli.main(["game", "analyze", "--in", str(path), "--tests", "signaling"]) == 2

    def test_unknown_analysis(self, tmp_path, capsys):
        path = tmp_path / "t.jsonl"
        cli.main(["game", "play", "--pr", "--rounds", "10", "--out", str(path)])
        assert cli.main(["game", "analyze", "--in", str(path), "--tests", "bogus"]) == 1

    @pytest.mark.parametrize("argv", [
        ["opt", "quantum", "--restarts", "2"],
        ["game", "play", "--pr", "--rounds", "500"],
        ["op", "born"],
    ])
    def test_byte_identical_repeats(self, argv):
        a, b = run(*argv), run(*argv)
        assert a.returncode == 0
        assert a.stdout == b.stdout and a.stdout

    def test_seed_changes_output(self):
        a = run("game", "play", "--uniform", "--rounds", "500", "--seed", "1")
        b = run("game", "play", "--uniform", "--rounds", "500", "--seed", "2")
        assert a.stdout != b.stdout

    def test_transcript_files_identical(self, tmp_path):
        paths = [tmp_path / f"{k}.jsonl" for k in range(2)]
        for p in paths:
            run("game", "play", "--pr", "--rounds", "300", "--seed", "5", "--out", str(p))
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_error_goes_to_stderr(self):
        r = run("box", "new", "--table", "1,2")
        assert r.returncode == 1 and r.stdout == "" and "16" in r.stderr
