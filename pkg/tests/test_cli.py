import io
import json
import math

import numpy as np
import pytest

from chainforge.cli import main
from chainforge import ChainCouplings, generate_cosine, generate_linear, solve


@pytest.fixture
def run(capsys, monkeypatch):
    def _run(*argv, stdin=None):
        if stdin is not None:
            monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return _run


class TestSpectrumCommand:
    def test_linear_n5(self, run):
        code, out, _ = run("spectrum", "--family", "linear", "--n", "5", "--a", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["values"] == [-2, -1, 0, 1, 2]
        assert "meta" in payload

    def test_no_meta(self, run):
        code, out, _ = run("spectrum", "--family", "cosine", "--n", "4", "--no-meta")
        assert code == 0
        assert "meta" not in json.loads(out)

    def test_shift(self, run):
        code, out, _ = run(
            "spectrum", "--family", "linear", "--n", "31", "--a", "7", "--shift", "6", "--no-meta"
        )
        values = json.loads(out)["values"]
        assert 1.0 in values and -1.0 in values

    def test_even_a_is_validation_error(self, run):
        code, _, err = run("spectrum", "--family", "linear", "--n", "5", "--a", "2")
        assert code == 1
        assert "odd" in err

    def test_linear_without_a(self, run):
        code, _, err = run("spectrum", "--family", "linear", "--n", "5")
        assert code == 1


class TestPipelines:
    def test_spectrum_solve_evolve_pipeline(self, run, tmp_path):
        spec_path = tmp_path / "s.json"
        chain_path = tmp_path / "c.json"
        code, out, _ = run(
            "spectrum", "--family", "linear", "--n", "5", "--a", "1", "-o", str(spec_path)
        )
        assert code == 0
        code, out, _ = run("solve", "--spectrum", str(spec_path), "-o", str(chain_path))
        assert code == 0
        chain = json.loads(chain_path.read_text())
        np.testing.assert_allclose(
            chain["b"], [1.0, math.sqrt(6) / 2, math.sqrt(6) / 2, 1.0], rtol=1e-12
        )
        code, out, _ = run(
            "evolve", "--chain", str(chain_path), "--tmax", repr(math.pi), "--points", "101"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t,f"
        assert len(lines) == 102
        last_t, last_f = (float(x) for x in lines[-1].split(","))
        assert last_t == pytest.approx(math.pi)
        assert last_f == pytest.approx(1.0, abs=1e-9)

    def test_solve_reads_stdin(self, run):
        spectrum = json.dumps({"values": [-1.0, 1.0], "family": "custom"})
        code, out, _ = run("solve", "--no-meta", stdin=spectrum)
        assert code == 0
        chain = json.loads(out)
        assert chain["b"] == [1.0]

    def test_emitted_json_is_reaccepted(self, run, tmp_path):
        # pipeline closure: output with meta still parses as input
        spec_path = tmp_path / "s.json"
        run("spectrum", "--family", "inverted_quadratic", "--n", "5", "-o", str(spec_path))
        code, out, _ = run("solve", "--spectrum", str(spec_path), "--no-meta")
        assert code == 0
        json.loads(out)

    def test_solve_csv_export(self, run, tmp_path):
        spec_path = tmp_path / "s.json"
        csv_path = tmp_path / "c.csv"
        run("spectrum", "--family", "linear", "--n", "4", "--a", "3", "-o", str(spec_path))
        code, _, _ = run("solve", "--spectrum", str(spec_path), "--csv", str(csv_path), "--no-meta")
        assert code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "index,a,b"
        assert len(lines) == 5


class TestDisorderCommand:
    def chain_file(self, tmp_path):
        path = tmp_path / "chain.json"
        path.write_text(solve(generate_linear(7, 1)).to_json())
        return path

    def test_report_and_summary_line(self, run, tmp_path):
        chain = self.chain_file(tmp_path)
        report_path = tmp_path / "report.json"
        code, out, _ = run(
            "disorder", "--chain", str(chain), "--r", "0.1", "--samples", "40",
            "--seed", "9", "--tau", repr(math.pi), "-o", str(report_path), "--no-meta",
        )
        assert code == 0
        summary = json.loads(out)  # single scripting line on stdout
        assert summary["samples"] == 40
        report = json.loads(report_path.read_text())
        assert len(report["overlaps"]) == 40
        assert report["config"]["seed"] == 9
        assert report["fit"] is not None

    def test_deterministic_output(self, run, tmp_path):
        chain = self.chain_file(tmp_path)
        outs = []
        for name in ("a.json", "b.json"):
            path = tmp_path / name
            code, _, _ = run(
                "disorder", "--chain", str(chain), "--r", "0.05", "--samples", "25",
                "--seed", "4", "--tau", repr(math.pi), "-o", str(path), "--no-meta",
            )
            assert code == 0
            outs.append(path.read_text())
        assert outs[0] == outs[1]

    def test_tau_defaults_to_pi_for_pst_chain(self, run, tmp_path):
        chain = self.chain_file(tmp_path)
        code, out, _ = run(
            "disorder", "--chain", str(chain), "--r", "0.0", "--samples", "10", "--no-meta"
        )
        assert code == 0
        report = json.loads(out)
        assert report["config"]["tau"] == pytest.approx(math.pi)
        assert report["mean"] == pytest.approx(1.0, abs=1e-8)

    def test_tau_required_for_non_pst_chain(self, run, tmp_path):
        path = tmp_path / "uniform.json"
        path.write_text(solve(generate_cosine(6)).to_json())
        code, _, err = run("disorder", "--chain", str(path), "--r", "0.05", "--samples", "10")
        assert code == 1
        assert "--tau" in err

    def test_csv_outputs(self, run, tmp_path):
        chain = self.chain_file(tmp_path)
        hist = tmp_path / "h.csv"
        raw = tmp_path / "f.csv"
        code, _, _ = run(
            "disorder", "--chain", str(chain), "--r", "0.1", "--samples", "30", "--tau",
            repr(math.pi), "-o", str(tmp_path / "r.json"), "--hist-csv", str(hist),
            "--overlaps-csv", str(raw), "--no-meta",
        )
        assert code == 0
        assert hist.read_text().startswith("bin_left,bin_right,count")
        assert len(raw.read_text().strip().splitlines()) == 31


class TestEffectiveCommand:
    def test_reports_model(self, run, tmp_path):
        b = np.full(4, 1.0)
        b[0] = b[-1] = 0.01
        path = tmp_path / "chain.json"
        path.write_text(ChainCouplings(np.zeros(5), b).to_json())
        code, out, _ = run("effective", "--chain", str(path), "--no-meta")
        assert code == 0
        model = json.loads(out)
        assert model["parity"] == "odd_N"
        assert model["predicted_tau"] == pytest.approx(math.pi / model["nu"])
        assert model["detunings"] == [0.0, 0.0]


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self, run):
        code, _, err = run("spectrum", "--family", "linear", "--n", "5", "--a", "1", "--bogus")
        assert code == 64

    def test_unknown_subcommand(self, run):
        code, _, _ = run("transmogrify")
        assert code == 64

    def test_missing_file_is_validation_error(self, run):
        code, _, err = run("solve", "--spectrum", "/nonexistent/s.json")
        assert code == 1

    def test_numerical_failure_exit_code(self, run, tmp_path):
        # clustered spectrum overflows the solver weights
        values = np.concatenate([[-1.0], 1e-11 * np.arange(51), [1.0]])
        path = tmp_path / "cluster.json"
        path.write_text(json.dumps({"values": values.tolist(), "family": "custom"}))
        code, _, err = run("solve", "--spectrum", str(path))
        assert code == 2
        assert "numerical" in err

    def test_help_exits_zero(self, run):
        code, out, _ = run("--help")
        assert code == 0
