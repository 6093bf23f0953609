import json
import subprocess
import sys

import pytest

import scenagg as sa
from scenagg.cli import main
from scenagg.instances import read_instance


def run_cli(*argv):
    """Invoke main() in-process; returns (exit_code, stdout)."""
    import io
    from contextlib import redirect_stdout
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


@pytest.fixture
def example1_file(tmp_path):
    path = tmp_path / "e.inst"
    code, _ = run_cli("gen", "example1", "-o", str(path))
    assert code == 0
    return str(path)


class TestGen:
    def test_tight_file(self, tmp_path):
        path = tmp_path / "t.inst"
        code, _ = run_cli("gen", "tight", "--k", "4", "--ell", "2",
                          "-o", str(path))
        assert code == 0
        inst = read_instance(path)
        assert inst.structure.ground_size == 32
        assert inst.scenario_count == 16
        assert inst.structure.chain_lengths == (16, 16)

    def test_example1_matches_generator(self, example1_file):
        assert read_instance(example1_file) == sa.gen_example1()

    def test_layered_minimal_to_stdout(self):
        code, out = run_cli("gen", "layered", "--layers", "1", "--width", "1",
                            "--k", "1", "--seed", "7")
        assert code == 0
        assert out.startswith("scenagg instance v1")
        from scenagg.instances import parse_instance
        inst = parse_instance(out)
        assert inst.structure.ground_size == 2
        assert inst.scenario_count == 1


class TestSolve:
    def test_regret_exact(self, example1_file):
        code, out = run_cli("solve", example1_file, "--criterion", "regret",
                            "--method", "exact")
        assert code == 0
        assert "value:     1.0" in out

    def test_minmax_brute(self, example1_file):
        code, out = run_cli("solve", example1_file, "--criterion", "minmax",
                            "--method", "brute", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["value"] == 1.0
        assert report["exact"] is True

    def test_fptas(self, example1_file):
        code, out = run_cli("solve", example1_file, "--method", "fptas",
                            "--epsilon-tilde", "0.5", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["value"] <= 1.5 * 1.0 + 1e-9
        assert report["exact"] is False

    def test_single_scenario_minmax_equals_nominal(self, tmp_path):
        path = tmp_path / "one.inst"
        run_cli("gen", "layered", "--layers", "3", "--width", "2",
                "--k", "1", "--seed", "5", "-o", str(path))
        code, out = run_cli("solve", str(path), "--json")
        assert code == 0
        inst = read_instance(path)
        nominal = sa.nominal_solve(inst.structure, inst.scenarios.matrix[0])
        assert json.loads(out)["value"] == pytest.approx(nominal.value,
                                                         abs=1e-12)


class TestApprox:
    def test_example1_regret(self, example1_file):
        code, out = run_cli("approx", example1_file, "--epsilon", "1",
                            "--criterion", "regret", "--sub-solver", "exact",
                            "--json")
        assert code == 0
        report = json.loads(out)
        assert report["achieved_value"] == 1.0
        assert report["guarantee_factor"] == 2.0
        assert report["selected"] == [1]

    def test_tight_adversarial_gap(self, tmp_path):
        path = tmp_path / "t.inst"
        run_cli("gen", "tight", "--k", "4", "--ell", "2", "-o", str(path))
        code, out = run_cli("approx", str(path), "--epsilon", "0.5",
                            "--sub-solver", "exact", "--level", "2",
                            "--tie-break", "adversarial", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["achieved_value"] == 4.0  # optimum is 1
        assert report["guarantee_factor"] == 4.0

    def test_single_scenario_guarantee_one(self, tmp_path):
        path = tmp_path / "one.inst"
        run_cli("gen", "layered", "--layers", "2", "--width", "2",
                "--k", "1", "--seed", "3", "-o", str(path))
        code, out = run_cli("approx", str(path), "--epsilon", "0.5", "--json")
        assert code == 0
        assert json.loads(out)["guarantee_factor"] == 1.0


class TestExitCodes:
    def test_usage_error_is_one(self):
        with pytest.raises(SystemExit) as err:
            main(["solve"])  # missing instance path
        assert err.value.code == 1

    def test_unknown_flag_is_one(self, example1_file):
        with pytest.raises(SystemExit) as err:
            main(["solve", example1_file, "--frobnicate"])
        assert err.value.code == 1

    def test_validation_error_is_two(self, tmp_path):
        bad = tmp_path / "bad.inst"
        bad.write_text("not an instance\n")
        code, _ = run_cli("solve", str(bad))
        assert code == 2

    def test_missing_file_is_two(self):
        code, _ = run_cli("solve", "/nonexistent/path.inst")
        assert code == 2

    def test_epsilon_out_of_range_is_two(self, example1_file):
        code, _ = run_cli("approx", example1_file, "--epsilon", "7")
        assert code == 2

    def test_cap_exceeded_is_three(self, tmp_path):
        path = tmp_path / "big.inst"
        run_cli("gen", "layered", "--layers", "21", "--width", "2",
                "--k", "1", "--seed", "1", "-o", str(path))
        code, _ = run_cli("solve", str(path), "--method", "brute")
        assert code == 3


class TestExperimentCommand:
    def test_tiny_run_writes_outputs(self, tmp_path):
        csv = tmp_path / "r.csv"
        svg = tmp_path / "r.svg"
        code, out = run_cli("experiment", "--layers", "3", "--width", "2",
                            "--scenarios", "4", "--instances", "2",
                            "--seed", "9", "--csv", str(csv),
                            "--svg", str(svg), "--quiet")
        assert code == 0
        assert "mean ratio" in out
        lines = csv.read_text().splitlines()
        assert lines[0] == ("instance_id,scheme,scenario_count,value,"
                            "opt_value,ratio,wall_time_ms,status")
        assert len(lines) == 1 + 2 * 2 * 3
        assert svg.read_text().startswith("<svg")

    def test_levels_validation(self, tmp_path):
        code, _ = run_cli("experiment", "--scenarios", "4", "--levels", "3",
                          "--instances", "1", "--csv",
                          str(tmp_path / "x.csv"), "--svg",
                          str(tmp_path / "x.svg"))
        assert code == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "scenagg.cli", "gen",
                          "example1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.startswith("scenagg instance v1")
