"""Command-line interface tests."""
import json

import pytest

from dualpcf.cli import main
from dualpcf.numeric import Interval


@pytest.fixture
def program(tmp_path):
    def write(src, name="prog.dpcf"):
        p = tmp_path / name
        p.write_text(src)
        return str(p)
    return write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    def test_ok(self, capsys, program):
        code, out, _ = run(capsys, ["check", program("1 + in_pi 2")])
        assert code == 0
        assert out.strip() == "pi"

    def test_parse_error(self, capsys, program):
        code, _, err = run(capsys, ["check", program("fun x: delta.")])
        assert code == 1
        assert err

    def test_type_error(self, capsys, program):
        src = "if 0 < in_delta (in_pi 1) then 1 else 2"
        code, _, err = run(capsys, ["check", program(src)])
        assert code == 1
        assert "ZeroTestOnDual" in err


class TestEval:
    def test_text_output(self, capsys, program):
        path = program("L[delta] (fun x: delta. max(x, 0 - x)) 0 1")
        code, out, _ = run(capsys, ["eval", path, "--cost", "4"])
        assert code == 0
        assert out.strip() == "[-1,1]"

    def test_json_round_trips_exact_endpoints(self, capsys, program):
        path = program("int (fun t: real. in_delta t)")
        code, out, _ = run(capsys, ["eval", path, "--cost", "5",
                                    "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        std = Interval.parse(f"[{doc['std']['lo']},{doc['std']['hi']}]")
        assert std == Interval.parse("[31/64,33/64]")
        assert doc["cost"] == 5 and doc["steps"] > 0

    def test_width_refinement(self, capsys, program):
        path = program("int (fun t: real. in_delta t)")
        code, out, _ = run(capsys, ["eval", path, "--width", "1/100"])
        assert code == 0
        std = out.split("+ eps")[0].strip()
        assert Interval.parse(std).width <= 0.01

    def test_budget_exhaustion(self, capsys, program):
        path = program("Y[nu -> nu] (fun f: nu -> nu. fun n: nu. f n) 0")
        code, _, err = run(capsys, ["eval", path, "--budget", "2000"])
        assert code == 2
        assert "budget" in err

    def test_undetermined(self, capsys, program):
        path = program("if 0 < in_pi 0 then 1 else 2")
        code, out, _ = run(capsys, ["eval", path])
        assert code == 3
        assert "undetermined" in out


class TestExamples:
    def test_list(self, capsys):
        code, out, _ = run(capsys, ["examples", "list"])
        assert code == 0
        assert "abs_deriv" in out and "legendre_fenchel_halfsq" in out

    def test_run_single(self, capsys):
        code, out, _ = run(capsys, ["examples", "run", "abs_deriv",
                                    "--cost", "2"])
        assert code == 0
        assert "[-1,1]" in out

    def test_run_unknown(self, capsys):
        code, _, err = run(capsys, ["examples", "run", "nope"])
        assert code == 1

    def test_run_chebyshev_hits_quarter(self, capsys):
        code, out, _ = run(capsys, ["examples", "run", "chebyshev_functional",
                                    "--cost", "0"])
        assert code == 0
        assert "[1/4,1/4]" in out


class TestVerify:
    def test_refinement_suite_reports_json_lines(self, capsys):
        code, out, err = run(capsys, ["verify", "--suite", "refinement"])
        assert code == 0
        lines = [json.loads(l) for l in out.strip().splitlines()]
        assert all(l["suite"] == "refinement" for l in lines)
        assert all(l["verdict"] for l in lines)
        assert "passed" in err

    def test_relations_suite_small_fuel(self, capsys):
        code, out, _ = run(capsys, ["verify", "--suite", "relations",
                                    "--fuel", "5", "--seed", "1"])
        assert code == 0
        cases = {json.loads(l)["case"] for l in out.strip().splitlines()}
        assert {"add", "max", "pr", "int", "sup"} <= cases
