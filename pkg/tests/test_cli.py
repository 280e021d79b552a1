import json
import subprocess
import sys
from pathlib import Path


from ravioli import algfile as af
from ravioli.cli import run

DATA = Path(__file__).parent / "data"


def shipped(name):
    return str(af.data_path(name))


def test_verify_fh_passes():
    code, out = run(["verify", shipped("fh"), "--truncation", "2"])
    assert code == 0, out
    assert out.rstrip().endswith("PASS")


def test_structured_output_is_deterministic():
    a = run(["branches", shipped("fh"), "higgs", "--cutoff", "2", "--format", "structured"])
    b = run(["branches", shipped("fh"), "higgs", "--cutoff", "2", "--format", "structured"])
    assert a == b and a[0] == 0
    rep = json.loads(a[1])
    assert rep["tables"]["dims"] == {"0": 1, "1": 2, "2": 3}
    assert rep["tables"]["brackets"]["{O1,O2}"] == "1*O0"


def test_branches_sfc_bracket():
    code, out = run(["branches", shipped("sfc"), "--cutoff", "1", "--format", "structured"])
    assert code == 0
    rep = json.loads(out)
    assert rep["tables"]["brackets"] == {"{O1,O1}": "1*O0"}


def test_jacobi_file():
    code, out = run(["jacobi", shipped("svir_n1"), "--cutoff", "3"])
    assert code == 0, out
    code, out = run(["jacobi", shipped("svir_n3"), "--cutoff", "1"])
    assert code == 1
    assert "witness" in out


def test_twist_b_fh():
    code, out = run(["twist", shipped("fh"), "B", "--cutoff", "2", "--format", "structured"])
    assert code == 0, out
    assert json.loads(out)["tables"]["cohomology"] == {"0": 1, "1": 2, "2": 3}


def test_twist_a_fvpert_reports_failure():
    code, out = run(["twist", shipped("fvpert"), "A", "--cutoff", "2", "--format", "structured"])
    assert code == 1
    rep = json.loads(out)
    bad = [c for c in rep["checks"] if c["status"] == "fail"]
    assert [c["name"] for c in bad] == ["comparison map is an isomorphism"]
    assert "dependent classes" in bad[0]["witness"]


def test_gauge_u1_matches_oracle():
    code, out = run(["gauge", shipped("fh_gauged_u1"), "--format", "structured"])
    assert code == 0, out
    rep = json.loads(out)
    assert rep["tables"]["cohomology"] == rep["tables"]["oracle"]
    assert rep["tables"]["W_tot"] == ":Z1 Z2 phi0: - :Z1 psi1 c0: + :Z2 psi2 c0:"


def test_gauge_pure():
    code, out = run(["gauge", str(DATA / "pure_u1.alg"), "--format", "structured"])
    assert code == 0, out
    assert json.loads(out)["tables"]["cohomology by R_B"] == {"0": 1, "1": 2, "2": 1}
    code, out = run(["gauge", str(DATA / "pure_sl2.alg")])
    assert code == 0, out


def test_gauge_level_fails():
    code, out = run(["gauge", str(DATA / "fh_level.alg")])
    assert code == 1
    assert "level must vanish" in out


def test_trivial_twist():
    code, out = run(["twist", str(DATA / "pure_u1.alg"), "A"])
    assert code == 0


def test_malformed_file_exit_two():
    code, out = run(["verify", str(DATA / "malformed.alg")])
    assert code == 2
    assert "line 8, column 23" in out


def test_grading_error_exit_two():
    code, out = run(["verify", str(DATA / "bad_grading.alg")])
    assert code == 2
    assert "grading inconsistency" in out


def test_missing_file_and_bad_args():
    assert run(["verify", str(DATA / "nope.alg")])[0] == 2
    assert run(["twist", shipped("fh"), "Z"])[0] == 2
    assert run(["gauge", shipped("fh")])[0] == 2


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "ravioli.cli", "verify", shipped("sfc"),
                        "--truncation", "1"], capture_output=True, text=True)
    assert p.returncode == 0
    assert "PASS" in p.stdout
