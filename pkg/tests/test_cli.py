import json
import subprocess
import sys

import pytest

from qcox.algebra import cartan_matrix
from qcox.cli import main, poly_latex
from qcox.polyring import Polynomial, PolyMatrix
from qcox.quiverdsl import parse_quiver

from oracles import frac_inverse, frac_mul, frac_neg, frac_transpose

A3_TEXT = """
quiver a3 {
  vertices: 1, 2, 3;
  arrows: a: 2 -> 1; b: 2 -> 3;
}
"""

DOUBLE_CHAIN_TEXT = """
quiver dc {
  vertices: 1, 2, 3;
  arrows: a: 1 -> 2; b: 1 -> 2; d: 2 -> 3;
  relations: a*d - b*d;
}
"""

TWO_CYCLE_TEXT = """
quiver loop2 {
  vertices: 1, 2;
  arrows: u: 1 -> 2; v: 2 -> 1;
}
"""

TWO_VERTEX_CYCLIC_TEXT = """
quiver tv {
  vertices: 1, 2;
  arrows: a: 1 -> 2; b: 1 -> 2; d: 2 -> 1;
  relations: a*d; b*d;
}
"""


@pytest.fixture
def qv(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_poly_latex():
    assert poly_latex(Polynomial([])) == "0"
    assert poly_latex(Polynomial([1, 0, 2])) == "1+2q^{2}"
    assert poly_latex(Polynomial([-1, 0, 1])) == "-1+q^{2}"
    assert poly_latex(Polynomial([0, -1])) == "-q"
    from fractions import Fraction
    assert poly_latex(Polynomial([Fraction(3, 2)])) == "\\frac{3}{2}"


def test_cartan_latex_golden(qv, capsys):
    code, out, _ = run_cli(capsys, "cartan", qv("dc.qv", DOUBLE_CHAIN_TEXT),
                           "--format=latex")
    assert code == 0
    assert out == ("\\left(\\begin{array}{ccc}\n"
                   "1 & 2q & q^{2} \\\\\n"
                   "0 & 1 & q \\\\\n"
                   "0 & 0 & 1 \\\\\n"
                   "\\end{array}\\right)\n")


def test_cartan_plain(qv, capsys):
    code, out, _ = run_cli(capsys, "cartan", qv("a3.qv", A3_TEXT))
    assert code == 0
    assert out.splitlines() == ["[ 1  0  0 ]", "[ q  1  q ]", "[ 0  0  1 ]"]


def test_cartan_json_round_trip(qv, capsys):
    path = qv("dc.qv", DOUBLE_CHAIN_TEXT)
    code, out, _ = run_cli(capsys, "cartan", path, "--format=json")
    assert code == 0
    parsed = PolyMatrix.from_json_obj(json.loads(out))
    assert parsed == cartan_matrix(parse_quiver(DOUBLE_CHAIN_TEXT))


def test_cartan_json_input(qv, capsys):
    from qcox.quiverdsl import emit_json
    blob = emit_json(parse_quiver(DOUBLE_CHAIN_TEXT))
    path = qv("dc.json", blob)
    code, out, _ = run_cli(capsys, "cartan", path, "--format=json")
    assert code == 0
    assert PolyMatrix.from_json_obj(json.loads(out)) == \
        cartan_matrix(parse_quiver(DOUBLE_CHAIN_TEXT))


def test_at_q_one_matches_classical(qv, capsys):
    path = qv("a3.qv", A3_TEXT)
    code, out, _ = run_cli(capsys, "coxeter", path, "--at-q=1", "--format=json")
    assert code == 0
    got = json.loads(out)
    c1 = cartan_matrix(parse_quiver(A3_TEXT)).specialize(1)
    classical = frac_neg(frac_mul(frac_transpose(c1), frac_inverse(c1)))
    expected = [[str(v) for v in row] for row in classical]
    assert got["entries"] == [[e.replace("/1", "") for e in row] for row in expected]
    assert got["at_q"] == "1"


def test_coxeter_methods_agree(qv, capsys):
    path = qv("dc.qv", DOUBLE_CHAIN_TEXT)
    _, out_refl, _ = run_cli(capsys, "coxeter", path, "--method=reflections")
    _, out_cart, _ = run_cli(capsys, "coxeter", path, "--method=cartan")
    assert out_refl == out_cart


def test_degree_cap_error_exit_2(qv, capsys):
    code, out, err = run_cli(capsys, "cartan", qv("loop2.qv", TWO_CYCLE_TEXT))
    assert code == 2
    assert out == ""
    assert "DegreeCapExceeded" in err


def test_syntax_error_exit_2(qv, capsys):
    code, _, err = run_cli(capsys, "cartan", qv("bad.qv", "quiver x {"))
    assert code == 2
    assert "QuiverSyntaxError" in err and "line" in err


def test_missing_file_exit_2(capsys):
    code, _, err = run_cli(capsys, "cartan", "/nonexistent/q.qv")
    assert code == 2
    assert "IO" in err


def test_dims_table(qv, capsys):
    code, out, _ = run_cli(capsys, "dims", qv("dc.qv", DOUBLE_CHAIN_TEXT),
                           "--format=json")
    assert code == 0
    obj = json.loads(out)
    assert obj["max_degree"] == 3
    assert {"source": "1", "target": "2", "degree": 1, "dim": 2} in obj["dims"]
    assert all(set(item) == {"source", "target", "degree", "dim"} for item in obj["dims"])


def test_dims_projective_vector(qv, capsys):
    code, out, _ = run_cli(capsys, "dims", qv("dc.qv", DOUBLE_CHAIN_TEXT),
                           "--projective", "--vertex=1")
    assert code == 0
    assert out.strip() == "P(1): (1, 2q, q^2)"


def test_dims_all_kinds_json(qv, capsys):
    path = qv("tv.qv", TWO_VERTEX_CYCLIC_TEXT)
    code, out, _ = run_cli(capsys, "dims", path, "--injective", "--format=json")
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "injective"
    assert obj["vectors"][1] == {"vertex": "2", "entries": [["0", "2"], ["1", "0", "2"]]}


def test_forms_euler_golden(qv, capsys):
    path = qv("tv.qv", TWO_VERTEX_CYCLIC_TEXT)
    code, out, _ = run_cli(capsys, "forms", path, "--euler", "--x=1,0", "--y=1,0")
    assert code == 0
    assert out.strip() == "1+2q^2"


def test_forms_symmetric(qv, capsys):
    path = qv("dc.qv", DOUBLE_CHAIN_TEXT)
    code, out, _ = run_cli(capsys, "forms", path, "--symmetric", "--x=1,0,0", "--y=0,1,0")
    assert code == 0
    # half of the symmetrized-inverse entry -2q
    assert out.strip() == "-q"


def test_forms_bad_vector_exit_2(qv, capsys):
    path = qv("dc.qv", DOUBLE_CHAIN_TEXT)
    code, _, err = run_cli(capsys, "forms", path, "--x=1,0", "--y=1,0,0")
    assert code == 2
    assert "ValueError" in err


def test_reflect_golden(qv, capsys):
    code, out, _ = run_cli(capsys, "reflect", qv("a3.qv", A3_TEXT), "--vertex=1")
    assert code == 0
    assert "a: 1 -> 2;" in out and "b: 2 -> 3;" in out
    reparsed = parse_quiver(out)
    assert [str(a.source) + str(a.target) for a in reparsed.quiver.arrows] == ["01", "12"]


def test_reflect_rejects_relations(qv, capsys):
    code, _, err = run_cli(capsys, "reflect", qv("dc.qv", DOUBLE_CHAIN_TEXT), "--vertex=3")
    assert code == 2
    assert "HasRelations" in err


def test_numbering(qv, capsys):
    code, out, _ = run_cli(capsys, "numbering", qv("a3.qv", A3_TEXT))
    assert code == 0
    assert out.strip() == "1, 3, 2"
    code, out, _ = run_cli(capsys, "numbering", qv("a3.qv", A3_TEXT), "--format=json")
    assert json.loads(out) == {"numbering": ["1", "3", "2"]}


def test_numbering_cyclic_exit_2(qv, capsys):
    code, _, err = run_cli(capsys, "numbering", qv("tv.qv", TWO_VERTEX_CYCLIC_TEXT))
    assert code == 2
    assert "NotAcyclic" in err


def test_verify_passes_on_a3(qv, capsys):
    code, out, _ = run_cli(capsys, "verify", qv("a3.qv", A3_TEXT))
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith(("PASS", "SKIP", "verified")) for line in lines)
    assert any(line.startswith("PASS input: coxeter_vs_cartan") for line in lines)
    assert lines[-1] == "verified 1 instance(s), 0 failing check(s)"


def test_verify_with_random_instances(qv, capsys):
    code, out, _ = run_cli(capsys, "verify", qv("a3.qv", A3_TEXT),
                           "--random=3", "--seed=11", "--format=json")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    assert len(obj["reports"]) == 4
    assert obj["reports"][1]["instance"] == "random[0]"


def test_verify_exit_1_on_failing_check(qv, capsys, monkeypatch):
    from qcox.coxeter import CheckReport, CheckResult
    import qcox.cli as cli_module

    def fake_verify(bq, samples=10, seed=0, degree_cap=64):
        return CheckReport((CheckResult("reflection_involution", "fail", "forced"),))

    monkeypatch.setattr(cli_module.coxeter, "verify_identities", fake_verify)
    code, out, _ = run_cli(capsys, "verify", qv("a3.qv", A3_TEXT))
    assert code == 1
    assert "FAIL input: reflection_involution" in out


def test_output_determinism(qv, capsys):
    path = qv("dc.qv", DOUBLE_CHAIN_TEXT)
    outputs = set()
    for _ in range(2):
        _, out, _ = run_cli(capsys, "verify", path, "--random=2", "--format=json")
        outputs.add(out)
    assert len(outputs) == 1


def test_module_entry_point_smoke(qv, tmp_path):
    path = tmp_path / "a3.qv"
    path.write_text(A3_TEXT)
    proc = subprocess.run([sys.executable, "-m", "qcox", "numbering", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1, 3, 2"
