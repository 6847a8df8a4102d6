import json

import pytest

from hightors.cli import Report, SpecError, corpus, load_spec, main, parse_spec, run

GOOD = """# comment
char 5
n 2
vertices 3
arrow a 1 2
arrow b 2 3
relation 1*b.a
"""


def test_parse_gamma_golden():
    spec = parse_spec(GOOD)
    A = spec.build()
    assert (spec.p, spec.n, spec.num_vertices) == (5, 2, 3)
    assert spec.arrows == [("a", 0, 1), ("b", 1, 2)]
    assert sum(A.projective(v).dim for v in range(3)) == 5


def test_corpus_contents():
    names = set(corpus())
    assert {"gamma", "a2", "a3", "a5_rad2", "semisimple1", "semisimple2"} <= names
    assert corpus()["a2"].relations == []


def test_char_override():
    assert load_spec("gamma").build(7).p == 7


@pytest.mark.parametrize(
    "text, line",
    [
        ("vertices 2\narrow a 1 3\n", 2),
        ("vertices 2\narrow a 1 2\nrelation a.a\n", 3),
        ("vertices 3\narrow a 1 2\narrow b 2 3\narrow c 1 3\nrelation b.a - a\n", 5),
        ("vertices 2\narrow a 1 2\nrelation x\n", 3),
        ("vertices 2\nfrobnicate 3\n", 2),
        ("char five\nvertices 2\n", 1),
        ("vertices 2\narrow a 1 2\narrow a 2 1\n", 3),
        ("vertices 2\nmodule_M 1=1,0,0\n", 2),
        ("vertices 2\narrow a 1 2\nrelation 2*a 3*a\n", 3),
    ],
)
def test_spec_errors_carry_line_numbers(text, line):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_vertices():
    with pytest.raises(SpecError):
        parse_spec("arrow a 1 2\n")


def test_unknown_algebra_is_input_error():
    code, report, out = run(["analyze", "no_such_algebra"])
    assert code == 2 and report is None and out.startswith("error:")


def test_analyze_gamma():
    code, R, _ = run(["analyze", "gamma", "--no-timings"])
    assert code == 0
    v = {x["name"]: x["value"] for x in R.verdicts}
    assert v == {"gldim": 2, "indecomposables": 5, "M_cluster_tilting": True}


def test_analyze_a2_counts():
    _, R, _ = run(["analyze", "a2"])
    assert {x["name"]: x["value"] for x in R.verdicts}["indecomposables"] == 3


def test_json_round_trip():
    code, R, out = run(["torsion", "check", "--subset", "3", "--format", "json"])
    assert code == 0
    back = Report.from_json(out)
    assert back.to_dict() == R.to_dict()
    assert list(json.loads(out)) == ["command", "algebra", "n", "char", "verdicts", "witnesses", "caps", "seed", "timings"]


def test_reports_list_caps_and_scope():
    _, R, out = run(["check", "theorem-b", "--caps", "multiplicity=1"])
    assert R.caps == {"multiplicity": 1, "window": 2, "quotient_dim": 8}
    assert "caps: multiplicity=1, window=2, quotient_dim=8" in out
    assert any(v.get("scope") == "bounded-scope" for v in R.verdicts)


def test_deterministic_json():
    argv = ["torsion", "enumerate", "gamma", "--format", "json", "--seed", "7", "--no-timings"]
    a, b = run(argv)[2], run(argv)[2]
    assert a == b
    assert json.loads(a)["seed"] == 7


def test_exit_codes(capsys):
    assert run(["check", "theorem-b", "gamma"])[0] == 0
    # with multiplicity 0 property F is vacuous and disagrees with the torsion test
    assert run(["check", "theorem-b", "a2", "--caps", "multiplicity=0"])[0] == 1
    assert run(["check", "apr", "gamma", "--vertex", "1"])[0] == 2
    assert run(["aisles", "enumerate", "a5_rad2"])[0] == 2
    assert run(["check", "theorem-b", "--caps", "bogus=1"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["check", "theorem-b", "a2", "--caps", "quotient_dim=1"])[0] == 3
    assert main(["torsion", "check", "--subset", "9"]) == 2
    assert "not an indecomposable" in capsys.readouterr().err


def test_kronecker_is_out_of_scope(tmp_path):
    f = tmp_path / "kronecker.alg"
    f.write_text("char 5\nn 1\nvertices 2\narrow a 1 2\narrow b 1 2\n")
    code, _, out = run(["analyze", str(f)])
    assert code == 3 and out.startswith("scope error")


def test_torsion_check_verdicts():
    _, R, _ = run(["torsion", "check", "--subset", "3"])
    v = {x["name"]: x["value"] for x in R.verdicts}
    assert v["torsion"] is True and v["splitting"] is False and v["property_F"] is True
    _, R, _ = run(["torsion", "check", "--subset", "1/2"])
    assert {x["name"]: x["value"] for x in R.verdicts}["torsion"] is False
    assert R.witnesses[1]["reason"] == "cover is not monic"


def test_apr_command():
    code, R, _ = run(["check", "apr", "--vertex", "3"])
    assert code == 0
    assert R.witnesses[0]["fac_torsion_class"] == ["1", "1/2", "2/3"]


def test_angle_command():
    code, R, out = run(["angle", "complete", "--delta", "1@0 -> 3@1"])
    assert code == 0
    assert R.witnesses[0]["angle"] == ["3", "2/3", "1/2", "1", "S^2(3)"]
    assert run(["angle", "complete", "--delta", "1@0 => 3@1"])[0] == 2
    assert run(["angle", "complete", "--delta", "1@0 -> 3@1", "--coeffs", "1,2"])[0] == 2


def test_aisles_and_theorem_c():
    _, R, _ = run(["aisles", "enumerate"])
    assert R.verdicts[0]["value"] == 6
    code, R, _ = run(["check", "theorem-c"])
    assert code == 0 and R.all_true()


def test_wakamatsu_command_small_caps():
    code, R, _ = run(["check", "wakamatsu", "--caps", "multiplicity=1"])
    assert code == 0
    assert {x["name"]: x["value"] for x in R.verdicts}["wakamatsu"] is True
