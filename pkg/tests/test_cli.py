import json

import jsonschema
import pytest

from defcalc.algebras import dual_numbers_algebra, ground_field, group_bialgebra_z2, make_algebra, poisson_fixtures
from defcalc.cli import main, schema


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="alg.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, name, *argv):
    code, out = run(capsys, *argv)
    report = json.loads(out)
    jsonschema.validate(report, schema(name if "error" not in report else "error"))
    return code, report


def test_verify_valid(write, capsys):
    code, rep = run_json(capsys, "verify", "verify", "--input", write(dual_numbers_algebra().to_json()))
    assert code == 0 and rep["valid"]


def test_verify_non_associative_names_triple(write, capsys):
    bad = make_algebra({0: 2}, "ass", product=[[0, 0, 1, 1], [1, 1, 0, 1]], labels=["a", "b"])
    code, rep = run_json(capsys, "verify", "verify", "--input", write(bad.to_json()))
    assert code == 1 and rep["violations"][0]["relation"] == "associativity"
    assert len(rep["violations"][0]["basis"]) == 3


def test_verify_malformed(write, capsys):
    code, rep = run_json(capsys, "verify", "verify", "--input", write("{not json"))
    assert code == 2 and rep["exit_code"] == 2


def test_missing_file(capsys):
    code, _ = run(capsys, "verify", "--input", "/nonexistent/alg.json")
    assert code == 2


def test_bad_flag():
    assert main(["cohomology", "--weight-cap", "zero"]) == 2


def test_cohomology_ground_field(write, capsys):
    code, rep = run_json(capsys, "cohomology", "cohomology", "--input", write(ground_field().to_json()),
                         "--complex", "hochschild", "--variant", "full")
    stable = rep["stable_degree"]
    assert code == 0 and stable == 3
    assert {d: h for d, h in rep["cohomology"].items() if int(d) <= stable} == {"0": 1, "1": 0, "2": 0, "3": 0}


def test_cohomology_text_prints_stable_bound(write, capsys):
    code, out = run(capsys, "cohomology", "--input", write(dual_numbers_algebra().to_json()), "--format", "text")
    assert code == 0 and "stable through degree 3" in out


@pytest.mark.parametrize("alg,complex_", [(group_bialgebra_z2(), "gs"), (poisson_fixtures()[1], "pois"),
                                          (dual_numbers_algebra(), "plus")])
def test_cohomology_other_complexes(write, capsys, alg, complex_):
    code, rep = run_json(capsys, "cohomology", "cohomology", "--input", write(alg.to_json()), "--complex", complex_,
                         "--weight-cap", "3", "--arity-cap", "3")
    assert code == 0 and rep["complex"] == complex_


def test_cohomology_wrong_variant(write, capsys):
    code, _ = run(capsys, "cohomology", "--input", write(dual_numbers_algebra().to_json()), "--variant", "gt0")
    assert code == 2


def test_deform_dual_numbers_unobstructed(write, capsys):
    code, rep = run_json(capsys, "deform", "deform", "--input", write(dual_numbers_algebra().to_json()))
    assert code == 0 and rep["h1"] == 1
    assert rep["branches"][0]["reached"] == 3 and rep["branches"][0]["obstructed_at"] is None
    assert rep["ring"] == "K[t]/(t^4)" and rep["obstructions"] == []


def test_deform_obstructed(write, capsys):
    sq = make_algebra({0: 3}, "ass", product=[[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [0, 2, 2, 1], [2, 0, 2, 1]],
                      labels=["1", "x", "y"], name="K[x,y]/(x,y)^2")
    code, rep = run_json(capsys, "deform", "deform", "--input", write(sq.to_json()), "--order", "2")
    assert code == 0
    assert rep["obstructions"] and rep["obstructions"][0]["class_dim"] > 0
    assert any(b["obstructed_at"] == 2 for b in rep["branches"])


def test_deform_rigid_and_abelian(write, capsys):
    k2 = make_algebra({0: 2}, "ass", product=[[0, 0, 0, 1], [1, 1, 1, 1]], labels=["p", "q"], name="K^2")
    code, rep = run_json(capsys, "deform", "deform", "--input", write(k2.to_json()))
    assert code == 0 and rep["h1"] == 0 and rep["branches"] == []
    ab = make_algebra({0: 2}, "lie", labels=["a", "b"], name="abelian")
    code, rep = run_json(capsys, "deform", "deform", "--input", write(ab.to_json(), "ab.json"))
    assert code == 0 and rep["h1"] == 2
    assert all(b["obstructed_at"] is None for b in rep["branches"])


def test_deform_branch_guard(write, capsys):
    # square-zero algebra on 4 generators has far more than 32 first-order branches
    n = 5
    product = [[0, i, i, 1] for i in range(n)] + [[i, 0, i, 1] for i in range(1, n)]
    alg = make_algebra({0: n}, "ass", product=product, name="sqzero5")
    code, rep = run_json(capsys, "deform", "deform", "--input", write(alg.to_json()), "--weight-cap", "3")
    assert code == 3 and rep["exit_code"] == 3


def test_size_budget_exit(write, capsys):
    code, rep = run_json(capsys, "cohomology", "cohomology", "--input", write(dual_numbers_algebra().to_json()),
                         "--size-budget", "10")
    assert code == 3


@pytest.mark.parametrize("ident,alg", [
    ("ass-plus", dual_numbers_algebra()),
    ("ass-semidirect", dual_numbers_algebra()),
    ("fiber-seq", dual_numbers_algebra()),
    ("pois-truncation", poisson_fixtures()[2]),
])
def test_crosscheck(write, capsys, ident, alg):
    code, rep = run_json(capsys, "crosscheck", "crosscheck", ident, "--input", write(alg.to_json()),
                         "--weight-cap", "3", "--arity-cap", "3")
    assert code == 0 and rep["pass"]


def test_crosscheck_fiber_seq_les(write, capsys):
    code, rep = run_json(capsys, "crosscheck", "crosscheck", "fiber-seq", "--input",
                         write(dual_numbers_algebra().to_json()), "--arity-cap", "3")
    les = rep["details"]["long_exact"]
    assert code == 0 and all(all(v["exact"].values()) for v in les.values())


def test_crosscheck_di_end_random(capsys):
    code, rep = run_json(capsys, "crosscheck", "crosscheck", "di-end", "--seed", "11")
    assert code == 0 and rep["pass"]


def test_crosscheck_kind_mismatch(write, capsys):
    code, _ = run(capsys, "crosscheck", "ass-plus", "--input", write(poisson_fixtures()[2].to_json()))
    assert code == 2


def test_convolution_stable_degree(write, capsys):
    code, rep = run_json(capsys, "cohomology", "cohomology", "--input", write(dual_numbers_algebra().to_json()),
                         "--complex", "convolution", "--arity-cap", "4")
    assert code == 0 and rep["stable_degree"] == 2
    assert rep["cohomology"]["1"] == 4 and rep["cohomology"]["2"] == 1
