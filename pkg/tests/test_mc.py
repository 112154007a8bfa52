import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from defcalc.algebras import dual_numbers_algebra
from defcalc.artinian import square_zero, truncated_polynomial
from defcalc.convolution import ConvolutionAlgebra
from defcalc.defcomplexes import HochschildComplex, hochschild_linfty
from defcalc.graded import ChainComplex, GradedSpace
from defcalc.linalg import SparseMatrix
from defcalc.linfty import dg_lie, mc_defect
from defcalc.mc import (
    CohomologyClasses, FormsTensor, enumerate_mc, enumerate_mc_box, find_edge, formal_deformation, gauge_action,
    gauge_equivalent, gauge_orbits, homotopy_classes, mc_report,
)
from defcalc.operads import SizeError, koszul_dual_cooperad
from defcalc.fibration import di_delta_from_mc
from helpers import homotopy_fixtures, random_complex

ONE = Fraction(1)


def obstructed_toy():
    """Degrees 1, 1, 2, 2, 2 (x1, x2, y1, y2, y3) with [x1, x1] = y1 and [x1, x2] = y2."""
    table = {(0, 0): {2: ONE}, (0, 1): {3: ONE}, (1, 0): {3: ONE}}
    return dg_lie([1, 1, 2, 2, 2], None, lambda a, b: table.get((a, b), {}),
                  labels=["x1", "x2", "y1", "y2", "y3"], name="toy")


@pytest.mark.parametrize("fixture", homotopy_fixtures(), ids=lambda f: f[0])
def test_gauge_and_homotopy_partitions(fixture):
    name, G, verts, expected = fixture
    assert all(mc_defect(G, v) == {} for v in verts)
    orbits = gauge_orbits(G, verts)
    classes = homotopy_classes(G, verts, 4)
    assert orbits["conclusive"] and classes["conclusive"]
    assert orbits["classes"] == classes["classes"] == expected


def test_edge_is_a_valid_simplex():
    name, G, verts, _ = homotopy_fixtures()[0]
    rep = find_edge(G, verts[3], verts[4], 4)
    assert rep["status"] == "edge"
    F = FormsTensor(G, 4)
    alpha = rep["simplex"]
    assert F.mc_defect(alpha) == {}
    assert F.endpoint(0, alpha) == verts[3] and F.endpoint(1, alpha) == verts[4]
    assert find_edge(G, verts[3], verts[6], 4)["status"] == "disconnected"


def test_gauge_certificate():
    name, G, verts, _ = homotopy_fixtures()[2]
    rep = gauge_equivalent(G, verts[2], verts[5])
    assert rep["status"] == "equivalent"
    assert gauge_action(G, rep["gauge"], verts[2]) == verts[5]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gauge_action_preserves_mc(seed):
    rng = random.Random(seed)
    name, G, verts, _ = rng.choice(homotopy_fixtures())
    deg0 = [i for i in range(G.dim) if G.degrees[i] == 0]
    lam = {i: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for i in rng.sample(deg0, min(3, len(deg0)))}
    assert mc_defect(G, gauge_action(G, lam, rng.choice(verts))) == {}


def test_formal_deformation_obstructed_toy():
    res = formal_deformation(obstructed_toy(), 3)
    assert (res["h1"], res["h2"]) == (2, 3)
    x1, x2 = ({0: ONE}, {1: ONE})
    by_first = {tuple(sorted(b["first_order"].items())): b for b in res["branches"]}
    b1 = by_first[tuple(x1.items())]
    assert b1["obstruction"]["order"] == 2 and b1["lift"] is None
    assert b1["obstruction"]["representative"] == {2: Fraction(1, 2)}
    assert by_first[tuple(x2.items())]["reached"] == 3
    assert res["obstructions"][0]["order"] == 2 and res["obstructions"][0]["class_dim"] == 2


def test_formal_deformation_dual_numbers():
    H = HochschildComplex(dual_numbers_algebra(), "ge2", 4)
    phi = H.element(2, {(1, 1): {0: 1}})
    res = formal_deformation(hochschild_linfty(H), 3, branches=[phi])
    b = res["branches"][0]
    assert b["reached"] == 3 and b["obstruction"] is None


def test_cohomology_classes():
    C = CohomologyClasses(obstructed_toy(), 2)
    assert C.dim == 3
    classes = [C.classify({i: ONE}) for i in (2, 3, 4)]
    assert all(classes) and len({tuple(sorted(c.items())) for c in classes}) == 3


def test_enumerate_square_zero_is_linear():
    g = obstructed_toy()
    rep = enumerate_mc(g, square_zero(0))
    assert rep["linear"] and len(rep["basis"]) == 2
    rep = enumerate_mc(g, truncated_polynomial(3))
    assert not rep["linear"] and rep["strata"]


def test_di_box_enumeration_matches_hand_count():
    # X = a (0) -> b (1), c (2) with d a = b; delta^2 = d delta + delta d
    X = ChainComplex(GradedSpace({0: ("a",), 1: ("b",), 2: ("c",)}), SparseMatrix.from_entries(3, 3, [(1, 0, 1)]))
    g = ConvolutionAlgebra(koszul_dual_cooperad("Di", 2), X, cap=1)
    sols = enumerate_mc_box(g)
    assert len(sols) == 5
    for tau in sols:
        delta = di_delta_from_mc(g, tau)
        dX = X.differential
        assert (delta @ delta).to_dense() == (dX @ delta + delta @ dX).to_dense()


def test_box_budget():
    X = random_complex(random.Random(0), 3)
    g = ConvolutionAlgebra(koszul_dual_cooperad("Di", 2), X, cap=1)
    with pytest.raises(SizeError):
        enumerate_mc_box(g, values=range(-5, 6), budget=1)


def test_report_shape():
    name, G, verts, _ = homotopy_fixtures()[0]
    rep = mc_report("K[t]/(t^3)", verts, [[0]], [])
    assert set(rep) == {"ring", "vertices", "classes", "obstructions"}
