from fractions import Fraction

import pytest

from defcalc.algebras import (
    InputError, acceptance_algebras, associative_corpus, dual_numbers_algebra, ground_field, group_bialgebra_z2,
    make_algebra, poisson_fixtures,
)
from defcalc.defcomplexes import (
    GSComplex, HochschildComplex, PoisComplex, StructureError, hochschild_linfty, hochschild_vs_convolution,
    semidirect_vs_hochschild,
)
from defcalc.linfty import check_linfty, mc_defect
from defcalc.operads import SizeError

ALGS = {a.name: a for a in acceptance_algebras()}


@pytest.mark.parametrize("variant", ["full", "ge1", "ge2"])
@pytest.mark.parametrize("alg", associative_corpus(), ids=lambda a: a.name)
def test_hochschild_d_squared(alg, variant):
    D = HochschildComplex(alg, variant, 4).differential()
    assert (D @ D).is_zero()


@pytest.mark.parametrize("name,table", [
    ("K", [1, 0, 0, 0]),
    ("K[x]/(x^2)", [2, 1, 1, 1]),
    ("K^2", [2, 0, 0, 0]),
    ("T2", [1, 0, 0, 0]),
])
def test_known_hochschild_cohomology(name, table):
    # char 0: HH(K[x]/x^2) is 2, 1, 1, ...; semisimple and hereditary path algebras are rigid
    H = HochschildComplex(ALGS[name], "full", 4)
    assert H.stable_degree() == 3
    coh = H.cohomology()
    assert [coh[d] for d in range(4)] == table


def test_product_cochain_is_mc_and_bracket_is_lie():
    A = dual_numbers_algebra()
    H = HochschildComplex(A, "ge2", 3)
    g = hochschild_linfty(H)
    assert check_linfty(g)["valid"]
    assert mc_defect(g, H.product_cochain()) == {}


def test_invalid_algebra_raises():
    bad = make_algebra({0: 2}, "ass", product=[[0, 0, 1, 1], [1, 1, 0, 1]])
    with pytest.raises(StructureError):
        HochschildComplex(bad, "full", 3)


def test_budget_guard():
    with pytest.raises(SizeError):
        HochschildComplex(ALGS["T2"], "full", 4, budget=50)


@pytest.mark.parametrize("variant", ["ge1", "ge2"])
def test_hochschild_matches_convolution(variant):
    rep = hochschild_vs_convolution(dual_numbers_algebra(), variant, 3)
    assert rep["match"] and rep["mismatch_count"] == 0


def test_semidirect_matches_hochschild():
    rep = semidirect_vs_hochschild(ALGS["K^2"], 3)
    assert rep["match"]


@pytest.mark.parametrize("variant", ["full", "gt0", "gt1"])
@pytest.mark.parametrize("alg", poisson_fixtures(), ids=lambda a: a.name)
def test_pois_complexes(alg, variant):
    P = PoisComplex(alg, 1, variant, 3)
    D = P.differential()
    assert (D @ D).is_zero()


def test_pois_truncation_and_ground_field():
    P = PoisComplex(poisson_fixtures()[0], 1, "gt0", 3)
    assert P.truncation_report()["ok"]
    with pytest.raises(InputError):
        PoisComplex(poisson_fixtures()[0], 2, "gt0", 3)


def test_gs_complex_of_group_algebra():
    G = GSComplex(group_bialgebra_z2(), 3)
    rep = G.check()
    assert all(rep.values())
    assert G.stable_degree() == 3
    coh = G.cohomology()
    assert all(coh.get(d, 0) == 0 for d in range(2, 4))


def test_gs_of_ground_field():
    G = GSComplex(ground_field("bialg"), 3)
    assert G.check()["d2"]
    assert G.dims() == {2: 1, 3: 2, 4: 3, 5: 2, 6: 1}


def test_element_helper():
    H = HochschildComplex(dual_numbers_algebra(), "ge2", 3)
    phi = H.element(2, {(1, 1): {0: Fraction(1)}})
    D = H.differential()
    # x.x -> 1 is a cocycle
    assert not D.apply(phi)


def test_gs_degree_cap_keeps_low_degrees():
    B = group_bialgebra_z2()
    full, capped = GSComplex(B, 4), GSComplex(B, 4, max_degree=5)
    assert max(capped.dims()) == 5 and capped.stable_degree() == 4
    assert {d: h for d, h in capped.cohomology().items() if d <= 4} == \
        {d: h for d, h in full.cohomology().items() if d <= 4}


def test_pois_stable_degree_is_below_the_top_arity():
    # the top degree of a capped complex lacks its outgoing differential
    A = poisson_fixtures()[1]
    low, high = PoisComplex(A, 1, "full", 3), PoisComplex(A, 1, "full", 4)
    assert low.stable_degree() == 1
    lo, hi = low.cohomology(), high.cohomology()
    assert all(lo[d] == hi[d] for d in lo if d <= low.stable_degree())
    assert lo[2] != hi[2]
