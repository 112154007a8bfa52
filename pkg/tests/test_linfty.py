import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from defcalc.artinian import tensor_with_ideal, truncated_polynomial
from defcalc.linfty import (
    MCElement, TableLInfty, adjoint_action, check_action, check_linfty, check_strict_morphism, dg_lie,
    end_lie_algebra, linfty_chain_complex, mc_defect, semidirect_product, twist,
)
from helpers import cubic_toy, random_complex, random_nilpotent_pair, three_square_zero

ONE = Fraction(1)


def sl2():
    # e, h, f in degree 0: [h, e] = 2e, [h, f] = -2f, [e, f] = h
    table = {(0, 1): {0: Fraction(-2)}, (1, 2): {2: Fraction(-2)}, (0, 2): {1: ONE}}
    return dg_lie([0, 0, 0], None, lambda a, b: table.get((a, b), {k: -c for k, c in table.get((b, a), {}).items()}),
                  labels=["e", "h", "f"], name="sl2")


def test_sl2_is_lie():
    assert check_linfty(sl2())["valid"]


def test_broken_jacobi_is_reported():
    # [a, b] = c, [b, c] = a, [a, c] = a fails Jacobi
    table = {(0, 1): {2: ONE}, (1, 2): {0: ONE}, (0, 2): {0: ONE}}
    g = TableLInfty([0, 0, 0], None, None, {2: table})
    rep = check_linfty(g)
    assert not rep["valid"] and rep["violations"][0]["kind"] == "jacobi"


def test_degree_violation_rejected():
    with pytest.raises(ValueError):
        TableLInfty([0, 0], None, None, {2: {(0, 1): {0: ONE}}, 1: {(0,): {1: ONE}}})


def test_cubic_toy_is_linfty():
    assert check_linfty(cubic_toy())["valid"]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_end_algebra_of_random_complex(seed):
    X = random_complex(random.Random(seed))
    g = end_lie_algebra(X)
    assert check_linfty(g)["valid"]
    # the underlying complex is Hom(X, X)
    C = linfty_chain_complex(g)
    assert (C.differential @ C.differential).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_twist_of_random_pair(seed):
    G, tau = random_nilpotent_pair(random.Random(seed))
    assert mc_defect(G, tau) == {}
    T = twist(G, tau)
    assert check_linfty(T)["valid"]
    if G.bracket_cap == 2:
        for i in range(G.dim):
            expected = dict(G.sorted_bracket(1, (i,)))
            for j, c in G.bracket(tau, {i: ONE}).items():
                expected[j] = expected.get(j, 0) + c
            assert T.sorted_bracket(1, (i,)) == {j: c for j, c in expected.items() if c}


def test_twist_rejects_non_mc():
    # e (x) (s + t + u) has a nonzero cubic term
    G = tensor_with_ideal(cubic_toy(), three_square_zero())
    tau = {G.index[(0, G.R.labels.index(v))]: ONE for v in "stu"}
    assert mc_defect(G, tau)
    with pytest.raises(ValueError):
        twist(G, tau)
    with pytest.raises(ValueError):
        MCElement(G, tau)


def test_mc_element_certificate():
    G, tau = random_nilpotent_pair(random.Random(7))
    m = MCElement(G, tau)
    assert m.to_json()["defect"] == [] and len(m.certificate_hash()) == 16


def test_table_json_round_trip():
    g = sl2().table()
    h = TableLInfty.from_json(json.loads(json.dumps(g.to_json())))
    assert h.tables == g.tables and h.degrees == g.degrees


def test_adjoint_semidirect_product():
    g = sl2()
    assert check_action(g, g, adjoint_action(g)) == []
    s = semidirect_product(g, g, adjoint_action(g))
    assert check_linfty(s)["valid"]


def test_tensor_with_truncated_polynomial():
    G = tensor_with_ideal(sl2(), truncated_polynomial(3))
    assert check_linfty(G)["valid"]
    assert check_strict_morphism(lambda i: {i: ONE}, G, G) == []
