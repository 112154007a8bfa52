from fractions import Fraction

from hypothesis import given, settings, strategies as st

from defcalc.forms import SullivanForms


def forms(n, D=3):
    F = SullivanForms(n, D)
    keys = F.basis()
    return F, st.dictionaries(st.sampled_from(keys), st.integers(-3, 3).filter(bool).map(Fraction), max_size=4)


def test_coordinates_sum_to_one():
    F = SullivanForms(2, 2)
    total = {}
    for i in range(3):
        total = F.add(total, F.t(i))
    assert total == F.one()
    dtotal = {}
    for i in range(3):
        dtotal = F.add(dtotal, F.dt(i))
    assert dtotal == {}


def test_vertices():
    F = SullivanForms(2, 2)
    for i in range(3):
        for j in range(3):
            assert F.vertex(j, F.t(i)) == (1 if i == j else 0)


def test_basis_size():
    # polynomials of degree <= 1 in two variables times forms 1, dt1, dt2, dt1 dt2
    assert len(SullivanForms(2, 1).basis()) == 3 * 4


@settings(max_examples=40, deadline=None)
@given(st.data(), st.integers(1, 3))
def test_d_squared_and_leibniz(data, n):
    F, elements = forms(n)
    a, b = data.draw(elements), data.draw(elements)
    assert F.d(F.d(a)) == {}
    # d(ab) = da b + (-1)^|a| a db on homogeneous a
    deg = {F.degree(k) for k in a}
    if len(deg) == 1:
        sign = -1 if deg.pop() % 2 else 1
        assert F.d(F.mul(a, b)) == F.add(F.mul(F.d(a), b), F.mul(a, F.d(b)), sign)


@settings(max_examples=30, deadline=None)
@given(st.data(), st.integers(1, 3))
def test_faces_and_degeneracies_are_dga_maps(data, n):
    F, elements = forms(n)
    a, b = data.draw(elements), data.draw(elements)
    i = data.draw(st.integers(0, n))
    assert F.face(i, F.mul(a, b)) == SullivanForms(n - 1, 3).mul(F.face(i, a), F.face(i, b))
    assert F.face(i, F.d(a)) == SullivanForms(n - 1, 3).d(F.face(i, a))
    j = data.draw(st.integers(0, n))
    G = SullivanForms(n + 1, 3)
    assert F.degeneracy(j, F.d(a)) == G.d(F.degeneracy(j, a))
    # d_j s_j = d_{j+1} s_j = id
    assert G.face(j, F.degeneracy(j, a)) == a
    assert G.face(j + 1, F.degeneracy(j, a)) == a


def test_interval_faces():
    # t_1 restricted to the faces of the interval gives its endpoint values
    F = SullivanForms(1, 2)
    t1 = F.t(1)
    assert F.face(0, t1) == SullivanForms(0, 2).one()
    assert F.face(1, t1) == {}
