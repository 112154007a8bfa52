import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from defcalc.graded import (
    ChainComplex, GradedSpace, cohomology_dims, compose_perm, euler_characteristic,
    hom_complex, koszul_sign, shift, tensor,
)
from defcalc.linalg import SparseMatrix


def test_koszul_examples():
    assert koszul_sign((0, 1, 2), (1, 3, 5)) == 1
    assert koszul_sign((1, 0), (1, 1), antisymmetric=True) == 1
    assert koszul_sign((1, 0), (1, 0), antisymmetric=True) == -1
    assert koszul_sign((1, 0), (1, 1)) == -1
    with pytest.raises(ValueError):
        koszul_sign((1, 0), (1,))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_koszul_sign_is_a_cocycle(n, data):
    # sign(sigma o tau; d) = sign(tau; d) * sign(sigma; tau . d)
    degrees = [data.draw(st.integers(-3, 3)) for _ in range(n)]
    perms = list(itertools.permutations(range(n)))
    for anti in (False, True):
        for sigma in perms:
            for tau in perms:
                moved = [degrees[t] for t in tau]
                lhs = koszul_sign(compose_perm(tau, sigma), degrees, anti)
                rhs = koszul_sign(tau, degrees, anti) * koszul_sign(sigma, moved, anti)
                assert lhs == rhs


def test_tensor_examples():
    k = GradedSpace.from_dims({0: 1})
    B = GradedSpace.from_dims({-1: 2, 3: 1})
    assert tensor(k, B).dims() == B.dims()
    odd = GradedSpace.from_dims({1: 1})
    assert tensor(odd, odd).dims() == {2: 1}
    A = GradedSpace.from_dims({0: 1, 1: 1})
    assert tensor(A, A).dims() == {0: 1, 1: 2, 2: 1}


def test_shift_examples():
    A = GradedSpace.from_dims({1: 1})
    assert shift(A, 0) == A
    assert shift(A, 1).dims() == {0: 1}
    assert shift(shift(A, 1), -1) == A


def two_term():
    return ChainComplex(GradedSpace.from_dims({0: 1, 1: 1}), SparseMatrix.from_dense([[0, 0], [1, 0]]))


def test_hom_complex_examples():
    k = ChainComplex.zero_differential(GradedSpace.from_dims({0: 1}))
    H = hom_complex(k, k)
    assert H.space.dims() == {0: 1} and H.differential.is_zero()
    X = ChainComplex.zero_differential(GradedSpace.from_dims({0: 1, 2: 2}))
    Y = ChainComplex.zero_differential(GradedSpace.from_dims({1: 1}))
    assert hom_complex(X, Y).differential.is_zero()
    # Hom of an acyclic complex is acyclic
    assert set(cohomology_dims(hom_complex(two_term(), two_term())).values()) == {0}


def test_cohomology_examples():
    X = ChainComplex.zero_differential(GradedSpace.from_dims({0: 2, 3: 1}))
    assert cohomology_dims(X) == {0: 2, 3: 1}
    assert cohomology_dims(two_term()) == {0: 0, 1: 0}


def random_complex(rng: random.Random) -> ChainComplex:
    """Random complex built as d = P N P^{-1} with N a nilpotent shift pattern."""
    degrees = sorted(rng.choice((-1, 0, 1, 2)) for _ in range(rng.randint(0, 4)))
    space = GradedSpace.from_dims({d: degrees.count(d) for d in set(degrees)})
    n = space.dim()
    flat = space.flat_degrees()
    entries = []
    used_src, used_tgt = set(), set()
    for c in range(n):
        for r in range(n):
            if flat[r] == flat[c] + 1 and c not in used_src and r not in used_tgt and c not in used_tgt \
                    and r not in used_src and rng.random() < 0.6:
                entries.append((r, c, Fraction(rng.randint(1, 3))))
                used_src.add(c)
                used_tgt.add(r)
    return ChainComplex(space, SparseMatrix.from_entries(n, n, entries))


def test_hom_complex_squares_to_zero_random():
    rng = random.Random(11)
    for _ in range(50):
        X, Y = random_complex(rng), random_complex(rng)
        H = hom_complex(X, Y)  # construction asserts D^2 = 0
        dims = cohomology_dims(H)
        assert euler_characteristic(dims) == euler_characteristic(H.space.dims())


def test_non_complex_rejected():
    space = GradedSpace.from_dims({0: 1, 1: 1})
    with pytest.raises(ValueError):
        ChainComplex(space, SparseMatrix.from_dense([[1, 0], [0, 0]]))
