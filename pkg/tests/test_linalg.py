from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from defcalc.linalg import SparseMatrix, fraction_str, kernel_basis, rank, solve


def test_rank_examples():
    assert rank(SparseMatrix(0, 0)) == 0
    assert rank(SparseMatrix.identity(3)) == 3
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.identity(2)) == []
    assert len(kernel_basis(SparseMatrix.zero(2, 3))) == 3
    (v,) = kernel_basis(SparseMatrix.from_dense([[1, 1]]))
    assert v.get(0, 0) == -v.get(1, 0) != 0


def test_solve_examples():
    b = [Fraction(3, 7), Fraction(-2), Fraction(0)]
    x = solve(SparseMatrix.identity(3), b)
    assert [x.get(i, 0) for i in range(3)] == b
    x = solve(SparseMatrix.from_dense([[1, 1]]), [2])
    assert x.get(0, 0) + x.get(1, 0) == 2
    assert solve(SparseMatrix.zero(1, 1), [1]) is None


@st.composite
def sparse_matrices(draw, max_dim=12):
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    entries = []
    if rows and cols:
        n = draw(st.integers(0, rows * cols))
        for _ in range(n):
            entries.append((draw(st.integers(0, rows - 1)), draw(st.integers(0, cols - 1)),
                            Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))))
    return SparseMatrix.from_entries(rows, cols, entries)


@settings(max_examples=150, deadline=None)
@given(sparse_matrices())
def test_rank_nullity_and_kernel(M):
    ker = kernel_basis(M)
    assert rank(M) + len(ker) == M.cols
    for v in ker:
        assert M.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(sparse_matrices())
def test_rank_matches_sympy(M):
    dense = sympy.Matrix(M.rows, M.cols, lambda i, j: 0)
    for r, c, v in M.entries():
        dense[r, c] = sympy.Rational(v.numerator, v.denominator)
    assert rank(M) == dense.rank()


def test_rank_nullity_large_random():
    import random

    rng = random.Random(7)
    for size in (60, 200):
        entries = [(rng.randrange(size), rng.randrange(size), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
                   for _ in range(3 * size)]
        M = SparseMatrix.from_entries(size, size, entries)
        ker = kernel_basis(M)
        assert rank(M) + len(ker) == size
        assert all(M.apply(v) == {} for v in ker)


@settings(max_examples=100, deadline=None)
@given(sparse_matrices(), st.data())
def test_solve_contract(M, data):
    b = {i: Fraction(data.draw(st.integers(-2, 2))) for i in range(M.rows)}
    b = {i: v for i, v in b.items() if v}
    x = solve(M, b)
    if x is not None:
        assert M.apply(x) == b
    else:
        data_aug = {r: dict(row) for r, row in M.data.items()}
        for r, v in b.items():
            data_aug.setdefault(r, {})[M.cols] = v
        aug = SparseMatrix(M.rows, M.cols + 1, data_aug)
        assert rank(aug) == rank(M) + 1


@given(st.fractions())
def test_fraction_string_roundtrip(q):
    assert Fraction(fraction_str(q)) == q


@settings(max_examples=50, deadline=None)
@given(sparse_matrices())
def test_json_roundtrip(M):
    assert SparseMatrix.from_json(M.to_json()) == M
    entries = M.to_json()["entries"]
    assert entries == sorted(entries, key=lambda e: (e[0], e[1]))
