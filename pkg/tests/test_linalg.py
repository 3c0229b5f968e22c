from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from ellmono import linalg
from conftest import sympy_det

small = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def square_matrix(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return draw(matrices(n, n))


@st.composite
def symmetric_matrix(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = draw(small)
    return m


@given(square_matrix())
def test_determinant_matches_sympy(m):
    assert linalg.determinant(m) == sympy_det(m)


def test_determinant_needs_row_swap():
    assert linalg.determinant([[0, 1], [1, 0]]) == -1
    assert linalg.determinant([[0, 0], [0, 1]]) == 0


def test_smith_form_of_a2():
    diag, u, v = linalg.smith_decomposition([[-2, 1], [1, -2]])
    assert diag == [1, 3]
    assert abs(linalg.determinant(u)) == 1 and abs(linalg.determinant(v)) == 1


@settings(max_examples=60)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_decomposition_reconstructs(rows, cols, data):
    m = data.draw(matrices(rows, cols))
    diag, u, v = linalg.smith_decomposition(m)
    s = linalg.matmul(linalg.matmul(u, m), v)
    for i in range(rows):
        for j in range(cols):
            expected = diag[i] if i == j and i < len(diag) else 0
            assert s[i][j] == expected
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert abs(linalg.determinant(u)) == 1 and abs(linalg.determinant(v)) == 1


@settings(max_examples=60)
@given(st.integers(1, 3), st.integers(1, 5), st.data())
def test_integer_kernel_is_saturated_kernel(rows, cols, data):
    m = data.draw(matrices(rows, cols))
    ker = linalg.integer_kernel(m, cols)
    for k in ker:
        assert not any(linalg.matvec(m, k))
    rank = len(linalg.invariant_factors(m))
    assert len(ker) == cols - rank
    if ker:
        assert all(d == 1 for d in linalg.invariant_factors(ker))


def test_solve_integral_statuses():
    assert linalg.solve_integral([(2, 0), (0, 2)], (4, 2)) == ("integral", (2, 1))
    assert linalg.solve_integral([(2, 0), (0, 2)], (1, 0))[0] == "rational"
    assert linalg.solve_integral([(1, 0)], (0, 1))[0] == "none"
    assert linalg.solve_integral([], (0, 0)) == ("integral", ())


@given(symmetric_matrix())
def test_congruence_diagonalization(g):
    diag, cols = linalg.congruence_diagonalize(g)
    n = len(g)
    for i in range(n):
        for j in range(n):
            val = sum(cols[i][a] * g[a][b] * cols[j][b] for a in range(n) for b in range(n))
            assert val == (diag[i] if i == j else 0)
    assert sympy.Matrix(cols).rank() == n


def test_congruence_diagonalization_all_zero_diagonal():
    diag, cols = linalg.congruence_diagonalize([[0, 1], [1, 0]])
    assert sorted(x > 0 for x in diag) == [False, True]


def test_primitive_integer():
    assert linalg.primitive_integer([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert linalg.primitive_integer([0, 0]) == (0, 0)
    assert linalg.primitive_integer([4, 6]) == (2, 3)


@settings(max_examples=60)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_span_membership_agrees_with_smith_solver(k, n, data):
    vs = data.draw(matrices(k, n))
    t = data.draw(st.lists(small, min_size=n, max_size=n))
    assert linalg.in_integer_span(vs, t) == (linalg.solve_integral(vs, t)[0] == "integral")


def test_integer_inverse():
    m = ((2, 1), (1, 1))
    assert linalg.matmul(m, linalg.integer_inverse(m)) == linalg.identity(2)
