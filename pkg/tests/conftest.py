import itertools

import pytest
import sympy

from ellmono.lattice import direct_sum, make_standard

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def brute_vectors(gram, square, height, extra=None):
    """All coordinate vectors in the height box with the given square (independent oracle)."""
    n = len(gram)
    out = []
    for x in itertools.product(range(-height, height + 1), repeat=n):
        q = sum(x[i] * gram[i][j] * x[j] for i in range(n) for j in range(n))
        if q == square and (extra is None or extra(x)):
            out.append(x)
    return sorted(out)


def sympy_det(m):
    return int(sympy.Matrix(m).det()) if m else 1


def sympy_signature(m):
    """Signature from sympy's exact eigen-decomposition of a symmetric matrix."""
    if not m:
        return (0, 0, 0)
    charpoly = sympy.Matrix(m).charpoly()
    roots = sympy.Poly(charpoly.as_expr()).real_roots()
    pos = sum(1 for r in roots if r > 0)
    neg = sum(1 for r in roots if r < 0)
    return (pos, neg, len(m) - pos - neg)


@pytest.fixture(scope="session")
def U():
    return make_standard("U")


@pytest.fixture(scope="session")
def E8m():
    return make_standard("E", 8, -1)


@pytest.fixture(scope="session")
def A2m():
    return make_standard("A", 2, -1)


@pytest.fixture(scope="session")
def UE8(U, E8m):
    return direct_sum(U, E8m)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        status, text = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status}  {text}")
