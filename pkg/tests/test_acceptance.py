"""Acceptance criteria 1-10, each with its runtime limit.

Every test records a PASS/FAIL line in ``conftest.ACCEPTANCE_RESULTS``; the
lines are printed in the terminal summary and, with ``-s``, as the tests run.
"""
import itertools
import random
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_RESULTS
from ellmono import linalg
from ellmono.isometry import (compose, conjugate, enumerate_orthogonal_group, identity, inverse,
                              is_in_O_prime_k, orientation_character, preserves_form,
                              real_spinor_norm, reflection)
from ellmono.lattice import (RootSearch, Signature, direct_sum, enumerate_roots, is_even,
                             make_standard, signature)
from ellmono.surfaces import (BPSingularity, build_surface_model, calibrated_conventions,
                              embed_milnor, fibre_complement, find_fibre_splitting_roots,
                              find_k3_extra_classes, find_multiple_fibre_span, milnor_form,
                              milnor_lattice)
from ellmono.vanishing import (VanishingSet, contains_diagram, default_pattern,
                               is_complete_vanishing_lattice, pattern_lattice,
                               reflection_group_order, verify_diagram)


@contextmanager
def criterion(k, text, limit):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS[k] = ("FAIL", text)
        print(f"\ncriterion {k}: FAIL  {text}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    status = "PASS" if ok else "FAIL"
    line = f"{text} ({elapsed:.2f}s, limit {limit}s)"
    ACCEPTANCE_RESULTS[k] = (status, line)
    print(f"\ncriterion {k}: {status}  {line}")
    assert ok, f"criterion {k} took {elapsed:.2f}s, limit {limit}s"


@pytest.fixture(scope="module")
def ue8():
    return direct_sum(make_standard("U"), make_standard("E", 8, -1))


def random_word(rng, search, max_len=10):
    l = search.lattice
    g = identity(l)
    for _ in range(rng.randint(1, max_len)):
        g = compose(reflection(search.sample(rng)), g)
    return g


def test_criterion_1_reflection_algebra(ue8):
    with criterion(1, "reflections in 1000 random roots of U+E8(-1): square, form, v -> -v", 5):
        rng = random.Random(1)
        search = RootSearch(ue8, -2, height=3)
        ident = identity(ue8)
        for _ in range(1000):
            v = search.sample(rng)
            assert v.square == -2 and v.height <= 3
            s = reflection(v)
            assert compose(s, s) == ident
            assert preserves_form(s.matrix, ue8)
            assert s(v) == -v


def test_criterion_2_conjugation_identity(ue8):
    with criterion(2, "reflection in g(a) equals g s_a g^-1 for 500 random (g, a)", 10):
        rng = random.Random(2)
        search = RootSearch(ue8, -2, height=3)
        for _ in range(500):
            g = random_word(rng, search)
            a = search.sample(rng)
            lhs = reflection(g(a))
            assert lhs == conjugate(g, reflection(a))
            assert lhs == compose(compose(g, reflection(a)), inverse(g))


def test_criterion_3_conjugation_move(ue8):
    with criterion(3, "s_d(s_a(d)) = a for 200 random root pairs with a.d = 1", 5):
        rng = random.Random(3)
        search = RootSearch(ue8, -2, height=2)
        pairs = 0
        while pairs < 200:
            d = search.sample(rng)
            a = RootSearch(ue8, -2, height=2, constraints=[(d, 1)]).sample(rng)
            if a is None:
                continue
            assert a.dot(d) == 1 and a.square == -2
            assert reflection(d)(reflection(a)(d)) == a
            pairs += 1


def test_criterion_4_spinor_norm(ue8):
    with criterion(4, "spinor norm multiplicative on 1000 products, sign table exact", 10):
        u = make_standard("U")
        assert real_spinor_norm(reflection(u.vector((1, -1)))) == 1
        assert real_spinor_norm(reflection(u.vector((1, 1)))) == -1
        assert real_spinor_norm(identity(u)) == 1
        assert real_spinor_norm(compose(reflection(u.vector((1, -1))),
                                        reflection(u.vector((1, 1))))) == -1
        minus = type(identity(u))(((-1, 0), (0, -1)), u)
        assert real_spinor_norm(minus) == -1
        rng = random.Random(4)
        roots = RootSearch(ue8, -2, height=2)
        plus2 = RootSearch(ue8, 2, height=2)
        for _ in range(1000):
            a, b = identity(ue8), identity(ue8)
            for w in (0, 1):
                g = identity(ue8)
                for _ in range(rng.randint(0, 4)):
                    src = roots if rng.random() < 0.6 else plus2
                    g = compose(reflection(src.sample(rng)), g)
                a, b = (g, b) if w == 0 else (a, g)
            na, nb, nab = real_spinor_norm(a), real_spinor_norm(b), real_spinor_norm(compose(a, b))
            assert nab == na * nb
            assert nab == orientation_character(compose(a, b))


def test_criterion_5_inclusion():
    with criterion(5, "500 words in reflections in roots perp k lie in O'_k (K3, Dolgachev(2,3))",
                   30):
        for mults in [(), (2, 3)]:
            s = build_surface_model(1, mults)
            search = RootSearch(s.lattice, -2, height=2, constraints=[(s.k, 0)])
            rng = random.Random(5)
            for _ in range(500):
                g = random_word(rng, search)
                assert g(s.k) == s.k
                assert is_in_O_prime_k(g, s.k)
                assert orientation_character(g) == 1


def closure_inside(group, gens):
    """Subgroup generated by ``gens`` inside a finite set of matrices (BFS)."""
    elements = {g.matrix for g in group}
    start = linalg.identity(len(gens[0]))
    seen, frontier = {start}, [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                y = linalg.matmul(g, m)
                assert y in elements
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_criterion_6_small_lattice_oracle():
    with criterion(6, "reflection groups of A2, A3, D4 (-1) match the enumeration oracle", 60):
        for kind, n, order, full in [("A", 2, 6, 12), ("A", 3, 24, 48), ("D", 4, 192, 1152)]:
            l = make_standard(kind, n, -1)
            d = VanishingSet(tuple(l.basis()), l)
            group = enumerate_orthogonal_group(l)
            assert len(group) == full
            sub = closure_inside(group, [reflection(r).matrix for r in d])
            assert reflection_group_order(d) == len(sub) == order
            # the reflections in all roots generate the same group
            allroots = VanishingSet(tuple(enumerate_roots(l, -2, None)), l)
            assert reflection_group_order(allroots) == order


def test_criterion_7_milnor_lattices():
    with criterion(7, "Milnor lattices (11,3,2) and (17,3,2) even unimodular, match L'", 10):
        # calibration anchors come first
        assert calibrated_conventions()
        a1 = milnor_lattice((2, 2, 2))
        assert a1.gram == ((-2,),)
        a2 = milnor_lattice((3, 2, 2))
        a2_ref = make_standard("A", 2, -1)
        assert (a2.rank, a2.determinant, is_even(a2), signature(a2)) == \
            (2, a2_ref.determinant, True, signature(a2_ref))
        for k, pg, rank, sig in [(2, 1, 20, (2, 18)), (3, 2, 32, (4, 28))]:
            sing = BPSingularity.e_series(k)
            m = milnor_lattice(sing)
            assert sing.milnor_number == rank == 12 * k - 4
            assert m.rank == rank and is_even(m) and abs(m.determinant) == 1
            assert signature(m) == Signature(*sig, 0)
            for conv in calibrated_conventions():
                mc = milnor_form(sing.exponents, conv)
                assert signature(mc) == signature(m) and abs(mc.determinant) == 1
            verdict = embed_milnor(build_surface_model(pg), m)
            assert verdict.match


def test_criterion_8_complete_vanishing_lattice():
    with criterion(8, "E8(-1), 240 roots: (1),(2) true, (3) regression value; planted variant "
                      "complete", 120):
        e8 = make_standard("E", 8, -1)
        roots = VanishingSet(tuple(enumerate_roots(e8, -2, None)), e8)
        assert len(roots) == 240
        rep = is_complete_vanishing_lattice(e8, roots)
        assert rep.generates is True and rep.orbit == "true"
        # the six-vertex pattern has a pairing of 2 between distinct roots,
        # impossible in a definite lattice: regression value "false"
        assert rep.diagram == "false"
        p = default_pattern()
        pl, pd = pattern_lattice(p)
        planted = is_complete_vanishing_lattice(pl, pd, p)
        assert planted.generates and planted.orbit in ("true", "certified")
        assert planted.diagram == "true" and verify_diagram(pd, p, planted.witness)
        assert planted.overall == "complete (certified)"
        big = direct_sum(e8, pl)
        d = VanishingSet(tuple([big.vector(v.coords + (0,) * 6) for v in roots]
                               + [big.vector((0,) * 8 + b.coords) for b in pl.basis()]), big)
        w = contains_diagram(d, p)
        assert w is not None and verify_diagram(d, p, w)


def test_criterion_9_surface_invariants():
    with criterion(9, "surface model rank, signature and canonical class for four (pg, mu)", 10):
        for pg, mults in [(1, ()), (1, (2, 3)), (2, ()), (3, (2, 2))]:
            s = build_surface_model(pg, mults)
            chi = pg + 1
            assert s.lattice.rank == 12 * chi - 2
            assert signature(s.lattice) == Signature(2 * chi - 1, 10 * chi - 1, 0)
            # k = (chi - 2) f + sum (m_i - 1) f_i, computed from the classes
            expected = s.f * (chi - 2)
            for mi in mults:
                expected = expected + s.fibre_class(mi) * (mi - 1)
            assert s.k == expected
            assert s.f.square == 0 and s.k.square == 0
            for mi in mults:
                assert s.fibre_class(mi) * mi == s.f
        assert build_surface_model(1).k.is_zero()
        p, q, n = 2, 3, 2
        assert build_surface_model(1, (2, 3)).k == build_surface_model(1, (2, 3)).e * (n * p * q - p - q)
        assert build_surface_model(1, (2, 3)).k_scalar == 7
        s2 = build_surface_model(2)
        assert s2.k == s2.f


def in_span_brute(vectors, target, bound=6):
    for cs in itertools.product(range(-bound, bound + 1), repeat=len(vectors)):
        if all(sum(c * v[i] for c, v in zip(cs, vectors)) == t for i, t in enumerate(target)):
            return True
    return False


def test_criterion_10_witness_searches():
    with criterion(10, "fibre splitting, multiple-fibre span and K3 extra classes re-verify", 60):
        k3 = build_surface_model(1)
        dol = build_surface_model(1, (2, 3))
        for s in (k3, dol):
            a, a2 = find_fibre_splitting_roots(s)
            assert a.square == a2.square == -2 and a + a2 == s.f
            assert max(a.height, a2.height) <= 3
        for mi in (2, 3):
            a, a2 = find_multiple_fibre_span(dol, mi)
            assert a.square == a2.square == -2
            assert in_span_brute([a.coords, a2.coords, dol.f.coords], dol.fibre_class(mi).coords)
        a, a2, sigma = find_k3_extra_classes(k3)
        assert a + a2 == k3.f and a.square == a2.square == sigma.square == -2
        assert a.dot(sigma) == 1 and a2.dot(sigma) == 0
        assert fibre_complement(k3).radical == k3.e
