from hypothesis import given, settings, strategies as st

from ellmono.permgroup import StabilizerChain, group_order, inv, mul


def closure(gens, n):
    """Brute-force group generated by permutations (independent oracle)."""
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def test_known_orders():
    assert group_order([(1, 0, 2, 3), (1, 2, 3, 0)], 4) == 24
    assert group_order([(1, 2, 3, 4, 5, 6, 7, 0), (1, 0, 2, 3, 4, 5, 6, 7)], 8) == 40320
    assert group_order([(1, 2, 0, 3, 4, 5), (0, 1, 2, 4, 5, 3)], 6) == 9
    assert group_order([], 5) == 1
    # alternating group A5 from two 3-cycles
    assert group_order([(1, 2, 0, 3, 4), (0, 1, 3, 4, 2)], 5) == 60


def test_inverse():
    p = (2, 0, 3, 1)
    assert mul(p, inv(p)) == (0, 1, 2, 3)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.data())
def test_matches_brute_force(n, data):
    k = data.draw(st.integers(0, 3))
    gens = [tuple(data.draw(st.permutations(range(n)))) for _ in range(k)]
    chain = StabilizerChain(gens, n)
    group = closure(gens, n)
    assert chain.order() == len(group)
    for g in group:
        assert g in chain
    for p in data.draw(st.lists(st.permutations(range(n)), max_size=5)):
        assert (tuple(p) in chain) == (tuple(p) in group)
