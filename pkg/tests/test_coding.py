import itertools
from fractions import Fraction

from clopen.coding import (append, decode, encode, index_of_rational, is_prefix, lh,
                           pair, pair_code, proj, quad_code, rational_of_index,
                           unpair)


def test_empty_sequence_codes_to_zero():
    assert encode(()) == 0
    assert decode(0) == ()


def test_singleton_zero_codes_to_one():
    assert encode((0,)) == 1


def test_round_trip_examples():
    assert decode(encode((1, 2, 3))) == (1, 2, 3)
    assert decode(encode((7, 4))) == (7, 4)


def test_round_trip_exhaustive_small():
    for n in range(5):
        for u in itertools.product(range(5), repeat=n):
            assert decode(encode(u)) == u


def test_decode_total_and_injective():
    seen = set()
    for s in range(3000):
        u = decode(s)
        assert u not in seen
        seen.add(u)
        assert encode(u) == s


def test_pair_unpair_inverse():
    for z in range(500):
        a, b = unpair(z)
        assert pair(a, b) == z


def test_lh_and_proj():
    assert lh(0) == 0
    s = encode((7, 4))
    assert lh(s) == 2
    assert proj(s, 0) == 7
    assert proj(s, 1) == 4
    # entries past the length read as zero
    assert proj(encode((7,)), 5) == 0
    assert proj(0, 0) == 0


def test_append_extends():
    for u in ((), (3,), (1, 2), (0, 0, 4)):
        s = encode(u)
        t = append(s, 9)
        assert lh(t) == lh(s) + 1
        assert proj(t, lh(s)) == 9
        assert decode(t)[: len(u)] == u


def test_append_exhaustive_small():
    for n in range(4):
        for u in itertools.product(range(5), repeat=n):
            s = encode(u)
            for k in range(5):
                t = append(s, k)
                assert lh(t) == n + 1
                assert proj(t, n) == k
                assert is_prefix(s, t)


def test_is_prefix():
    a = encode((1, 2))
    b = encode((1, 2, 3))
    assert is_prefix(a, b)
    assert not is_prefix(b, a)
    assert is_prefix(0, a)
    assert is_prefix(a, a)


def test_is_prefix_partial_order():
    codes = [encode(u) for n in range(4) for u in itertools.product(range(3), repeat=n)]
    for s in codes:
        assert is_prefix(s, s)
    for s in codes:
        for t in codes:
            if is_prefix(s, t) and is_prefix(t, s):
                assert s == t
            for r in codes:
                if is_prefix(s, t) and is_prefix(t, r):
                    assert is_prefix(s, r)


def test_rational_of_index_examples():
    assert rational_of_index(encode((0, 1, 1))) == Fraction(1, 2)
    assert rational_of_index(encode((1, 1, 0))) == Fraction(-1)
    assert rational_of_index(encode((0, 0, 5))) == 0


def test_rational_of_index_short_codes():
    assert rational_of_index(0) == 0
    assert rational_of_index(encode((1,))) == 0  # -(0/1)


def test_rationals_all_reachable():
    for p in range(-20, 21):
        for q in range(1, 21):
            target = Fraction(p, q)
            s = index_of_rational(target)
            assert rational_of_index(s) == target


def test_pair_and_quad_codes_match_encode():
    for i in range(5):
        for n in range(5):
            assert pair_code(i, n) == encode((i, n))
    assert quad_code(1, 2, 3, 4) == encode((1, 2, 3, 4))
