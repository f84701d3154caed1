import random
from fractions import Fraction

import pytest

from clopen.baire import (BelowThreshold, Exact, constant, distance,
                          eventually_periodic, exact_distance, from_rule,
                          in_basic_nbhd, pair_points, query, slice_point)
from clopen.coding import encode, pair_code


def test_query_and_memo():
    calls = []

    def rule(n):
        calls.append(n)
        return n % 2

    p = from_rule(rule)
    assert query(p, 3) == 1
    assert query(p, 3) == 1
    assert calls == [3]


def test_constant_point():
    z = constant(0)
    assert z(17) == 0


def test_distance_examples():
    a = constant(0)
    b = eventually_periodic((0, 1), (0,))
    assert distance(a, b, 10) == Exact(Fraction(1, 2))
    c = eventually_periodic((1,), (0,))
    assert distance(a, c, 10) == Exact(Fraction(1))
    assert distance(a, constant(0), 4) == BelowThreshold(Fraction(1, 5))


def test_distance_requires_budget():
    with pytest.raises(ValueError):
        distance(constant(0), constant(0), 0)


def test_distance_never_decides_equality():
    a = eventually_periodic((), (0, 1))
    for budget in (1, 3, 10):
        assert isinstance(distance(a, a, budget), BelowThreshold)


def _random_point(rng):
    pre = [rng.randrange(3) for _ in range(rng.randrange(3))]
    period = [rng.randrange(3) for _ in range(rng.randrange(1, 4))]
    return eventually_periodic(pre, period)


def test_distance_symmetry_and_ultrametric():
    rng = random.Random(7)
    for _ in range(1000):
        a, b, c = (_random_point(rng) for _ in range(3))
        dab, dba = distance(a, b, 64), distance(b, a, 64)
        assert dab == dba
        dac, dbc = distance(a, c, 64), distance(b, c, 64)
        if all(isinstance(d, Exact) for d in (dab, dac, dbc)):
            vals = sorted((dab.value, dac.value, dbc.value))
            # every side is at most the maximum of the other two, which
            # forces the two largest to coincide
            assert vals[2] == vals[1]
            assert max(vals[0], vals[1]) >= vals[2]


def test_exact_distance_sees_through_representations():
    a = eventually_periodic((0,), (1, 0))
    b = eventually_periodic((), (0, 1))
    assert exact_distance(a, b) == 0
    c = eventually_periodic((), (1, 0))
    assert exact_distance(a, c) == Fraction(1)
    assert exact_distance(b, c) == Fraction(1)


def test_exact_distance_needs_hints():
    with pytest.raises(ValueError):
        exact_distance(from_rule(lambda n: 0), constant(0))


def test_in_basic_nbhd():
    z = constant(0)
    assert in_basic_nbhd(z, 0)
    assert in_basic_nbhd(z, encode((0, 0, 0)))
    assert not in_basic_nbhd(z, encode((1,)))


def test_in_basic_nbhd_monotone_under_prefix():
    from clopen.coding import is_prefix

    rng = random.Random(3)
    points = [_random_point(rng) for _ in range(6)]
    codes = list(range(80))
    for a in points:
        for s in codes:
            if not in_basic_nbhd(a, s):
                continue
            for t in codes:
                if is_prefix(t, s):
                    assert in_basic_nbhd(a, t)


def test_pair_points_and_slice():
    a = eventually_periodic((), (0, 1))
    b = eventually_periodic((), (2,))
    g = pair_points(a, b)
    for n in range(12):
        assert slice_point(g, 0)(n) == a(n)
        assert slice_point(g, 1)(n) == b(n)
        assert g(pair_code(3, n)) == 0
    # positions that do not code a component pair are zero
    for t in (0, 1, 2, encode((0, 1, 2)), encode((4,))):
        assert g(t) == 0


def test_slice_reads_pair_positions():
    g = from_rule(lambda t: t + 1)
    for n in range(6):
        assert slice_point(g, 3)(n) == g(pair_code(3, n))
