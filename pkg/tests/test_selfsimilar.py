import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_slice, slice_at

from hadspec.errors import CoprimalityError, NotMemberError
from hadspec.selfsimilar import (
    DigitSystem,
    coding,
    dp_intersection,
    lattice_points,
    member,
    similarity_dimension,
)

F = Fraction
K41 = DigitSystem.create(4, [0, 1])
ORACLE_SYSTEMS = [(4, (0, 1)), (4, (0, 3)), (6, (0, 3)), (6, (0, 1, 2))]


@pytest.fixture(scope="module")
def oracle_sets():
    return {sys: brute_force_slice(*sys) for sys in ORACLE_SYSTEMS}


def test_member_examples():
    m = member(K41, F(1, 3))
    assert m.is_member and m.certificate.preperiod == () and m.certificate.period == (1,)
    assert not member(K41, F(1, 5)).is_member
    m = member(K41, 0)
    assert m.is_member and m.certificate.preperiod == () and m.certificate.period == (0,)


def test_outside_hull_is_rejected():
    assert not member(K41, F(1, 2))
    assert not member(K41, F(-1, 7))


def test_coding_examples():
    c = coding(K41, F(1, 3))
    assert (c.preperiod, c.period) == ((), (1,))
    c = coding(DigitSystem.create(4, [0, 3]), 1)
    assert (c.preperiod, c.period) == ((), (3,))
    c = coding(DigitSystem.create(4, [0, 2]), F(2, 3))
    assert (c.preperiod, c.period) == ((), (2,))
    with pytest.raises(NotMemberError):
        coding(K41, F(1, 5))


def test_lattice_examples():
    assert lattice_points(K41, 2) == [0]
    assert lattice_points(K41, 6) == [0, F(1, 3)]
    assert lattice_points(K41, 10) == [0]


@pytest.mark.parametrize("sys", ORACLE_SYSTEMS, ids=str)
def test_lattice_points_match_brute_force(sys, oracle_sets):
    q, A = sys
    ds = DigitSystem.create(q, A)
    values = oracle_sets[sys]
    for u in range(1, 41):
        assert lattice_points(ds, u) == slice_at(values, u), u


@pytest.mark.parametrize("sys", ORACLE_SYSTEMS, ids=str)
def test_lattice_points_agree_with_single_queries(sys):
    ds = DigitSystem.create(*sys)
    lo, hi = ds.hull
    for u in (7, 15, 26, 35):
        pts = set(lattice_points(ds, u))
        v = math.ceil(lo * u)
        while F(v, u) <= hi:
            assert member(ds, F(v, u), certify=False).is_member == (F(v, u) in pts)
            v += 1


def test_rational_digits():
    # K(4, {0, 1/2}) = K(4, {0, 1}) / 2
    half = DigitSystem.create(4, [0, F(1, 2)])
    assert half.w == 2
    assert lattice_points(half, 6) == [0, F(1, 6)]
    assert member(half, F(1, 6)).certificate.period == (F(1, 2),)


@pytest.mark.parametrize("sys", ORACLE_SYSTEMS, ids=str)
def test_shift_invariance_of_denominator(sys):
    ds = DigitSystem.create(*sys)
    q = ds.q
    for u in range(1, 60):
        if math.gcd(u, q) != 1:
            continue
        for x in lattice_points(ds, u):
            if x.denominator != u:
                continue
            for a in ds.A:
                y = q * x - a
                if member(ds, y, certify=False):
                    assert y.denominator == u


@pytest.mark.parametrize("sys", ORACLE_SYSTEMS, ids=str)
def test_hull_containment(sys):
    ds = DigitSystem.create(*sys)
    lo, hi = ds.hull
    for u in (9, 13, 35, 63):
        assert all(lo <= x <= hi for x in lattice_points(ds, u))


@settings(max_examples=150, deadline=None)
@given(
    sys=st.sampled_from(ORACLE_SYSTEMS + [(3, (0, 2)), (5, (-1, 0, 3)), (7, (0, 2, 5))]),
    v=st.integers(-200, 200),
    u=st.integers(1, 120),
)
def test_certificate_replays_exactly(sys, v, u):
    ds = DigitSystem.create(*sys)
    x = F(v, u)
    m = member(ds, x)
    if m.is_member:
        cert = m.certificate
        assert cert.value(ds.q) == x
        assert len(cert.period) >= 1
        # replay the orbit and come back to the periodic point
        y = x
        for a in cert.preperiod:
            y = ds.q * y - a
        z = y
        for a in cert.period:
            z = ds.q * z - a
            assert member(ds, z, certify=False)
        assert z == y


def test_dp_examples():
    r = dp_intersection(K41, 3, 4)
    assert r.levels == ((0,), (F(1, 3),), (), (), ())
    assert r.stabilization_index == 1
    r = dp_intersection(DigitSystem.create(4, [0, 2]), 3, 4)
    assert r.levels == ((0,), (F(2, 3),), (), (), ())
    assert r.stabilization_index == 1
    r = dp_intersection(K41, 5, 3)
    assert r.levels == ((0,), (), (), ())
    assert r.stabilization_index == 0
    with pytest.raises(CoprimalityError):
        dp_intersection(K41, 2, 3)


@pytest.mark.parametrize("sys,p", [((4, (0, 1)), 3), ((6, (0, 1, 2)), 5), ((4, (0, 3)), 7), ((6, (0, 3)), 7)])
def test_dp_levels_disjoint_and_closed(sys, p):
    ds = DigitSystem.create(*sys)
    r = dp_intersection(ds, p, 3)
    seen = set()
    for m, pts in enumerate(r.levels):
        assert seen.isdisjoint(pts)
        seen |= set(pts)
        for x in pts:
            for a in ds.A:
                y = ds.q * x - a
                if member(ds, y, certify=False):
                    assert y in pts


def test_similarity_dimension():
    assert similarity_dimension(K41) == pytest.approx(0.5)
    assert similarity_dimension(DigitSystem.create(6, [0, 3])) == pytest.approx(math.log(2) / math.log(6))
    assert similarity_dimension(DigitSystem.create(4, [0, 1, 2, 3])) == pytest.approx(1.0)
