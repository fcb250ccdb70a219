from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plsigma.corpus import thompson_a, thompson_b
from plsigma.pl import (IDENTITY, DuplicateX, EmptyBreakpointList, IntervalSpec, NonMonotone, PLMap,
                        commutator, compose, conjugate, evaluate, evaluate_inverse, fixed_set,
                        invert, make_plmap, power, rescale, support, translate)

from conftest import oracle, plmaps, sample_points

A, B = thompson_a(), thompson_b()


def test_make_identity_cases():
    assert make_plmap([(0, 0)], 1, 1) == IDENTITY
    assert make_plmap([(0, 0), (Q(1, 2), Q(1, 2)), (1, 1)], 1, 1) == IDENTITY
    assert IDENTITY.is_identity()


def test_thompson_a_slopes_from_difference_quotients():
    bps = [(0, 0), (Q(1, 2), Q(1, 4)), (Q(3, 4), Q(1, 2)), (1, 1)]
    f = make_plmap(bps, 1, 1)
    quotients = [(Q(y2) - Q(y1)) / (Q(x2) - Q(x1)) for (x1, y1), (x2, y2) in zip(bps, bps[1:])]
    assert quotients == [Q(1, 2), 1, 2]
    assert f.piece_slopes() == [1, Q(1, 2), 1, 2, 1]
    assert len(f.xs) == 4


def test_bad_breakpoints():
    with pytest.raises(EmptyBreakpointList):
        make_plmap([])
    with pytest.raises(DuplicateX):
        make_plmap([(0, 0), (0, 1)])
    with pytest.raises(NonMonotone):
        make_plmap([(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        make_plmap([(0, 0)], 0, 1)


def test_evaluate_examples():
    assert evaluate(A, Q(1, 2)) == Q(1, 4)
    assert evaluate(A, Q(7, 8)) == Q(3, 4) == 2 * Q(7, 8) - 1
    assert evaluate(IDENTITY, Q(22, 7)) == Q(22, 7)
    assert evaluate_inverse(A, Q(1, 4)) == Q(1, 2)


def test_compose_examples():
    assert compose(IDENTITY, A) == A
    AA = compose(A, A)
    assert AA.slope_right_of(0) == Q(1, 4)
    assert AA.slope_left_of(1) == 4
    grid = [Q(k, 64) for k in range(65)]
    assert all(AA(x) == A(A(x)) for x in grid)


def test_invert_examples():
    assert invert(IDENTITY) == IDENTITY
    assert invert(A).breakpoints == [(0, 0), (Q(1, 4), Q(1, 2)), (Q(1, 2), Q(3, 4)), (1, 1)]


def test_power_examples():
    assert power(A, 0) == IDENTITY
    assert power(A, 2) == compose(A, A)
    assert evaluate(power(A, 3), Q(1, 2)) == Q(1, 16) == A(A(A(Q(1, 2))))
    assert power(A, -2) == invert(compose(A, A))


def test_commutator_examples():
    assert commutator(A, A) == IDENTITY
    c = commutator(A, B)
    pts = [Q(k, 32) for k in range(33)]
    ab = [A(B(x)) for x in pts]
    ba = [B(A(x)) for x in pts]
    assert ab != ba
    assert not c.is_identity()
    bump1 = make_plmap([(0, 0), (Q(1, 8), Q(1, 16)), (Q(1, 4), Q(1, 4))])
    bump2 = make_plmap([(Q(1, 2), Q(1, 2)), (Q(5, 8), Q(11, 16)), (Q(3, 4), Q(3, 4))])
    assert commutator(bump1, bump2) == IDENTITY


def test_support_examples():
    assert not support(IDENTITY)
    assert support(A).intervals == ((0, 1),)
    assert support(B).intervals == ((Q(1, 2), 1),)
    # cross-check with samples: A(t) < t inside, fixed at the ends
    assert all(A(Q(k, 97)) < Q(k, 97) for k in range(1, 97))
    assert A(0) == 0 and A(1) == 1


def test_conjugate_moves_support():
    g = conjugate(A, B)
    assert support(g).intervals == ((Q(1, 4), 1),)
    assert support(g) == support(B).image(A)


def test_translate_and_rescale():
    t = translate(A, 2)
    assert support(t).intervals == ((2, 3),)
    assert t(Q(5, 2)) == 2 + A(Q(1, 2))
    r = rescale(A, Q(1, 2), Q(1, 4))
    assert support(r).intervals == ((Q(1, 4), Q(3, 4)),)


def test_interval_spec():
    assert IntervalSpec.compact(0, 1).to_json() == {"kind": "compact", "a": "0", "c": "1"}
    with pytest.raises(ValueError):
        IntervalSpec.compact(1, 1)
    assert IntervalSpec.from_json({"kind": "half-line"}) == IntervalSpec.halfline()


@given(plmaps())
def test_json_round_trip(f):
    assert PLMap.from_json(f.to_json()) == f


@given(plmaps(), plmaps())
def test_compose_matches_pointwise_oracle(f, g):
    h = compose(f, g)
    of, og = oracle(f), oracle(g)
    for x in sample_points(f, g, h):
        assert h(x) == of(og(x))


@given(plmaps())
def test_inverse_is_two_sided(f):
    assert compose(f, invert(f)) == IDENTITY
    assert compose(invert(f), f) == IDENTITY
    assert invert(invert(f)) == f


@given(plmaps(3), plmaps(3), plmaps(3))
@settings(max_examples=60)
def test_associativity(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(plmaps(), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=60)
def test_power_law(f, m, n):
    assert compose(power(f, m), power(f, n)) == power(f, m + n)


@given(plmaps())
def test_canonical_form_has_no_redundant_breakpoints(f):
    s = f.piece_slopes()
    assert all(a != b for a, b in zip(s, s[1:])) or f.is_affine()


@given(plmaps())
def test_fixed_set_and_support_partition(f):
    for x in sample_points(f):
        fixed = any(lo <= x <= hi for lo, hi in fixed_set(f))
        moved = any(lo < x < hi for lo, hi in support(f))
        assert fixed != moved
        assert fixed == (f(x) == x)
