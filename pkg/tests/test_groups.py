from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plsigma import corpus
from plsigma.groups import (GroupSpec, ResourceBudgetExceeded, ValidationError, conjugate_into,
                            enumerate_ball, exponent_sums, irreducibility_check, kernel_generation_check,
                            nonabelian_witness, parse_word, relation_exponent_rank, word_inverse,
                            word_reduce, word_str)
from plsigma.pl import IntervalSpec, commutator, compose, invert, make_plmap, support

from conftest import oracle

UNIT = IntervalSpec.compact(0, 1)
BUMP_X = make_plmap([(0, 0), (Q(1, 8), Q(1, 16)), (Q(1, 4), Q(1, 4))])
BUMP_Y = make_plmap([(Q(1, 2), Q(1, 2)), (Q(5, 8), Q(11, 16)), (Q(3, 4), Q(3, 4))])


def bumps():
    return GroupSpec("bumps", UNIT, {"x": BUMP_X, "y": BUMP_Y}).validate()


def oracle_ball_size(G, radius, grid_bits=9):
    """Ball size via value vectors on a dyadic grid, built by pre-composition."""
    grid = [Q(k, 2**grid_bits) for k in range(2**grid_bits + 1)]
    letters = [oracle(f) for f in G.generators.values()] + [oracle(invert(f)) for f in G.generators.values()]
    start = tuple(grid)
    seen, frontier = {start}, [start]
    for _ in range(radius):
        nxt = []
        for vals in frontier:
            for x in letters:
                v = tuple(x(p) for p in vals)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return len(seen)


def test_ball_small_radii(F):
    assert len(enumerate_ball(F, 0)) == 1
    b1 = enumerate_ball(F, 1)
    assert len(b1) == 5
    assert len(set(b1.maps)) == 5


def test_thompson_growth(F, F_ctx):
    # sphere sizes of F in the generators A, B
    assert F_ctx.ball.layer_sizes == [1, 4, 12, 36, 108, 314, 906]
    assert len(F_ctx.ball) == 1381


def test_thompson_ball_matches_grid_oracle(F):
    assert len(enumerate_ball(F, 4)) == oracle_ball_size(F, 4) == 161


def test_free_abelian_ball():
    G = bumps()
    ball = enumerate_ball(G, 2)
    assert len(ball) == 13 == len({(i, j) for i in range(-2, 3) for j in range(-2, 3) if abs(i) + abs(j) <= 2})
    comm = {word_reduce(parse_word(w)) for w in ("x y x^-1 y^-1", "y x y^-1 x^-1")}
    found = {r for r in ball.relations}
    assert any(word_reduce(r) in comm or word_reduce(word_inverse(r)) in comm for r in found) \
        or any(sorted(exponent_sums(r, ["x", "y"])) == [0, 0] and len(r) == 4 for r in found)


def test_relations_are_identities(F_ctx, F):
    for r in F_ctx.ball.relations[:200]:
        assert F.eval_word(r).is_identity()


def test_ball_edges_are_right_multiplications(F):
    ball = enumerate_ball(F, 3)
    for i, k, j in ball.edges:
        assert compose(ball.maps[i], F.letter_map(ball.letters[k])) == ball.maps[j]


def test_ball_cap():
    with pytest.raises(ResourceBudgetExceeded):
        enumerate_ball(corpus.build("thompson_f"), 6, cap=100)


def test_irreducibility_examples(F):
    assert irreducibility_check(F).irreducible
    two = GroupSpec("gap", UNIT, {"x": BUMP_X, "z": make_plmap([(Q(1, 2), Q(1, 2)), (Q(3, 4), Q(5, 8)), (1, 1)])})
    res = irreducibility_check(two.validate())
    assert not res.irreducible and res.witness == Q(3, 8)
    one = GroupSpec("one", UNIT, {"y": BUMP_Y}).validate()
    assert not irreducibility_check(one).irreducible


def test_nonabelian_examples(F):
    res = nonabelian_witness(F, enumerate_ball(F, 1))
    assert res.found and [word_str(w) for w in res.pair] == ["A", "B"]
    one = GroupSpec("one", UNIT, {"y": BUMP_Y}).validate()
    assert not nonabelian_witness(one, enumerate_ball(one, 4)).found
    G = bumps()
    assert not nonabelian_witness(G, enumerate_ball(G, 3)).found


def test_kernel_generation_examples(F, F_ctx):
    res = kernel_generation_check(F, enumerate_ball(F, 4))
    assert res.status == "VerifiedByLattice"
    for w in res.witnesses:
        g = F.eval_word(w)
        assert g.slope_left_of(1) == 1 and g.slope_right_of(0) != 1 or g.slope_right_of(0) == 1
    tagged = GroupSpec("tagged", UNIT, {"x": BUMP_X, "y": BUMP_Y}, {"x": "KerRight", "y": "KerLeft"}).validate()
    assert kernel_generation_check(tagged, enumerate_ball(tagged, 1)).status == "VerifiedByTags"
    G = corpus.build("cyclic_extension")
    assert kernel_generation_check(G, enumerate_ball(G, 3)).status == "NotVerified"


def test_thompson_kernel_germ_data():
    A, B = corpus.thompson_a(), corpus.thompson_b()
    ab = compose(A, invert(B))
    assert ab.slope_left_of(1) == 1 and ab.slope_right_of(0) == Q(1, 2)
    assert B.slope_right_of(0) == 1 and B.slope_left_of(1) == 2


def test_conjugate_into(F, F_ball5):
    A, B = corpus.thompson_a(), corpus.thompson_b()
    assert not conjugate_into(F, F_ball5, B, (0, Q(1, 2))).found
    h = commutator(B, compose(compose(A, B), invert(A)))
    hull = support(h).hull()
    assert 0 < hull[0] and hull[1] < 1
    res = conjugate_into(F, F_ball5, h, (0, Q(1, 2)))
    assert res.found
    assert support(res.image).within(0, Q(1, 2))
    assert res.image == compose(compose(res.conjugator, h), invert(res.conjugator))
    inside = conjugate_into(F, F_ball5, BUMP_X, (0, Q(1, 2)))
    assert inside.found and inside.word == ()


def test_conjugate_into_blocked_by_fixed_point():
    G = GroupSpec("gap", UNIT, {"x": BUMP_X, "y": BUMP_Y}).validate()
    assert not conjugate_into(G, enumerate_ball(G, 3), BUMP_Y, (0, Q(1, 4))).found


def test_validation_errors():
    out = make_plmap([(0, 0), (Q(1, 2), Q(3, 4)), (2, 2)])
    with pytest.raises(ValidationError) as e:
        GroupSpec("bad", UNIT, {"a": out}).validate()
    assert e.value.field == "generators.a"
    with pytest.raises(ValidationError):
        GroupSpec("bad", UNIT, {"x": BUMP_X}, {"x": "KerLeft"}).validate()


def test_spec_json_round_trip(F):
    assert GroupSpec.from_json(F.to_json()).same_as(F)


def test_wreath_abelianization_rank():
    G = corpus.build("wreath")
    ball = enumerate_ball(G, 4)
    assert relation_exponent_rank(ball, ["f"]) == 0


words = st.lists(st.tuples(st.sampled_from(["A", "B"]), st.sampled_from([1, -1])), max_size=8)


@given(words)
def test_word_inverse_evaluates_to_inverse(w):
    F = corpus.build("thompson_f")
    assert compose(F.eval_word(w), F.eval_word(word_inverse(w))).is_identity()
    assert F.eval_word(word_reduce(w)) == F.eval_word(w)
    assert parse_word(word_str(w)) == word_reduce(w)
