import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from plsigma import corpus
from plsigma.groups import enumerate_ball
from plsigma.pl import make_plmap
from plsigma.sigma import GroupContext

small_pos = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=16)


@st.composite
def plmaps(draw, max_breaks=4):
    """Random PL homeomorphisms of the line with dyadic-ish rational breakpoints."""
    n = draw(st.integers(1, max_breaks))
    x0 = draw(st.fractions(min_value=-4, max_value=4, max_denominator=8))
    y0 = draw(st.fractions(min_value=-4, max_value=4, max_denominator=8))
    xs, ys = [x0], [y0]
    for _ in range(n - 1):
        xs.append(xs[-1] + draw(small_pos))
        ys.append(ys[-1] + draw(small_pos))
    return make_plmap(list(zip(xs, ys)), draw(small_pos), draw(small_pos))


def oracle_eval(bps, ls, rs, x):
    """Evaluation straight from the breakpoint list, independent of the library."""
    xs = [Fraction(p[0]) for p in bps]
    ys = [Fraction(p[1]) for p in bps]
    x = Fraction(x)
    if x <= xs[0]:
        return ys[0] + Fraction(ls) * (x - xs[0])
    if x >= xs[-1]:
        return ys[-1] + Fraction(rs) * (x - xs[-1])
    for i in range(len(xs) - 1):
        if xs[i] <= x <= xs[i + 1]:
            return ys[i] + (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) * (x - xs[i])
    raise AssertionError("unreachable")


def oracle(f):
    return lambda x: oracle_eval(list(zip(f.xs, f.ys)), f.left_slope, f.right_slope, x)


def sample_points(*maps, extra=()):
    """Breakpoints of the given maps, their midpoints and some outside points."""
    pts = set(Fraction(e) for e in extra)
    for f in maps:
        pts.update(f.xs)
    pts = sorted(pts)
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    lo, hi = (pts[0], pts[-1]) if pts else (Fraction(0), Fraction(1))
    return pts + mids + [lo - 3, lo - Fraction(1, 3), hi + Fraction(1, 7), hi + 5]


@pytest.fixture(scope="session")
def F():
    return corpus.build("thompson_f")


@pytest.fixture(scope="session")
def F_ctx(F):
    return GroupContext(F, radius=6)


@pytest.fixture(scope="session")
def F_ball5(F):
    return enumerate_ball(F, 5)


@st.composite
def unit_maps(draw, max_inner=3):
    """Random PL homeomorphisms of [0, 1] (identity outside)."""
    n = draw(st.integers(1, max_inner))
    xs = sorted(draw(st.sets(st.fractions(Fraction(1, 64), Fraction(63, 64), max_denominator=64),
                             min_size=n, max_size=n)))
    ys = sorted(draw(st.sets(st.fractions(Fraction(1, 64), Fraction(63, 64), max_denominator=64),
                             min_size=n, max_size=n)))
    return make_plmap([(0, 0), *zip(xs, ys), (1, 1)], 1, 1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        for line in mod.RESULTS[n]:
            terminalreporter.write_line(line)
