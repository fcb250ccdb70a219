"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line.  Run on its own with
``pytest tests/test_acceptance.py -v`` or as a script:
``python3 tests/test_acceptance.py``.
"""
import random
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction as Q
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plsigma import corpus  # noqa: E402
from plsigma.characters import CHI_ELL, germ_at, generator_values  # noqa: E402
from plsigma.groups import GroupSpec, enumerate_ball  # noqa: E402
from plsigma.logreal import LogReal, lr_sign  # noqa: E402
from plsigma.pl import (IntervalSpec, PLMap, commutator, compose, conjugate, invert,  # noqa: E402
                        make_plmap, power, support)
from plsigma.sigma import (MEMBER, NONMEMBER, UNKNOWN, GroupContext, classify_ray,  # noqa: E402
                           gamma_chi_components, known_complement, linear_on_left, monoid_property_test,
                           product_complement, product_symbols)
from plsigma.verify import verify_certificate  # noqa: E402

from oracles import decimal_sign, near_zero_logreal_data, random_logreal_data  # noqa: E402
from conftest import oracle_eval  # noqa: E402

RESULTS = {}


def report(n, title, ok, detail, started):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title} ({detail}; {time.time() - started:.1f}s)"
    RESULTS.setdefault(n, []).append(line)
    print(line)
    return ok


_CLASSIFIED = {}


def classified(name):
    """Probe classifications of a corpus entry, computed once per session."""
    if name not in _CLASSIFIED:
        e = corpus.entry(name)
        G = e.builder()
        ctx = GroupContext(G, radius=e.radius)
        _CLASSIFIED[name] = (G, [(p, classify_ray(G, p.chi, ctx)) for p in e.probes])
    return _CLASSIFIED[name]


def _numeric(v: LogReal):
    with localcontext() as c:
        c.prec = 100
        return Decimal(v.rat.numerator) / v.rat.denominator + sum(
            Decimal(k.numerator) / k.denominator * Decimal(p).ln() for p, k in v.logs)


def _germ_log_slopes(G, x, side):
    """ln of the endpoint slope of each generator from a difference quotient (independent of pl-core)."""
    out = []
    for f in G.generators.values():
        bps = list(zip(f.xs, f.ys))
        h = Q(1, 10**6)
        p, q = (x, x + h) if side == "left" else (x - h, x)
        s = (oracle_eval(bps, f.left_slope, f.right_slope, q) - oracle_eval(bps, f.left_slope, f.right_slope, p)) / h
        with localcontext() as c:
            c.prec = 100
            out.append((Decimal(s.numerator) / s.denominator).ln())
    return out


def _positive_multiple(u, v):
    with localcontext() as c:
        c.prec = 100
        cross = max(abs(u[i] * v[j] - u[j] * v[i]) for i in range(len(u)) for j in range(len(u)))
        dot = sum(a * b for a, b in zip(u, v))
    return cross < Decimal(10) ** -60 and dot > 0


# ------------------------------------------------------------------ 1

def test_criterion_01_thompson_exceptional_set():
    t = time.time()
    G, results = classified("thompson_f")
    lo = _germ_log_slopes(G, Q(0), "left")
    hi = _germ_log_slopes(G, Q(1), "right")
    ok, bad = len(results) == 12, []
    for p, r in results:
        vec = [_numeric(v) for v in generator_values(p.chi, G).values()]
        exceptional = _positive_multiple(vec, lo) or _positive_multiple(vec, hi)
        want = NONMEMBER if exceptional else MEMBER
        good = r.verdict == want and (r.verdict != MEMBER or r.certificate is not None)
        if not good:
            bad.append(p.label)
        ok &= good
    n_non = sum(r.verdict == NONMEMBER for _, r in results)
    ok &= n_non == 2
    assert report(1, "Thompson F complement = {[chi_l], [chi_r]}", ok,
                  f"{n_non} NonMember / {len(results)} rays, mismatches {bad}", t)


# ------------------------------------------------------------------ 2

def test_criterion_02_certificate_soundness():
    t = time.time()
    certs = []
    for name in ("thompson_f", "halfline_translation", "line_translation", "wreath"):
        _, results = classified(name)
        certs += [r.certificate.to_json() for _, r in results if r.verdict == MEMBER]
    reps = [verify_certificate(c) for c in certs]
    passed = sum(r.ok for r in reps)
    assert report(2, "every membership certificate passes the verifier", passed == len(certs) > 0,
                  f"{passed}/{len(certs)} verified", t)


# ------------------------------------------------------------------ 3

def test_criterion_03_monoid_laws():
    t = time.time()
    F = corpus.build("thompson_f")
    M = linear_on_left(Q(1, 8), CHI_ELL, F)
    rep = monoid_property_test(F, M, enumerate_ball(F, 5))
    ok = rep.laws_hold and rep.properness_witness is not None and rep.pairs > 1000
    assert report(3, "LinearOnLeft(1/8) monoid laws on the radius-5 ball", ok,
                  f"{rep.members} members, {rep.pairs} pairs, failures "
                  f"{rep.closure_failures}/{rep.inverse_failures}/{rep.quotient_failures}, "
                  f"witness via {rep.properness_source}", t)


# ------------------------------------------------------------------ 4

def test_criterion_04_disconnection_evidence():
    t = time.time()
    F = corpus.build("thompson_f")
    A, B = F.generators["A"], F.generators["B"]
    M = linear_on_left(Q(1, 8), CHI_ELL, F)
    gens = {"u": compose(B, invert(A)), "v": B}
    G = GroupSpec("F_from_M", F.interval, gens).validate()
    in_m = all(M.contains(g, CHI_ELL.value(g, F.interval)) for g in gens.values())
    rep = gamma_chi_components(G, CHI_ELL, ball=enumerate_ball(G, 6), monoid=M)
    ok = in_m and rep.monoid_violations == 0 and rep.components >= 2
    assert report(4, "chi_l-nonnegative ball from M-generators stays in M", ok,
                  f"generators in M: {in_m}, {rep.components} components, identity component "
                  f"{rep.identity_component} with {rep.monoid_violations} outside M", t)


# ------------------------------------------------------------------ 5

def test_criterion_05_product_formula():
    t = time.time()
    fa, fb = corpus.product_factors()
    comps = [(sp, known_complement(sp, GroupContext(sp, radius=4)).rays) for sp in (fa, fb)]
    rays = product_complement(comps)
    names = product_symbols([fa, fb])
    vanish = all(all(chi.table()[s].is_zero() for s in names[1 - k].values()) for k, _, chi in rays)
    x, y = corpus.bump_factors()
    empty = product_complement([(sp, known_complement(sp).rays) for sp in (x, y)])
    ok = len(rays) == 4 and vanish and empty == []
    assert report(5, "product complement: F x F gives 4 rays, bump x bump none", ok,
                  f"{len(rays)} rays, vanish on other factor {vanish}, bump complement {len(empty)}", t)


# ------------------------------------------------------------------ 6

def test_criterion_06_wreath_probe():
    t = time.time()
    f, h0 = corpus.wreath_f(), corpus.wreath_h0()
    a = [power(f, k)(corpus.WREATH_A0) for k in range(6)]
    c = [power(f, k)(corpus.WREATH_C0) for k in range(6)]
    hs = [conjugate(power(f, k), h0) for k in range(6)]
    ineq = c[1] < h0(a[1])
    ordering = above = commute = True
    for k in range(5):
        above_k = conjugate(hs[k], hs[k + 1])
        seq = [Q(0)] + a[:k + 1] + c[:k + 1][::-1] + [Q(1)]
        ordering &= all(x < y for x, y in zip(seq, seq[1:]))
        above &= support(above_k).hull()[0] > support(hs[k + 1]).hull()[1]
        commute &= commutator(hs[k + 1], above_k).is_identity()
    ok = ineq and ordering and above and commute
    assert report(6, "wreath: c1 < h0(a1), support-above and commutation for k <= 4", ok,
                  f"c1={c[1]} h0(a1)={h0(a[1])}, ordering {ordering}, above {above}, commute {commute}", t)


# ------------------------------------------------------------------ 7

@pytest.mark.parametrize("name,expected", [
    ("halfline_translation", {"CHI_ELL", "NEG_TAU_R"}),
    ("line_translation", {"TAU_ELL", "NEG_TAU_R"}),
])
def test_criterion_07_translation_corpora(name, expected):
    t = time.time()
    G, results = classified(name)
    germs_ok = G.translation_germs()
    for f in G.generators.values():
        for side, end in (("left", G.interval.a), ("right", G.interval.c)):
            if end is None:
                germs_ok &= germ_at(f, G.interval, side).slope == 1
    non = {r.matched for _, r in results if r.verdict == NONMEMBER}
    others_ok = all(r.verdict == MEMBER and r.certificate is not None
                    for _, r in results if r.verdict != NONMEMBER)
    ok = germs_ok and len(results) == 8 and non == expected and others_ok \
        and sum(r.verdict == NONMEMBER for _, r in results) == 2
    assert report(7, f"{name}: complement = {sorted(expected)}", ok,
                  f"translation germs {germs_ok}, NonMember {sorted(non)}, rest certified {others_ok}", t)


# ------------------------------------------------------------------ 8

def _random_map(rng, unit=False):
    if unit:
        n = rng.randint(1, 3)
        xs = sorted(rng.sample(range(1, 64), n))
        ys = sorted(rng.sample(range(1, 64), n))
        return make_plmap([(0, 0), *((Q(x, 64), Q(y, 64)) for x, y in zip(xs, ys)), (1, 1)])
    n = rng.randint(1, 4)
    x, y = Q(rng.randint(-32, 32), 8), Q(rng.randint(-32, 32), 8)
    pts = [(x, y)]
    for _ in range(n - 1):
        x += Q(rng.randint(1, 16), 8)
        y += Q(rng.randint(1, 16), 8)
        pts.append((x, y))
    return make_plmap(pts, Q(rng.randint(1, 16), 8), Q(rng.randint(1, 16), 8))


def _pointwise_equal(h, f, g):
    """h == f o g checked on breakpoints and midpoints with the oracle evaluator."""
    pts = sorted(set(f.xs) | set(g.xs) | set(h.xs))
    pts += [(p + q) / 2 for p, q in zip(pts, pts[1:])] + [pts[0] - 7, pts[-1] + 7]
    ev = lambda m, x: oracle_eval(list(zip(m.xs, m.ys)), m.left_slope, m.right_slope, x)
    return all(ev(h, x) == ev(f, ev(g, x)) for x in pts)


def test_criterion_08_algebra_suite():
    t = time.time()
    rng = random.Random(8)
    passed = total = 0
    for k in range(1000):
        f, g, h = _random_map(rng), _random_map(rng), _random_map(rng)
        kind = k % 4
        if kind == 0:
            ok = _pointwise_equal(compose(f, g), f, g)
        elif kind == 1:
            ok = compose(f, invert(f)).is_identity() and compose(invert(f), f).is_identity()
        elif kind == 2:
            ok = compose(compose(f, g), h) == compose(f, compose(g, h))
        else:
            ok = PLMap.from_json(f.to_json()) == f and invert(invert(f)) == f
        passed += ok
        total += 1
    iv = IntervalSpec.compact(0, 1)
    germ_ok = 0
    for _ in range(500):
        f, g = _random_map(rng, True), _random_map(rng, True)
        fg = compose(f, g)
        germ_ok += all(germ_at(fg, iv, s) == germ_at(f, iv, s).then(germ_at(g, iv, s)) for s in ("left", "right"))
    ok = passed == total == 1000 and germ_ok == 500
    assert report(8, "algebra identities and germ multiplicativity", ok,
                  f"{passed}/{total} identities, {germ_ok}/500 germ pairs", t)


# ------------------------------------------------------------------ 9

def test_criterion_09_logreal_sign_oracle():
    t = time.time()
    rng = random.Random(9)
    data = [random_logreal_data(rng) for _ in range(450)] + [near_zero_logreal_data(rng) for _ in range(50)]
    disagree = sum(lr_sign(LogReal.make(r, l)) != decimal_sign(r, l) for r, l in data)
    zeros = sum(decimal_sign(r, l) == 0 for r, l in data)
    ok = disagree == 0 and zeros == 0 and len(data) == 500
    assert report(9, "LogReal signs agree with a 100-digit decimal oracle", ok,
                  f"{disagree} disagreements on {len(data)} values (50 with |v| < 1e-6)", t)


# ------------------------------------------------------------------ 10

def test_criterion_10_mystery_group():
    t = time.time()
    G, results = classified("mystery")
    verdicts = {p.label: r.verdict for p, r in results}
    ok = verdicts == {"chi_ell": NONMEMBER, "chi_r": NONMEMBER, "(1, -1)": UNKNOWN}
    assert report(10, "mystery group: germ rays NonMember, third ray Unknown", ok, f"{verdicts}", t)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
