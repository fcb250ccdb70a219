"""Concrete example groups with expected classifications and entry-specific probes.

All maps use dyadic (or small-prime) data with few breakpoints; the inequalities
each construction relies on are checked by :func:`run_probes` rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (CHI_ELL, CHI_R, LEFT, NEG_TAU_R, RIGHT, TAU_ELL, TabledChar, germ_at,
                         generator_values)
from .groups import (GroupSpec, enumerate_ball, irreducibility_check, kernel_generation_check,
                     relation_exponent_rank)
from .logreal import LogReal, slope_exponents
from .pl import (IntervalSpec, commutator, compose, conjugate, evaluate, invert, make_plmap, power,
                 rescale, support, translate)
from .sigma import (MEMBER, NONMEMBER, UNKNOWN, GroupContext, classify_ray, cyclic_extension_bounds,
                    known_complement, product_complement, product_spec,
                    product_symbols)


class UnknownEntry(KeyError):
    pass


class ProbeFailure(AssertionError):
    pass


# ------------------------------------------------------------------ maps

def thompson_a():
    return make_plmap([(0, 0), ("1/2", "1/4"), ("3/4", "1/2"), (1, 1)])


def thompson_b():
    return make_plmap([("1/2", "1/2"), ("3/4", "5/8"), ("7/8", "3/4"), (1, 1)])


def wreath_f():
    # pushes (0, 3/8) up and (3/8, 1) down; a1 = f(1/4) = 5/16, c1 = f(3/4) = 9/16
    return make_plmap([(0, 0), ("1/8", "1/4"), ("3/4", "9/16"), ("13/16", "5/8"), (1, 1)])


def wreath_h0():
    # bump on (1/4, 3/4) with h0(5/16) = 5/8 > 9/16
    return make_plmap([("1/4", "1/4"), ("9/32", "1/2"), ("5/16", "5/8"), ("11/16", "23/32"), ("3/4", "3/4")])


WREATH_A0, WREATH_C0 = Fraction(1, 4), Fraction(3, 4)


def _unit():
    return IntervalSpec.compact(0, 1)


def _tab(**vals):
    return TabledChar.make({k: v if isinstance(v, LogReal) else LogReal.make(v) for k, v in vals.items()})


# --------------------------------------------------------------- builders

def build_thompson_f() -> GroupSpec:
    return GroupSpec("thompson_f", _unit(), {"A": thompson_a(), "B": thompson_b()}).validate()


def build_mystery() -> GroupSpec:
    f = make_plmap([(0, 0), ("1/8", "1/4"), ("3/8", "3/8"), ("5/8", "5/8"), ("7/8", "3/4"), (1, 1)])
    g = make_plmap([(0, 0), ("1/16", "3/16"), ("1/4", "1/4"), ("19/20", "3/4"), (1, 1)])
    return GroupSpec("mystery", _unit(), {"f": f, "g": g}).validate()


def build_wreath() -> GroupSpec:
    return GroupSpec("wreath", _unit(), {"f": wreath_f(), "h": wreath_h0()}).validate()


def _window_f():
    return [rescale(m, "1/2", "1/4") for m in (thompson_a(), thompson_b())]


def build_cyclic_extension() -> GroupSpec:
    a, b = _window_f()
    return GroupSpec("cyclic_extension", _unit(), {"a": a, "b": b, "f": invert(thompson_a())}).validate()


def build_hnn() -> GroupSpec:
    a, b = _window_f()
    return GroupSpec("hnn", _unit(), {"a": a, "b": b, "f": wreath_f()}).validate()


def build_halfline() -> GroupSpec:
    v = make_plmap([(0, 0), (1, 2), (3, 3)])
    u = make_plmap([(1, 1), (2, 3)])
    return GroupSpec("halfline_translation", IntervalSpec.halfline(), {"v": v, "u": u}).validate()


def build_line() -> GroupSpec:
    p = make_plmap([(-1, -2), (0, 0)])
    q = make_plmap([(-1, -1), (0, 1)])
    return GroupSpec("line_translation", IntervalSpec.line(), {"p": p, "q": q}).validate()


def product_factors() -> list:
    f = build_thompson_f()
    g = GroupSpec("thompson_f_shifted", IntervalSpec.compact(2, 3),
                  {"A": translate(thompson_a(), 2), "B": translate(thompson_b(), 2)}).validate()
    return [f, g]


def bump_factors() -> list:
    b1 = make_plmap([(0, 0), ("1/8", "1/4"), ("1/2", "1/2")])
    b2 = make_plmap([("1/2", "1/2"), ("5/8", "3/4"), (1, 1)])
    return [GroupSpec("bump_low", IntervalSpec.compact(0, "1/2"), {"x": b1}).validate(),
            GroupSpec("bump_high", IntervalSpec.compact("1/2", 1), {"y": b2}).validate()]


def build_product() -> GroupSpec:
    return product_spec(product_factors(), "product")


def build_bump_product() -> GroupSpec:
    return product_spec(bump_factors(), "bump_product")


# ----------------------------------------------------------------- entries

@dataclass
class Probe:
    label: str
    chi: object
    expected: str
    matched: str | None = None


@dataclass
class CorpusEntry:
    name: str
    builder: object
    probes: list = field(default_factory=list)
    description: str = ""
    radius: int = 6


def _thompson_probes():
    L2, L3 = LogReal.log_of(2), LogReal.log_of(3)
    pts = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1), (1, 2), (2, -1),
           (L2, 1), (-L3, L2)]
    names = {L2: "ln2", -L3: "-ln3"}
    out = []
    for a, b in pts:
        if (a, b) == (-1, 0):
            exp, m = NONMEMBER, "CHI_ELL"
        elif (a, b) == (1, 1):
            exp, m = NONMEMBER, "CHI_R"
        else:
            exp, m = MEMBER, None
        out.append(Probe(f"({names.get(a, a)}, {names.get(b, b)})", _tab(A=a, B=b), exp, m))
    return out


def _eight(sym1, sym2, nonmember: dict):
    out = []
    for a, b in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]:
        m = nonmember.get((a, b))
        out.append(Probe(f"({a}, {b})", _tab(**{sym1: a, sym2: b}), NONMEMBER if m else MEMBER, m))
    return out


ENTRIES = {
    "thompson_f": CorpusEntry("thompson_f", build_thompson_f, _thompson_probes(),
                              "Thompson's group F on [0, 1]; complement = the two germ rays"),
    "mystery": CorpusEntry("mystery", build_mystery, [
        Probe("chi_ell", CHI_ELL, NONMEMBER, "CHI_ELL"),
        Probe("chi_r", CHI_R, NONMEMBER, "CHI_R"),
        Probe("(1, -1)", _tab(f=1, g=-1), UNKNOWN)],
        "two generators with independent endpoint slopes 2, 3 at 0 and 2, 5 at 1"),
    "wreath": CorpusEntry("wreath", build_wreath, [
        Probe("chi_ell", CHI_ELL, NONMEMBER, "CHI_ELL"),
        Probe("-chi_ell", CHI_ELL.scaled(-1), UNKNOWN),
        Probe("h", _tab(f=0, h=1), MEMBER),
        Probe("-h", _tab(f=0, h=-1), MEMBER)],
        "<f, h0> with h0 a bump on [1/4, 3/4] and c1 < h0(a1)"),
    "cyclic_extension": CorpusEntry("cyclic_extension", build_cyclic_extension, [
        Probe("chi_ell", CHI_ELL, NONMEMBER, "CHI_ELL"),
        Probe("chi_r", CHI_R, NONMEMBER, "CHI_R")],
        "F on [1/4, 3/4] extended by an element expanding at 0 and contracting at 1", radius=4),
    "hnn": CorpusEntry("hnn", build_hnn, [
        Probe("chi_ell", CHI_ELL, NONMEMBER, "CHI_ELL"),
        Probe("-chi_ell", CHI_ELL.scaled(-1), UNKNOWN)],
        "F on [1/4, 3/4] extended by f with f H f^-1 inside H (ascending HNN extension)", radius=4),
    "halfline_translation": CorpusEntry("halfline_translation", build_halfline,
                                        _eight("v", "u", {(1, 0): "CHI_ELL", (0, -1): "NEG_TAU_R"}),
                                        "half-line group with a translation germ at infinity"),
    "line_translation": CorpusEntry("line_translation", build_line,
                                    _eight("p", "q", {(-1, 0): "TAU_ELL", (0, -1): "NEG_TAU_R"}),
                                    "line group with translation germs at both ends"),
    "product": CorpusEntry("product", build_product, [], "F on [0, 1] times F on [2, 3]"),
    "bump_product": CorpusEntry("bump_product", build_bump_product, [], "two bumps with disjoint supports"),
}


def names() -> list:
    return list(ENTRIES)


def entry(name: str) -> CorpusEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise UnknownEntry(name) from None


def build(name: str) -> GroupSpec:
    return entry(name).builder()


def export(name: str) -> dict:
    e = entry(name)
    d = e.builder().to_json()
    if e.probes:
        d["probes"] = [{"label": p.label, "character": p.chi.to_json(), "expected": p.expected}
                       for p in e.probes]
    return d


# ------------------------------------------------------------------ probes

@dataclass
class ProbeReport:
    name: str
    checks: list = field(default_factory=list)  # (label, ok, detail)
    classifications: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def unknown_count(self) -> int:
        return sum(1 for c in self.classifications if c["verdict"] == UNKNOWN)

    def check(self, label, ok, detail=""):
        self.checks.append((label, bool(ok), detail))

    def to_json(self):
        return {"name": self.name, "ok": self.ok,
                "checks": [{"check": l, "ok": ok, "detail": d} for l, ok, d in self.checks],
                "classifications": self.classifications}


def classify_probes(G, probes, report: ProbeReport, radius: int = 6, ctx=None):
    ctx = ctx or GroupContext(G, radius=radius)
    for p in probes:
        res = classify_ray(G, p.chi, ctx)
        ok = res.verdict == p.expected and (p.matched is None or res.matched == p.matched)
        report.classifications.append({"label": p.label, "verdict": res.verdict, "expected": p.expected,
                                       "matched": res.matched, "result": res.to_json()})
        report.check(f"classify {p.label}", ok, f"{res.verdict} (expected {p.expected})")
    return ctx


def run_probes(name: str, strict: bool = False, radius: int | None = None) -> ProbeReport:
    e = entry(name)
    G = e.builder()
    rep = ProbeReport(name)
    r = radius or e.radius
    runner = _SPECIAL.get(name)
    if runner is not None:
        runner(G, rep, r)
    if e.probes:
        if name != "thompson_f" and name not in ("product", "bump_product"):
            irr = irreducibility_check(G)
            rep.check("irreducible", irr.irreducible)
        classify_probes(G, e.probes, rep, r)
    if strict and not rep.ok:
        bad = [l for l, ok, _ in rep.checks if not ok]
        raise ProbeFailure(f"{name}: {bad}")
    return rep


def wreath_data(kmax: int = 4):
    f, h0 = wreath_f(), wreath_h0()
    a = [power(f, k)(WREATH_A0) for k in range(kmax + 2)]
    c = [power(f, k)(WREATH_C0) for k in range(kmax + 2)]
    hs = [conjugate(power(f, k), h0) for k in range(kmax + 2)]
    return f, h0, a, c, hs


def _probe_wreath(G, rep, radius):
    f, h0, a, c, hs = wreath_data(4)
    rep.check("c1 < h0(a1)", c[1] < evaluate(h0, a[1]), f"c1={c[1]}, h0(a1)={evaluate(h0, a[1])}")
    rep.check("supp h0 = (a0, c0)", support(h0).intervals == ((WREATH_A0, WREATH_C0),))
    for k in range(5):
        seq = [Fraction(0)] + a[:k + 1] + c[:k + 1][::-1] + [Fraction(1)]
        rep.check(f"ordering k={k}", all(x < y for x, y in zip(seq, seq[1:])))
        above = conjugate(hs[k], hs[k + 1])
        lo = support(above).hull()[0]
        hi = support(hs[k + 1]).hull()[1]
        rep.check(f"support above k={k}", lo > hi, f"{lo} > {hi}")
        rep.check(f"commute k={k}", commutator(hs[k + 1], above).is_identity())
    for k in range(4):
        sub = GroupSpec(f"H{k}", G.interval, {f"h{i}": hs[i] for i in range(k + 1)})
        ball = enumerate_ball(sub, 4 if k < 2 else 3)
        rank = relation_exponent_rank(ball, sub.symbols)
        rep.check(f"abelianization rank k={k}", rank == 0, f"{len(ball.relations)} relations, rank {rank}")


def _probe_thompson(G, rep, radius):
    A, B = G.generators["A"], G.generators["B"]
    iv = G.interval
    rep.check("germs of A", (germ_at(A, iv, LEFT).slope, germ_at(A, iv, RIGHT).slope) == (Fraction(1, 2), 2))
    rep.check("germs of B", (germ_at(B, iv, LEFT).slope, germ_at(B, iv, RIGHT).slope) == (1, 2))
    rep.check("irreducible", irreducibility_check(G).irreducible)


def _probe_translation(G, rep, radius):
    iv = G.interval
    ok = True
    for f in G.generators.values():
        for side in (LEFT, RIGHT):
            if (iv.a if side == LEFT else iv.c) is None:
                ok &= germ_at(f, iv, side).slope == 1
    rep.check("translation germs", ok and G.translation_germs())


def _probe_mystery(G, rep, radius):
    iv = G.interval
    f, g = G.generators["f"], G.generators["g"]
    lefts = [slope_exponents(germ_at(m, iv, LEFT).slope) for m in (f, g)]
    rights = [slope_exponents(germ_at(m, iv, RIGHT).slope) for m in (f, g)]
    rep.check("left slopes {2, 3}", lefts == [{2: 1}, {3: 1}])
    rep.check("right slopes {2, 5}", rights == [{2: 1}, {5: 1}])
    rep.check("irreducible", irreducibility_check(G).irreducible)


def _probe_cyclic(G, rep, radius):
    ctx = GroupContext(G, radius=radius)
    kg = ctx.kernel_generation
    rep.check("kernel generation not verified", kg.status == "NotVerified", kg.status)
    b = cyclic_extension_bounds(G, ["a", "b"], "f", ctx)
    rep.check("bounds equality", b["equality"] and all(x["verdict"] == NONMEMBER for x in b["lower"]))
    rep.classifications.append({"label": "bounds", "verdict": "Bounds", "expected": "Bounds", "matched": None,
                                "result": b})


def _dyadic(q) -> bool:
    d = Fraction(q).denominator
    return d & (d - 1) == 0


def _probe_hnn(G, rep, radius):
    f = G.generators["f"]
    ok = True
    for s in ("a", "b"):
        y = conjugate(f, G.generators[s])
        ok &= support(y).within(Fraction(1, 4), Fraction(3, 4))
        ok &= all(_dyadic(x) and _dyadic(v) for x, v in y.breakpoints)
        ok &= all(q.numerator & (q.numerator - 1) == 0 and _dyadic(q) for q in y.piece_slopes())
    rep.check("f H f^-1 inside H (structural)", ok)
    b = cyclic_extension_bounds(G, ["a", "b"], "f", GroupContext(G, radius=radius))
    rep.check("bounds only", not b["equality"])


def _probe_product(G, rep, radius, factors=None):
    factors = factors or product_factors()
    comps = []
    for sp in factors:
        kc = known_complement(sp, GroupContext(sp, radius=min(radius, 4)))
        comps.append((sp, kc.rays))
    rays = product_complement(comps)
    expected = 4 if factors[0].name.startswith("thompson") else 0
    rep.check("complement size", len(rays) == expected, f"{len(rays)} rays")
    sym = product_symbols(factors)
    good = True
    for k, _, chi in rays:
        others = [sym[j][s] for j, sp in enumerate(factors) if j != k for s in sp.generators]
        good &= all(chi.table()[s].is_zero() for s in others)
    rep.check("rays vanish on other factors", good)
    rep.classifications += [{"label": tag, "verdict": NONMEMBER, "expected": NONMEMBER, "matched": None,
                             "result": {"character": chi.to_json()}} for _, tag, chi in rays]


_SPECIAL = {
    "thompson_f": _probe_thompson,
    "wreath": _probe_wreath,
    "mystery": _probe_mystery,
    "cyclic_extension": _probe_cyclic,
    "hnn": _probe_hnn,
    "halfline_translation": _probe_translation,
    "line_translation": _probe_translation,
    "product": _probe_product,
    "bump_product": lambda G, rep, r: _probe_product(G, rep, r, bump_factors()),
}
