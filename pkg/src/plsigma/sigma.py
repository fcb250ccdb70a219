"""Classification of rays of the character sphere: Member / NonMember / Unknown.

Membership is certified through explicit relations ``t^-1 y t = w_y`` with a
strict valuation gap; non-membership through identification with a germ ray
plus verified irreducibility and a non-commuting pair.  Everything else is
reported as ``Unknown`` together with ball-connectivity evidence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .characters import (DISTINCT, LEFT, OPPOSITE, RIGHT, SAME, UNRESOLVED, GermChar, TabledChar,
                         TranslationObservableUndefined, UndefinedObservable, ZeroCharacter,
                         bounded_end, char_consistency, exceptional_characters, generator_values,
                         ray_compare, trivial_at, word_value)
from .groups import (BallIndex, GroupSpec, IrreducibilityResult, NonabelianResult, conjugate_into,
                     enumerate_ball, irreducibility_check, is_abelian, kernel_generation_check,
                     nonabelian_witness, word_inverse, word_reduce, word_tokens)
from .logreal import LogReal, PrecisionExhausted, ZERO, lr_cmp, lr_sign
from .pl import (INF, IDENTITY, PLMap, commutator, compose, evaluate, invert, power, rat_str,
                 support)

LEFT_SHRINK, RIGHT_SHRINK, TRANS_LEFT, TRANS_RIGHT = "LeftShrink", "RightShrink", "TransLeft", "TransRight"
MEMBER, NONMEMBER, UNKNOWN = "Member", "NonMember", "Unknown"
F_LETTER, H_LETTER = "@f", "@h"

BASIS_TAGS = {"compact": "germ-ray/compact", "halfline": "germ-ray/half-line", "line": "germ-ray/line"}


class HypothesisFailure(RuntimeError):
    def __init__(self, stage: str, detail: str = ""):
        super().__init__(f"{stage}: {detail}" if detail else stage)
        self.stage = stage


class InconsistentCharacter(ValueError):
    pass


class SpecError(ValueError):
    pass


class OverlappingSupports(ValueError):
    pass


class UnverifiedSubCertificate(ValueError):
    pass


class BadShape(ValueError):
    pass


@lru_cache(maxsize=1 << 16)
def _sign(v: LogReal, cap):
    return lr_sign(v, cap)


def sign_or_none(v: LogReal, cap=None):
    try:
        return _sign(v, cap)
    except PrecisionExhausted:
        return None


def case_for(ival, side) -> str:
    if side == LEFT:
        return LEFT_SHRINK if bounded_end(ival, LEFT) else TRANS_LEFT
    return RIGHT_SHRINK if bounded_end(ival, RIGHT) else TRANS_RIGHT


def other_side(side):
    return RIGHT if side == LEFT else LEFT


# ---------------------------------------------------------------- valuations

def word_valuation(chi, w, G: GroupSpec, extra_values: dict | None = None, cap=None) -> LogReal:
    """Minimum of ``chi`` over all prefixes of ``w`` (the empty prefix included)."""
    vals = dict(generator_values(chi, G))
    if extra_values:
        vals.update(extra_values)
    return prefix_minimum(vals, w, cap)


def prefix_minimum(values: dict, w, cap=None) -> LogReal:
    cur = best = ZERO
    for s, e in w:
        cur = cur + values[s] * e
        if lr_cmp(cur, best, cap) < 0:
            best = cur
    return best


# ------------------------------------------------------------- group context

@dataclass
class GroupContext:
    """Per-group data shared by all ray classifications: the ball and structural checks."""

    G: GroupSpec
    radius: int = 6
    cap: int | None = None
    element_cap: int = 10**6
    ball: BallIndex | None = None
    _irr: IrreducibilityResult | None = None
    _na: NonabelianResult | None = None
    _kg: object = None

    def __post_init__(self):
        if self.ball is None:
            self.ball = enumerate_ball(self.G, self.radius, self.element_cap)

    @property
    def irreducibility(self) -> IrreducibilityResult:
        if self._irr is None:
            self._irr = irreducibility_check(self.G)
        return self._irr

    @property
    def nonabelian(self) -> NonabelianResult:
        if self._na is None:
            self._na = nonabelian_witness(self.G, self.ball, limit=400)
        return self._na

    @property
    def kernel_generation(self):
        if self._kg is None:
            self._kg = kernel_generation_check(self.G, self.ball)
        return self._kg

    def values(self, chi) -> list:
        gv = generator_values(chi, self.G)
        return [word_value(gv, w) for w in self.ball.words]


# ------------------------------------------------------------ connectivity

@dataclass
class ConnectivityReport:
    radius: int
    vertices: int
    components: int
    identity_component: int
    component_sizes: list
    undecided: int = 0
    monoid_violations: int | None = None
    tag: str = "EvidenceOnly"
    identity_members: list = field(default_factory=list, repr=False)

    def to_json(self):
        d = {"radius": self.radius, "vertices": self.vertices, "components": self.components,
             "identity_component": self.identity_component,
             "component_sizes": self.component_sizes[:20], "undecided": self.undecided, "tag": self.tag}
        if self.monoid_violations is not None:
            d["identity_component_outside_monoid"] = self.monoid_violations
        return d


def gamma_chi_components(G: GroupSpec, chi, radius: int | None = None, ball: BallIndex | None = None,
                         monoid: "MonoidSpec | None" = None, cap=None) -> ConnectivityReport:
    """Components of the subgraph of the ball spanned by ``{g : chi(g) >= 0}``."""
    if ball is None:
        ball = enumerate_ball(G, 0 if radius is None else radius)
    gv = generator_values(chi, G)
    n = len(ball.maps)
    keep = [False] * n
    undecided = 0
    for i, w in enumerate(ball.words):
        s = sign_or_none(word_value(gv, w), cap)
        if s is None:
            undecided += 1
        else:
            keep[i] = s >= 0
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, _, j in ball.edges:
        if keep[i] and keep[j]:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    sizes = {}
    for i in range(n):
        if keep[i]:
            r = find(i)
            sizes[r] = sizes.get(r, 0) + 1
    root = find(0)
    members = [i for i in range(n) if keep[i] and find(i) == root]
    violations = None
    if monoid is not None:
        violations = sum(1 for i in members if not monoid.contains(ball.maps[i], word_value(gv, ball.words[i]), cap))
    return ConnectivityReport(ball.radius, sum(keep), len(sizes), sizes.get(root, 0),
                              sorted(sizes.values(), reverse=True), undecided, violations,
                              identity_members=members)


# ------------------------------------------------------------------ monoids

def chain_affine_on(chain, lo, hi):
    """Slope of ``chain[0] o chain[1] o ...`` if it is affine on ``[lo, hi]``, else None."""
    slope = Fraction(1)
    for f in reversed(chain):
        if any(lo < x < hi for x in f.real_breakpoints()):
            return None
        s = f.slope_left_of(hi) if lo == -INF else f.slope_right_of(lo)
        slope *= s
        lo = lo if lo == -INF else evaluate(f, lo)
        hi = hi if hi == INF else evaluate(f, hi)
    return slope


@dataclass(frozen=True)
class MonoidSpec:
    """``LinearOnLeft(delta)``, ``TranslationAbove(k)`` or ``TranslationBelow(k)`` paired with ``chi``.

    Membership of g: ``chi(g) >= 0`` and ``g^-1`` linear on ``[a, a+delta]``,
    resp. a translation on ``[k, inf)`` or on ``(-inf, -k]``.
    """

    kind: str
    param: Fraction
    chi: object
    a: Fraction = Fraction(0)

    def window(self):
        if self.kind == "LinearOnLeft":
            return self.a, self.a + self.param
        if self.kind == "TranslationAbove":
            return self.param, INF
        if self.kind == "TranslationBelow":
            return -INF, -self.param
        raise ValueError(self.kind)

    def inverse_ok(self, chain) -> bool:
        """Is the product of ``chain`` (which should equal ``g^-1``) of the required shape?"""
        lo, hi = self.window()
        s = chain_affine_on(chain, lo, hi)
        if s is None:
            return False
        return True if self.kind == "LinearOnLeft" else s == 1

    def contains(self, g: PLMap, value: LogReal, cap=None) -> bool:
        return self.contains_chain([invert(g)], value, cap)

    def contains_chain(self, inverse_chain, value: LogReal, cap=None) -> bool:
        s = sign_or_none(value, cap)
        return s is not None and s >= 0 and self.inverse_ok(inverse_chain)

    def to_json(self):
        return {"kind": self.kind, "param": str(self.param), "chi": self.chi.to_json()}


def linear_on_left(delta, chi, G: GroupSpec) -> MonoidSpec:
    return MonoidSpec("LinearOnLeft", Fraction(delta), chi, G.interval.a)


@dataclass
class MonoidReport:
    radius: int
    members: int
    pairs: int
    closure_failures: int
    inverse_failures: int
    quotient_failures: int
    properness_witness: tuple | None
    properness_source: str | None
    generation_covered: int
    generation_total: int
    generation_element: tuple | None

    @property
    def laws_hold(self) -> bool:
        return self.closure_failures == self.inverse_failures == self.quotient_failures == 0

    def to_json(self):
        return {
            "radius": self.radius, "members": self.members, "pairs": self.pairs,
            "closure_failures": self.closure_failures, "inverse_failures": self.inverse_failures,
            "quotient_failures": self.quotient_failures,
            "properness_witness": None if self.properness_witness is None else word_tokens(self.properness_witness),
            "properness_source": self.properness_source,
            "generation": f"{self.generation_covered}/{self.generation_total}",
        }


def monoid_property_test(G: GroupSpec, M: MonoidSpec, ball: BallIndex, cap=None,
                         max_power: int = 64) -> MonoidReport:
    """Check the monoid laws on every element and pair of ``M`` inside the ball."""
    gv = generator_values(M.chi, G)
    vals = [word_value(gv, w) for w in ball.words]
    inv = [invert(g) for g in ball.maps]
    mem = [i for i in range(len(ball.maps)) if M.contains_chain([inv[i]], vals[i], cap)]
    closure = inverse = quotient = pairs = 0
    for i in mem:
        # M n M^-1 = M n ker chi
        in_inv = M.contains_chain([ball.maps[i]], -vals[i], cap)
        if in_inv != vals[i].is_zero():
            inverse += 1
        for j in mem:
            pairs += 1
            # closure: (m_i m_j)^-1 = m_j^-1 m_i^-1
            if not M.contains_chain([inv[j], inv[i]], vals[i] + vals[j], cap):
                closure += 1
            # (M M^-1) n G_chi in M: (m_i m_j^-1)^-1 = m_j m_i^-1
            d = vals[i] - vals[j]
            s = sign_or_none(d, cap)
            if s is not None and s >= 0 and not M.contains_chain([ball.maps[j], inv[i]], d, cap):
                quotient += 1

    witness, source = _properness_witness(G, M, ball, vals, inv, cap)

    g0 = next((i for i in mem if sign_or_none(vals[i], cap) == 1), None)
    covered = 0
    if g0 is not None:
        g0inv = inv[g0]
        for i in range(len(ball.maps)):
            for m in range(max_power + 1):
                # h = g0^m g in M, so g = g0^-m h
                if M.contains_chain([inv[i]] + [g0inv] * m, vals[g0] * m + vals[i], cap):
                    covered += 1
                    break
    return MonoidReport(ball.radius, len(mem), pairs, closure, inverse, quotient, witness, source,
                        covered, len(ball.maps), None if g0 is None else ball.words[g0])


def _properness_witness(G, M, ball, vals, inv, cap):
    lo, hi = M.window()
    # preferred: a conjugated commutator living inside the window
    na = nonabelian_witness(G, ball, limit=60)
    if na.found:
        f1, f2 = (G.eval_word(w) for w in na.pair)
        c = commutator(f1, f2)
        conj = conjugate_into(G, ball, c, (lo, hi))
        if conj.found:
            w = word_reduce(conj.word + na.pair[0] + na.pair[1] + word_inverse(na.pair[0])
                            + word_inverse(na.pair[1]) + word_inverse(conj.word))
            if not M.contains(conj.image, ZERO, cap):
                return w, "conjugated-commutator"
    for i, g in enumerate(ball.maps):
        s = sign_or_none(vals[i], cap)
        if s is not None and s >= 0 and not M.contains_chain([inv[i]], vals[i], cap):
            return ball.words[i], "ball-scan"
    return None, None


# ----------------------------------------------------------------- witnesses

@dataclass
class FH:
    case: str
    f_word: tuple
    f_map: PLMap
    h_word: tuple
    h_map: PLMap
    window: tuple
    param: Fraction

    def to_json(self):
        return {"case": self.case, "f": word_tokens(self.f_word), "h": word_tokens(self.h_word),
                "window": [rat_str(self.window[0]), rat_str(self.window[1])], "param": rat_str(self.param)}


@dataclass
class NotFound:
    stage: str
    detail: str = ""


def find_witnesses(G: GroupSpec, chi, case: str, ball: BallIndex, cap=None):
    """Search the ball for ``f`` and ``h`` as required by the membership certificate.

    ``f = f1 f2^-1`` with ``chi(f1) >= 0 > psi(f1)`` and ``psi(f2) >= 0 > chi(f2)``
    (``psi`` the germ character of the end), ``h`` a conjugate of a kernel
    element of the opposite end with positive value, moved into the window.
    """
    iv = G.interval
    side = LEFT if case in (LEFT_SHRINK, TRANS_LEFT) else RIGHT
    if case_for(iv, side) != case:
        raise ValueError(f"case {case} does not fit a {iv.kind} interval")
    psi = next(c for _, s, c in exceptional_characters(iv) if s == side)
    try:
        pv = generator_values(psi, G)
    except UndefinedObservable as e:
        return NotFound("germ-character", str(e))
    cv = generator_values(chi, G)
    f1 = f2 = None
    for w in ball.words:
        a = sign_or_none(word_value(cv, w), cap)
        b = sign_or_none(word_value(pv, w), cap)
        if a is None or b is None:
            continue
        if f1 is None and a >= 0 and b < 0:
            f1 = w
        if f2 is None and b >= 0 and a < 0:
            f2 = w
        if f1 is not None and f2 is not None:
            break
    if f1 is None or f2 is None:
        return NotFound("f", "no separating pair in the ball")
    f_word = word_reduce(f1 + word_inverse(f2))
    f = G.eval_word(f_word)

    bps = f.real_breakpoints()
    if case == LEFT_SHRINK:
        a = iv.a
        right = [x for x in bps if x > a]
        param = (min(right) if right else (iv.c if iv.c is not None else a + 1)) - a
        window = (a, a + param)
    elif case == RIGHT_SHRINK:
        c = iv.c
        left = [x for x in bps if x < c]
        param = c - (max(left) if left else iv.a)
        window = (c - param, c)
    elif case == TRANS_RIGHT:
        param = max(bps) if bps else Fraction(0)
        window = (param, INF)
    else:
        param = min(bps) if bps else Fraction(0)
        window = (-INF, param)

    other = other_side(side)
    h0 = None
    for i, g in enumerate(ball.maps):
        if g == IDENTITY or not trivial_at(g, iv, other):
            continue
        s = sign_or_none(word_value(cv, ball.words[i]), cap)
        if s:
            h0 = ball.words[i] if s > 0 else word_inverse(ball.words[i])
            break
    if h0 is None:
        return NotFound("h0", f"character vanishes on the {other} kernel inside the ball")
    h0_map = G.eval_word(h0)
    conj = conjugate_into(G, ball, h0_map, window)
    if not conj.found:
        return NotFound("conjugation", "no conjugate of h0 fits the window")
    h_word = word_reduce(conj.word + h0 + word_inverse(conj.word))
    return FH(case, f_word, f, h_word, conj.image, window, param)


# -------------------------------------------------------------- certificates

@dataclass
class MembershipCertificate:
    group: GroupSpec
    chi: object
    case: str
    f_word: tuple
    h_word: tuple
    window: tuple
    param: Fraction
    threshold: Fraction
    m: int
    t: tuple
    y_plus: list
    relations: list  # (y, lhs, rhs)
    valuations: list  # (lhs_val, rhs_val)
    flags: dict

    def to_json(self):
        return {
            "type": "MembershipCertificate",
            "group": self.group.to_json(),
            "character": self.chi.to_json(),
            "case": self.case,
            "letters": {F_LETTER: word_tokens(self.f_word), H_LETTER: word_tokens(self.h_word)},
            "window": [rat_str(self.window[0]), rat_str(self.window[1])],
            "param": rat_str(self.param),
            "threshold": rat_str(self.threshold),
            "m": self.m,
            "t": word_tokens((self.t,))[0],
            "Y_plus": word_tokens(self.y_plus),
            "relations": [{"y": word_tokens((y,))[0], "lhs": word_tokens(l), "rhs": word_tokens(r)}
                          for y, l, r in self.relations],
            "valuations": [{"lhs": a.to_json(), "rhs": b.to_json()} for a, b in self.valuations],
            "flags": dict(self.flags),
        }


def _disjoint(hull, sup) -> bool:
    p, q = hull
    return all(q <= lo or p >= hi for lo, hi in sup)


def membership_certificate(G: GroupSpec, chi, fh: FH, cap=None, max_m: int = 10_000) -> MembershipCertificate:
    """Build and check the relations ``t^-1 y t = w_y`` for every ``y`` in ``Y+``."""
    gv = generator_values(chi, G)
    fv, hv = word_value(gv, fh.f_word), word_value(gv, fh.h_word)
    if sign_or_none(fv, cap) != 1 or sign_or_none(hv, cap) != 1:
        raise HypothesisFailure("PositiveWitnesses", "chi(f) and chi(h) must be positive")
    values = dict(gv)
    values[F_LETTER], values[H_LETTER] = fv, hv
    extra = {F_LETTER: fh.f_map, H_LETTER: fh.h_map}
    if G.eval_word(fh.f_word) != fh.f_map or G.eval_word(fh.h_word) != fh.h_map:
        raise HypothesisFailure("WitnessWords", "f or h does not match its word")
    if not support(fh.h_map).within(*fh.window):
        raise HypothesisFailure("Window", "supp h leaves the window")

    y_plus = []
    for s in G.generators:
        for e in (1, -1):
            sg = sign_or_none(gv[s] * e, cap)
            if sg is None:
                raise HypothesisFailure("Sign", f"sign of chi({s}) undecided")
            if sg >= 0:
                y_plus.append((s, e))
    y_plus += [(F_LETTER, 1), (H_LETTER, 1)]
    t = next(y for y in y_plus if sign_or_none(values[y[0]] * y[1], cap) == 1)

    def letter(y):
        m = extra.get(y[0]) if y[0] in extra else G.letter_map((y[0], 1))
        return m if y[1] == 1 else invert(m)

    tinv = invert(letter(t))
    comms = [commutator(tinv, invert(letter(y))) for y in y_plus]
    sups = [support(c) for c in comms if c != IDENTITY]
    f = fh.f_map
    lo, hi = fh.window
    case = fh.case
    if case == LEFT_SHRINK:
        a = G.interval.a
        starts = [sp.hull()[0] for sp in sups]
        if any(x <= a for x in starts):
            raise HypothesisFailure("CommutatorSupport", "a commutator support touches the left end")
        threshold = (min(starts) - a) / 2 if starts else fh.param
        edge, target, ok = a + fh.param, a + threshold, lambda v, T: v <= T
    elif case == RIGHT_SHRINK:
        c = G.interval.c
        ends = [sp.hull()[1] for sp in sups]
        if any(x >= c for x in ends):
            raise HypothesisFailure("CommutatorSupport", "a commutator support touches the right end")
        threshold = (c - max(ends)) / 2 if ends else fh.param
        edge, target, ok = c - fh.param, c - threshold, lambda v, T: v >= T
    elif case == TRANS_RIGHT:
        ends = [sp.hull()[1] for sp in sups]
        if any(x == INF for x in ends):
            raise HypothesisFailure("CommutatorSupport", "a commutator support is unbounded above")
        threshold = max(ends) if ends else fh.param
        edge, target, ok = fh.param, threshold, lambda v, T: v >= T
    else:
        starts = [sp.hull()[0] for sp in sups]
        if any(x == -INF for x in starts):
            raise HypothesisFailure("CommutatorSupport", "a commutator support is unbounded below")
        threshold = min(starts) if starts else fh.param
        edge, target, ok = fh.param, threshold, lambda v, T: v <= T

    m, v = 0, edge
    while not ok(v, target):
        m += 1
        v = evaluate(f, v)
        if m > max_m:
            raise HypothesisFailure("Contraction", "f does not push the window past the commutators")

    H = compose(compose(power(f, m), fh.h_map), power(f, -m))
    hull = support(H).hull()
    if hull is not None and not all(_disjoint(hull, sp) for sp in sups):
        raise HypothesisFailure("DisjointnessCheck", "supp H meets a commutator support")

    F = ((F_LETTER, 1),) * m
    Finv = ((F_LETTER, -1),) * m
    tw, tiw = (t,), ((t[0], -t[1]),)
    relations, valuations = [], []
    for y in y_plus:
        yi = ((y[0], -y[1]),)
        lhs = tiw + (y,) + tw
        rhs = (y,) + F + ((H_LETTER, 1),) + Finv + yi + tiw + (y,) + tw + F + ((H_LETTER, -1),) + Finv
        if G.eval_word(lhs, extra) != G.eval_word(rhs, extra):
            raise HypothesisFailure("RelationIdentity", f"relation for {y} fails")
        vl, vr = prefix_minimum(values, lhs, cap), prefix_minimum(values, rhs, cap)
        if lr_cmp(vr, vl, cap) <= 0:
            raise HypothesisFailure("ValuationGap", f"no gap for {y}")
        relations.append((y, lhs, rhs))
        valuations.append((vl, vr))
    flags = {"relation_identity": True, "valuation_gap": True, "disjointness": True}
    return MembershipCertificate(G, chi, case, fh.f_word, fh.h_word, fh.window, fh.param, threshold, m,
                                 t, y_plus, relations, valuations, flags)


@dataclass
class NonMembershipCertificate:
    matched: str
    side: str
    basis: str
    irreducibility: IrreducibilityResult
    nonabelian: NonabelianResult
    comparison: dict | None

    def to_json(self):
        return {"type": "NonMembershipCertificate", "matched": self.matched, "basis": self.basis,
                "irreducibility": self.irreducibility.to_json(), "nonabelian": self.nonabelian.to_json(),
                "comparison": self.comparison}


# ------------------------------------------------------------ classification

@dataclass
class RayClassification:
    verdict: str
    chi: object
    certificate: object = None
    connectivity: ConnectivityReport | None = None
    trail: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def matched(self):
        return self.certificate.matched if self.verdict == NONMEMBER else None

    def to_json(self):
        d = {"verdict": self.verdict, "character": self.chi.to_json(), "trail": self.trail, "notes": self.notes}
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_json()
        if self.connectivity is not None:
            d["connectivity"] = self.connectivity.to_json()
        return d


def classify_ray(G: GroupSpec, chi, ctx: GroupContext | None = None, evidence_radius: int = 4) -> RayClassification:
    ctx = ctx or GroupContext(G)
    ball, cap, iv = ctx.ball, ctx.cap, G.interval
    if isinstance(chi, TabledChar):
        rep = char_consistency(chi, ball.relations, G)
        if not rep.ok:
            raise InconsistentCharacter(f"character does not vanish on relation {word_tokens(rep.failing)}")
    if all(v.is_zero() for v in generator_values(chi, G).values()):
        raise ZeroCharacter("zero character has no ray")

    irr, na = ctx.irreducibility, ctx.nonabelian
    trail = [{"step": "irreducibility", **irr.to_json()},
             {"step": "nonabelian", **na.to_json()},
             {"step": "kernel_generation", **ctx.kernel_generation.to_json()}]
    notes = []
    differs = {}
    for tag, side, psi in exceptional_characters(iv):
        try:
            pv = generator_values(psi, G)
        except UndefinedObservable as e:
            notes.append(f"{tag}: {e}")
            differs[side] = False
            continue
        if all(v.is_zero() for v in pv.values()):
            if iv.kind == "compact" and irr.irreducible:
                raise SpecError(f"{tag} vanishes on an irreducible group of a compact interval")
            trail.append({"step": "germ-ray", "ray": tag, "result": "zero"})
            differs[side] = True
            continue
        cmp = ray_compare(chi, psi, G, ball, cap)
        trail.append({"step": "germ-ray", "ray": tag, "result": cmp.outcome, "witness": _jsonable(cmp.witness)})
        if cmp.outcome == SAME:
            if irr.irreducible and na.found:
                cert = NonMembershipCertificate(tag, side, BASIS_TAGS[iv.kind], irr, na, _jsonable(cmp.witness))
                return RayClassification(NONMEMBER, chi, cert, trail=trail, notes=notes)
            notes.append(f"ray equals {tag} but irreducibility/non-abelian witness missing")
            differs[side] = False
        else:
            differs[side] = cmp.outcome in (DISTINCT, OPPOSITE)

    for side in (LEFT, RIGHT):
        if not differs.get(side):
            continue
        case = case_for(iv, side)
        fh = find_witnesses(G, chi, case, ball, cap)
        if isinstance(fh, NotFound):
            trail.append({"step": "witnesses", "case": case, "result": "NotFoundWithinBall", "stage": fh.stage})
            continue
        try:
            cert = membership_certificate(G, chi, fh, cap)
        except HypothesisFailure as e:
            trail.append({"step": "certificate", "case": case, "result": "HypothesisFailure", "stage": e.stage})
            continue
        trail.append({"step": "certificate", "case": case, "result": "built"})
        return RayClassification(MEMBER, chi, cert, trail=trail, notes=notes)

    sub = ball if ball.radius <= evidence_radius else _sub_ball(ball, evidence_radius)
    conn = gamma_chi_components(G, chi, ball=sub, cap=cap)
    notes.append("no certificate: ray is not a germ ray and no kernel witnesses were found in the ball")
    return RayClassification(UNKNOWN, chi, None, conn, trail, notes)


def _sub_ball(ball: BallIndex, r: int) -> BallIndex:
    keep = [i for i, w in enumerate(ball.words) if len(w) <= r]
    pos = {i: k for k, i in enumerate(keep)}
    edges = [(pos[i], k, pos[j]) for i, k, j in ball.edges if i in pos and j in pos]
    maps = [ball.maps[i] for i in keep]
    return BallIndex(r, ball.letters, maps, [ball.words[i] for i in keep],
                     {f: k for k, f in enumerate(maps)}, [], ball.layer_sizes[:r + 1], edges)


def _jsonable(w):
    if w is None:
        return None
    out = {}
    for k, v in w.items():
        if k == "word":
            out[k] = word_tokens(v)
        else:
            out[k] = v
    return out


# -------------------------------------------------------------- complements

@dataclass
class Complement:
    rays: list  # (tag, character)
    status: str  # exact | lower-bound
    reason: str


def known_complement(G: GroupSpec, ctx: GroupContext | None = None) -> Complement:
    """The complement of the invariant as far as the engine can certify it."""
    if is_abelian(G):
        return Complement([], "exact", "abelian group: every ray lies in the invariant")
    ctx = ctx or GroupContext(G)
    rays = []
    for tag, _, psi in exceptional_characters(G.interval):
        try:
            if all(v.is_zero() for v in generator_values(psi, G).values()):
                continue
        except UndefinedObservable:
            continue
        res = classify_ray(G, psi, ctx)
        if res.verdict == NONMEMBER:
            rays.append((tag, psi))
    exact = ctx.irreducibility.irreducible and ctx.kernel_generation.verified
    return Complement(rays, "exact" if exact else "lower-bound",
                      "germ rays; kernel generation verified" if exact else "germ rays only")


def _supports_disjoint(specs) -> bool:
    unions = [s.support_union() for s in specs]
    for i in range(len(unions)):
        for j in range(i + 1, len(unions)):
            for lo1, hi1 in unions[i]:
                for lo2, hi2 in unions[j]:
                    if lo1 < hi2 and lo2 < hi1:
                        return False
    return True


def product_symbols(specs) -> list:
    """Per factor, a map from its symbols to symbols of the product (prefixed on clashes)."""
    seen = {}
    for s in specs:
        for sym in s.generators:
            seen[sym] = seen.get(sym, 0) + 1
    return [{sym: (f"{sp.name}.{sym}" if seen[sym] > 1 else sym) for sym in sp.generators} for sp in specs]


def product_spec(specs, name: str = "product") -> GroupSpec:
    from .pl import IntervalSpec
    if not _supports_disjoint(specs):
        raise OverlappingSupports("factor supports overlap")
    names = product_symbols(specs)
    gens = {}
    for sp, nm in zip(specs, names):
        for sym, f in sp.generators.items():
            gens[nm[sym]] = f
    kinds = {s.interval.kind for s in specs}
    if kinds == {"compact"}:
        iv = IntervalSpec.compact(min(s.interval.a for s in specs), max(s.interval.c for s in specs))
    elif "line" not in kinds and min(s.interval.lo for s in specs) == 0:
        iv = IntervalSpec.halfline()
    else:
        iv = IntervalSpec.line()
    return GroupSpec(name, iv, gens).validate()


def product_complement(factors) -> list:
    """Complement of a direct product from the complements of its factors.

    ``factors`` is a list of ``(GroupSpec, [(tag, character), ...])``.  Each ray
    is pulled back along the projection: the factor's values on its own
    generators, zero on every other factor's.
    """
    specs = [sp for sp, _ in factors]
    if not _supports_disjoint(specs):
        raise OverlappingSupports("factor supports overlap")
    names = product_symbols(specs)
    all_syms = [nm[s] for sp, nm in zip(specs, names) for s in sp.generators]
    out = []
    for k, (sp, rays) in enumerate(factors):
        for tag, chi in rays:
            gv = generator_values(chi, sp)
            table = {s: ZERO for s in all_syms}
            for s, v in gv.items():
                table[names[k][s]] = v
            out.append((k, f"{sp.name}:{tag}", TabledChar.make(table)))
    return out


# ------------------------------------------------------------ families

@dataclass
class Subgroup:
    name: str
    words: dict  # subgroup symbol -> word over G's generators
    certificate: dict  # JSON certificate on the subgroup spec


def family_assembler(G: GroupSpec, chi, subgroups, bridges, cover=None) -> dict:
    """Combine certified subgroups along bridge elements with nonzero value.

    ``bridges`` lists ``(name1, name2, word over G)``; the element must be a
    generator word of both subgroups.  Member iff the bridge graph is connected
    and the subgroup generators include ``cover`` (default: G's generators).
    """
    from .verify import verify_certificate
    gv = generator_values(chi, G)
    maps = {}
    for sg in subgroups:
        rep = verify_certificate(sg.certificate)
        if not rep.ok:
            raise UnverifiedSubCertificate(f"{sg.name}: {rep.failures}")
        sub = GroupSpec.from_json(sg.certificate["group"])
        for sym, w in sg.words.items():
            if sub.generators.get(sym) != G.eval_word(w):
                raise UnverifiedSubCertificate(f"{sg.name}: generator {sym} does not match its word")
        subchi = sg.certificate["character"]
        if subchi.get("kind") == "tabled":
            from .characters import character_from_json
            tv = character_from_json(subchi).table()
            for sym, w in sg.words.items():
                if tv[sym] != word_value(gv, w):
                    raise UnverifiedSubCertificate(f"{sg.name}: character is not the restriction")
        maps[sg.name] = {G.eval_word(w) for w in sg.words.values()}
    names = [sg.name for sg in subgroups]
    parent = {n: n for n in names}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for n1, n2, w in bridges:
        g = G.eval_word(w)
        if g in maps.get(n1, ()) and g in maps.get(n2, ()) and not word_value(gv, w).is_zero():
            parent[find(n1)] = find(n2)
    connected = len({find(n) for n in names}) == 1 if names else False
    cover_maps = set(G.generators.values()) if cover is None else {G.eval_word(w) for w in cover}
    union = set().union(*maps.values()) if maps else set()
    covered = cover_maps <= union
    return {"verdict": MEMBER if connected and covered else "Inconclusive",
            "connected": connected, "covers": covered}


# ------------------------------------------------- cyclic extensions of H

def cyclic_extension_bounds(G: GroupSpec, h_symbols, f_symbol: str, ctx: GroupContext | None = None) -> dict:
    """Bounds for G = <H, f> with H living on ``[a0, c0]`` inside ``[a, c]``.

    Lower bound: the germ rays (when certified NonMember).  Upper bound: the rays
    vanishing on the normal closure N of H, i.e. on H's generators, which are
    the two rays of the exponent sum of ``f``.  When the left germ of ``f``
    expands and the right one contracts the two bounds coincide.
    """
    iv = G.interval
    if iv.kind != "compact":
        raise BadShape("needs a compact interval")
    a, c = iv.a, iv.c
    hsup = [iv_ for s in h_symbols for iv_ in support(G.generators[s])]
    if not hsup:
        raise BadShape("H is trivial")
    a0, c0 = min(p for p, _ in hsup), max(q for _, q in hsup)
    fs = support(G.generators[f_symbol])
    left_ok = any(lo <= a and hi > a0 for lo, hi in fs)
    right_ok = any(lo < c0 and hi >= c for lo, hi in fs)
    if not (left_ok and right_ok):
        raise BadShape("support of f does not contain ]a, a0] and [c0, c[")
    ctx = ctx or GroupContext(G)
    lower = []
    for tag, _, psi in exceptional_characters(iv):
        res = classify_ray(G, psi, ctx)
        lower.append({"ray": tag, "verdict": res.verdict})
    ef = {s: (1 if s == f_symbol else 0) for s in G.generators}
    upper = [TabledChar.make(ef), TabledChar.make({s: -v for s, v in ef.items()})]
    f = G.generators[f_symbol]
    da, dc = f.slope_right_of(a), f.slope_left_of(c)
    equality = da > 1 > dc or da < 1 < dc
    unknown = []
    if not equality:
        # both germ rays coincide; its antipode is not decided by the bounds
        from .characters import CHI_ELL
        unknown.append(CHI_ELL.scaled(-1).to_json())
    return {"a0": rat_str(a0), "c0": rat_str(c0),
            "lower": lower, "upper": [u.to_json() for u in upper],
            "equality": equality, "unknown": unknown,
            "D_a": rat_str(da), "D_c": rat_str(dc)}
