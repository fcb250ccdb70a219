"""Stand-alone checker for membership certificates.

Works from the JSON form only and shares nothing with the certificate builder
beyond the PL-map and LogReal arithmetic: every word is re-evaluated, every
valuation recomputed from scratch.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .characters import TabledChar, character_from_json, generator_values
from .groups import GroupSpec, enumerate_ball, parse_letter, parse_word
from .logreal import PrecisionExhausted, ZERO, lr_sign
from .pl import IDENTITY, compose, invert

F_LETTER, H_LETTER = "@f", "@h"


@dataclass
class VerifyReport:
    ok: bool
    failures: list = field(default_factory=list)
    checked_relations: int = 0

    def to_json(self):
        return {"ok": self.ok, "failures": self.failures, "checked_relations": self.checked_relations}


def _sign(v, cap):
    try:
        return lr_sign(v, cap)
    except PrecisionExhausted:
        return None


def _evaluate(G, letters, extra):
    g = IDENTITY
    for s, e in letters:
        m = extra[s] if s in extra else G.generators[s]
        g = compose(g, m if e == 1 else invert(m))
    return g


def _valuation(values, letters, cap):
    cur = best = ZERO
    for s, e in letters:
        cur = cur + values[s] * e
        if _sign(cur - best, cap) == -1:
            best = cur
    return best


def verify_certificate(cert: dict, cap=None, consistency_radius: int = 4) -> VerifyReport:
    fails = []
    try:
        G = GroupSpec.from_json(cert["group"])
        chi = character_from_json(cert["character"])
        gv = generator_values(chi, G)
        words = {k: parse_word(v) for k, v in cert["letters"].items()}
        t = parse_letter(cert["t"])
        y_plus = [parse_letter(y) for y in cert["Y_plus"]]
        rels = [(parse_letter(r["y"]), parse_word_raw(r["lhs"]), parse_word_raw(r["rhs"]))
                for r in cert["relations"]]
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as e:
        return VerifyReport(False, [f"Malformed: {e}"])

    if set(words) != {F_LETTER, H_LETTER}:
        return VerifyReport(False, ["Malformed: letters must be @f and @h"])
    for w in words.values():
        if any(s not in G.generators for s, _ in w):
            return VerifyReport(False, ["Malformed: unknown generator in a witness word"])

    if isinstance(chi, TabledChar):
        ball = enumerate_ball(G, consistency_radius)
        for r in ball.relations:
            if sum((gv[s] * e for s, e in r), ZERO) != ZERO:
                fails.append("CharacterInconsistent")
                break

    extra = {k: _evaluate(G, w, {}) for k, w in words.items()}
    values = dict(gv)
    for k, w in words.items():
        values[k] = sum((gv[s] * e for s, e in w), ZERO)
        if _sign(values[k], cap) != 1:
            fails.append(f"WitnessValueFailed:{k}")

    known = set(G.generators) | {F_LETTER, H_LETTER}
    if any(s not in known for s, _ in y_plus) or any(s not in known for _, l, r in rels for s, _ in l + r):
        return VerifyReport(False, fails + ["Malformed: unknown letter"])
    for y in y_plus:
        if _sign(values[y[0]] * y[1], cap) not in (0, 1):
            fails.append("GeneratingSetFailed:negative letter")
    for s in G.generators:
        if (s, 1) not in y_plus and (s, -1) not in y_plus:
            fails.append(f"GeneratingSetFailed:{s}")
    if t not in y_plus or _sign(values[t[0]] * t[1], cap) != 1:
        fails.append("StableLetterFailed")
    if sorted(y for y, _, _ in rels) != sorted(y_plus):
        fails.append("RelationCoverageFailed")

    ti = (t[0], -t[1])
    n = 0
    for y, lhs, rhs in rels:
        if list(lhs) != [ti, y, t]:
            fails.append(f"RelationShapeFailed:{y[0]}")
            continue
        if _evaluate(G, lhs, extra) != _evaluate(G, rhs, extra):
            fails.append(f"RelationIdentityFailed:{y[0]}^{y[1]}")
        vl, vr = _valuation(values, lhs, cap), _valuation(values, rhs, cap)
        if _sign(vr - vl, cap) != 1:
            fails.append(f"ValuationGapFailed:{y[0]}^{y[1]}")
        n += 1
    return VerifyReport(not fails, fails, n)


def parse_word_raw(tokens) -> tuple:
    """Like ``parse_word`` but without free reduction; valuations depend on the literal word."""
    return tuple(parse_letter(t) for t in tokens)


def failure_flags(report: VerifyReport) -> set:
    return {f.split(":")[0] for f in report.failures}
