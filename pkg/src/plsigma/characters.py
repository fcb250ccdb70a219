"""Germs at the ends of the interval and the characters built from them.

Characters take values in :class:`~plsigma.logreal.LogReal`.  Two flavours:

* :class:`GermChar` reads germ observables of a map directly (``L_p``, ``R_p``
  prime exponents of the end slopes, ``T_l``, ``T_r`` translation amplitudes,
  plus the log-slope characters ``chi_ell`` and ``chi_r``);
* :class:`TabledChar` assigns a value to every generator symbol.

On a group both reduce to a vector of generator values, which is what the
rest of the engine works with.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .logreal import (LogReal, PrecisionExhausted, ZERO, formal_product, lr_sign,
                      poly_sign, poly_sub, slope_exponents)
from .pl import IntervalSpec, PLMap, evaluate, rat

LEFT, RIGHT = "left", "right"


class UndefinedObservable(ValueError):
    pass


class TranslationObservableUndefined(UndefinedObservable):
    pass


class ZeroCharacter(ValueError):
    pass


class InconsistentOnRelation(ValueError):
    def __init__(self, word):
        super().__init__(f"character does not vanish on relation {word}")
        self.word = word


# ------------------------------------------------------------------ germs

@dataclass(frozen=True)
class Germ:
    """Affine map ``t -> slope * t + offset``."""

    slope: Fraction
    offset: Fraction

    def __call__(self, t):
        return self.slope * t + self.offset

    def then(self, other: "Germ") -> "Germ":
        """``self o other``."""
        return Germ(self.slope * other.slope, self.slope * other.offset + self.offset)

    def is_identity(self) -> bool:
        return self.slope == 1 and self.offset == 0


def bounded_end(ival: IntervalSpec, side: str) -> bool:
    return (ival.a if side == LEFT else ival.c) is not None


def germ_at(f: PLMap, ival: IntervalSpec, side: str) -> Germ:
    if side == LEFT:
        if ival.a is not None:
            s = f.slope_right_of(ival.a)
            return Germ(s, ival.a - s * ival.a)
        s = f.left_slope
        return Germ(s, f.ys[0] - s * f.xs[0])
    if ival.c is not None:
        s = f.slope_left_of(ival.c)
        return Germ(s, ival.c - s * ival.c)
    s = f.right_slope
    return Germ(s, f.ys[-1] - s * f.xs[-1])


def germs(f: PLMap, ival: IntervalSpec) -> tuple:
    return germ_at(f, ival, LEFT), germ_at(f, ival, RIGHT)


def trivial_at(f: PLMap, ival: IntervalSpec, side: str) -> bool:
    return germ_at(f, ival, side).is_identity()


def bounded_support_test(f: PLMap, ival: IntervalSpec) -> bool:
    """Membership in the subgroup of maps with trivial germs at both ends."""
    return trivial_at(f, ival, LEFT) and trivial_at(f, ival, RIGHT)


def end_kind(ival: IntervalSpec, side: str) -> str:
    """``"slope"`` at a finite end point, ``"translation"`` at an infinite one."""
    return "slope" if bounded_end(ival, side) else "translation"


def end_observable(f: PLMap, ival: IntervalSpec, side: str):
    """Germ image in the abelian group where it lives at that end.

    Prime-exponent dict of the slope at a finite end, translation amplitude at
    an infinite end (requires slope 1).
    """
    g = germ_at(f, ival, side)
    if end_kind(ival, side) == "slope":
        return slope_exponents(g.slope)
    if g.slope != 1:
        raise TranslationObservableUndefined(f"{side} germ has slope {g.slope}")
    return g.offset


def translation_amplitude(f: PLMap, ival: IntervalSpec, side: str) -> Fraction:
    g = germ_at(f, ival, side)
    if g.slope != 1:
        raise TranslationObservableUndefined(f"{side} germ has slope {g.slope}, not a translation")
    return g.offset


# ------------------------------------------------------------- characters

def _obs_key(name: str) -> str:
    return {"T_ℓ": "T_l", "T_ell": "T_l"}.get(name, name.replace("ℓ", "l"))


@dataclass(frozen=True)
class GermChar:
    weights: tuple = ()  # ((observable, Fraction), ...)
    chi_ell: Fraction = Fraction(0)
    chi_r: Fraction = Fraction(0)

    @classmethod
    def make(cls, weights: Mapping | None = None, chi_ell=0, chi_r=0) -> "GermChar":
        w = tuple(sorted((_obs_key(k), rat(v)) for k, v in (weights or {}).items() if rat(v) != 0))
        return cls(w, rat(chi_ell), rat(chi_r))

    def value(self, f: PLMap, ival: IntervalSpec) -> LogReal:
        left, right = germs(f, ival)
        total = ZERO
        for obs, w in self.weights:
            if obs.startswith("L_") or obs.startswith("R_"):
                side, g = (LEFT, left) if obs[0] == "L" else (RIGHT, right)
                _check_log_end(ival, side, g)
                total = total + w * slope_exponents(g.slope).get(int(obs[2:]), 0)
            elif obs == "T_l":
                total = total + w * translation_amplitude(f, ival, LEFT)
            elif obs == "T_r":
                total = total + w * translation_amplitude(f, ival, RIGHT)
            else:
                raise ValueError(f"unknown observable {obs!r}")
        if self.chi_ell:
            _check_log_end(ival, LEFT, left)
            total = total + LogReal.log_of(left.slope, self.chi_ell)
        if self.chi_r:
            _check_log_end(ival, RIGHT, right)
            total = total + LogReal.log_of(right.slope, self.chi_r)
        return total

    def scaled(self, k) -> "GermChar":
        k = rat(k)
        return GermChar(tuple((o, w * k) for o, w in self.weights), self.chi_ell * k, self.chi_r * k)

    def to_json(self) -> dict:
        if not self.weights and not self.chi_r and self.chi_ell == 1:
            return {"kind": "chi_ell"}
        if not self.weights and not self.chi_ell and self.chi_r == 1:
            return {"kind": "chi_r"}
        w = {o: str(v) for o, v in self.weights}
        if self.chi_ell:
            w["CHI_ELL"] = str(self.chi_ell)
        if self.chi_r:
            w["CHI_R"] = str(self.chi_r)
        return {"kind": "germ", "weights": w}


def _check_log_end(ival, side, g):
    if not bounded_end(ival, side) and g.slope != 1:
        raise UndefinedObservable(f"log-slope observable at the unbounded {side} end")


@dataclass(frozen=True)
class TabledChar:
    values: tuple = ()  # ((symbol, LogReal), ...) in insertion order

    @classmethod
    def make(cls, values: Mapping) -> "TabledChar":
        return cls(tuple((s, v if isinstance(v, LogReal) else LogReal.from_json(v))
                         for s, v in values.items()))

    def table(self) -> dict:
        return dict(self.values)

    def scaled(self, k) -> "TabledChar":
        return TabledChar(tuple((s, v * k) for s, v in self.values))

    def to_json(self) -> dict:
        out = {}
        for s, v in self.values:
            out[s] = str(v.rat) if not v.logs else v.to_json()
        return {"kind": "tabled", "values": out}


CHI_ELL = GermChar.make(chi_ell=1)
CHI_R = GermChar.make(chi_r=1)
TAU_ELL = GermChar.make({"T_l": 1})
NEG_TAU_R = GermChar.make({"T_r": -1})

NAMED = {"CHI_ELL": CHI_ELL, "CHI_R": CHI_R, "TAU_ELL": TAU_ELL, "NEG_TAU_R": NEG_TAU_R}


def exceptional_characters(ival: IntervalSpec) -> list:
    """The germ rays that can lie outside the invariant, as ``(tag, side, character)``."""
    left = ("CHI_ELL", LEFT, CHI_ELL) if bounded_end(ival, LEFT) else ("TAU_ELL", LEFT, TAU_ELL)
    right = ("CHI_R", RIGHT, CHI_R) if bounded_end(ival, RIGHT) else ("NEG_TAU_R", RIGHT, NEG_TAU_R)
    return [left, right]


def character_from_json(d) -> GermChar | TabledChar:
    kind = d["kind"].lower()
    if kind == "chi_ell":
        return CHI_ELL
    if kind == "chi_r":
        return CHI_R
    if kind == "tau_ell":
        return TAU_ELL
    if kind in ("neg_tau_r", "-tau_r"):
        return NEG_TAU_R
    if kind == "germ":
        w = dict(d.get("weights", {}))
        ce = w.pop("CHI_ELL", 0)
        cr = w.pop("CHI_R", 0)
        return GermChar.make(w, ce, cr)
    if kind == "tabled":
        return TabledChar.make(d["values"])
    raise ValueError(f"unknown character kind {d['kind']!r}")


def scale(chi, k):
    return chi.scaled(k)


# ------------------------------------------------------- evaluation on G

def generator_values(chi, G) -> dict:
    """Values of ``chi`` on the generators of ``G`` (a GroupSpec)."""
    if isinstance(chi, GermChar):
        return {s: chi.value(f, G.interval) for s, f in G.generators.items()}
    table = chi.table()
    missing = [s for s in G.generators if s not in table]
    if missing:
        raise ValueError(f"tabled character lacks generators {missing}")
    extra = [s for s in table if s not in G.generators]
    if extra:
        raise ValueError(f"tabled character names unknown generators {extra}")
    return {s: table[s] for s in G.generators}


def word_value(values: Mapping, word) -> LogReal:
    total = ZERO
    for sym, e in word:
        total = total + values[sym] * e
    return total


def char_eval(chi, g, G) -> LogReal:
    """Value on a PLMap (GermChar only) or on a word over the generators."""
    if isinstance(g, PLMap):
        if not isinstance(chi, GermChar):
            if g.is_identity():
                return ZERO
            for sym, f in G.generators.items():
                if f == g:
                    return chi.table()[sym]
            raise TypeError("tabled characters are evaluated on words")
        return chi.value(g, G.interval)
    return word_value(generator_values(chi, G), g)


def is_zero_character(chi, G) -> bool:
    return all(v.is_zero() for v in generator_values(chi, G).values())


@dataclass
class ConsistencyReport:
    ok: bool
    checked: int
    failing: tuple | None = None


def char_consistency(chi, relations, G) -> ConsistencyReport:
    values = generator_values(chi, G)
    for n, rel in enumerate(relations):
        if not word_value(values, rel).is_zero():
            return ConsistencyReport(False, n + 1, tuple(rel))
    return ConsistencyReport(True, len(relations))


def require_consistent(chi, relations, G) -> None:
    rep = char_consistency(chi, relations, G)
    if not rep.ok:
        raise InconsistentOnRelation(rep.failing)


def subsphere_test(chi, K, G) -> bool:
    """Does ``chi`` vanish on every element of ``K`` (maps or words)?"""
    return all(char_eval(chi, k, G).is_zero() for k in K)


# ------------------------------------------------------------ rays

SAME, OPPOSITE, DISTINCT, UNRESOLVED = "SameRay", "OppositeRay", "Distinct", "Unresolved"


@dataclass
class RayComparison:
    outcome: str
    witness: dict | None = None


@dataclass(frozen=True)
class Ray:
    base: object
    context: object = field(compare=False, default=None)

    def same_as(self, other: "Ray", ball=None, cap=None) -> bool:
        return ray_compare(self.base, other.base, self.context, ball, cap).outcome == SAME


def ray_compare(chi1, chi2, G, ball=None, cap: int | None = None) -> RayComparison:
    """Compare the rays of two characters of ``G``.

    Proportionality is tested on generator values (a character is determined by
    them): all 2x2 cross-differences must cancel formally.  ``Distinct`` always
    carries a witness: an element where exactly one character vanishes, or a
    generator pair whose cross-difference is rigorously nonzero.
    """
    v1 = generator_values(chi1, G)
    v2 = generator_values(chi2, G)
    syms = list(G.generators)
    if all(v1[s].is_zero() for s in syms) or all(v2[s].is_zero() for s in syms):
        raise ZeroCharacter("ray of the zero character")

    nonzero_cross = []
    for i, si in enumerate(syms):
        for sj in syms[i + 1:]:
            d = poly_sub(formal_product(v1[si], v2[sj]), formal_product(v1[sj], v2[si]))
            if d:
                nonzero_cross.append((si, sj, d))

    if not nonzero_cross:
        for s in syms:
            if v1[s] and v2[s]:
                try:
                    same = lr_sign(v1[s], cap) == lr_sign(v2[s], cap)
                except PrecisionExhausted:
                    return RayComparison(UNRESOLVED, {"reason": "sign", "generator": s})
                return RayComparison(SAME if same else OPPOSITE, {"generator": s})
        raise AssertionError("proportional nonzero characters share no nonzero generator")

    # zero-pattern witness: one character vanishes where the other does not
    candidates = [((s, 1),) for s in syms]
    if ball is not None:
        candidates += [w for w in ball.words if len(w) > 1]
    for w in candidates:
        a, b = word_value(v1, w), word_value(v2, w)
        if a.is_zero() != b.is_zero():
            return RayComparison(DISTINCT, {"kind": "zero-pattern", "word": list(w)})

    for si, sj, d in nonzero_cross:
        try:
            sgn = poly_sign(d, cap)
        except PrecisionExhausted:
            continue
        return RayComparison(DISTINCT, {"kind": "cross-difference", "pair": [si, sj], "sign": sgn})
    return RayComparison(UNRESOLVED, {"reason": "cross-differences not separated from 0"})


def sign_of(v: LogReal, cap: int | None = None) -> int:
    return lr_sign(v, cap)


def evaluate_point(f: PLMap, x) -> Fraction:
    return evaluate(f, rat(x))
