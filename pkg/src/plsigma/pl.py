"""Exact piecewise-linear homeomorphisms of the real line.

A :class:`PLMap` is stored as its list of breakpoints together with the two
slopes of the unbounded end pieces.  Everything is exact (``Fraction``), and
maps are always kept in canonical form so that ``==`` and ``hash`` agree with
pointwise equality.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
Number = Union[int, str, Fraction]

INF = math.inf


class PLError(ValueError):
    pass


class EmptyBreakpointList(PLError):
    pass


class DuplicateX(PLError):
    pass


class NonMonotone(PLError):
    pass


def rat(q: Number) -> Fraction:
    """Parse ``"num/den"`` strings, ints and Fractions into a Fraction."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(q)


def rat_str(q) -> str:
    if q == INF:
        return "inf"
    if q == -INF:
        return "-inf"
    return str(Fraction(q))


def parse_ext(s) -> Union[Fraction, float]:
    """Inverse of :func:`rat_str`; accepts the infinities."""
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return -INF
    return rat(s)


# ---------------------------------------------------------------- intervals

@dataclass(frozen=True)
class IntervalSpec:
    """The interval the group acts on: compact ``[a, c]``, ``[0, inf)`` or the line."""

    kind: str  # "compact" | "halfline" | "line"
    a: Fraction | None = None
    c: Fraction | None = None

    def __post_init__(self):
        if self.kind == "compact":
            if self.a is None or self.c is None or not self.a < self.c:
                raise ValueError("compact interval needs a < c")
        elif self.kind == "halfline":
            object.__setattr__(self, "a", Fraction(0))
            object.__setattr__(self, "c", None)
        elif self.kind == "line":
            object.__setattr__(self, "a", None)
            object.__setattr__(self, "c", None)
        else:
            raise ValueError(f"unknown interval kind {self.kind!r}")

    @classmethod
    def compact(cls, a: Number, c: Number) -> "IntervalSpec":
        return cls("compact", rat(a), rat(c))

    @classmethod
    def halfline(cls) -> "IntervalSpec":
        return cls("halfline")

    @classmethod
    def line(cls) -> "IntervalSpec":
        return cls("line")

    @property
    def lo(self):
        return -INF if self.a is None else self.a

    @property
    def hi(self):
        return INF if self.c is None else self.c

    def to_json(self) -> dict:
        if self.kind == "compact":
            return {"kind": "compact", "a": rat_str(self.a), "c": rat_str(self.c)}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, d: dict) -> "IntervalSpec":
        kind = d["kind"]
        if kind == "compact":
            return cls.compact(d["a"], d["c"])
        if kind in ("halfline", "half_line", "half-line"):
            return cls.halfline()
        if kind in ("line", "fullline", "full_line"):
            return cls.line()
        raise ValueError(f"unknown interval kind {kind!r}")


@dataclass(frozen=True)
class SupportSet:
    """Finite union of disjoint, sorted, maximal open intervals."""

    intervals: tuple = ()

    def __bool__(self):
        return bool(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def hull(self):
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def image(self, g: "PLMap") -> "SupportSet":
        return SupportSet(tuple((_ext_eval(g, lo), _ext_eval(g, hi)) for lo, hi in self.intervals))

    def within(self, lo, hi) -> bool:
        """True iff the closure of the support lies in ``[lo, hi]``."""
        h = self.hull()
        return h is None or (lo <= h[0] and h[1] <= hi)

    def covers(self, lo, hi) -> bool:
        """True iff the open interval ``(lo, hi)`` is contained in the support."""
        return any(a <= lo and hi <= b for a, b in self.intervals)

    def to_json(self):
        return [[rat_str(a), rat_str(b)] for a, b in self.intervals]


def _ext_eval(g, x):
    if x in (INF, -INF):
        return x
    return evaluate(g, x)


# ---------------------------------------------------------------- PL maps

@dataclass(frozen=True)
class PLMap:
    """Orientation preserving PL homeomorphism of R with finitely many breakpoints.

    ``xs``/``ys`` list the breakpoints, ``left_slope``/``right_slope`` the slopes
    on ``(-inf, xs[0]]`` and ``[xs[-1], inf)``.  Build instances through
    :func:`make_plmap`; the constructor does not canonicalize.
    """

    xs: tuple
    ys: tuple
    left_slope: Fraction
    right_slope: Fraction

    @property
    def breakpoints(self):
        return list(zip(self.xs, self.ys))

    def __call__(self, x):
        return evaluate(self, rat(x))

    def __matmul__(self, other: "PLMap") -> "PLMap":
        return compose(self, other)

    def is_identity(self) -> bool:
        return self == IDENTITY

    def is_affine(self) -> bool:
        return len(self.xs) == 1 and self.left_slope == self.right_slope

    def real_breakpoints(self) -> tuple:
        """x-coordinates where the slope actually changes."""
        return () if self.is_affine() else self.xs

    def piece_slopes(self) -> list:
        """Slopes of all pieces, left ray first and right ray last."""
        inner = [(self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
                 for i in range(len(self.xs) - 1)]
        return [self.left_slope, *inner, self.right_slope]

    def slope_right_of(self, x) -> Fraction:
        i = bisect_right(self.xs, x)
        if i == 0:
            return self.left_slope
        if i == len(self.xs):
            return self.right_slope
        return (self.ys[i] - self.ys[i - 1]) / (self.xs[i] - self.xs[i - 1])

    def slope_left_of(self, x) -> Fraction:
        i = bisect_left(self.xs, x)
        if i == 0:
            return self.left_slope
        if i == len(self.xs):
            return self.right_slope
        return (self.ys[i] - self.ys[i - 1]) / (self.xs[i] - self.xs[i - 1])

    def to_json(self) -> dict:
        return {
            "breakpoints": [[rat_str(x), rat_str(y)] for x, y in zip(self.xs, self.ys)],
            "left_slope": rat_str(self.left_slope),
            "right_slope": rat_str(self.right_slope),
        }

    @classmethod
    def from_json(cls, d: dict) -> "PLMap":
        return make_plmap([(x, y) for x, y in d["breakpoints"]],
                          d.get("left_slope", "1"), d.get("right_slope", "1"))

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"PLMap([{pts}], {self.left_slope}, {self.right_slope})"


def _canonical(xs: Sequence, ys: Sequence, ls: Fraction, rs: Fraction) -> PLMap:
    n = len(xs)
    slopes = [ls]
    slopes += [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(n - 1)]
    slopes.append(rs)
    keep = [i for i in range(n) if slopes[i] != slopes[i + 1]]
    if not keep:
        # affine: one anchor at x = 0
        b = ys[0] - ls * xs[0]
        return PLMap((Fraction(0),), (b,), ls, rs)
    return PLMap(tuple(xs[i] for i in keep), tuple(ys[i] for i in keep), ls, rs)


def make_plmap(breakpoints: Iterable, left_slope: Number = 1, right_slope: Number = 1) -> PLMap:
    pts = [(rat(x), rat(y)) for x, y in breakpoints]
    if not pts:
        raise EmptyBreakpointList("at least one breakpoint is required")
    ls, rs = rat(left_slope), rat(right_slope)
    if ls <= 0 or rs <= 0:
        raise NonMonotone("end slopes must be positive")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    for i in range(len(xs) - 1):
        if xs[i] == xs[i + 1]:
            raise DuplicateX(f"repeated x-coordinate {xs[i]}")
        if xs[i] > xs[i + 1]:
            raise PLError("breakpoints must be sorted by x")
        if ys[i + 1] <= ys[i]:
            raise NonMonotone(f"non-increasing piece between x={xs[i]} and x={xs[i + 1]}")
    return _canonical(xs, ys, ls, rs)


IDENTITY = PLMap((Fraction(0),), (Fraction(0),), Fraction(1), Fraction(1))


def identity() -> PLMap:
    return IDENTITY


def affine(slope: Number, offset: Number) -> PLMap:
    s = rat(slope)
    return make_plmap([(0, rat(offset))], s, s)


def evaluate(f: PLMap, x) -> Fraction:
    xs, ys = f.xs, f.ys
    if x <= xs[0]:
        return ys[0] + f.left_slope * (x - xs[0])
    if x >= xs[-1]:
        return ys[-1] + f.right_slope * (x - xs[-1])
    i = bisect_right(xs, x) - 1
    x0, y0 = xs[i], ys[i]
    return y0 + (ys[i + 1] - y0) * (x - x0) / (xs[i + 1] - x0)


def evaluate_inverse(f: PLMap, y) -> Fraction:
    xs, ys = f.xs, f.ys
    if y <= ys[0]:
        return xs[0] + (y - ys[0]) / f.left_slope
    if y >= ys[-1]:
        return xs[-1] + (y - ys[-1]) / f.right_slope
    i = bisect_right(ys, y) - 1
    x0, y0 = xs[i], ys[i]
    return x0 + (xs[i + 1] - x0) * (y - y0) / (ys[i + 1] - y0)


def compose(f: PLMap, g: PLMap) -> PLMap:
    """The map ``x -> f(g(x))``."""
    if f is IDENTITY or f == IDENTITY:
        return g
    if g is IDENTITY or g == IDENTITY:
        return f
    cand = set(g.real_breakpoints())
    cand.update(evaluate_inverse(g, x) for x in f.real_breakpoints())
    ls, rs = f.left_slope * g.left_slope, f.right_slope * g.right_slope
    if not cand:
        return affine(ls, evaluate(f, evaluate(g, Fraction(0))))
    xs = sorted(cand)
    ys = [evaluate(f, evaluate(g, x)) for x in xs]
    return _canonical(xs, ys, ls, rs)


def invert(f: PLMap) -> PLMap:
    return _canonical(f.ys, f.xs, 1 / f.left_slope, 1 / f.right_slope)


def power(f: PLMap, n: int) -> PLMap:
    if n < 0:
        f, n = invert(f), -n
    result, base = IDENTITY, f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def conjugate(g: PLMap, f: PLMap) -> PLMap:
    """``g f g^-1``, whose support is ``g(supp f)``."""
    return compose(compose(g, f), invert(g))


def commutator(f: PLMap, g: PLMap) -> PLMap:
    """``f g f^-1 g^-1``."""
    return compose(compose(f, g), invert(compose(g, f)))


def _merge_closed(pieces):
    pieces.sort(key=lambda p: (p[0], p[1]))
    merged = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return merged


def fixed_set(f: PLMap) -> list:
    """Fixed points of ``f`` as merged closed intervals (possibly degenerate or unbounded)."""
    xs, ys = f.xs, f.ys
    pieces = []
    # left ray
    d0 = ys[0] - xs[0]
    if f.left_slope == 1:
        if d0 == 0:
            pieces.append([-INF, xs[0]])
    else:
        r = xs[0] - d0 / (f.left_slope - 1)
        if r <= xs[0]:
            pieces.append([r, r])
    for i in range(len(xs) - 1):
        da, db = ys[i] - xs[i], ys[i + 1] - xs[i + 1]
        if da == 0 and db == 0:
            pieces.append([xs[i], xs[i + 1]])
        elif da == 0:
            pieces.append([xs[i], xs[i]])
        elif db == 0:
            pieces.append([xs[i + 1], xs[i + 1]])
        elif (da > 0) != (db > 0):
            r = xs[i] + da * (xs[i + 1] - xs[i]) / (da - db)
            pieces.append([r, r])
    dn = ys[-1] - xs[-1]
    if f.right_slope == 1:
        if dn == 0:
            pieces.append([xs[-1], INF])
    else:
        r = xs[-1] - dn / (f.right_slope - 1)
        if r >= xs[-1]:
            pieces.append([r, r])
    return _merge_closed(pieces)


def support(f: PLMap) -> SupportSet:
    """Maximal open intervals on which ``f(t) != t``."""
    fixed = fixed_set(f)
    out = []
    prev = -INF
    for lo, hi in fixed:
        if lo > prev:
            out.append((prev, lo))
        prev = hi
    if prev < INF:
        out.append((prev, INF))
    return SupportSet(tuple(out))


def translate(f: PLMap, shift: Number) -> PLMap:
    """Conjugate of ``f`` by the translation ``t -> t + shift``."""
    s = rat(shift)
    return make_plmap([(x + s, y + s) for x, y in zip(f.xs, f.ys)], f.left_slope, f.right_slope)


def rescale(f: PLMap, scale: Number, shift: Number) -> PLMap:
    """Conjugate of ``f`` by ``t -> scale * t + shift``."""
    k, s = rat(scale), rat(shift)
    return make_plmap([(k * x + s, k * y + s) for x, y in zip(f.xs, f.ys)], f.left_slope, f.right_slope)
