"""Exact reals of the form ``q + sum_p c_p ln p`` and a rigorous sign test.

Since 1 and the logarithms of the primes are linearly independent over Q, such
a number is zero exactly when every coefficient is zero.  Nonzero values get
their sign from outward-rounded interval arithmetic, refined until the
enclosure excludes 0.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from mpmath.libmp import from_int, mpf_sign
from mpmath.libmp import libmpi
from sympy import factorint

DEFAULT_PRECISION_CAP = 4096
PRECISION_ENV = "PLSIGMA_PRECISION_BITS"
_START_BITS = 64


class NonPositive(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    """Interval refinement hit the precision cap without excluding zero."""


def precision_cap() -> int:
    env = os.environ.get(PRECISION_ENV)
    return int(env) if env else DEFAULT_PRECISION_CAP


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple:
    return tuple(sorted(factorint(n).items()))


def slope_exponents(q) -> dict:
    """Prime exponents of a positive rational, e.g. ``12/5 -> {2: 2, 3: 1, 5: -1}``."""
    q = Fraction(q)
    if q <= 0:
        raise NonPositive(f"{q} is not positive")
    out = dict(_factor(q.numerator)) if q.numerator > 1 else {}
    if q.denominator > 1:
        for p, e in _factor(q.denominator):
            out[p] = out.get(p, 0) - e
    return out


def _clean(logs) -> tuple:
    return tuple(sorted((int(p), Fraction(c)) for p, c in logs if c != 0))


@dataclass(frozen=True)
class LogReal:
    rat: Fraction = Fraction(0)
    logs: tuple = ()  # sorted ((prime, coefficient), ...), no zero coefficients

    @classmethod
    def make(cls, rat=0, logs: Mapping | None = None) -> "LogReal":
        return cls(Fraction(rat), _clean((logs or {}).items()))

    @classmethod
    def log_of(cls, q, coeff=1) -> "LogReal":
        """``coeff * ln q`` for a positive rational ``q``."""
        c = Fraction(coeff)
        return cls.make(0, {p: c * e for p, e in slope_exponents(q).items()})

    def log_dict(self) -> dict:
        return dict(self.logs)

    def is_zero(self) -> bool:
        return self.rat == 0 and not self.logs

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other) -> "LogReal":
        other = as_logreal(other)
        d = dict(self.logs)
        for p, c in other.logs:
            d[p] = d.get(p, 0) + c
        return LogReal(self.rat + other.rat, _clean(d.items()))

    __radd__ = __add__

    def __neg__(self) -> "LogReal":
        return LogReal(-self.rat, tuple((p, -c) for p, c in self.logs))

    def __sub__(self, other) -> "LogReal":
        return self + (-as_logreal(other))

    def __rsub__(self, other) -> "LogReal":
        return as_logreal(other) - self

    def __mul__(self, k) -> "LogReal":
        if isinstance(k, LogReal):
            raise TypeError("use formal_product for LogReal * LogReal")
        k = Fraction(k)
        if k == 0:
            return ZERO
        return LogReal(self.rat * k, tuple((p, c * k) for p, c in self.logs))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"rat": str(self.rat), "logs": {str(p): str(c) for p, c in self.logs}}

    @classmethod
    def from_json(cls, d) -> "LogReal":
        if isinstance(d, (str, int)):
            return cls.make(Fraction(d))
        return cls.make(Fraction(d.get("rat", "0")),
                        {int(p): Fraction(c) for p, c in d.get("logs", {}).items()})

    def approx(self) -> float:
        import math
        return float(self.rat) + sum(float(c) * math.log(p) for p, c in self.logs)

    def __repr__(self):
        parts = [str(self.rat)] if self.rat or not self.logs else []
        parts += [f"{c}*ln{p}" for p, c in self.logs]
        return "LogReal(" + " + ".join(parts) + ")"


ZERO = LogReal()


def as_logreal(v) -> LogReal:
    if isinstance(v, LogReal):
        return v
    return LogReal(Fraction(v))


# ------------------------------------------------- formal polynomials in ln p

def formal_product(u: LogReal, v: LogReal) -> dict:
    """Product of two LogReals in the polynomial algebra over the symbols ``ln p``.

    Keys are sorted tuples of primes (``()`` is the constant monomial).
    """
    def terms(w):
        out = [((), w.rat)] if w.rat else []
        out += [((p,), c) for p, c in w.logs]
        return out

    poly = {}
    for m1, c1 in terms(u):
        for m2, c2 in terms(v):
            key = tuple(sorted(m1 + m2))
            poly[key] = poly.get(key, 0) + c1 * c2
    return {k: c for k, c in poly.items() if c != 0}


def poly_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c != 0}


def _iv_rat(q: Fraction, prec: int):
    n = (from_int(q.numerator), from_int(q.numerator))
    if q.denominator == 1:
        return n
    d = (from_int(q.denominator), from_int(q.denominator))
    return libmpi.mpi_div(n, d, prec)


def _poly_enclosure(poly: dict, prec: int):
    logs = {}
    total = (from_int(0), from_int(0))
    for mono, c in poly.items():
        term = _iv_rat(c, prec)
        for p in mono:
            if p not in logs:
                logs[p] = libmpi.mpi_log((from_int(p), from_int(p)), prec)
            term = libmpi.mpi_mul(term, logs[p], prec)
        total = libmpi.mpi_add(total, term, prec)
    return total


def poly_sign(poly: dict, cap: int | None = None) -> int:
    """Sign of a formal polynomial in ``ln p``.

    Returns 0 only for the formally zero polynomial.  A nonzero polynomial whose
    sign cannot be separated from 0 within ``cap`` bits raises
    :class:`PrecisionExhausted`.
    """
    if not poly:
        return 0
    if all(k == () for k in poly):
        c = poly[()]
        return (c > 0) - (c < 0)
    cap = cap or precision_cap()
    bits = _START_BITS
    while True:
        lo, hi = _poly_enclosure(poly, bits)
        if mpf_sign(lo) > 0:
            return 1
        if mpf_sign(hi) < 0:
            return -1
        if bits >= cap:
            raise PrecisionExhausted(f"sign undecided at {bits} bits")
        bits = min(2 * bits, cap)


def _as_poly(v: LogReal) -> dict:
    out = {(): v.rat} if v.rat else {}
    out.update({(p,): c for p, c in v.logs})
    return out


def lr_sign(v: LogReal, cap: int | None = None) -> int:
    """-1, 0 or 1.  Zero is decided formally, other signs by interval refinement."""
    return poly_sign(_as_poly(as_logreal(v)), cap)


def lr_cmp(u: LogReal, v: LogReal, cap: int | None = None) -> int:
    return lr_sign(as_logreal(u) - as_logreal(v), cap)


def lr_min(values, cap: int | None = None) -> LogReal:
    it = iter(values)
    best = as_logreal(next(it))
    for v in it:
        if lr_cmp(v, best, cap) < 0:
            best = as_logreal(v)
    return best
