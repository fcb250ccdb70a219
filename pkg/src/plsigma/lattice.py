"""Subgroup membership in Z^n (row echelon over Z) and in (Q, +)."""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class IntLattice:
    """Sublattice of Z^n kept in echelon form, one pivot row per leading column."""

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots: dict[int, list[int]] = {}

    def add(self, vec) -> None:
        v = list(vec)
        assert len(v) == self.dim
        for col in range(self.dim):
            if v[col] == 0:
                continue
            row = self.pivots.get(col)
            if row is None:
                if v[col] < 0:
                    v = [-x for x in v]
                self.pivots[col] = v
                return
            a, b = row[col], v[col]
            g, s, t = _xgcd(a, b)
            new_row = [s * x + t * y for x, y in zip(row, v)]
            v = [(a // g) * y - (b // g) * x for x, y in zip(row, v)]
            if new_row[col] < 0:
                new_row = [-x for x in new_row]
            self.pivots[col] = new_row

    def __contains__(self, vec) -> bool:
        v = list(vec)
        for col in range(self.dim):
            if v[col] == 0:
                continue
            row = self.pivots.get(col)
            if row is None or v[col] % row[col]:
                return False
            q = v[col] // row[col]
            v = [x - q * y for x, y in zip(v, row)]
        return True

    def rank(self) -> int:
        return len(self.pivots)


def prime_vectors(dicts):
    """Align sparse prime-exponent dicts into dense integer vectors."""
    primes = sorted({p for d in dicts for p in d})
    return primes, [[d.get(p, 0) for p in primes] for d in dicts]


def lattice_contains(generators, targets) -> list:
    """For each target exponent dict, whether it lies in the span of ``generators``."""
    primes, vecs = prime_vectors(list(generators) + list(targets))
    lat = IntLattice(len(primes))
    for v in vecs[:len(generators)]:
        lat.add(v)
    return [v in lat for v in vecs[len(generators):]]


def rational_gcd(values) -> Fraction:
    """Positive generator of the subgroup of Q spanned by ``values`` (0 if trivial)."""
    num, den = 0, 1
    for q in values:
        q = Fraction(q)
        if q == 0:
            continue
        # gcd(num/den, a/b) = gcd(num*b, a*den) / (den*b)
        num, den = gcd(num * q.denominator, q.numerator * den), den * q.denominator
    return Fraction(num, den) if num else Fraction(0)


def rational_span_contains(generators, targets) -> list:
    g = rational_gcd(generators)
    out = []
    for t in targets:
        t = Fraction(t)
        out.append(t == 0 if g == 0 else (t / g).denominator == 1)
    return out
