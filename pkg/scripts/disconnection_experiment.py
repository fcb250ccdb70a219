#!/usr/bin/env python3
"""Ball evidence for why [chi_l] lies outside the invariant of F.

Uses the generating set u = B A^-1, v = B, both inside the monoid
M = {g : chi_l(g) >= 0, g^-1 linear on [0, 1/8]}.  Walking from the identity
inside the chi_l-nonnegative part of the ball never leaves M, while the
nonnegative part has many components.
"""
import argparse
from fractions import Fraction

from plsigma import corpus
from plsigma.characters import CHI_ELL
from plsigma.groups import GroupSpec, enumerate_ball, word_str
from plsigma.logreal import lr_sign
from plsigma.pl import compose, invert
from plsigma.sigma import gamma_chi_components, linear_on_left


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--radii", type=int, nargs="+", default=[4, 5, 6, 7])
    ap.add_argument("--delta", type=Fraction, default=Fraction(1, 8))
    args = ap.parse_args()

    F = corpus.build("thompson_f")
    A, B = F.generators["A"], F.generators["B"]
    G = GroupSpec("F_from_M", F.interval, {"u": compose(B, invert(A)), "v": B}).validate()
    M = linear_on_left(args.delta, CHI_ELL, F)
    print("radius  elements  nonneg  components  identity-comp  outside-M(id comp)  outside-M(ball)  first outside")
    for r in args.radii:
        ball = enumerate_ball(G, r)
        rep = gamma_chi_components(G, CHI_ELL, ball=ball, monoid=M)
        outside = []
        for g, w in zip(ball.maps, ball.words):
            v = CHI_ELL.value(g, F.interval)
            if lr_sign(v) >= 0 and not M.contains(g, v):
                outside.append(w)
        first = word_str(outside[0]) if outside else "-"
        print(f"{r:>6}  {len(ball):>8}  {rep.vertices:>6}  {rep.components:>10}  {rep.identity_component:>13}"
              f"  {rep.monoid_violations:>18}  {len(outside):>15}  {first}")


if __name__ == "__main__":
    main()
