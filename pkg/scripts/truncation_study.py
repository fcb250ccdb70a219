#!/usr/bin/env python3
"""How ball truncation splits the nonnegative subgraph of a member ray.

For chi = (A -> 0, B -> 1) on F the ray is in the invariant, so the whole
nonnegative submonoid is connected.  Inside a finite ball some nonnegative
vertices are reachable only through paths that leave the ball.  The table
counts, for the radius-R core, how many such vertices remain cut off as the
enclosing ball grows.
"""
import argparse

from plsigma import corpus
from plsigma.characters import TabledChar, generator_values, word_value
from plsigma.groups import enumerate_ball
from plsigma.logreal import LogReal, lr_sign
from plsigma.sigma import gamma_chi_components


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--core", type=int, default=5)
    ap.add_argument("--max-radius", type=int, default=7)
    args = ap.parse_args()

    F = corpus.build("thompson_f")
    chi = TabledChar.make({"A": LogReal.make(0), "B": LogReal.make(1)})
    gv = generator_values(chi, F)
    print("radius  nonneg  components  identity-comp  core cut off")
    for r in range(args.core, args.max_radius + 1):
        ball = enumerate_ball(F, r)
        rep = gamma_chi_components(F, chi, ball=ball)
        comp = set(rep.identity_members)
        core = [i for i, w in enumerate(ball.words) if len(w) <= args.core and lr_sign(word_value(gv, w)) >= 0]
        cut = sum(1 for i in core if i not in comp)
        print(f"{r:>6}  {rep.vertices:>6}  {rep.components:>10}  {rep.identity_component:>13}  {cut:>12}")


if __name__ == "__main__":
    main()
