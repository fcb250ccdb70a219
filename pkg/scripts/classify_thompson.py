#!/usr/bin/env python3
"""Classify the 12 probe rays of Thompson's group F and verify every certificate."""
import argparse
import json

from plsigma import corpus
from plsigma.sigma import GroupContext, classify_ray
from plsigma.verify import verify_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=6)
    ap.add_argument("--json", help="write the full classifications here")
    args = ap.parse_args()

    e = corpus.entry("thompson_f")
    G = e.builder()
    ctx = GroupContext(G, radius=args.radius)
    rows = []
    for p in e.probes:
        res = classify_ray(G, p.chi, ctx)
        checked = ""
        if res.verdict == "Member":
            rep = verify_certificate(res.certificate.to_json())
            checked = "verified" if rep.ok else f"REJECTED {rep.failures}"
        elif res.verdict == "NonMember":
            checked = f"= [{res.matched}]"
        print(f"{p.label:>14}  {res.verdict:<9}  {checked}")
        rows.append({"label": p.label, **res.to_json()})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
