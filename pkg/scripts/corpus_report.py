#!/usr/bin/env python3
"""Run the probe suite of every corpus entry and print a one-line summary each."""
import argparse
import json
import time

from plsigma import corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=corpus.names())
    ap.add_argument("--json", help="write all probe reports here")
    args = ap.parse_args()

    reports = []
    for name in args.names:
        t = time.time()
        rep = corpus.run_probes(name)
        verdicts = {}
        for c in rep.classifications:
            verdicts[c["verdict"]] = verdicts.get(c["verdict"], 0) + 1
        failed = [l for l, ok, _ in rep.checks if not ok]
        status = "ok" if rep.ok else f"FAILED {failed}"
        print(f"{name:<22} {len(rep.checks):>3} checks  {verdicts}  {status}  ({time.time() - t:.1f}s)")
        reports.append(rep.to_json())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2, default=str)


if __name__ == "__main__":
    main()
