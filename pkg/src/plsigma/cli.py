"""Command line front end.

Exit codes: 0 when every verdict is as expected (or verified), 2 when an
``Unknown`` verdict is present, 1 on any error (reported as JSON).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import corpus
from .characters import (TabledChar, ZeroCharacter, character_from_json, char_consistency)
from .config import RunConfig
from .groups import (GroupSpec, ResourceBudgetExceeded, ValidationError, enumerate_ball,
                     irreducibility_check, kernel_generation_check, nonabelian_witness, word_str)
from .sigma import (UNKNOWN, GroupContext, InconsistentCharacter, OverlappingSupports, classify_ray,
                    known_complement, product_complement)
from .verify import verify_certificate


class ParseError(ValueError):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from None


def _probes_from(data) -> list:
    items = data.get("probes", data.get("rays", [])) if isinstance(data, dict) else data
    out = []
    for i, p in enumerate(items):
        try:
            if "character" in p:
                out.append((p.get("label", f"ray{i}"), character_from_json(p["character"]), p.get("expected")))
            else:
                out.append((f"ray{i}", character_from_json(p), None))
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as e:
            raise ValidationError(f"probes[{i}]", str(e)) from None
    return out


def load_spec(path, consistency_radius: int = 5):
    """Group spec plus probe characters; tabled probes must vanish on the harvested relations."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    G = GroupSpec.from_json(data)
    probes = _probes_from(data)
    _check_probes(G, probes, consistency_radius)
    return G, probes


def _check_probes(G, probes, radius):
    tabled = [(i, c) for i, (_, c, _) in enumerate(probes) if isinstance(c, TabledChar)]
    if not tabled:
        return
    ball = enumerate_ball(G, radius)
    for i, c in tabled:
        try:
            rep = char_consistency(c, ball.relations, G)
        except ValueError as e:
            raise ValidationError(f"probes[{i}]", str(e)) from None
        if not rep.ok:
            raise ValidationError(f"probes[{i}]", f"character does not vanish on relation {word_str(rep.failing)}")


# ------------------------------------------------------------------ commands

def cmd_check(args, cfg):
    G, _ = load_spec(args.spec, min(cfg.radius, 5))
    ball = enumerate_ball(G, min(cfg.radius, 4), cfg.element_cap)
    return {"name": G.name, "interval": G.interval.to_json(),
            "irreducibility": irreducibility_check(G).to_json(),
            "nonabelian": nonabelian_witness(G, ball, limit=400).to_json(),
            "kernel_generation": kernel_generation_check(G, ball).to_json(),
            "translation_germs": G.translation_germs(),
            "tags": G.inferred_tags()}, 0


def cmd_ball(args, cfg):
    G, _ = load_spec(args.spec, 0)
    r = args.ball_radius if args.ball_radius is not None else cfg.radius
    ball = enumerate_ball(G, r, cfg.element_cap)
    if args.dot or cfg.format == "dot":
        return ball.to_dot(), 0
    return ball.to_json(), 0


def _classify_all(G, probes, cfg):
    ctx = GroupContext(G, radius=cfg.radius, cap=cfg.cap, element_cap=cfg.element_cap)
    results, code = [], 0
    for label, chi, expected in probes:
        res = classify_ray(G, chi, ctx)
        item = {"label": label, **res.to_json()}
        if expected is not None:
            item["expected"] = expected
            if res.verdict != expected:
                code = 1
        if res.verdict == UNKNOWN and code == 0:
            code = 2
        results.append(item)
    return results, code


def cmd_classify(args, cfg):
    G, probes = load_spec(args.spec, min(cfg.radius, 5))
    if args.rays:
        probes = _probes_from(_read_json(args.rays))
        _check_probes(G, probes, min(cfg.radius, 5))
    if not probes:
        raise ValidationError("rays", "no rays to classify")
    results, code = _classify_all(G, probes, cfg)
    summary = {}
    for r in results:
        summary[r["verdict"]] = summary.get(r["verdict"], 0) + 1
    return {"group": G.name, "radius": cfg.radius, "summary": summary, "results": results}, code


def _certificates(data):
    if isinstance(data, dict) and data.get("type") == "MembershipCertificate":
        yield data
    elif isinstance(data, dict):
        for v in data.values():
            yield from _certificates(v)
    elif isinstance(data, list):
        for v in data:
            yield from _certificates(v)


def cmd_verify(args, cfg):
    reports = []
    code = 0
    for path in args.certs:
        certs = list(_certificates(_read_json(path)))
        if not certs:
            reports.append({"file": path, "ok": False, "failures": ["NoCertificate"]})
            code = 1
        for c in certs:
            rep = verify_certificate(c, cfg.cap)
            reports.append({"file": path, **rep.to_json()})
            if not rep.ok:
                code = 1
    return {"verified": reports}, code


def cmd_corpus(args, cfg):
    if args.action == "list":
        return [{"name": n, "description": corpus.entry(n).description} for n in corpus.names()], 0
    if not args.name:
        raise ValidationError("name", "corpus entry name required")
    if args.action == "export":
        return corpus.export(args.name), 0
    rep = corpus.run_probes(args.name, radius=args.entry_radius)
    code = 0 if rep.ok else 1
    if code == 0 and rep.unknown_count:
        code = 2
    return rep.to_json(), code


def cmd_product(args, cfg):
    factors = []
    for path in args.specs:
        G, _ = load_spec(path, 0)
        kc = known_complement(G, GroupContext(G, radius=min(cfg.radius, 4), cap=cfg.cap,
                                              element_cap=cfg.element_cap))
        factors.append((G, kc))
    rays = product_complement([(G, kc.rays) for G, kc in factors])
    status = "exact" if all(kc.status == "exact" for _, kc in factors) else "lower-bound"
    return {"factors": [{"name": G.name, "complement": [t for t, _ in kc.rays], "status": kc.status,
                         "reason": kc.reason} for G, kc in factors],
            "complement": [{"factor": k, "ray": tag, "character": chi.to_json()} for k, tag, chi in rays],
            "status": status}, 0


# ----------------------------------------------------------------- plumbing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plsigma", description="Sigma^1 classification for PL groups")
    p.add_argument("--radius", type=int, default=6, help="ball radius (default 6)")
    p.add_argument("--element-cap", type=int, default=10**6)
    p.add_argument("--precision", type=int, default=None, help="interval precision cap in bits")
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--out", default=None, help="write the report to this file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="structural hypothesis checks")
    s.add_argument("spec")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("ball", help="enumerate a Cayley ball")
    s.add_argument("spec")
    s.add_argument("--radius", type=int, default=None, dest="ball_radius")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("classify", help="classify probe rays")
    s.add_argument("spec")
    s.add_argument("--rays", default=None)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("certify-verify", help="re-check membership certificates")
    s.add_argument("certs", nargs="+")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", help="built-in example groups")
    s.add_argument("action", choices=("list", "run", "export"))
    s.add_argument("name", nargs="?")
    s.add_argument("--radius", type=int, default=None, dest="entry_radius",
                   help="override the entry's own ball radius")
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("product", help="complement of a direct product of factor specs")
    s.add_argument("specs", nargs="+")
    s.set_defaults(func=cmd_product)
    return p


def _render(payload, fmt) -> str:
    if isinstance(payload, str):
        return payload
    if fmt == "text":
        return _text(payload)
    return json.dumps(payload, indent=2) + "\n"


def _text(payload, indent=0) -> str:
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines) + "\n"
    if isinstance(payload, list):
        return "".join(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}\n" for v in payload)
    return f"{pad}{payload}\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.radius, args.element_cap, args.precision, args.format)
        payload, code = args.func(args, cfg)
    except (ParseError, ValidationError, InconsistentCharacter, ZeroCharacter, OverlappingSupports,
            ResourceBudgetExceeded, corpus.UnknownEntry, ValueError) as e:
        payload = {"error": type(e).__name__, "message": str(e).strip("'\"")}
        if isinstance(e, ValidationError):
            payload["field"] = e.field
        code = 1
    text = _render(payload, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
