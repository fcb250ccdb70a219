"""Finitely generated groups of PL maps: specs, words, Cayley balls, structural checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (LEFT, RIGHT, TranslationObservableUndefined, bounded_end, end_kind,
                         end_observable, germ_at, trivial_at)
from .lattice import lattice_contains, rational_span_contains
from .pl import (IDENTITY, INF, IntervalSpec, PLMap, SupportSet, commutator, compose,
                 evaluate, invert, rat_str, support)

KER_LEFT, KER_RIGHT, UNTAGGED = "KerLeft", "KerRight", "Untagged"


class ValidationError(ValueError):
    def __init__(self, fieldname: str, msg: str):
        super().__init__(f"{fieldname}: {msg}")
        self.field = fieldname


class ResourceBudgetExceeded(RuntimeError):
    pass


# ------------------------------------------------------------------ words

def letter_str(letter) -> str:
    s, e = letter
    return s if e == 1 else f"{s}^-1"


def parse_letter(tok: str):
    tok = tok.strip()
    if tok.endswith("^-1"):
        return tok[:-3], -1
    if tok.endswith("^1"):
        tok = tok[:-2]
    return tok, 1


def word_reduce(letters) -> tuple:
    out = []
    for s, e in letters:
        if out and out[-1][0] == s and out[-1][1] == -e:
            out.pop()
        else:
            out.append((s, e))
    return tuple(out)


def word_inverse(w) -> tuple:
    return tuple((s, -e) for s, e in reversed(w))


def word_str(w) -> str:
    return " ".join(letter_str(x) for x in w) if w else "1"


def word_tokens(w) -> list:
    return [letter_str(x) for x in w]


def parse_word(obj) -> tuple:
    """Accepts a token list ``["A", "B^-1"]`` or a string ``"A B^-1"`` (``"1"`` is empty)."""
    if isinstance(obj, str):
        obj = [] if obj.strip() in ("", "1") else obj.split()
    return word_reduce(parse_letter(t) for t in obj)


def word_power(w, n: int) -> tuple:
    if n < 0:
        w, n = word_inverse(w), -n
    return word_reduce(tuple(w) * n)


def exponent_sums(w, symbols) -> list:
    idx = {s: i for i, s in enumerate(symbols)}
    v = [0] * len(symbols)
    for s, e in w:
        v[idx[s]] += e
    return v


# ------------------------------------------------------------- group specs

@dataclass
class GroupSpec:
    name: str
    interval: IntervalSpec
    generators: dict  # symbol -> PLMap, insertion order is the generator order
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self._inv = {s: invert(f) for s, f in self.generators.items()}

    @property
    def symbols(self) -> list:
        return list(self.generators)

    def letters(self) -> list:
        out = []
        for s in self.generators:
            out += [(s, 1), (s, -1)]
        return out

    def letter_map(self, letter) -> PLMap:
        s, e = letter
        return self.generators[s] if e == 1 else self._inv[s]

    def eval_word(self, w, extra: dict | None = None) -> PLMap:
        """Product of the letters, ``x1 x2 ... = x1 o x2 o ...``.

        ``extra`` maps additional symbols (e.g. certificate letters) to maps.
        """
        g = IDENTITY
        for s, e in w:
            if extra and s in extra:
                m = extra[s] if e == 1 else invert(extra[s])
            else:
                m = self.letter_map((s, e))
            g = compose(g, m)
        return g

    # -- validation
    def validate(self) -> "GroupSpec":
        if not self.generators:
            raise ValidationError("generators", "at least one generator is required")
        iv = self.interval
        for s, f in self.generators.items():
            if not s or any(ch in s for ch in " ^@"):
                raise ValidationError("generators", f"bad symbol {s!r}")
            if not support(f).within(iv.lo, iv.hi):
                raise ValidationError(f"generators.{s}", "support leaves the interval")
        for s, t in self.tags.items():
            if s not in self.generators:
                raise ValidationError(f"tags.{s}", "unknown generator")
            if t == KER_LEFT and not trivial_at(self.generators[s], iv, LEFT):
                raise ValidationError(f"tags.{s}", "KerLeft generator has nontrivial left germ")
            if t == KER_RIGHT and not trivial_at(self.generators[s], iv, RIGHT):
                raise ValidationError(f"tags.{s}", "KerRight generator has nontrivial right germ")
            if t not in (KER_LEFT, KER_RIGHT, UNTAGGED):
                raise ValidationError(f"tags.{s}", f"unknown tag {t!r}")
        return self

    def inferred_tags(self) -> dict:
        out = {}
        for s, f in self.generators.items():
            t = self.tags.get(s, UNTAGGED)
            if t == UNTAGGED:
                if trivial_at(f, self.interval, LEFT):
                    t = KER_LEFT
                elif trivial_at(f, self.interval, RIGHT):
                    t = KER_RIGHT
            out[s] = t
        return out

    def translation_germs(self) -> bool:
        """Every generator germ at an infinite end is a translation."""
        for side in (LEFT, RIGHT):
            if not bounded_end(self.interval, side):
                if any(germ_at(f, self.interval, side).slope != 1 for f in self.generators.values()):
                    return False
        return True

    def support_union(self) -> SupportSet:
        pieces = sorted(iv for f in self.generators.values() for iv in support(f))
        return SupportSet(tuple(pieces))

    def to_json(self) -> dict:
        d = {"name": self.name, "interval": self.interval.to_json(),
             "generators": {s: f.to_json() for s, f in self.generators.items()}}
        if self.tags:
            d["tags"] = dict(self.tags)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GroupSpec":
        try:
            iv = IntervalSpec.from_json(d["interval"])
        except (KeyError, ValueError, ZeroDivisionError) as e:
            raise ValidationError("interval", str(e)) from None
        gens = {}
        for s, fd in d.get("generators", {}).items():
            try:
                gens[s] = PLMap.from_json(fd)
            except (KeyError, ValueError, ZeroDivisionError, TypeError) as e:
                raise ValidationError(f"generators.{s}", str(e)) from None
        return cls(d.get("name", "G"), iv, gens, dict(d.get("tags", {}))).validate()

    def same_as(self, other: "GroupSpec") -> bool:
        return (self.interval == other.interval and self.generators == other.generators
                and list(self.generators) == list(other.generators))


# ------------------------------------------------------------ Cayley balls

@dataclass
class BallIndex:
    radius: int
    letters: list
    maps: list
    words: list
    index: dict
    relations: list
    layer_sizes: list
    edges: list  # (i, letter position, j) for every edge with both ends in the ball

    def __len__(self):
        return len(self.maps)

    def word_of(self, f: PLMap):
        i = self.index.get(f)
        return None if i is None else self.words[i]

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "size": len(self.maps),
            "layer_sizes": self.layer_sizes,
            "elements": [{"word": word_tokens(w), "map": f.to_json()} for w, f in zip(self.words, self.maps)],
            "relations": [word_tokens(r) for r in self.relations],
        }

    def to_dot(self) -> str:
        lines = ["digraph ball {"]
        for i, w in enumerate(self.words):
            lines.append(f'  n{i} [label="{word_str(w)}"];')
        for i, k, j in self.edges:
            s, e = self.letters[k]
            if e == 1:
                lines.append(f'  n{i} -> n{j} [label="{s}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def enumerate_ball(G: GroupSpec, radius: int, cap: int = 10**6) -> BallIndex:
    """Breadth-first ball of the given radius with deduplication on canonical maps.

    Products that land on a known element contribute the loop word as a relation.
    Edges leaving the outermost layer are followed only to detect edges and
    relations inside the ball.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    letters = G.letters()
    lmaps = [G.letter_map(x) for x in letters]
    maps, words, parents = [IDENTITY], [()], [0]
    index = {IDENTITY: 0}
    relations, seen_rel = [], set()
    edges = []
    layer_sizes = [1]
    frontier = [0]
    for r in range(radius + 1):
        new = []
        for i in frontier:
            g, w = maps[i], words[i]
            for k, x in enumerate(lmaps):
                if w and w[-1] == (letters[k][0], -letters[k][1]):
                    edges.append((i, k, parents[i]))
                    continue
                h = compose(g, x)
                j = index.get(h)
                if j is None:
                    if r == radius:
                        continue
                    j = len(maps)
                    index[h] = j
                    maps.append(h)
                    words.append(w + (letters[k],))
                    parents.append(i)
                    new.append(j)
                    if len(maps) > cap:
                        raise ResourceBudgetExceeded(f"ball exceeds {cap} elements at radius {r + 1}")
                else:
                    rel = word_reduce(w + (letters[k],) + word_inverse(words[j]))
                    if rel and rel not in seen_rel:
                        seen_rel.add(rel)
                        relations.append(rel)
                edges.append((i, k, j))
        if r < radius:
            layer_sizes.append(len(new))
        frontier = new
    return BallIndex(radius, letters, maps, words, index, relations, layer_sizes, edges)


def relation_exponent_rank(ball: BallIndex, symbols) -> int:
    """Rank over Q of the exponent-sum matrix of the harvested relations."""
    from .lattice import IntLattice
    lat = IntLattice(len(symbols))
    for r in ball.relations:
        lat.add(exponent_sums(r, symbols))
    return lat.rank()


# --------------------------------------------------------- structural checks

@dataclass
class IrreducibilityResult:
    irreducible: bool
    witness: Fraction | None = None

    def to_json(self):
        if self.irreducible:
            return {"result": "Irreducible"}
        return {"result": "FixedPointWitness", "x": rat_str(self.witness)}


def _between(lo, hi):
    if lo == -INF and hi == INF:
        return Fraction(0)
    if lo == -INF:
        return hi - 1
    if hi == INF:
        return lo + 1
    return (lo + hi) / 2


def irreducibility_check(G: GroupSpec) -> IrreducibilityResult:
    """Irreducible iff the generator supports cover the open interior of the interval."""
    lo, hi = G.interval.lo, G.interval.hi
    covered = lo
    for s, e in sorted(G.support_union()):
        if e <= covered:
            continue
        if s < covered or (s == covered == lo):
            covered = e
        elif s == covered:
            return IrreducibilityResult(False, covered)
        else:
            return IrreducibilityResult(False, _between(covered, s))
        if covered >= hi:
            return IrreducibilityResult(True)
    if covered < hi:
        return IrreducibilityResult(False, covered if covered != lo else _between(lo, hi))
    return IrreducibilityResult(True)


@dataclass
class NonabelianResult:
    found: bool
    pair: tuple | None = None  # two words

    def to_json(self):
        if not self.found:
            return {"result": "NotFoundWithinBall"}
        return {"result": "Witness", "f": word_tokens(self.pair[0]), "g": word_tokens(self.pair[1])}


def nonabelian_witness(G: GroupSpec, ball: BallIndex, limit: int | None = None) -> NonabelianResult:
    n = len(ball.maps) if limit is None else min(limit, len(ball.maps))
    for i in range(n):
        f = ball.maps[i]
        for j in range(i + 1, n):
            g = ball.maps[j]
            if compose(f, g) != compose(g, f):
                return NonabelianResult(True, (ball.words[i], ball.words[j]))
    return NonabelianResult(False)


def is_abelian(G: GroupSpec) -> bool:
    """Exact: a group is abelian iff its generators commute pairwise."""
    gens = list(G.generators.values())
    return all(compose(f, g) == compose(g, f) for i, f in enumerate(gens) for g in gens[i + 1:])


@dataclass
class KernelGenerationResult:
    status: str  # VerifiedByTags | VerifiedByLattice | NotVerified
    witnesses: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status != "NotVerified"

    def to_json(self):
        return {"status": self.status, "witnesses": [word_tokens(w) for w in self.witnesses],
                "evidence": self.evidence}


def _span_test(G, kernel_words, kernel_maps, side):
    """Do the ``side``-observables of the kernel elements span those of the generators?"""
    iv = G.interval
    gen_obs = [end_observable(f, iv, side) for f in G.generators.values()]
    ker_obs = [end_observable(f, iv, side) for f in kernel_maps]
    if end_kind(iv, side) == "slope":
        ok = lattice_contains(ker_obs, gen_obs)
    else:
        ok = rational_span_contains(ker_obs, gen_obs)
    return all(ok)


def kernel_generation_check(G: GroupSpec, ball: BallIndex) -> KernelGenerationResult:
    """Is G = ker(left germ) . ker(right germ)?

    Either image condition suffices: the germ image at one end is generated by
    the images of elements with trivial germ at the other end.
    """
    tags = G.inferred_tags()
    if all(t in (KER_LEFT, KER_RIGHT) for t in tags.values()):
        return KernelGenerationResult("VerifiedByTags", evidence={"tags": tags})
    iv = G.interval
    if not G.translation_germs():
        return KernelGenerationResult("NotVerified", evidence={
            "radius": ball.radius, "reason": "germs at an infinite end are not all translations"})
    evidence = {"radius": ball.radius}
    for side, other in ((LEFT, RIGHT), (RIGHT, LEFT)):
        idx = [i for i, f in enumerate(ball.maps) if trivial_at(f, iv, other) and not trivial_at(f, iv, side)]
        evidence[f"kernel_{other}_elements"] = len(idx)
        try:
            ok = _span_test(G, [ball.words[i] for i in idx], [ball.maps[i] for i in idx], side)
        except TranslationObservableUndefined:
            ok = False
        if ok:
            # keep a small generating subset as the witness list
            chosen = _minimal_witnesses(G, [ball.maps[i] for i in idx], side)
            return KernelGenerationResult("VerifiedByLattice", [ball.words[idx[k]] for k in chosen],
                                          {**evidence, "image_side": side})
    return KernelGenerationResult("NotVerified", evidence=evidence)


def _minimal_witnesses(G, maps, side):
    chosen = []
    for k in range(len(maps)):
        chosen.append(k)
        if _span_test(G, None, [maps[c] for c in chosen], side):
            break
    # drop redundant ones greedily
    for k in list(chosen):
        trial = [c for c in chosen if c != k]
        if trial and _span_test(G, None, [maps[c] for c in trial], side):
            chosen = trial
    return chosen


@dataclass
class ConjugateResult:
    found: bool
    word: tuple | None = None
    conjugator: PLMap | None = None
    image: PLMap | None = None


def _hull_image(g: PLMap, hull):
    lo, hi = hull
    return (lo if lo == -INF else evaluate(g, lo), hi if hi == INF else evaluate(g, hi))


def conjugate_into(G: GroupSpec, ball: BallIndex, h: PLMap, target, max_power: int = 64) -> ConjugateResult:
    """Find ``g`` with ``g(supp h)`` inside the closed ``target`` window.

    Scans the ball, then powers ``g^m`` of every ball element (a cheap stand-in
    for iterating a contracting element).  Returns ``g h g^-1`` as ``image``.
    """
    lo, hi = target
    hull = support(h).hull()
    if hull is None or (lo <= hull[0] and hull[1] <= hi):
        return ConjugateResult(True, (), IDENTITY, h)
    for i, g in enumerate(ball.maps):
        cur = hull
        for m in range(1, max_power + 1):
            cur = _hull_image(g, cur)
            if lo <= cur[0] and cur[1] <= hi:
                w = word_power(ball.words[i], m)
                gm = G.eval_word(w)
                return ConjugateResult(True, w, gm, compose(compose(gm, h), invert(gm)))
            if cur == hull:
                break
    return ConjugateResult(False)
