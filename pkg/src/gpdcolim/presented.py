"""Finitely presented groupoids with bounded decision procedures.

A presentation is a finite generating graph plus closed relator words.
Words are tuples of signed generators ((gid, +1) or (gid, -1)); the source
of (g, +1) is the source of g, of (g, -1) its target.

Exact tools: free reduction (decides the relator-free case), per-component
abelian invariants via a spanning tree and Smith normal form, and bounded
coset enumeration of vertex groups.  Word equality answers are certified:
Equal needs a rewrite path or a completed enumeration, Distinct an
abelianization or enumeration separation; everything else is Unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from . import coset
from .grouptable import GroupTable
from .groupoid import Arrow, FinGroupoid, GpdMorphism
from .intlinalg import AbGroup, abelian_invariants

Word = tuple[tuple[str, int], ...]


def word_inv(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Word) -> Word:
    out: list[tuple[str, int]] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_mul(w1: Word, w2: Word) -> Word:
    return free_reduce(w1 + w2)


def cyclic_rotations(w: Word) -> list[Word]:
    return [w[i:] + w[:i] for i in range(max(1, len(w)))]


@dataclass(frozen=True)
class RewriteBound:
    max_rewrite_steps: int = 10000
    max_word_length: int = 64
    max_enumeration_count: int = 10000

    def __post_init__(self):
        if min(self.max_rewrite_steps, self.max_word_length, self.max_enumeration_count) <= 0:
            raise ValueError("bounds must be positive")


DEFAULT_BOUND = RewriteBound()


class Answer(Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PWord:
    """A path in a presented groupoid: endpoints plus a freely reduced word.
    Used as the arrow value wherever finite groupoids use arrow ids."""

    src: str
    tgt: str
    word: Word

    @property
    def is_identity(self) -> bool:
        return not self.word


@dataclass(frozen=True, eq=False)
class PresentedGroupoid:
    objects: tuple[str, ...]
    generators: tuple[Arrow, ...]
    relators: tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted(self.objects)))
        object.__setattr__(
            self, "generators", tuple(sorted(self.generators, key=lambda a: a.id))
        )
        object.__setattr__(self, "_by_id", {a.id: a for a in self.generators})
        for w in self.relators:
            s, t = self.word_endpoints(w)
            if s != t:
                raise ValueError(f"relator {w} is not a closed word")

    def gen(self, gid: str) -> Arrow:
        return self._by_id[gid]

    def letter_endpoints(self, letter: tuple[str, int]) -> tuple[str, str]:
        g = self.gen(letter[0])
        return (g.src, g.tgt) if letter[1] > 0 else (g.tgt, g.src)

    def word_endpoints(self, w: Word) -> tuple[str, str]:
        """(source, target); raises if the word is not a path.  The empty
        word is a loop at an unspecified object, returned as (None, None)."""
        if not w:
            return (None, None)
        s, t = self.letter_endpoints(w[0])
        for letter in w[1:]:
            s2, t2 = self.letter_endpoints(letter)
            if s2 != t:
                raise ValueError(f"word {w} is not a path")
            t = t2
        return s, t

    def check_word(self, w: Word) -> None:
        for g, e in w:
            if g not in self._by_id:
                raise ValueError(f"unknown generator {g}")
            if e not in (1, -1):
                raise ValueError(f"bad exponent {e}")
        self.word_endpoints(w)

    # -- arrow interface shared with word groupoids --------------------------

    def id_at(self, x: str) -> PWord:
        return PWord(x, x, ())

    def arrow_of_gen(self, gid: str) -> PWord:
        g = self.gen(gid)
        return PWord(g.src, g.tgt, ((gid, 1),))

    def mul(self, a: PWord, b: PWord) -> PWord:
        if a.tgt != b.src:
            raise ValueError("paths not composable")
        return PWord(a.src, b.tgt, free_reduce(a.word + b.word))

    def inv(self, a: PWord) -> PWord:
        return PWord(a.tgt, a.src, word_inv(a.word))

    # -- components and vertex presentations --------------------------------

    def components(self) -> list[tuple[str, ...]]:
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            rx, ry = find(g.src), find(g.tgt)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        blocks: dict[str, list[str]] = {}
        for x in self.objects:
            blocks.setdefault(find(x), []).append(x)
        return sorted(tuple(sorted(b)) for b in blocks.values())

    def component_of(self, x: str) -> tuple[str, ...]:
        for comp in self.components():
            if x in comp:
                return comp
        raise ValueError(f"unknown object {x}")

    def spanning_tree(self, comp: tuple[str, ...]) -> tuple[str, set[str]]:
        """Breadth-first tree from the lexicographically least object of the
        component; returns (basepoint, set of tree generator ids)."""
        base = comp[0]
        seen = {base}
        tree: set[str] = set()
        frontier = [base]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    if g.src == x and g.tgt not in seen:
                        seen.add(g.tgt)
                        tree.add(g.id)
                        nxt.append(g.tgt)
                    elif g.tgt == x and g.src not in seen:
                        seen.add(g.src)
                        tree.add(g.id)
                        nxt.append(g.src)
            frontier = nxt
        return base, tree

    def vertex_presentation(self, x: str) -> "VertexPresentation":
        """Collapse a spanning tree of the component of x: non-tree
        generators freely generate the vertex group, and each relator
        rewrites by dropping tree letters."""
        comp = self.component_of(x)
        base, tree = self.spanning_tree(comp)
        gens = [g.id for g in self.generators
                if g.id not in tree and g.src in comp and g.tgt in comp]
        rels = []
        for w in self.relators:
            if not w:
                continue
            s, _ = self.word_endpoints(w)
            if s not in comp:
                continue
            rels.append(free_reduce(tuple((g, e) for g, e in w if g not in tree)))
        return VertexPresentation(self, base, tuple(gens), tuple(rels), frozenset(tree))

    def abelian_invariants_at(self, x: str) -> AbGroup:
        vp = self.vertex_presentation(x)
        idx = {g: i for i, g in enumerate(vp.gens)}
        rows = []
        for w in vp.rels:
            row = [0] * len(vp.gens)
            for g, e in w:
                row[idx[g]] += e
            rows.append(row)
        return abelian_invariants(len(vp.gens), rows)


@dataclass(frozen=True, eq=False)
class VertexPresentation:
    parent: PresentedGroupoid
    basepoint: str
    gens: tuple[str, ...]
    rels: tuple[Word, ...]
    tree: frozenset[str]

    def project_word(self, w: Word) -> Word:
        """Image of a closed word of the parent under tree collapse."""
        return free_reduce(tuple((g, e) for g, e in w if g not in self.tree))

    def enumerate(self, bound: RewriteBound) -> coset.EnumeratedGroup | None:
        idx = {g: i for i, g in enumerate(self.gens)}
        rels = [coset.encode_word([(idx[g], e) for g, e in w]) for w in self.rels]
        return coset.enumerate_group(len(self.gens), rels, bound.max_enumeration_count)

    def encode(self, w: Word) -> list[int]:
        idx = {g: i for i, g in enumerate(self.gens)}
        return coset.encode_word([(idx[g], e) for g, e in w])


def pg_free(objects, generator_triples, name: str = "free") -> PresentedGroupoid:
    """Free groupoid on a directed graph: the relator-free presentation."""
    gens = tuple(Arrow(i, s, t) for i, s, t in generator_triples)
    return PresentedGroupoid(tuple(objects), gens, (), name)


def pg_from_groupoid(g: FinGroupoid, prefix: str = "") -> PresentedGroupoid:
    """Present a finite groupoid by all its non-identity arrows and its
    multiplication table."""
    tag = (lambda s: f"{prefix}{s}") if prefix else (lambda s: s)
    gens = tuple(Arrow(tag(a), g.src(a), g.tgt(a)) for a in g.non_identity_arrows())
    nonid = set(g.non_identity_arrows())
    rels = []
    for (a, b), c in sorted(g.compose.items()):
        if a not in nonid or b not in nonid:
            continue
        if c in nonid:
            rels.append(((tag(a), 1), (tag(b), 1), (tag(c), -1)))
        else:
            rels.append(((tag(a), 1), (tag(b), 1)))
    return PresentedGroupoid(g.objects, gens, tuple(rels), g.name)


def pg_abelian_invariants(p: PresentedGroupoid, x: str) -> AbGroup:
    return p.abelian_invariants_at(x)


def pg_word_problem_bounded(
    p: PresentedGroupoid, w1: Word, w2: Word, bound: RewriteBound = DEFAULT_BOUND
) -> Answer:
    """Certified bounded word problem for parallel words.

    Never wrong when not Unknown: Equal is backed by a rewrite path or a
    completed coset enumeration; Distinct by abelianization or enumeration.
    """
    p.check_word(w1)
    p.check_word(w2)
    r1, r2 = free_reduce(w1), free_reduce(w2)
    if r1 == r2:
        return Answer.EQUAL
    e1, e2 = p.word_endpoints(r1), p.word_endpoints(r2)
    fixed1 = e1 if e1 != (None, None) else e2
    fixed2 = e2 if e2 != (None, None) else e1
    if fixed1 != fixed2 and (None, None) not in (e1, e2):
        return Answer.DISTINCT
    if not p.relators:
        # free groupoid: reduced words are normal forms
        return Answer.DISTINCT
    # compare in a vertex group: v = w1 w2^-1 is a closed word
    v = word_mul(r1, word_inv(r2))
    if not v:
        return Answer.EQUAL
    at = p.word_endpoints(v)[0]
    vp = p.vertex_presentation(at)
    pv = vp.project_word(v)
    # abelianization separates?
    idx = {g: i for i, g in enumerate(vp.gens)}
    rows = []
    for w in vp.rels:
        row = [0] * len(vp.gens)
        for g, e in w:
            row[idx[g]] += e
        rows.append(row)
    vec = [0] * len(vp.gens)
    for g, e in pv:
        vec[idx[g]] += e
    from .intlinalg import row_span_contains

    if not row_span_contains(rows, vec):
        return Answer.DISTINCT
    # bounded enumeration decides exactly when it completes
    enum = vp.enumerate(bound)
    if enum is not None:
        return Answer.EQUAL if enum.eval_word(vp.encode(pv)) == 0 else Answer.DISTINCT
    # bounded rewrite search for an equality certificate
    if _rewrite_reaches(vp, pv, bound):
        return Answer.EQUAL
    return Answer.UNKNOWN


def _rewrite_reaches(vp: VertexPresentation, target: Word, bound: RewriteBound) -> bool:
    """BFS from target towards the empty word by splicing relator conjugates
    (sound: every move preserves the group element)."""
    moves: list[Word] = []
    for w in vp.rels:
        w = free_reduce(w)
        if not w:
            continue
        for rot in cyclic_rotations(w):
            moves.append(rot)
            moves.append(word_inv(rot))
    seen = {target}
    frontier = [target]
    steps = 0
    while frontier and steps < bound.max_rewrite_steps:
        nxt = []
        for w in frontier:
            for mv in moves:
                for pos in range(len(w) + 1):
                    steps += 1
                    cand = free_reduce(w[:pos] + mv + w[pos:])
                    if not cand:
                        return True
                    if len(cand) <= bound.max_word_length and cand not in seen:
                        seen.add(cand)
                        nxt.append(cand)
                    if steps >= bound.max_rewrite_steps:
                        break
                if steps >= bound.max_rewrite_steps:
                    break
            if steps >= bound.max_rewrite_steps:
                break
        frontier = nxt
    return False


# -- bounded realization -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class RealizedGroupoid:
    """A finite groupoid realizing a presentation, with the generator map."""

    groupoid: FinGroupoid
    gen_images: dict[str, str]

    def eval_word(self, p: PresentedGroupoid, w: Word, at: str | None = None) -> str:
        g = self.groupoid
        if not w:
            if at is None:
                raise ValueError("empty word needs an object")
            return g.id_at(at)
        aids = [
            self.gen_images[gid] if e > 0 else g.inv(self.gen_images[gid])
            for gid, e in w
        ]
        return g.mul_word(aids)


def pg_bounded_realize(
    p: PresentedGroupoid, bound: RewriteBound = DEFAULT_BOUND
) -> RealizedGroupoid | None:
    """Realize a presented groupoid as a finite composition table when every
    component's vertex group enumeration completes within the budget.

    The component over basepoint x0 with vertex group V is rebuilt as
    V x (codiscrete on the component): arrows are triples (x, v, y)."""
    comps = p.components()
    vps = []
    enums = []
    for comp in comps:
        vp = p.vertex_presentation(comp[0])
        enum = vp.enumerate(bound)
        if enum is None:
            return None
        vps.append(vp)
        enums.append(enum)
    objects = p.objects
    arrows = []
    compose = {}
    identity = {}
    inverse = {}
    aid = lambda x, v, y: f"{x}|{v}|{y}"
    elem_inv: list[dict[int, int]] = []
    for enum in enums:
        inv_map = {}
        for v in range(enum.order):
            for w in range(enum.order):
                if enum.mul(v, w) == 0:
                    inv_map[v] = w
                    break
        elem_inv.append(inv_map)
    for ci, comp in enumerate(comps):
        enum = enums[ci]
        for x in comp:
            for y in comp:
                for v in range(enum.order):
                    arrows.append(Arrow(aid(x, v, y), x, y))
        for x in comp:
            identity[x] = aid(x, 0, x)
            for y in comp:
                for v in range(enum.order):
                    inverse[aid(x, v, y)] = aid(y, elem_inv[ci][v], x)
                for z in comp:
                    for v in range(enum.order):
                        for w in range(enum.order):
                            compose[aid(x, v, y), aid(y, w, z)] = aid(x, enum.mul(v, w), z)
    g = FinGroupoid(objects, tuple(arrows), compose, identity, inverse, f"{p.name}!")
    gen_images = {}
    for ci, comp in enumerate(comps):
        vp, enum = vps[ci], enums[ci]
        for gen in p.generators:
            if gen.src not in comp:
                continue
            v = enum.eval_word(vp.encode(vp.project_word(_loop_of(p, vp, gen))))
            gen_images[gen.id] = aid(gen.src, v, gen.tgt)
    return RealizedGroupoid(g, gen_images)


def _loop_of(p: PresentedGroupoid, vp: VertexPresentation, gen: Arrow) -> Word:
    # under tree collapse a generator is already a vertex-group word; the
    # tree letters connecting it to the basepoint die, so the bare letter
    # suffices as a closed-word surrogate
    return ((gen.id, 1),)


def realized_morphism(
    p: PresentedGroupoid, real: RealizedGroupoid, source: FinGroupoid,
    gen_of_arrow: dict[str, Word], object_map: dict[str, str],
) -> GpdMorphism:
    """Morphism from a finite groupoid into the realization, given each
    arrow's image word in the presentation."""
    arrow_map = {}
    for a in source.arrows:
        w = gen_of_arrow[a.id]
        arrow_map[a.id] = real.eval_word(p, w, object_map[a.src])
    return GpdMorphism(source, real.groupoid, dict(object_map), arrow_map)
