"""Finite groupoids as explicit composition tables.

Conventions used throughout the package:

* composition is diagrammatic: for a: x -> y and b: y -> z the composite
  mul(a, b) runs x -> z;
* hom(x, y) is the set of arrows with source x and target y;
* object and arrow ids are strings, and constructors canonicalise by
  sorting them, so equal mathematical inputs give identical outputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .grouptable import GroupTable

ISO_MAX_OBJECTS = 16
ISO_MAX_ARROWS = 256


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "invalid:\n  " + "\n  ".join(self.violations)


@dataclass(frozen=True, eq=False)
class FinGroupoid:
    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    compose: dict[tuple[str, str], str]
    identity: dict[str, str]
    inverse: dict[str, str]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted(self.objects)))
        object.__setattr__(
            self, "arrows", tuple(sorted(self.arrows, key=lambda a: a.id))
        )
        object.__setattr__(self, "_by_id", {a.id: a for a in self.arrows})
        hom: dict[tuple[str, str], list[str]] = {}
        star: dict[str, list[str]] = {x: [] for x in self.objects}
        for a in self.arrows:
            hom.setdefault((a.src, a.tgt), []).append(a.id)
            star[a.src].append(a.id)
        object.__setattr__(self, "_hom", hom)
        object.__setattr__(self, "_star", star)

    # -- basic accessors ---------------------------------------------------

    def arrow(self, aid: str) -> Arrow:
        return self._by_id[aid]

    def src(self, aid: str) -> str:
        return self._by_id[aid].src

    def tgt(self, aid: str) -> str:
        return self._by_id[aid].tgt

    def mul(self, a: str, b: str) -> str:
        return self.compose[a, b]

    def inv(self, a: str) -> str:
        return self.inverse[a]

    def id_at(self, x: str) -> str:
        return self.identity[x]

    def is_identity(self, a: str) -> bool:
        return self.identity.get(self._by_id[a].src) == a

    def hom(self, x: str, y: str) -> list[str]:
        return list(self._hom.get((x, y), []))

    def star(self, x: str) -> list[str]:
        """Arrows with source x."""
        return list(self._star.get(x, []))

    def costar(self, y: str) -> list[str]:
        return [a.id for a in self.arrows if a.tgt == y]

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def non_identity_arrows(self) -> list[str]:
        return [a.id for a in self.arrows if not self.is_identity(a.id)]

    def same_table(self, other: "FinGroupoid") -> bool:
        """Structural equality: same objects, arrows and tables."""
        return (
            isinstance(other, FinGroupoid)
            and self.objects == other.objects
            and self.arrows == other.arrows
            and self.compose == other.compose
            and self.identity == other.identity
            and self.inverse == other.inverse
        )

    def mul_word(self, aids: list[str]) -> str:
        """Compose a nonempty composable sequence of arrow ids."""
        out = aids[0]
        for a in aids[1:]:
            out = self.mul(out, a)
        return out


def validate_groupoid(g: FinGroupoid) -> ValidationReport:
    """Check every groupoid axiom instance; the report lists each failure."""
    bad: list[str] = []
    ids = {a.id for a in g.arrows}
    for x in g.objects:
        e = g.identity.get(x)
        if e is None or e not in ids:
            bad.append(f"identity missing at object {x}")
            continue
        ea = g.arrow(e)
        if ea.src != x or ea.tgt != x:
            bad.append(f"identity at {x} is not a loop at {x}")
    for a in g.arrows:
        if a.src not in g.objects or a.tgt not in g.objects:
            bad.append(f"arrow {a.id}: endpoint not an object")
        if a.id not in g.inverse or g.inverse[a.id] not in ids:
            bad.append(f"inverse missing for arrow {a.id}")
    # compose table domain: exactly the composable pairs
    for a in g.arrows:
        for b in g.arrows:
            comp = g.compose.get((a.id, b.id))
            if a.tgt == b.src:
                if comp is None:
                    bad.append(f"compose undefined on composable pair ({a.id},{b.id})")
                elif comp not in ids:
                    bad.append(f"compose({a.id},{b.id}) not an arrow")
                else:
                    c = g.arrow(comp)
                    if c.src != a.src or c.tgt != b.tgt:
                        bad.append(f"compose({a.id},{b.id}) endpoint mismatch")
            elif comp is not None:
                bad.append(f"compose defined on non-composable pair ({a.id},{b.id})")
    if bad:
        return ValidationReport(tuple(bad))
    # identity neutrality
    for a in g.arrows:
        if g.mul(g.id_at(a.src), a.id) != a.id:
            bad.append(f"left identity fails at {a.id}")
        if g.mul(a.id, g.id_at(a.tgt)) != a.id:
            bad.append(f"right identity fails at {a.id}")
    # inverse axiom: a a^-1 = id_src, a^-1 a = id_tgt
    for a in g.arrows:
        ainv = g.inverse[a.id]
        ia = g.arrow(ainv)
        if ia.src != a.tgt or ia.tgt != a.src:
            bad.append(f"inverse axiom: {ainv} endpoints do not reverse {a.id}")
            continue
        if g.mul(a.id, ainv) != g.id_at(a.src):
            bad.append(f"inverse axiom: {a.id}*{ainv} != id")
        if g.mul(ainv, a.id) != g.id_at(a.tgt):
            bad.append(f"inverse axiom: {ainv}*{a.id} != id")
    # associativity on all composable triples
    for a in g.arrows:
        for b in g.arrows:
            if a.tgt != b.src:
                continue
            ab = g.mul(a.id, b.id)
            for c in g.arrows:
                if b.tgt != c.src:
                    continue
                if g.mul(ab, c.id) != g.mul(a.id, g.mul(b.id, c.id)):
                    bad.append(f"associativity fails on ({a.id},{b.id},{c.id})")
    return ValidationReport(tuple(bad))


# -- constructors ----------------------------------------------------------


def build_groupoid(objects, arrow_triples, compose, name="") -> FinGroupoid:
    """Assemble a FinGroupoid, deriving identities and inverses from the
    compose table."""
    arrows = tuple(Arrow(i, s, t) for i, s, t in arrow_triples)
    by_id = {a.id: a for a in arrows}
    identity = {}
    for x in objects:
        loops = [a.id for a in arrows if a.src == x and a.tgt == x]
        for e in loops:
            if all(
                compose.get((e, b.id)) == b.id for b in arrows if b.src == x
            ) and all(compose.get((a.id, e)) == a.id for a in arrows if a.tgt == x):
                identity[x] = e
                break
    inverse = {}
    for a in arrows:
        for b in arrows:
            if b.src == a.tgt and b.tgt == a.src:
                if compose.get((a.id, b.id)) == identity.get(a.src):
                    inverse[a.id] = b.id
                    break
    return FinGroupoid(tuple(objects), arrows, dict(compose), identity, inverse, name)


def discrete_groupoid(objects) -> FinGroupoid:
    """Only identity arrows, one per object."""
    objs = tuple(sorted(objects))
    arrows = tuple(Arrow(f"id_{x}", x, x) for x in objs)
    compose = {(f"id_{x}", f"id_{x}"): f"id_{x}" for x in objs}
    identity = {x: f"id_{x}" for x in objs}
    inverse = {f"id_{x}": f"id_{x}" for x in objs}
    return FinGroupoid(objs, arrows, compose, identity, inverse, "discrete")


def codiscrete_groupoid(objects) -> FinGroupoid:
    """Exactly one arrow between each ordered pair of objects (tree groupoid)."""
    objs = tuple(sorted(objects))
    aid = lambda x, y: f"t_{x}_{y}"
    arrows = tuple(Arrow(aid(x, y), x, y) for x in objs for y in objs)
    compose = {}
    for x in objs:
        for y in objs:
            for z in objs:
                compose[aid(x, y), aid(y, z)] = aid(x, z)
    identity = {x: aid(x, x) for x in objs}
    inverse = {aid(x, y): aid(y, x) for x in objs for y in objs}
    return FinGroupoid(objs, arrows, compose, identity, inverse, "codiscrete")


def group_as_groupoid(g: GroupTable, obj: str = "*") -> FinGroupoid:
    arrows = tuple(Arrow(e, obj, obj) for e in g.elements)
    compose = {(a, b): g.mul(a, b) for a in g.elements for b in g.elements}
    identity = {obj: g.identity}
    inverse = {e: g.inv(e) for e in g.elements}
    return FinGroupoid((obj,), arrows, compose, identity, inverse, g.name)


def coproduct_gpd(parts: list[FinGroupoid]) -> FinGroupoid:
    """Disjoint union of objects and arrows; tags components by index."""
    objects = []
    arrows = []
    compose = {}
    identity = {}
    inverse = {}
    for i, g in enumerate(parts):
        tag = lambda s: f"{i}.{s}"
        objects += [tag(x) for x in g.objects]
        arrows += [Arrow(tag(a.id), tag(a.src), tag(a.tgt)) for a in g.arrows]
        compose.update({(tag(a), tag(b)): tag(c) for (a, b), c in g.compose.items()})
        identity.update({tag(x): tag(e) for x, e in g.identity.items()})
        inverse.update({tag(a): tag(b) for a, b in g.inverse.items()})
    return FinGroupoid(tuple(objects), tuple(arrows), compose, identity, inverse, "coproduct")


# -- object maps and morphisms ----------------------------------------------


@dataclass(frozen=True)
class ObjMap:
    domain: tuple[str, ...]
    codomain: tuple[str, ...]
    map: dict[str, str]

    def __post_init__(self):
        missing = [x for x in self.domain if x not in self.map]
        if missing:
            raise ValueError(f"object map not total: missing {missing}")
        out = [x for x in self.domain if self.map[x] not in self.codomain]
        if out:
            raise ValueError(f"object map leaves codomain at {out}")

    def __call__(self, x: str) -> str:
        return self.map[x]


def obj_map(domain, codomain, mapping) -> ObjMap:
    return ObjMap(tuple(sorted(domain)), tuple(sorted(codomain)), dict(mapping))


@dataclass(frozen=True, eq=False)
class GpdMorphism:
    """A morphism of groupoids given on objects and on arrows.

    The target may be any groupoid-like value; arrow_map values are arrows
    of the target (words, for word groupoids).
    """

    source: FinGroupoid
    target: object
    object_map: dict[str, str]
    arrow_map: dict[str, object]

    def on_obj(self, x: str) -> str:
        return self.object_map[x]

    def on_arrow(self, a: str):
        return self.arrow_map[a]

    def is_vertical(self) -> bool:
        return all(self.object_map[x] == x for x in self.source.objects)


def validate_morphism(f: GpdMorphism) -> ValidationReport:
    """Functoriality of a morphism between two FinGroupoids."""
    g, h = f.source, f.target
    bad = []
    for x in g.objects:
        if f.object_map.get(x) not in h.objects:
            bad.append(f"object {x} has no image")
    for a in g.arrows:
        b = f.arrow_map.get(a.id)
        if b is None or b not in {ar.id for ar in h.arrows}:
            bad.append(f"arrow {a.id} has no image")
            continue
        if h.src(b) != f.object_map[a.src] or h.tgt(b) != f.object_map[a.tgt]:
            bad.append(f"arrow {a.id}: image endpoints disagree with object map")
    if bad:
        return ValidationReport(tuple(bad))
    for x in g.objects:
        if f.arrow_map[g.id_at(x)] != h.id_at(f.object_map[x]):
            bad.append(f"identity at {x} not preserved")
    for (a, b), c in g.compose.items():
        if h.mul(f.arrow_map[a], f.arrow_map[b]) != f.arrow_map[c]:
            bad.append(f"composition not preserved on ({a},{b})")
    return ValidationReport(tuple(bad))


def identity_morphism(g: FinGroupoid) -> GpdMorphism:
    return GpdMorphism(g, g, {x: x for x in g.objects}, {a.id: a.id for a in g.arrows})


def compose_morphisms(f: GpdMorphism, g: GpdMorphism) -> GpdMorphism:
    """f then g (diagrammatic)."""
    return GpdMorphism(
        f.source,
        g.target,
        {x: g.object_map[f.object_map[x]] for x in f.source.objects},
        {a.id: g.arrow_map[f.arrow_map[a.id]] for a in f.source.arrows},
    )


# -- connectivity, vertex groups, trees -------------------------------------


def connected_components(g: FinGroupoid) -> list[tuple[str, ...]]:
    """Partition of the objects; arrows suffice for connectivity since every
    arrow is invertible."""
    parent = {x: x for x in g.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in g.arrows:
        rx, ry = find(a.src), find(a.tgt)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    blocks: dict[str, list[str]] = {}
    for x in g.objects:
        blocks.setdefault(find(x), []).append(x)
    return sorted(tuple(sorted(b)) for b in blocks.values())


def is_connected(g: FinGroupoid) -> bool:
    return len(connected_components(g)) == 1


def vertex_group(g: FinGroupoid, x: str) -> GroupTable:
    if x not in g.objects:
        raise ValueError(f"unknown object {x}")
    els = tuple(sorted(g.hom(x, x), key=lambda e: (not g.is_identity(e), e)))
    table = {(a, b): g.mul(a, b) for a in els for b in els}
    return GroupTable(f"{g.name or 'G'}({x})", els, table)


@dataclass(frozen=True, eq=False)
class TreeRetraction:
    """A spanning choice tau(x) in G(x, x0) for each object, with tau(x0)
    the identity, and the retraction r(c) = tau(x)^-1 * c * tau(y) onto the
    vertex group at x0.  Every arrow then factors exactly as
    c = tau(x) * r(c) * tau(y)^-1."""

    groupoid: FinGroupoid
    basepoint: str
    tau: dict[str, str]

    def retract_arrow(self, a: str) -> str:
        g = self.groupoid
        x, y = g.src(a), g.tgt(a)
        return g.mul(g.mul(g.inv(self.tau[x]), a), self.tau[y])

    def reconstruct(self, a: str) -> str:
        g = self.groupoid
        x, y = g.src(a), g.tgt(a)
        return g.mul(g.mul(self.tau[x], self.retract_arrow(a)), g.inv(self.tau[y]))

    def morphism(self) -> GpdMorphism:
        g = self.groupoid
        return GpdMorphism(
            g,
            g,
            {x: self.basepoint for x in g.objects},
            {a.id: self.retract_arrow(a.id) for a in g.arrows},
        )


def spanning_tree_retraction(g: FinGroupoid, x0: str) -> TreeRetraction:
    """BFS from x0; tau(x): x -> x0 is the chosen tree arrow into the
    basepoint, so r(c) = tau(x)^-1 c tau(y) lands in G(x0, x0)."""
    if x0 not in g.objects:
        raise ValueError(f"unknown object {x0}")
    if not is_connected(g):
        raise ValueError("groupoid is not connected")
    tau = {x0: g.id_at(x0)}
    frontier = [x0]
    while frontier:
        nxt = []
        for y in frontier:
            # extend the tree along arrows incident to y, in sorted order
            for a in sorted(g.costar(y)) + sorted(g.star(y)):
                x, z = g.src(a), g.tgt(a)
                if z == y and x not in tau:
                    # a: x -> y, tau(x) = a * tau(y) : x -> x0
                    tau[x] = g.mul(a, tau[y])
                    nxt.append(x)
                elif x == y and z not in tau:
                    tau[z] = g.mul(g.inv(a), tau[y])
                    nxt.append(z)
        frontier = nxt
    return TreeRetraction(g, x0, tau)


# -- pullback --------------------------------------------------------------


def pullback_groupoid(u: ObjMap, g: FinGroupoid) -> tuple[FinGroupoid, GpdMorphism]:
    """Reindex g along u: objects J, arrows (j, a, j') for a in
    g(u j, u j'), composed by composing the middle component; the projection
    onto the middle component is the cartesian morphism."""
    if set(u.codomain) - set(g.objects):
        raise ValueError("object map codomain exceeds groupoid objects")
    objs = u.domain
    aid = lambda j, a, j2: f"{j}|{a}|{j2}"
    triples = [
        (j, a, j2)
        for j in objs
        for j2 in objs
        for a in g.hom(u(j), u(j2))
    ]
    arrows = tuple(Arrow(aid(*t), t[0], t[2]) for t in triples)
    compose = {}
    for (j, a, j1) in triples:
        for (k, b, k1) in triples:
            if j1 == k:
                compose[aid(j, a, j1), aid(k, b, k1)] = aid(j, g.mul(a, b), k1)
    identity = {j: aid(j, g.id_at(u(j)), j) for j in objs}
    inverse = {aid(j, a, j2): aid(j2, g.inv(a), j) for (j, a, j2) in triples}
    h = FinGroupoid(objs, arrows, compose, identity, inverse, f"pullback({g.name})")
    phi = GpdMorphism(
        h, g, dict(u.map), {aid(j, a, j2): a for (j, a, j2) in triples}
    )
    return h, phi


# -- normal subgroupoids and quotients ---------------------------------------


@dataclass(frozen=True, eq=False)
class NormalSubgroupoid:
    ambient: FinGroupoid
    members: dict[str, frozenset[str]]  # object -> subset of vertex arrows

    def contains(self, a: str) -> bool:
        g = self.ambient
        return g.src(a) == g.tgt(a) and a in self.members[g.src(a)]


def validate_normal(n: NormalSubgroupoid) -> ValidationReport:
    g = n.ambient
    bad = []
    for x in g.objects:
        sub = n.members.get(x)
        if sub is None:
            bad.append(f"no fibre at object {x}")
            continue
        if g.id_at(x) not in sub:
            bad.append(f"fibre at {x} misses the identity")
        for a in sub:
            if g.src(a) != x or g.tgt(a) != x:
                bad.append(f"{a} is not a vertex arrow at {x}")
        for a in sub:
            if g.inv(a) not in sub:
                bad.append(f"fibre at {x} not closed under inverse ({a})")
            for b in sub:
                if g.mul(a, b) not in sub:
                    bad.append(f"fibre at {x} not closed under product ({a},{b})")
    if bad:
        return ValidationReport(tuple(bad))
    for arr in g.arrows:
        a, x, y = arr.id, arr.src, arr.tgt
        image = {g.mul(g.mul(g.inv(a), m), a) for m in n.members[x]}
        if image != set(n.members[y]):
            bad.append(f"conjugation by {a} does not carry N({x}) onto N({y})")
    return ValidationReport(tuple(bad))


def identity_subgroupoid(g: FinGroupoid) -> NormalSubgroupoid:
    return NormalSubgroupoid(g, {x: frozenset({g.id_at(x)}) for x in g.objects})


def normal_closure(g: FinGroupoid, relators: list[str]) -> NormalSubgroupoid:
    """Least totally disconnected normal subgroupoid containing the given
    vertex arrows; closure iteration over products, inverses and
    conjugation by every arrow."""
    for r in relators:
        if g.src(r) != g.tgt(r):
            raise ValueError(f"relator {r} is not a vertex arrow")
    members = {x: {g.id_at(x)} for x in g.objects}
    for r in relators:
        members[g.src(r)].add(r)
    changed = True
    while changed:
        changed = False
        for x in g.objects:
            cur = members[x]
            new = set(cur)
            for a in cur:
                new.add(g.inv(a))
                for b in cur:
                    new.add(g.mul(a, b))
            if new != cur:
                members[x] = new
                changed = True
        for arr in g.arrows:
            a, x, y = arr.id, arr.src, arr.tgt
            for m in list(members[x]):
                c = g.mul(g.mul(g.inv(a), m), a)
                if c not in members[y]:
                    members[y].add(c)
                    changed = True
    return NormalSubgroupoid(g, {x: frozenset(s) for x, s in members.items()})


def quotient_groupoid(
    g: FinGroupoid, n: NormalSubgroupoid
) -> tuple[FinGroupoid, GpdMorphism]:
    """Objects unchanged; arrows are cosets N(x)a.  The projection is the
    identity on objects and its kernel is exactly n."""
    rep = validate_normal(n)
    if not rep.ok:
        raise ValueError(f"not a normal subgroupoid: {rep}")
    # coset of a: x -> y is {m a : m in N(x)}; representative is lex-least
    coset_rep: dict[str, str] = {}
    for a in g.arrows:
        x = g.src(a.id)
        coset = sorted(g.mul(m, a.id) for m in n.members[x])
        coset_rep[a.id] = coset[0]
    reps = sorted(set(coset_rep.values()))
    aid = {r: f"q_{r}" for r in reps}
    arrows = tuple(Arrow(aid[r], g.src(r), g.tgt(r)) for r in reps)
    compose = {}
    for r in reps:
        for s in reps:
            if g.tgt(r) == g.src(s):
                compose[aid[r], aid[s]] = aid[coset_rep[g.mul(r, s)]]
    identity = {x: aid[coset_rep[g.id_at(x)]] for x in g.objects}
    inverse = {aid[r]: aid[coset_rep[g.inv(r)]] for r in reps}
    q = FinGroupoid(g.objects, arrows, compose, identity, inverse, f"{g.name}/N")
    proj = GpdMorphism(
        g, q, {x: x for x in g.objects}, {a.id: aid[coset_rep[a.id]] for a in g.arrows}
    )
    return q, proj


# -- morphism enumeration and isomorphism -----------------------------------


def morphisms_over(
    g: FinGroupoid, h: FinGroupoid, object_map: dict[str, str]
) -> list[GpdMorphism]:
    """All morphisms g -> h with the given object map, by backtracking over
    images of non-identity arrows with incremental composition checks."""
    for x in g.objects:
        if object_map.get(x) not in h.objects:
            raise ValueError(f"object map not into target at {x}")
    arrows = g.non_identity_arrows()
    base = {g.id_at(x): h.id_at(object_map[x]) for x in g.objects}
    out: list[GpdMorphism] = []

    def consistent(assign: dict[str, str], new: str) -> bool:
        for a in list(assign):
            for p, q in ((a, new), (new, a)):
                if g.tgt(p) == g.src(q):
                    c = g.mul(p, q)
                    if c in assign and h.mul(assign[p], assign[q]) != assign[c]:
                        return False
        for p, q in ((new, new),):
            if g.tgt(p) == g.src(q):
                c = g.mul(p, q)
                if c in assign and h.mul(assign[p], assign[q]) != assign[c]:
                    return False
        return True

    def extend(i: int, assign: dict[str, str]):
        if i == len(arrows):
            out.append(GpdMorphism(g, h, dict(object_map), dict(assign)))
            return
        a = arrows[i]
        if a in assign:
            extend(i + 1, assign)
            return
        x, y = g.src(a), g.tgt(a)
        for b in h.hom(object_map[x], object_map[y]):
            assign[a] = b
            ainv = g.inv(a)
            had_inv = ainv in assign
            if not had_inv:
                assign[ainv] = h.inv(b)
            if consistent(assign, a) and (had_inv or consistent(assign, ainv)):
                extend(i + 1, assign)
            del assign[a]
            if not had_inv:
                del assign[ainv]

    extend(0, dict(base))
    # final full check is cheap insurance against pruning gaps
    return [m for m in out if validate_morphism(m).ok]


def all_object_maps(domain: tuple[str, ...], codomain: tuple[str, ...]):
    for images in itertools.product(codomain, repeat=len(domain)):
        yield obj_map(domain, codomain, dict(zip(domain, images)))


def morphisms_between(g: FinGroupoid, h: FinGroupoid) -> list[GpdMorphism]:
    out = []
    for om in all_object_maps(g.objects, h.objects):
        out.extend(morphisms_over(g, h, dict(om.map)))
    return out


def initiality_check(k, x: FinGroupoid, u: ObjMap) -> GpdMorphism:
    """The unique morphism from the discrete groupoid on k into x over u;
    uniqueness is certified by enumeration."""
    dk = discrete_groupoid(k)
    om = {f"{a}": u(a) for a in dk.objects}
    found = morphisms_over(dk, x, om)
    if len(found) != 1:
        raise AssertionError(f"expected a unique morphism over u, found {len(found)}")
    return found[0]


def isomorphic_groupoids(g: FinGroupoid, h: FinGroupoid) -> bool:
    """Isomorphism test via the structure of connected groupoids: match
    components on (size, vertex-group) data.  Bounded at ISO_MAX_* sizes."""
    if len(g.objects) > ISO_MAX_OBJECTS or len(h.objects) > ISO_MAX_OBJECTS:
        raise ValueError("too large for isomorphism search (objects)")
    if g.n_arrows > ISO_MAX_ARROWS or h.n_arrows > ISO_MAX_ARROWS:
        raise ValueError("too large for isomorphism search (arrows)")
    from .grouptable import are_isomorphic

    cg, ch = connected_components(g), connected_components(h)
    if len(cg) != len(ch):
        return False
    if sorted(len(c) for c in cg) != sorted(len(c) for c in ch):
        return False
    used = [False] * len(ch)
    for comp in cg:
        vg = vertex_group(g, comp[0])
        ok = False
        for i, comp2 in enumerate(ch):
            if used[i] or len(comp2) != len(comp):
                continue
            vh = vertex_group(h, comp2[0])
            if vg.order == vh.order and are_isomorphic(vg, vh):
                used[i] = True
                ok = True
                break
        if not ok:
            return False
    return True
