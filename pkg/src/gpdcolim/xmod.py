"""Crossed modules over groupoids.

Table form: a family of finite groups M(x) indexed by the objects of a
finite base groupoid P, a boundary mu: M(x) -> P(x,x), and for every arrow
p: x -> y an isomorphism M(x) -> M(y), subject to

  CM1: mu(m^p) = p^-1 mu(m) p
  CM2: m^-1 n m = n^(mu m)        (within one fibre)

Presented form (FpXMod): generators are pairs (fibre generator, base
arrow), with multiplication and operator relators plus the Peiffer relator
schema <a,b> = a^-1 b^-1 a b^(da); the base acts on generators by right
translation of the arrow component.  Induction, free crossed modules and
vertex retraction all land here, with bounded realization back to tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import coset
from .grouptable import GroupTable, group_homs
from .groupoid import (
    FinGroupoid,
    GpdMorphism,
    TreeRetraction,
    ValidationReport,
    group_as_groupoid,
    spanning_tree_retraction,
    vertex_group,
)
from .gmodule import (
    AbInvariants,
    InfiniteBaseError,
    ModGen,
    ModulePres,
    module_simplify,
)
from .presented import RewriteBound, DEFAULT_BOUND

FIBRE_ORDER_CAP = 64

Word = tuple[tuple[str, int], ...]


# -- table form ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class XModTable:
    base: FinGroupoid
    fibres: dict[str, GroupTable]
    mu: dict[str, dict[str, str]]
    action: dict[str, dict[str, str]]  # arrow id -> element map M(src) -> M(tgt)
    name: str = ""

    def fibre(self, x: str) -> GroupTable:
        return self.fibres[x]

    def act(self, m: str, p: str) -> str:
        return self.action[p][m]

    def boundary(self, x: str, m: str) -> str:
        return self.mu[x][m]


def validate_xmod(x: XModTable) -> ValidationReport:
    bad = []
    p = x.base
    for ob in p.objects:
        if ob not in x.fibres:
            bad.append(f"no fibre at {ob}")
            continue
        if x.fibres[ob].order > FIBRE_ORDER_CAP:
            bad.append(f"fibre at {ob} exceeds order cap {FIBRE_ORDER_CAP}")
        if ob not in x.mu:
            bad.append(f"no boundary at {ob}")
    if bad:
        return ValidationReport(tuple(bad))
    for ob in p.objects:
        m = x.fibres[ob]
        vertex = set(p.hom(ob, ob))
        for e in m.elements:
            img = x.mu[ob].get(e)
            if img not in vertex:
                bad.append(f"boundary of {e} at {ob} is not a vertex arrow")
        # boundary is a homomorphism
        for a in m.elements:
            for b in m.elements:
                if x.mu[ob][m.mul(a, b)] != p.mul(x.mu[ob][a], x.mu[ob][b]):
                    bad.append(f"boundary not a morphism at {ob} on ({a},{b})")
    if bad:
        return ValidationReport(tuple(bad))
    for arr in p.arrows:
        amap = x.action.get(arr.id)
        msrc, mtgt = x.fibres[arr.src], x.fibres[arr.tgt]
        if amap is None or set(amap) != set(msrc.elements) or set(amap.values()) != set(mtgt.elements):
            bad.append(f"action along {arr.id} is not a bijection of fibres")
            continue
        for a in msrc.elements:
            for b in msrc.elements:
                if amap[msrc.mul(a, b)] != mtgt.mul(amap[a], amap[b]):
                    bad.append(f"action along {arr.id} not a morphism on ({a},{b})")
                    break
    if bad:
        return ValidationReport(tuple(bad))
    # functoriality
    for ob in p.objects:
        e = p.id_at(ob)
        for m in x.fibres[ob].elements:
            if x.action[e][m] != m:
                bad.append(f"identity arrow at {ob} does not act as identity")
                break
    for (a, b), c in p.compose.items():
        for m in x.fibres[p.src(a)].elements:
            if x.action[b][x.action[a][m]] != x.action[c][m]:
                bad.append(f"action not functorial on ({a},{b})")
                break
    # CM1
    for arr in p.arrows:
        for m in x.fibres[arr.src].elements:
            lhs = x.mu[arr.tgt][x.action[arr.id][m]]
            rhs = p.mul(p.mul(p.inv(arr.id), x.mu[arr.src][m]), arr.id)
            if lhs != rhs:
                bad.append(f"CM1 fails for m={m}, p={arr.id}")
    # CM2
    for ob in p.objects:
        mt = x.fibres[ob]
        for m in mt.elements:
            act = x.action[x.mu[ob][m]]
            for n in mt.elements:
                if mt.mul(mt.mul(mt.inv(m), n), m) != act[n]:
                    bad.append(f"CM2 fails for m={m}, n={n} at {ob}")
    return ValidationReport(tuple(bad))


def zero_xmod(p: FinGroupoid) -> XModTable:
    triv = GroupTable("1", ("e",), {("e", "e"): "e"})
    return XModTable(
        p,
        {ob: triv for ob in p.objects},
        {ob: {"e": p.id_at(ob)} for ob in p.objects},
        {a.id: {"e": "e"} for a in p.arrows},
        "0",
    )


def inner_xmod(p: FinGroupoid) -> XModTable:
    """The vertex groups mapping identically into the base, acting by
    conjugation: the tautological crossed module."""
    fibres = {ob: vertex_group(p, ob) for ob in p.objects}
    mu = {ob: {e: e for e in fibres[ob].elements} for ob in p.objects}
    action = {}
    for a in p.arrows:
        action[a.id] = {
            m: p.mul(p.mul(p.inv(a.id), m), a.id) for m in fibres[a.src].elements
        }
    return XModTable(p, fibres, mu, action, "inner")


def xmod_from_group_data(
    m: GroupTable, p: GroupTable, mu: dict[str, str], action: dict[str, dict[str, str]],
    name: str = "", obj: str = "*",
) -> XModTable:
    base = group_as_groupoid(p, obj)
    return XModTable(base, {obj: m}, {obj: dict(mu)}, dict(action), name)


def xmod_pullback(f: GpdMorphism, n: XModTable) -> tuple[XModTable, dict]:
    """Reindex a crossed module along f: P -> Q.  The fibre at x is the
    subgroup of P(x,x) x N(fx) of pairs (p, m) with f(p) = mu(m); an arrow
    p1 conjugates the first component and acts through f(p1) on the second.
    Returns the table and the projection (p, m) -> m (the cartesian map)."""
    p = f.source
    q = n.base
    fibres = {}
    mu = {}
    pair_name = lambda a, m: f"{a},{m}"
    members: dict[str, list[tuple[str, str]]] = {}
    for x in p.objects:
        fx = f.on_obj(x)
        pairs = [
            (a, m)
            for a in p.hom(x, x)
            for m in n.fibres[fx].elements
            if f.on_arrow(a) == n.mu[fx][m]
        ]
        members[x] = pairs
        els = tuple(sorted(pair_name(a, m) for a, m in pairs))
        mult = {}
        for (a1, m1) in pairs:
            for (a2, m2) in pairs:
                mult[pair_name(a1, m1), pair_name(a2, m2)] = pair_name(
                    p.mul(a1, a2), n.fibres[fx].mul(m1, m2)
                )
        fibres[x] = GroupTable(f"pb({x})", els, mult)
        mu[x] = {pair_name(a, m): a for a, m in pairs}
    action = {}
    for arr in p.arrows:
        x, y = arr.src, arr.tgt
        fp = f.on_arrow(arr.id)
        amap = {}
        for (a, m) in members[x]:
            amap[pair_name(a, m)] = pair_name(
                p.mul(p.mul(p.inv(arr.id), a), arr.id), n.action[fp][m]
            )
        action[arr.id] = amap
    table = XModTable(p, fibres, mu, action, f"pullback({n.name})")
    projection = {
        x: {pair_name(a, m): m for a, m in members[x]} for x in p.objects
    }
    return table, projection


# -- presented form --------------------------------------------------------------


@dataclass(frozen=True)
class XGen:
    gid: str
    label: str  # fibre generator, qualified by its source object
    q: object  # base arrow from the image object to `at`
    at: str


@dataclass(frozen=True, eq=False)
class FpXMod:
    """Presented crossed module over a base groupoid.

    relators contains the multiplication and operator relators only; the
    Peiffer schema is expanded on demand (it is finite over a finite base).
    boundary assigns each generator a vertex arrow of the base at its
    object.  symbolic marks presentations over infinite bases, which only
    support structural reports.  amb, when set, is the groupoid in which
    the arrow components compose (used after retraction, where generators
    carry arrows of the ambient connected groupoid)."""

    base: object
    gens: tuple[XGen, ...]
    relators: tuple[Word, ...]
    boundary: dict[str, object]
    symbolic: bool = False
    name: str = ""
    amb: object = None

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {g.gid: g for g in self.gens})
        object.__setattr__(
            self, "_by_key", {(g.label, _key(g.q)): g.gid for g in self.gens}
        )

    @property
    def arrow_context(self):
        return self.amb if self.amb is not None else self.base

    def gen(self, gid: str) -> XGen:
        return self._by_id[gid]

    def act_gen(self, gid: str, q2) -> str:
        """(m, q)^(q2) = (m, q q2)."""
        g = self._by_id[gid]
        moved = self.arrow_context.mul(g.q, q2)
        return self._by_key[(g.label, _key(moved))]

    def gens_at(self, y: str) -> list[XGen]:
        return [g for g in self.gens if g.at == y]

    def peiffer_relators(self, cap: int | None = None) -> list[Word]:
        """<a,b> = a^-1 b^-1 a b^(da) over generator pairs at one object."""
        if self.symbolic:
            raise InfiniteBaseError(self.structural_report())
        out = []
        for y in sorted({g.at for g in self.gens}):
            at_y = [g.gid for g in self.gens_at(y)]
            for a in at_y:
                for b in at_y:
                    moved = self.act_gen(b, self.boundary[a])
                    out.append(((a, -1), (b, -1), (a, 1), (moved, 1)))
                    if cap is not None and len(out) >= cap:
                        return out
        return out

    def structural_report(self) -> dict:
        return {
            "generators": len(self.gens),
            "relators": len(self.relators),
            "symbolic": self.symbolic,
        }


def _key(arrow) -> str:
    return arrow if isinstance(arrow, str) else str(arrow)


@dataclass(frozen=True, eq=False)
class XModUnit:
    """The universal map into an induced crossed module: fibre element m at
    x goes to the generator (m, identity at the image object)."""

    source: XModTable | None
    target: FpXMod
    gen_map: dict[tuple[str, str], str]  # (object, element) -> gid


def xmod_induce(f: GpdMorphism, m: XModTable) -> tuple[FpXMod, XModUnit]:
    """Push a crossed module forward along f: P -> Q.

    Generators: (fibre element, arrow of Q out of its image object);
    relators: (m,q)(m',q) = (mm',q) and (m^p, q) = (m, f(p) q); boundary
    (m,q) |-> q^-1 f(mu m) q; plus the Peiffer schema on demand."""
    p = f.source
    q = f.target
    finite = isinstance(q, FinGroupoid)

    labels: dict[tuple[str, str], str] = {}
    for x in p.objects:
        for e in m.fibres[x].elements:
            if e != m.fibres[x].identity:
                labels[(x, e)] = f"{x}:{e}"

    def arrows_out(y):
        return q.star(y) if finite else [q.id_at(y)]

    gens = []
    boundary = {}
    gid_of: dict[tuple[str, str], str] = {}
    for (x, e), label in sorted(labels.items()):
        fx = f.on_obj(x)
        for arrow in arrows_out(fx):
            at = q.tgt(arrow) if finite else arrow.tgt
            gid = f"({label}|{_key(arrow)})"
            gens.append(XGen(gid, label, arrow, at))
            gid_of[(label, _key(arrow))] = gid
            fmu = f.on_arrow(m.mu[x][e])
            boundary[gid] = q.mul(q.mul(q.inv(arrow), fmu), arrow)
    relators: list[Word] = []
    for (x, e), label in sorted(labels.items()):
        table = m.fibres[x]
        fx = f.on_obj(x)
        for e2 in table.elements:
            if e2 == table.identity:
                continue
            prod = table.mul(e, e2)
            for arrow in arrows_out(fx):
                k = _key(arrow)
                w = [(gid_of[(label, k)], 1), (gid_of[(f"{x}:{e2}", k)], 1)]
                if prod != table.identity:
                    w.append((gid_of[(f"{x}:{prod}", k)], -1))
                relators.append(tuple(w))
    for arr in p.arrows:
        if p.is_identity(arr.id):
            continue
        x, y = arr.src, arr.tgt
        fp = f.on_arrow(arr.id)
        fy = f.on_obj(y)
        for e in m.fibres[x].elements:
            if e == m.fibres[x].identity:
                continue
            moved = m.action[arr.id][e]
            for arrow in arrows_out(fy):
                shifted = q.mul(fp, arrow)
                wl = gid_of[(f"{y}:{moved}", _key(arrow))]
                wr = gid_of[(f"{x}:{e}", _key(shifted))]
                if wl != wr:
                    relators.append(((wl, 1), (wr, -1)))
    fp_xmod = FpXMod(
        q, tuple(gens), tuple(relators), boundary, symbolic=not finite,
        name=f"induced({m.name})",
    )
    unit = XModUnit(
        m,
        fp_xmod,
        {
            (x, e): gid_of[(label, _key(q.id_at(f.on_obj(x))))]
            for (x, e), label in labels.items()
        },
    )
    return fp_xmod, unit


def free_xmod(p, omega: dict[str, object]) -> FpXMod:
    """Free crossed module on a family of vertex arrows omega: R -> P.

    This is the crossed module induced from the identity crossed module on
    the free infinite-cyclic family on R along r |-> omega(r): generators
    (r, q) for arrows q out of the basepoint of r, boundary q^-1 omega(r) q,
    and operator relators (r, omega(r) q) = (r, q); multiplication relators
    are vacuous for a free cyclic fibre."""
    finite = isinstance(p, FinGroupoid)
    beta = {}
    for r, loop in omega.items():
        if finite:
            if p.src(loop) != p.tgt(loop):
                raise ValueError(f"omega({r}) is not a vertex arrow")
            beta[r] = p.src(loop)
        else:
            if loop.src != loop.tgt:
                raise ValueError(f"omega({r}) is not a vertex arrow")
            beta[r] = loop.src

    def arrows_out(y):
        return p.star(y) if finite else [p.id_at(y)]

    gens = []
    boundary = {}
    gid_of = {}
    for r in sorted(omega):
        for arrow in arrows_out(beta[r]):
            at = p.tgt(arrow) if finite else arrow.tgt
            gid = f"({r}|{_key(arrow)})"
            gens.append(XGen(gid, r, arrow, at))
            gid_of[(r, _key(arrow))] = gid
            boundary[gid] = p.mul(p.mul(p.inv(arrow), omega[r]), arrow)
    relators: list[Word] = []
    for r in sorted(omega):
        for arrow in arrows_out(beta[r]):
            shifted = p.mul(omega[r], arrow)
            wl = gid_of[(r, _key(arrow))]
            wr = gid_of[(r, _key(shifted))]
            if wl != wr:
                relators.append(((wl, 1), (wr, -1)))
    return FpXMod(
        p, tuple(gens), tuple(relators), boundary, symbolic=not finite, name="free"
    )


# -- abelianization ----------------------------------------------------------------


def boundary_kills_peiffer(x: FpXMod, cap: int = 2000) -> bool:
    """The boundary of every Peiffer relator <a,b> = a^-1 b^-1 a b^(da)
    must be an identity of the base.  Over a finite base the expanded
    relators are evaluated in the composition table; over a symbolic base
    the boundary word of each schema instance on the stored generators is
    reduced formally."""
    base = x.arrow_context
    if not x.symbolic:
        count = 0
        for w in x.peiffer_relators(cap=cap):
            first = x.gen(w[0][0]).at
            acc = base.id_at(first) if isinstance(base, FinGroupoid) else None
            for gid, e in w:
                d = x.boundary[gid]
                d = d if e > 0 else base.inv(d)
                acc = d if acc is None else base.mul(acc, d)
            if isinstance(base, FinGroupoid):
                if not base.is_identity(acc):
                    return False
            elif not _is_trivial_path(acc):
                return False
            count += 1
        return True
    # symbolic: d(b^(da)) = (q da)^-1 f(mu m) (q da) = da^-1 db da
    for y in sorted({g.at for g in x.gens}):
        at_y = [g for g in x.gens if g.at == y]
        for a in at_y:
            for b in at_y:
                da, db = x.boundary[a.gid], x.boundary[b.gid]
                moved = base.mul(base.mul(base.inv(da), db), da)
                total = base.mul(
                    base.mul(base.mul(base.inv(da), base.inv(db)), da), moved
                )
                if not _is_trivial_path(total):
                    return False
    return True


def _is_trivial_path(arrow) -> bool:
    if hasattr(arrow, "letters"):
        return not arrow.letters
    if hasattr(arrow, "word"):
        return not arrow.word
    raise TypeError(f"not a path value: {arrow!r}")


def peiffer_abelianize(x: FpXMod) -> tuple[ModulePres, AbInvariants | None]:
    """Abelianized presentation: relator words abelianize, Peiffer relators
    become trivial-action rows, and the base descends to the quotient by
    the normal closure of the boundary image.

    Over a finite base returns (presentation over the quotient base, exact
    invariants); over an infinite base raises InfiniteBaseError."""
    if x.symbolic or not isinstance(x.base, FinGroupoid):
        raise InfiniteBaseError(x.structural_report())
    base: FinGroupoid = x.base
    from .groupoid import normal_closure, quotient_groupoid

    d_image = sorted({_key(x.boundary[g.gid]) for g in x.gens})
    n = normal_closure(base, [a for a in d_image])
    qbase, proj = quotient_groupoid(base, n)
    gens = tuple(ModGen(g.gid, g.at) for g in x.gens)
    rels = []
    for w in x.relators:
        if not w:
            continue
        at = x.gen(w[0][0]).at
        e = qbase.id_at(at)
        acc: dict[str, int] = {}
        for gid, s in w:
            acc[gid] = acc.get(gid, 0) + s
        rel = tuple((c, gid, e) for gid, c in sorted(acc.items()) if c)
        if rel:
            rels.append(rel)
    # Peiffer -> the boundary image acts trivially: b^(da) = b
    for w in x.peiffer_relators():
        a_inv, b_inv, a_pos, moved = w
        b = b_inv[0]
        at = x.gen(b).at
        e = qbase.id_at(at)
        if moved[0] != b:
            rels.append(((1, moved[0], e), (-1, b, e)))
    # action coherence: (m, q) acted by q' is the generator (m, q q')
    for g in x.gens:
        for a in base.star(g.at):
            target_gid = x.act_gen(g.gid, a)
            rels.append(
                ((1, g.gid, proj.arrow_map[a]), (-1, target_gid, qbase.id_at(base.tgt(a))))
            )
    mp = ModulePres(qbase, gens, tuple(rels), f"ab({x.name})")
    return mp, module_simplify(mp)


# -- bounded realization -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RealizedXMod:
    """A finite table realizing a presented crossed module, with the image
    of each presentation generator."""

    table: XModTable
    gen_images: dict[str, str]  # gid -> fibre element name


def bounded_realize(
    x: FpXMod, bound: RewriteBound = DEFAULT_BOUND
) -> RealizedXMod | None:
    """Realize a presented crossed module over a finite base as tables, by
    coset enumeration of each fibre presentation (relators + expanded
    Peiffer relators).  Returns None when any enumeration exceeds the
    budget.  A returned table satisfies every relator and validate_xmod."""
    if x.symbolic or not isinstance(x.base, FinGroupoid):
        raise InfiniteBaseError(x.structural_report())
    base: FinGroupoid = x.base
    peiffer = x.peiffer_relators()
    words_at: dict[str, list[Word]] = {y: [] for y in base.objects}
    for w in tuple(x.relators) + tuple(peiffer):
        if not w:
            continue
        words_at[x.gen(w[0][0]).at].append(w)
    gens_at = {y: [g.gid for g in x.gens_at(y)] for y in base.objects}
    enums: dict[str, coset.EnumeratedGroup] = {}
    for y in base.objects:
        idx = {gid: i for i, gid in enumerate(gens_at[y])}
        rels = [
            coset.encode_word([(idx[gid], e) for gid, e in w]) for w in words_at[y]
        ]
        enum = coset.enumerate_group(len(gens_at[y]), rels, bound.max_enumeration_count)
        if enum is None or enum.order > FIBRE_ORDER_CAP:
            return None
        enums[y] = enum

    def elem_name(y, i):
        return "e" if i == 0 else f"{y}.n{i}"

    fibres = {}
    mu = {}
    for y in base.objects:
        enum = enums[y]
        els = tuple(elem_name(y, i) for i in range(enum.order))
        mult = {
            (els[i], els[j]): els[enum.mul(i, j)]
            for i in range(enum.order)
            for j in range(enum.order)
        }
        fibres[y] = GroupTable(f"N({y})", els, mult)
        # boundary of element i: evaluate the boundary word of its
        # representative generator word in the base
        idx = {gid: i for i, gid in enumerate(gens_at[y])}
        mu_y = {}
        for i in range(enum.order):
            word = enum.words[i]
            acc = base.id_at(y)
            for letter in word:
                gid = gens_at[y][letter // 2]
                d = x.boundary[gid]
                acc = base.mul(acc, d if letter % 2 == 0 else base.inv(d))
            mu_y[elem_name(y, i)] = acc
        mu[y] = mu_y
    action = {}
    for arr in base.arrows:
        y, y2 = arr.src, arr.tgt
        enum, enum2 = enums[y], enums[y2]
        idx2 = {gid: i for i, gid in enumerate(gens_at[y2])}
        amap = {}
        for i in range(enum.order):
            word = enum.words[i]
            letters2 = []
            for letter in word:
                gid = gens_at[y][letter // 2]
                moved = x.act_gen(gid, arr.id)
                letters2.append(2 * idx2[moved] + (letter % 2))
            j = coset.apply_word(enum2.table, 0, letters2)
            amap[elem_name(y, i)] = elem_name(y2, j)
        action[arr.id] = amap
    table = XModTable(base, fibres, mu, action, f"{x.name}!")
    if not validate_xmod(table).ok:
        return None
    if not _table_satisfies_relators(x, table, enums, gens_at):
        return None
    gen_images = {}
    for g in x.gens:
        idx = gens_at[g.at].index(g.gid)
        gen_images[g.gid] = elem_name(g.at, enums[g.at].table[0][2 * idx])
    return RealizedXMod(table, gen_images)


def _table_satisfies_relators(x, table, enums, gens_at) -> bool:
    base = x.base
    for w in tuple(x.relators) + tuple(x.peiffer_relators()):
        if not w:
            continue
        y = x.gen(w[0][0]).at
        enum = enums[y]
        idx = {gid: i for i, gid in enumerate(gens_at[y])}
        letters = [2 * idx[gid] + (0 if e > 0 else 1) for gid, e in w]
        if coset.apply_word(enum.table, 0, letters) != 0:
            return False
    return True


def realize_unit(unit: XModUnit, real: RealizedXMod) -> dict[tuple[str, str], str]:
    """Element images of the unit map in a realized table."""
    return {key: real.gen_images[gid] for key, gid in unit.gen_map.items()}


# -- morphism enumeration and isomorphism ---------------------------------------------


def xmod_homs_over(f: GpdMorphism, m: XModTable, n: XModTable) -> list[dict]:
    """All crossed-module morphisms (m over P) -> (n over Q) lying over f,
    as per-object element maps."""
    p = m.base
    per_object: dict[str, list[dict[str, str]]] = {}
    for x in p.objects:
        fx = f.on_obj(x)
        cands = []
        for h in group_homs(m.fibres[x], n.fibres[fx]):
            if all(
                n.mu[fx][h[e]] == f.on_arrow(m.mu[x][e]) for e in m.fibres[x].elements
            ):
                cands.append(h)
        per_object[x] = cands
    out = []
    objs = list(p.objects)
    for combo in itertools.product(*(per_object[x] for x in objs)):
        theta = dict(zip(objs, combo))
        ok = True
        for arr in p.arrows:
            x, y = arr.src, arr.tgt
            fp = f.on_arrow(arr.id)
            for e in m.fibres[x].elements:
                if theta[y][m.action[arr.id][e]] != n.action[fp][theta[x][e]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(theta)
    return out


def fpxmod_homs_vertical(x: FpXMod, n: XModTable) -> list[dict[str, str]]:
    """All crossed-module morphisms from a presented crossed module into a
    table over the same finite base, vertical over the identity.

    A morphism is determined by the images of the generators; images must
    match boundaries, satisfy all relators and the Peiffer schema, and be
    action-coherent, which cuts the search to unit generators."""
    if x.symbolic:
        raise InfiniteBaseError(x.structural_report())
    base: FinGroupoid = x.base
    if n.base is not base and not base.same_table(n.base):
        raise ValueError("crossed modules live over different bases")
    # seed generators: one representative (m, q0) per label, lex-least q
    by_label: dict[str, list[XGen]] = {}
    for g in x.gens:
        by_label.setdefault(g.label, []).append(g)
    seeds = {label: min(gs, key=lambda g: g.gid) for label, gs in by_label.items()}
    labels = sorted(seeds)
    candidates = []
    for label in labels:
        g = seeds[label]
        opts = [
            e
            for e in n.fibres[g.at].elements
            if n.mu[g.at][e] == x.boundary[g.gid]
        ]
        candidates.append(opts)
    out = []
    for combo in itertools.product(*candidates):
        assign: dict[str, str] = {}
        for label, e in zip(labels, combo):
            seed = seeds[label]
            # propagate along the action: (m, q0 q') for every arrow q'
            for a in base.star(seed.at):
                gid = x.act_gen(seed.gid, a)
                assign[gid] = n.action[a][e]
        if len(assign) < len(x.gens):
            # some generator not reachable from its seed by right
            # translation (cannot happen over a groupoid: q = q0 (q0^-1 q))
            continue
        if _fpx_assign_ok(x, n, assign):
            out.append(assign)
    return out


def _fpx_assign_ok(x: FpXMod, n: XModTable, assign: dict[str, str]) -> bool:
    for w in tuple(x.relators) + tuple(x.peiffer_relators()):
        if not w:
            continue
        y = x.gen(w[0][0]).at
        t = n.fibres[y]
        acc = t.identity
        for gid, e in w:
            v = assign[gid]
            acc = t.mul(acc, v if e > 0 else t.inv(v))
        if acc != t.identity:
            return False
    for g in x.gens:
        if n.mu[g.at][assign[g.gid]] != x.boundary[g.gid]:
            return False
    for g in x.gens:
        for a in x.base.star(g.at):
            if assign[x.act_gen(g.gid, a)] != n.action[a][assign[g.gid]]:
                return False
    return True


def xmod_isomorphic_vertical(m: XModTable, n: XModTable) -> bool:
    """Isomorphism over the identity of the base: per-object group isos
    commuting with boundary and action."""
    if m.base is not n.base and not m.base.same_table(n.base):
        raise ValueError("different bases")
    for theta in xmod_homs_over(_id_morphism(m.base), m, n):
        if all(
            len(set(theta[x].values())) == m.fibres[x].order for x in m.base.objects
        ) and all(
            m.fibres[x].order == n.fibres[x].order for x in m.base.objects
        ):
            return True
    return False


def _id_morphism(p: FinGroupoid) -> GpdMorphism:
    from .groupoid import identity_morphism

    return identity_morphism(p)


# -- retraction to a vertex -------------------------------------------------------------


def retract_xmod_table(x: XModTable, x0: str) -> tuple[XModTable, TreeRetraction]:
    """Restrict a crossed module over a connected base to the vertex group
    at x0; the tree retraction transports each fibre M(y) isomorphically
    onto M(x0) via the tree arrows."""
    tr = spanning_tree_retraction(x.base, x0)
    v = vertex_group(x.base, x0)
    base0 = group_as_groupoid(v, x0)
    fibres = {x0: x.fibres[x0]}
    mu = {x0: dict(x.mu[x0])}
    action = {a: dict(x.action[a]) for a in v.elements}
    return XModTable(base0, fibres, mu, action, f"{x.name}@{x0}"), tr


def retract_fpxmod(x: FpXMod, x0: str) -> FpXMod:
    """Retract a presented crossed module over a connected finite base onto
    the vertex group at x0: each generator (m, q) becomes (m, q tau(at q))
    and relators rewrite accordingly; Peiffer regenerates over the new
    generator set."""
    if x.symbolic or not isinstance(x.base, FinGroupoid):
        raise InfiniteBaseError(x.structural_report())
    base: FinGroupoid = x.base
    tr = spanning_tree_retraction(base, x0)
    v = vertex_group(base, x0)
    base0 = group_as_groupoid(v, x0)

    def push(q):
        return base.mul(q, tr.tau[base.tgt(q)])

    new_gids: dict[str, str] = {}
    boundary = {}
    seen = {}
    for g in x.gens:
        moved = push(g.q)
        gid2 = f"({g.label}|{moved})"
        new_gids[g.gid] = gid2
        if gid2 not in seen:
            seen[gid2] = XGen(gid2, g.label, moved, x0)
            # transport the boundary loop to the basepoint through the tree
            boundary[gid2] = tr.retract_arrow(x.boundary[g.gid])
    gens = tuple(seen.values())
    relators = []
    for w in x.relators:
        relators.append(tuple((new_gids[gid], e) for gid, e in w))
    return FpXMod(
        base0, gens, tuple(relators), boundary, name=f"{x.name}@{x0}", amb=base
    )
