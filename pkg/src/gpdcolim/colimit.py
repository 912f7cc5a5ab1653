"""Connected-colimit computation for groupoids, modules and crossed modules.

The computation follows the base-then-fibre factorization: first the
colimit of the underlying objects (object sets for groupoids; base
groupoids, computed recursively, for modules and crossed modules); then a
pushforward of every node to the colimit base; then the fibre colimit,
which is the coproduct in the fibre divided by the edge identifications.
Fibre colimits are produced as presentations (finite realization is
attempted for groupoids) since they are infinite in general.

Disconnected shapes are refused: the coproduct in a fibre (a free product)
differs from the coproduct in the total category (a disjoint union), so a
silent answer would be wrong in one of the two senses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .groupoid import (
    FinGroupoid,
    GpdMorphism,
    ObjMap,
    discrete_groupoid,
    initiality_check,
    morphisms_over,
    obj_map,
)
from .gmodule import (
    GpdModule,
    ModGen,
    ModulePres,
    Matrix,
    module_induce,
    module_simplify,
    zero_module,
    InfiniteBaseError,
)
from .presented import (
    DEFAULT_BOUND,
    PresentedGroupoid,
    PWord,
    RealizedGroupoid,
    RewriteBound,
    Word,
    pg_bounded_realize,
)
from .groupoid import Arrow
from .words import WordGroupoid, universal_morphism
from .xmod import FpXMod, XGen, XModTable, xmod_induce, zero_xmod


class DisconnectedDiagramError(ValueError):
    """Connected shapes only: in a fibre the coproduct is a free product,
    in the whole category it is a disjoint union, and these differ."""


# -- diagrams -------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str
    morphism: object  # GpdMorphism | ModMorphism | XModMorphism


@dataclass(frozen=True, eq=False)
class Diagram:
    category: str  # "gpd" | "mod" | "xmod"
    nodes: dict[str, object]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("diagram shape must be nonempty")
        if self.category not in ("gpd", "mod", "xmod"):
            raise ValueError(f"unknown category tag {self.category}")
        for e in self.edges:
            if e.src not in self.nodes or e.tgt not in self.nodes:
                raise ValueError(f"edge {e.id} endpoints missing")


def shape_components(d: Diagram) -> list[tuple[str, ...]]:
    parent = {c: c for c in d.nodes}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for e in d.edges:
        a, b = find(e.src), find(e.tgt)
        if a != b:
            parent[max(a, b)] = min(a, b)
    blocks: dict[str, list[str]] = {}
    for c in d.nodes:
        blocks.setdefault(find(c), []).append(c)
    return sorted(tuple(sorted(b)) for b in blocks.values())


def is_connected_diagram(d: Diagram) -> tuple[bool, list[tuple[str, ...]]]:
    comps = shape_components(d)
    return len(comps) == 1, comps


# -- morphism wrappers for modules and crossed modules -----------------------------


@dataclass(frozen=True, eq=False)
class ModMorphism:
    source: GpdModule
    target: GpdModule
    base: GpdMorphism
    maps: dict[str, Matrix]  # object -> matrix gens(src fibre) x gens(tgt fibre)


@dataclass(frozen=True, eq=False)
class XModMorphism:
    source: XModTable
    target: XModTable
    base: GpdMorphism
    maps: dict[str, dict[str, str]]  # object -> element map


# -- groupoid colimits --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GpdColimit:
    presentation: PresentedGroupoid
    object_class: dict[tuple[str, str], str]  # (node, object) -> colimit object
    cocone_words: dict[str, dict[str, PWord]]  # node -> arrow id -> path
    realized: RealizedGroupoid | None

    def cocone_object_map(self, node: str) -> dict[str, str]:
        return {
            x: self.object_class[(node, x)]
            for (n, x) in self.object_class
            if n == node
        }

    def cocone_morphism(self, node: str, source: FinGroupoid) -> GpdMorphism:
        """Cocone leg into the realized colimit (requires realization)."""
        if self.realized is None:
            raise ValueError("colimit was not realized as a finite groupoid")
        om = self.cocone_object_map(node)
        am = {}
        for a in source.arrows:
            w = self.cocone_words[node][a.id]
            am[a.id] = self.realized.eval_word(self.presentation, _pw_word(w), om[a.src])
        return GpdMorphism(source, self.realized.groupoid, om, am)

    def presented_cocone_morphism(self, node: str, source: FinGroupoid) -> GpdMorphism:
        om = self.cocone_object_map(node)
        return GpdMorphism(
            source, self.presentation, om, dict(self.cocone_words[node])
        )


def _pw_word(w: PWord) -> Word:
    return w.word


def colimit_connected_gpd(
    d: Diagram, bound: RewriteBound = DEFAULT_BOUND
) -> GpdColimit:
    connected, comps = is_connected_diagram(d)
    if not connected:
        raise DisconnectedDiagramError(
            f"shape has components {comps}; fibre and total coproducts differ"
        )
    # (i) colimit of object sets by union-find
    parent: dict[tuple[str, str], tuple[str, str]] = {}
    for c, g in d.nodes.items():
        for x in g.objects:
            parent[(c, x)] = (c, x)

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(k1, k2):
        r1, r2 = find(k1), find(k2)
        if r1 != r2:
            parent[max(r1, r2)] = min(r1, r2)

    for e in d.edges:
        f: GpdMorphism = e.morphism
        for x in d.nodes[e.src].objects:
            union((e.src, x), (e.tgt, f.on_obj(x)))
    rep_name = {}
    for k in parent:
        r = find(k)
        rep_name[k] = f"{r[0]}:{r[1]}"
    objects = tuple(sorted(set(rep_name.values())))

    # (ii) pushforward presentation of every node over the colimit objects
    gens: list[Arrow] = []
    relators: list[Word] = []
    cocone_words: dict[str, dict[str, PWord]] = {}
    gid = lambda c, a: f"{c}:{a}"
    for c, g in d.nodes.items():
        words = {}
        nonid = set(g.non_identity_arrows())
        for a in g.arrows:
            s, t = rep_name[(c, a.src)], rep_name[(c, a.tgt)]
            if a.id in nonid:
                gens.append(Arrow(gid(c, a.id), s, t))
                words[a.id] = PWord(s, t, ((gid(c, a.id), 1),))
            else:
                words[a.id] = PWord(s, t, ())
        cocone_words[c] = words
        for (a, b), cc in sorted(g.compose.items()):
            if a not in nonid or b not in nonid:
                continue
            if cc in nonid:
                relators.append(((gid(c, a), 1), (gid(c, b), 1), (gid(c, cc), -1)))
            else:
                relators.append(((gid(c, a), 1), (gid(c, b), 1)))
    # (iii)/(iv) identify arrows along the edges, then the fibre colimit is
    # the quotient of the fibre coproduct by these relators
    for e in d.edges:
        f: GpdMorphism = e.morphism
        src_gpd: FinGroupoid = d.nodes[e.src]
        for a in src_gpd.non_identity_arrows():
            img = f.on_arrow(a)
            if d.nodes[e.tgt].is_identity(img):
                relators.append(((gid(e.src, a), 1),))
            else:
                relators.append(((gid(e.src, a), 1), (gid(e.tgt, img), -1)))
    pres = PresentedGroupoid(objects, tuple(gens), tuple(relators), "colim")
    realized = pg_bounded_realize(pres, bound)
    return GpdColimit(pres, dict(rep_name), cocone_words, realized)


# -- module colimits ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModColimit:
    base: object  # FinGroupoid (realized) or PresentedGroupoid
    presentation: ModulePres
    unit_gens: dict[str, dict[tuple[str, int], str]]  # node -> (obj, gen idx) -> gid
    base_colimit: GpdColimit
    invariants: object | None  # AbInvariants when the base is finite


def _base_diagram(d: Diagram) -> Diagram:
    nodes = {c: m.base for c, m in d.nodes.items()}
    edges = tuple(
        Edge(e.id, e.src, e.tgt, e.morphism.base) for e in d.edges
    )
    return Diagram("gpd", nodes, edges)


def colimit_connected_mod(
    d: Diagram, bound: RewriteBound = DEFAULT_BOUND
) -> ModColimit:
    connected, comps = is_connected_diagram(d)
    if not connected:
        raise DisconnectedDiagramError(
            f"shape has components {comps}; fibre and total coproducts differ"
        )
    base_col = colimit_connected_gpd(_base_diagram(d), bound)
    finite = base_col.realized is not None
    base = base_col.realized.groupoid if finite else base_col.presentation
    gens: list[ModGen] = []
    rels = []
    unit_gens: dict[str, dict[tuple[str, int], str]] = {}
    for c, m in d.nodes.items():
        if finite:
            leg = base_col.cocone_morphism(c, m.base)
        else:
            leg = base_col.presented_cocone_morphism(c, m.base)
        mp, unit = module_induce(leg, m)
        unit_gens[c] = {}
        for g in mp.generators:
            gens.append(ModGen(f"{c}:{g.gid}", g.at))
        for key, (gid2, _) in unit.gen_map.items():
            unit_gens[c][key] = f"{c}:{gid2}"
        for rel in mp.relations:
            rels.append(tuple((coef, f"{c}:{g2}", arrow) for coef, g2, arrow in rel))
    id_of = lambda y: base.id_at(y)
    for e in d.edges:
        f: ModMorphism = e.morphism
        src_mod = f.source
        for x in src_mod.base.objects:
            vx = f.base.on_obj(x)
            mat = f.maps[x]
            for i in range(src_mod.groups[x].ngens):
                at = _gen_at(unit_gens, gens, e.src, (x, i))
                terms = [(-1, unit_gens[e.src][(x, i)], id_of(at))]
                for j in range(len(mat[i]) if mat else 0):
                    if mat[i][j]:
                        terms.append(
                            (mat[i][j], unit_gens[e.tgt][(vx, j)], id_of(at))
                        )
                rels.append(tuple(terms))
    pres = ModulePres(base, tuple(gens), tuple(rels), "colim")
    inv = module_simplify(pres) if finite else None
    return ModColimit(base, pres, unit_gens, base_col, inv)


def _gen_at(unit_gens, gens, node, key):
    gid = unit_gens[node][key]
    for g in gens:
        if g.gid == gid:
            return g.at
    raise KeyError(gid)


# -- crossed module colimits ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class XModColimit:
    base: object
    presentation: FpXMod
    unit_gens: dict[str, dict[tuple[str, str], str]]  # node -> (obj, elem) -> gid
    base_colimit: GpdColimit
    invariants: object | None  # abelianized invariants when base finite


def colimit_connected_xmod(
    d: Diagram, bound: RewriteBound = DEFAULT_BOUND
) -> XModColimit:
    connected, comps = is_connected_diagram(d)
    if not connected:
        raise DisconnectedDiagramError(
            f"shape has components {comps}; fibre and total coproducts differ"
        )
    base_col = colimit_connected_gpd(_base_diagram(d), bound)
    finite = base_col.realized is not None
    base = base_col.realized.groupoid if finite else base_col.presentation
    gens: list[XGen] = []
    relators: list[Word] = []
    boundary = {}
    unit_gens: dict[str, dict[tuple[str, str], str]] = {}
    for c, m in d.nodes.items():
        if finite:
            leg = base_col.cocone_morphism(c, m.base)
        else:
            leg = base_col.presented_cocone_morphism(c, m.base)
        fp, unit = xmod_induce(leg, m)
        unit_gens[c] = {}
        rename = {g.gid: f"{c}:{g.gid}" for g in fp.gens}
        for g in fp.gens:
            gens.append(XGen(rename[g.gid], f"{c}:{g.label}", g.q, g.at))
            boundary[rename[g.gid]] = fp.boundary[g.gid]
        for key, gid2 in unit.gen_map.items():
            unit_gens[c][key] = rename[gid2]
        for w in fp.relators:
            relators.append(tuple((rename[g2], s) for g2, s in w))
    for e in d.edges:
        f: XModMorphism = e.morphism
        src_x = f.source
        for x in src_x.base.objects:
            vx = f.base.on_obj(x)
            for m_el in src_x.fibres[x].elements:
                if m_el == src_x.fibres[x].identity:
                    continue
                img = f.maps[x][m_el]
                w = [(unit_gens[e.src][(x, m_el)], 1)]
                if img != f.target.fibres[vx].identity:
                    w.append((unit_gens[e.tgt][(vx, img)], -1))
                relators.append(tuple(w))
    fp_out = FpXMod(
        base, tuple(gens), tuple(relators), boundary,
        symbolic=not finite, name="colim",
    )
    inv = None
    if finite:
        from .xmod import peiffer_abelianize

        _, inv = peiffer_abelianize(fp_out)
    return XModColimit(base, fp_out, unit_gens, base_col, inv)


def colimit_connected(d: Diagram, bound: RewriteBound = DEFAULT_BOUND):
    if d.category == "gpd":
        return colimit_connected_gpd(d, bound)
    if d.category == "mod":
        return colimit_connected_mod(d, bound)
    return colimit_connected_xmod(d, bound)


# -- cocartesian certification -------------------------------------------------------


@dataclass(frozen=True)
class CocartesianCert:
    passed: bool
    counts: tuple[int, ...]  # factorizations found per battery element

    def __str__(self):
        status = "cocartesian" if self.passed else "NOT cocartesian"
        return f"{status}; factorization counts {list(self.counts)}"


def presented_vertical_morphisms(
    p: PresentedGroupoid,
    target: FinGroupoid,
    forced: dict[str, str],
    object_map: dict[str, str] | None = None,
) -> list[dict[str, str]]:
    """Assignments of the presentation generators to target arrows that
    satisfy every relator, with some generators forced and objects carried
    along object_map (identity by default).  Endpoint-guided backtracking;
    feasible at battery scale."""
    om = object_map or {x: x for x in p.objects}
    for x in p.objects:
        if om.get(x) not in target.objects:
            raise ValueError(f"target lacks an image for object {x}")
    free_gens = [g for g in p.generators if g.id not in forced]
    out = []

    def word_value(assign, w: Word, at: str):
        acc = target.id_at(om[at])
        for g2, e2 in w:
            v = assign.get(g2)
            if v is None:
                return None
            acc = target.mul(acc, v if e2 > 0 else target.inv(v))
        return acc

    def relators_ok(assign, complete: bool) -> bool:
        for w in p.relators:
            if not w:
                continue
            s, _ = p.word_endpoints(w)
            val = word_value(assign, w, s)
            if val is None:
                if complete:
                    return False
                continue
            if val != target.id_at(om[s]):
                return False
        return True

    def extend(i: int, assign: dict):
        if i == len(free_gens):
            if relators_ok(assign, complete=True):
                out.append(dict(assign))
            return
        g = free_gens[i]
        for b in target.hom(om[g.src], om[g.tgt]):
            assign[g.id] = b
            if relators_ok(assign, complete=False):
                extend(i + 1, assign)
            del assign[g.id]

    if not all(
        target.src(v) == om[p.gen(k).src] and target.tgt(v) == om[p.gen(k).tgt]
        for k, v in forced.items()
    ):
        return []
    extend(0, dict(forced))
    return out


def check_cocartesian_gpd(
    z: FinGroupoid,
    colim: GpdColimit,
    node: str,
    battery: list[GpdMorphism],
    object_ident: dict[str, str],
) -> CocartesianCert:
    """Certify the cocone leg z -> colimit as cocartesian against a battery
    of morphisms over the same object map: each must factor through the leg
    by exactly one vertical morphism of the colimit presentation.
    object_ident matches the colimit objects with the battery targets'."""
    counts = []
    leg_words = colim.cocone_words[node]
    for theta in battery:
        target: FinGroupoid = theta.target
        # factoring forces the generators in the image of the leg
        forced = {}
        conflict = False
        for a in z.non_identity_arrows():
            w = leg_words[a].word
            img = theta.on_arrow(a)
            if len(w) == 1 and w[0][1] == 1:
                g2 = w[0][0]
                if forced.get(g2, img) != img:
                    conflict = True
                    break
                forced[g2] = img
            elif len(w) == 0:
                if not target.is_identity(img):
                    conflict = True
                    break
        if conflict:
            counts.append(0)
            continue
        sols = presented_vertical_morphisms(
            colim.presentation, target, forced, object_ident
        )
        counts.append(len(sols))
    return CocartesianCert(all(c == 1 for c in counts), tuple(counts))


def discrete_pushout_object_ident(sq: PushoutSquare) -> dict[str, str]:
    """For a pushout along the discrete adjoint, colimit objects correspond
    to the codomain objects through the D(J) node."""
    col: GpdColimit = sq.colimit if sq.category == "gpd" else sq.colimit.base_colimit
    dj = sq.diagram.nodes["j"]
    return {col.object_class[("j", y)]: y for y in dj.objects}


# -- pushouts along the discrete left adjoint -------------------------------------------


@dataclass(frozen=True, eq=False)
class PushoutSquare:
    category: str
    diagram: Diagram
    colimit: object
    corner_node: str  # the node holding the pushed structure


def pushout_along_discrete_gpd(
    u: ObjMap, z: FinGroupoid, bound: RewriteBound = DEFAULT_BOUND
) -> PushoutSquare:
    """The square  D(K) -> D(J), D(K) -> Z  with D the discrete-groupoid
    left adjoint; its pushout computes the cocartesian lifting of u."""
    dk = discrete_groupoid(z.objects)
    dj = discrete_groupoid(u.codomain)
    over_u = GpdMorphism(
        dk,
        dj,
        {x: u(x) for x in dk.objects},
        {dk.id_at(x): dj.id_at(u(x)) for x in dk.objects},
    )
    eps = initiality_check(
        list(z.objects), z, obj_map(z.objects, z.objects, {x: x for x in z.objects})
    )
    diagram = Diagram(
        "gpd",
        {"k": dk, "j": dj, "z": z},
        (Edge("du", "k", "j", over_u), Edge("eps", "k", "z", eps)),
    )
    col = colimit_connected_gpd(diagram, bound)
    return PushoutSquare("gpd", diagram, col, "z")


def pushout_along_discrete_mod(
    v: GpdMorphism, z: GpdModule, bound: RewriteBound = DEFAULT_BOUND
) -> PushoutSquare:
    k, j = v.source, v.target
    zk, zj = zero_module(k), zero_module(j)
    e1 = ModMorphism(zk, zj, v, {x: () for x in k.objects})
    from .groupoid import identity_morphism

    e2 = ModMorphism(zk, z, identity_morphism(k), {x: () for x in k.objects})
    diagram = Diagram(
        "mod",
        {"k": zk, "j": zj, "z": z},
        (Edge("dv", "k", "j", e1), Edge("eps", "k", "z", e2)),
    )
    col = colimit_connected_mod(diagram, bound)
    return PushoutSquare("mod", diagram, col, "z")


def pushout_along_discrete_xmod(
    f: GpdMorphism, z: XModTable, bound: RewriteBound = DEFAULT_BOUND
) -> PushoutSquare:
    k, j = f.source, f.target
    zk, zj = zero_xmod(k), zero_xmod(j)
    from .groupoid import identity_morphism

    triv = lambda p: {x: {"e": "e"} for x in p.objects}
    e1 = XModMorphism(zk, zj, f, triv(k))
    e2 = XModMorphism(
        zk, z, identity_morphism(k),
        {x: {"e": z.fibres[x].identity} for x in k.objects},
    )
    diagram = Diagram(
        "xmod",
        {"k": zk, "j": zj, "z": z},
        (Edge("df", "k", "j", e1), Edge("eps", "k", "z", e2)),
    )
    col = colimit_connected_xmod(diagram, bound)
    return PushoutSquare("xmod", diagram, col, "z")


# -- fibre vs total --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FibreVsTotalReport:
    connected: bool
    fibre_presentation: PresentedGroupoid
    total: object  # GpdColimit when connected; FinGroupoid coproduct when not
    isomorphic: bool | None  # set when connected and both sides realized
    detail: str


def fibre_colimit_presentation(d: Diagram) -> PresentedGroupoid:
    """Colimit inside the fibre over a fixed object set: coproduct of the
    nodes (shared objects) divided by the edge identifications.  No object
    identification happens; all edges must be vertical."""
    obj_sets = {tuple(m.objects) for m in d.nodes.values()}
    if len(obj_sets) != 1:
        raise ValueError("fibre diagrams need one shared object set")
    for e in d.edges:
        if not e.morphism.is_vertical():
            raise ValueError(f"edge {e.id} is not vertical")
    objects = next(iter(obj_sets))
    gens = []
    relators: list[Word] = []
    gid = lambda c, a: f"{c}:{a}"
    for c, g in d.nodes.items():
        nonid = set(g.non_identity_arrows())
        for a in g.arrows:
            if a.id in nonid:
                gens.append(Arrow(gid(c, a.id), a.src, a.tgt))
        for (a, b), cc in sorted(g.compose.items()):
            if a not in nonid or b not in nonid:
                continue
            if cc in nonid:
                relators.append(((gid(c, a), 1), (gid(c, b), 1), (gid(c, cc), -1)))
            else:
                relators.append(((gid(c, a), 1), (gid(c, b), 1)))
    for e in d.edges:
        g = d.nodes[e.src]
        for a in g.non_identity_arrows():
            img = e.morphism.on_arrow(a)
            if d.nodes[e.tgt].is_identity(img):
                relators.append(((gid(e.src, a), 1),))
            else:
                relators.append(((gid(e.src, a), 1), (gid(e.tgt, img), -1)))
    return PresentedGroupoid(objects, tuple(gens), tuple(relators), "fibre-colim")


def fibre_vs_total_colimit_check(
    d: Diagram, bound: RewriteBound = DEFAULT_BOUND
) -> FibreVsTotalReport:
    """Connected vertical diagrams: the fibre colimit agrees with the total
    colimit (checked by realizing both and comparing up to isomorphism).
    Disconnected ones: demonstrate the failure on sizes."""
    connected, comps = is_connected_diagram(d)
    fibre_pres = fibre_colimit_presentation(d)
    if connected:
        total = colimit_connected_gpd(d, bound)
        iso = None
        if total.realized is not None:
            fibre_real = pg_bounded_realize(fibre_pres, bound)
            if fibre_real is not None:
                from .groupoid import isomorphic_groupoids

                iso = isomorphic_groupoids(
                    fibre_real.groupoid, total.realized.groupoid
                )
        return FibreVsTotalReport(
            True, fibre_pres, total, iso,
            "connected: fibre colimit compared with total colimit",
        )
    # disconnected: total coproduct is the disjoint union
    from .groupoid import coproduct_gpd

    total = coproduct_gpd([d.nodes[c] for c in sorted(d.nodes)])
    fibre_objs = len(fibre_pres.objects)
    detail = (
        f"disconnected: fibre coproduct has {fibre_objs} object(s) and is a "
        f"free product (presented, generally infinite); total coproduct has "
        f"{len(total.objects)} objects and {total.n_arrows} arrows"
    )
    return FibreVsTotalReport(False, fibre_pres, total, None, detail)
