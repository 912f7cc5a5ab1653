"""Modules over groupoids: families of presented abelian groups with a
compatible groupoid action.

Two representations:

* GpdModule -- exact form over a finite base: per-object integer
  presentations plus an integer action matrix for every arrow;
* ModulePres -- a presentation as a module: generators placed at objects,
  relations as integer combinations of (generator, acting arrow) pairs.
  The presented module is the free module on the generators divided by the
  submodule *generated* by the relations (so relations are implicitly
  closed under the action).

All invariant extraction goes through Smith normal form; torsion is never
assumed away.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .grouptable import GroupTable
from .groupoid import FinGroupoid, GpdMorphism, ObjMap, ValidationReport, discrete_groupoid
from .intlinalg import AbElements, AbGroup, AbPres, abelian_invariants, row_span_contains

Matrix = tuple[tuple[int, ...], ...]


def mat_rows(m: Matrix) -> list[list[int]]:
    return [list(r) for r in m]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return ()
    bn = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(bn))
        for i in range(len(a))
    )


def row_times(v: list[int], m: Matrix) -> list[int]:
    n = len(m[0]) if m else 0
    return [sum(v[i] * m[i][j] for i in range(len(m))) for j in range(n)]


# -- exact modules over finite bases -----------------------------------------


@dataclass(frozen=True, eq=False)
class GpdModule:
    base: FinGroupoid
    groups: dict[str, AbPres]
    action: dict[str, Matrix]  # arrow id -> matrix gens(src) x gens(tgt)
    name: str = ""

    def pres(self, x: str) -> AbPres:
        return self.groups[x]

    def elements(self, x: str) -> AbElements:
        return AbElements(self.groups[x])

    def act_row(self, row: list[int], p: str) -> list[int]:
        return row_times(row, self.action[p])

    def invariants(self) -> "AbInvariants":
        return AbInvariants(
            {x: self.groups[x].invariants() for x in self.base.objects}
        )


@dataclass(frozen=True)
class AbInvariants:
    per_object: dict[str, AbGroup]

    def __str__(self) -> str:
        return "; ".join(f"{x}: {g}" for x, g in sorted(self.per_object.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, AbInvariants) and self.per_object == other.per_object


def validate_module(m: GpdModule) -> ValidationReport:
    bad = []
    g = m.base
    for x in g.objects:
        if x not in m.groups:
            bad.append(f"no fibre at {x}")
    if bad:
        return ValidationReport(tuple(bad))
    for a in g.arrows:
        mat = m.action.get(a.id)
        nx, ny = m.groups[a.src].ngens, m.groups[a.tgt].ngens
        if mat is None or len(mat) != nx or (nx and len(mat[0]) != ny):
            bad.append(f"action matrix missing or misshapen at {a.id}")
    if bad:
        return ValidationReport(tuple(bad))
    for a in g.arrows:
        mat = m.action[a.id]
        tgt_rows = mat_rows(m.groups[a.tgt].rows)
        # relations map into relations
        for r in m.groups[a.src].rows:
            if not row_span_contains(tgt_rows, row_times(list(r), mat)):
                bad.append(f"action at {a.id} does not preserve relations")
                break
    for x in g.objects:
        e = g.id_at(x)
        mat = m.action[e]
        n = m.groups[x].ngens
        rows = mat_rows(m.groups[x].rows)
        for i in range(n):
            diff = [mat[i][j] - (1 if i == j else 0) for j in range(n)]
            if not row_span_contains(rows, diff):
                bad.append(f"identity at {x} does not act as identity")
                break
    for (a, b), c in g.compose.items():
        comp = matmul(m.action[a], m.action[b])
        rows = mat_rows(m.groups[g.tgt(b)].rows)
        for i in range(len(comp)):
            diff = [comp[i][j] - m.action[c][i][j] for j in range(len(comp[i]))]
            if not row_span_contains(rows, diff):
                bad.append(f"composite action fails on ({a},{b})")
                break
    return ValidationReport(tuple(bad))


def zero_module(g: FinGroupoid) -> GpdModule:
    return GpdModule(
        g,
        {x: AbPres(0, ()) for x in g.objects},
        {a.id: () for a in g.arrows},
        "0",
    )


def constant_module(g: FinGroupoid, pres: AbPres, name: str = "") -> GpdModule:
    """The same fibre everywhere, all arrows acting as the identity."""
    n = pres.ngens
    return GpdModule(
        g, {x: pres for x in g.objects}, {a.id: identity_matrix(n) for a in g.arrows}, name
    )


def module_pullback(v: GpdMorphism, n: GpdModule) -> GpdModule:
    """Reindex a module along a groupoid morphism: fibres are copied along
    the object map and each arrow acts the way its image does."""
    g = v.source
    return GpdModule(
        g,
        {x: n.groups[v.on_obj(x)] for x in g.objects},
        {a.id: n.action[v.on_arrow(a.id)] for a in g.arrows},
        f"pullback({n.name})",
    )


# -- module presentations -----------------------------------------------------


@dataclass(frozen=True)
class ModGen:
    gid: str
    at: str  # object of the base where the generator lives


# a term (coef, gid, arrow) denotes coef * (generator acted on by arrow);
# arrow runs from the generator's object to the relation's object
Term = tuple[int, str, object]
Relation = tuple[Term, ...]


@dataclass(frozen=True, eq=False)
class ModulePres:
    base: object  # FinGroupoid | PresentedGroupoid | WordGroupoid
    generators: tuple[ModGen, ...]
    relations: tuple[Relation, ...]
    name: str = ""

    def gen_index(self) -> dict[str, ModGen]:
        return {g.gid: g for g in self.generators}

    def structural_report(self) -> dict:
        return {
            "generators": len(self.generators),
            "relations": len(self.relations),
            "free": not self.relations,
        }


class InfiniteBaseError(ValueError):
    """Raised when an exact computation needs a finite base; carries the
    structural report of the presentation."""

    def __init__(self, report: dict):
        super().__init__(f"base is not a finite groupoid; structure: {report}")
        self.report = report


def module_simplify(mp: ModulePres) -> AbInvariants:
    """Per-object invariant factors of a presented module over a finite
    base: expand each relation over all arrows into the relation's fibre,
    then run Smith normal form per object."""
    base = mp.base
    if not isinstance(base, FinGroupoid):
        raise InfiniteBaseError(mp.structural_report())
    gens = mp.generators
    basis: dict[str, list[tuple[str, str]]] = {y: [] for y in base.objects}
    for g in gens:
        for a in base.star(g.at):
            basis[base.tgt(a)].append((g.gid, a))
    index = {
        y: {pair: i for i, pair in enumerate(sorted(basis[y]))} for y in base.objects
    }
    rows: dict[str, list[list[int]]] = {y: [] for y in base.objects}
    for rel in mp.relations:
        at = _relation_object(mp, rel)
        if at is None:
            continue
        for w in base.star(at):
            y = base.tgt(w)
            row = [0] * len(index[y])
            for coef, gid, arrow in rel:
                moved = base.mul(arrow, w)
                row[index[y][(gid, moved)]] += coef
            rows[y].append(row)
    return AbInvariants(
        {
            y: abelian_invariants(len(index[y]), rows[y])
            for y in base.objects
        }
    )


def _relation_object(mp: ModulePres, rel: Relation):
    base = mp.base
    at = None
    for _, gid, arrow in rel:
        t = base.tgt(arrow) if isinstance(base, FinGroupoid) else arrow.tgt
        if at is None:
            at = t
        elif at != t:
            raise ValueError(f"relation terms end at different objects: {rel}")
    return at


def module_expand(mp: ModulePres) -> GpdModule:
    """Exact per-object form of a presented module over a finite base:
    the fibre at y is free on pairs (generator, arrow into y) modulo the
    expanded relations; arrows act by right translation of the pair."""
    base = mp.base
    if not isinstance(base, FinGroupoid):
        raise InfiniteBaseError(mp.structural_report())
    basis: dict[str, list[tuple[str, str]]] = {y: [] for y in base.objects}
    for g in mp.generators:
        for a in base.star(g.at):
            basis[base.tgt(a)].append((g.gid, a))
    for y in basis:
        basis[y] = sorted(basis[y])
    index = {y: {pair: i for i, pair in enumerate(basis[y])} for y in base.objects}
    rows: dict[str, list[tuple[int, ...]]] = {y: [] for y in base.objects}
    for rel in mp.relations:
        at = _relation_object(mp, rel)
        if at is None:
            continue
        for w in base.star(at):
            y = base.tgt(w)
            row = [0] * len(index[y])
            for coef, gid, arrow in rel:
                row[index[y][(gid, base.mul(arrow, w))]] += coef
            rows[y].append(tuple(row))
    groups = {
        y: AbPres(len(basis[y]), tuple(rows[y])) for y in base.objects
    }
    action = {}
    for a in base.arrows:
        x, y = a.src, a.tgt
        mat = []
        for (gid, q) in basis[x]:
            row = [0] * len(basis[y])
            row[index[y][(gid, base.mul(q, a.id))]] = 1
            mat.append(tuple(row))
        action[a.id] = tuple(mat)
    return GpdModule(base, groups, action, f"{mp.name}^")


def gpdmodule_to_pres(m: GpdModule) -> ModulePres:
    """Tautological presentation of an exact module: its generators with
    per-object relations and one action relation per arrow and generator."""
    base = m.base
    gens = []
    for x in base.objects:
        for i in range(m.groups[x].ngens):
            gens.append(ModGen(f"{x}.g{i}", x))
    rels: list[Relation] = []
    for x in base.objects:
        e = base.id_at(x)
        for row in m.groups[x].rows:
            rels.append(
                tuple(
                    (row[i], f"{x}.g{i}", e) for i in range(len(row)) if row[i]
                )
            )
    for a in base.arrows:
        if base.is_identity(a.id):
            continue
        x, y = a.src, a.tgt
        ey = base.id_at(y)
        mat = m.action[a.id]
        for i in range(m.groups[x].ngens):
            terms = [(mat[i][j], f"{y}.g{j}", ey) for j in range(len(mat[i])) if mat[i][j]]
            terms.append((-1, f"{x}.g{i}", a.id))
            rels.append(tuple(terms))
    return ModulePres(base, tuple(gens), tuple(rels), m.name)


# -- induced modules -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleUnit:
    """The universal morphism into an induced module: each source generator
    goes to itself acted on by the identity of its image object."""

    source: GpdModule
    target: ModulePres
    gen_map: dict[tuple[str, int], tuple[str, object]]  # (x, i) -> (gid, id arrow)


def module_induce(v: GpdMorphism, m: GpdModule) -> tuple[ModulePres, ModuleUnit]:
    """Push a module forward along a groupoid morphism.

    The result is presented by the generators of m placed at their image
    objects, with m's relations, plus one relation per non-identity arrow
    p and generator g identifying g.p with (the image of) g acted on by
    v(p)."""
    g = v.source
    h = v.target
    id_at = h.id_at  # same interface on finite, presented and word groupoids
    gens = []
    for x in g.objects:
        for i in range(m.groups[x].ngens):
            gens.append(ModGen(f"{x}.g{i}", v.on_obj(x)))
    rels: list[Relation] = []
    for x in g.objects:
        e = id_at(v.on_obj(x))
        for row in m.groups[x].rows:
            rel = tuple((row[i], f"{x}.g{i}", e) for i in range(len(row)) if row[i])
            if rel:
                rels.append(rel)
    for a in g.arrows:
        if g.is_identity(a.id):
            continue
        x, y = a.src, a.tgt
        ey = id_at(v.on_obj(y))
        mat = m.action[a.id]
        vp = v.on_arrow(a.id)
        for i in range(m.groups[x].ngens):
            terms = [
                (mat[i][j], f"{y}.g{j}", ey) for j in range(len(mat[i])) if mat[i][j]
            ]
            terms.append((-1, f"{x}.g{i}", vp))
            rels.append(tuple(terms))
    mp = ModulePres(h, tuple(gens), tuple(rels), f"induced({m.name})")
    unit = ModuleUnit(
        m,
        mp,
        {
            (x, i): (f"{x}.g{i}", id_at(v.on_obj(x)))
            for x in g.objects
            for i in range(m.groups[x].ngens)
        },
    )
    return mp, unit


def free_module(t: dict[str, str], q) -> ModulePres:
    """Free module on t: B -> objects(q), built as the module induced from
    the rank-one constant module on the discrete groupoid on B."""
    b_objects = sorted(t)
    d = discrete_groupoid(b_objects)
    m = constant_module(d, AbPres(1, ()), "ZB")
    v = GpdMorphism(
        source=d,
        target=q,
        object_map={b: t[b] for b in b_objects},
        arrow_map={d.id_at(b): _base_id(q, t[b]) for b in b_objects},
    )
    mp, _ = module_induce(v, m)
    return ModulePres(q, mp.generators, mp.relations, "free")


def _base_id(q, y):
    return q.id_at(y)


# -- morphism enumeration (finite instances) -----------------------------------


def modulepres_homs_vertical(mp: ModulePres, l: GpdModule) -> list[dict[str, tuple]]:
    """All module morphisms from a presented module into an exact module
    over the same finite base, as maps generator -> element."""
    base = mp.base
    if not isinstance(base, FinGroupoid):
        raise InfiniteBaseError(mp.structural_report())
    if l.base is not base and not base.same_table(l.base):
        raise ValueError("modules live over different bases")
    elems = {x: l.elements(x) for x in base.objects}
    gen_list = list(mp.generators)
    choices = [elems[g.at].elements() for g in gen_list]
    out = []
    for combo in itertools.product(*choices):
        assign = {g.gid: e for g, e in zip(gen_list, combo)}
        if _modulepres_hom_ok(mp, l, elems, assign):
            out.append(assign)
    return out


def _act_elem(l: GpdModule, elems, x: str, e: tuple, arrow: str) -> tuple:
    base = l.base
    y = base.tgt(arrow)
    coords = elems[x].to_gen_coords(e)
    moved = row_times(coords, l.action[arrow])
    return elems[y].reduce(moved)


def _modulepres_hom_ok(mp: ModulePres, l: GpdModule, elems, assign) -> bool:
    base = mp.base
    gi = mp.gen_index()
    for rel in mp.relations:
        at = _relation_object(mp, rel)
        if at is None:
            continue
        total = elems[at].zero
        for coef, gid, arrow in rel:
            x = gi[gid].at
            moved = _act_elem(l, elems, x, assign[gid], arrow)
            for _ in range(abs(coef)):
                total = elems[at].add(
                    total, moved if coef > 0 else elems[at].neg(moved)
                )
        if total != elems[at].zero:
            return False
    return True


def module_homs_over(v: GpdMorphism, m: GpdModule, l: GpdModule) -> list[dict]:
    """All module morphisms (m over g) -> (l over h) lying over v, as maps
    (object, generator index) -> element of l(v x)."""
    g = v.source
    elems = {y: l.elements(y) for y in l.base.objects}
    keys = [(x, i) for x in g.objects for i in range(m.groups[x].ngens)]
    choices = [elems[v.on_obj(x)].elements() for (x, i) in keys]
    out = []
    for combo in itertools.product(*choices):
        assign = dict(zip(keys, combo))
        if _module_hom_over_ok(v, m, l, elems, assign):
            out.append(assign)
    return out


def _module_hom_over_ok(v, m, l, elems, assign) -> bool:
    g = v.source

    def image_of_row(x, row):
        vx = v.on_obj(x)
        total = elems[vx].zero
        for i, c in enumerate(row):
            if not c:
                continue
            e = assign[(x, i)]
            for _ in range(abs(c)):
                total = elems[vx].add(total, e if c > 0 else elems[vx].neg(e))
        return total

    for x in g.objects:
        for row in m.groups[x].rows:
            if image_of_row(x, list(row)) != elems[v.on_obj(x)].zero:
                return False
    for a in g.arrows:
        if g.is_identity(a.id):
            continue
        x, y = a.src, a.tgt
        mat = m.action[a.id]
        for i in range(m.groups[x].ngens):
            lhs = image_of_row(y, list(mat[i]))
            rhs = _act_elem(l, elems, v.on_obj(x), assign[(x, i)], v.on_arrow(a.id))
            if lhs != rhs:
                return False
    return True


# -- the independent tensor oracle ---------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupModule:
    """A module over a finite group: presented abelian group plus an action
    matrix for every group element."""

    group: GroupTable
    pres: AbPres
    action: dict[str, Matrix]
    name: str = ""


def validate_group_module(m: GroupModule) -> ValidationReport:
    bad = []
    g = m.group
    n = m.pres.ngens
    rows = mat_rows(m.pres.rows)
    for s in g.elements:
        mat = m.action.get(s)
        if mat is None or len(mat) != n or (n and len(mat[0]) != n):
            bad.append(f"action matrix missing at {s}")
            continue
        for r in m.pres.rows:
            if not row_span_contains(rows, row_times(list(r), mat)):
                bad.append(f"action of {s} does not preserve relations")
                break
    if bad:
        return ValidationReport(tuple(bad))
    e = g.identity
    for i in range(n):
        diff = [m.action[e][i][j] - (1 if i == j else 0) for j in range(n)]
        if not row_span_contains(rows, diff):
            bad.append("identity does not act as identity")
            break
    for s in g.elements:
        for t in g.elements:
            comp = matmul(m.action[s], m.action[t])
            st = m.action[g.mul(s, t)]
            for i in range(n):
                diff = [comp[i][j] - st[i][j] for j in range(n)]
                if not row_span_contains(rows, diff):
                    bad.append(f"composite action fails on ({s},{t})")
                    break
    return ValidationReport(tuple(bad))


def tensor_oracle(m: GroupModule, f: dict[str, str], h: GroupTable) -> AbGroup:
    """Invariant factors of m (x)_{ZG} ZH along the group morphism f.

    Assembled directly as one integer relation matrix over the basis
    (generator of m) x (element of h): relations of m appear once per
    h-element, and for every s in G the identification m.s (x) k = m (x)
    f(s)k appears once per generator and h-element.  This deliberately
    shares no construction code with module_induce.
    """
    g = m.group
    n = m.pres.ngens
    hel = list(h.elements)
    hidx = {k: i for i, k in enumerate(hel)}
    nb = n * len(hel)
    pos = lambda i, k: i * len(hel) + hidx[k]
    rows: list[list[int]] = []
    for r in m.pres.rows:
        for k in hel:
            row = [0] * nb
            for i in range(n):
                row[pos(i, k)] += r[i]
            rows.append(row)
    for s in g.elements:
        if s == g.identity:
            continue
        mat = m.action[s]
        for i in range(n):
            for k in hel:
                row = [0] * nb
                for j in range(n):
                    row[pos(j, k)] += mat[i][j]
                row[pos(i, h.mul(f[s], k))] -= 1
                rows.append(row)
    return abelian_invariants(nb, rows)


def group_module_to_gpd(m: GroupModule, obj: str = "*") -> GpdModule:
    from .groupoid import group_as_groupoid

    base = group_as_groupoid(m.group, obj)
    return GpdModule(base, {obj: m.pres}, dict(m.action), m.name)


# -- symbolic simplification ----------------------------------------------------


def arrow_tgt(base, a):
    return base.tgt(a) if isinstance(base, FinGroupoid) else a.tgt


def arrow_src(base, a):
    return base.src(a) if isinstance(base, FinGroupoid) else a.src


def _arrow_key(a):
    return str(a)


def modulepres_tietze(mp: ModulePres, max_passes: int = 1000) -> ModulePres:
    """Eliminate generators using relations that mention them in exactly one
    term with unit coefficient.  Sound for any base with invertible arrow
    action; used to read off structural reports over infinite bases."""
    base = mp.base

    def normalize(rel):
        acc: dict[tuple, int] = {}
        for c, g, q in rel:
            acc[(g, q)] = acc.get((g, q), 0) + c
        return {k: v for k, v in acc.items() if v}

    gens = {g.gid: g for g in mp.generators}
    rels = [r for r in (normalize(r) for r in mp.relations) if r]
    for _ in range(max_passes):
        progress = False
        for ri, rel in enumerate(rels):
            pick = None
            for (g, q), c in sorted(rel.items(), key=lambda kv: (kv[0][0], _arrow_key(kv[0][1]))):
                if abs(c) == 1 and sum(1 for (g2, _) in rel if g2 == g) == 1:
                    pick = (g, q, c)
                    break
            if pick is None:
                continue
            g0, q0, c0 = pick
            q0inv = base.inv(q0)
            subst = [
                (-c0 * c, g, base.mul(q, q0inv))
                for (g, q), c in rel.items()
                if (g, q) != (g0, q0)
            ]
            new_rels = []
            for rj, other in enumerate(rels):
                if rj == ri:
                    continue
                acc: dict[tuple, int] = {}
                for (g, q), c in other.items():
                    if g == g0:
                        for c2, g2, w2 in subst:
                            key = (g2, base.mul(w2, q))
                            acc[key] = acc.get(key, 0) + c * c2
                    else:
                        acc[(g, q)] = acc.get((g, q), 0) + c
                acc = {k: v for k, v in acc.items() if v}
                if acc:
                    new_rels.append(acc)
            del gens[g0]
            rels = new_rels
            progress = True
            break
        if not progress:
            break
    new_gens = tuple(g for g in mp.generators if g.gid in gens)
    out_rels = tuple(
        tuple(
            (c, g, q)
            for (g, q), c in sorted(r.items(), key=lambda kv: (kv[0][0], _arrow_key(kv[0][1])))
        )
        for r in rels
    )
    return ModulePres(base, new_gens, out_rels, mp.name + "~")
