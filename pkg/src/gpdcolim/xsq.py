"""Crossed squares at desk scale: commuting square of groups L -> M, N -> P
with P-actions and a pairing h: M x N -> L.

The axiom list checked here is deliberately partial and frozen (see
validate_xsq_partial): the square commutes; the four structure maps are
P-equivariant; mu, nu, lambda, lambda', mu lambda are crossed modules; and
h satisfies exactly the pairing identities that the fibre-product
completion fulfils:

    h(m m', n)  = h(m, n) . m>h(m', n)
    h(m, n n')  = n>h(m, n') . h(m, n)
    h(m, n)^p   = h(m^p, n^p)
    lambda  h(m, n) = n>m . m^-1
    lambda' h(m, n) = n . m>n^-1

with g>x shorthand for the right action by the inverse image, i.e.
n>m = m^(nu(n)^-1) and m>n = n^(mu(m)^-1).  All actions are right actions,
matching the crossed-module conventions of the rest of the package.

The completion of a pair (mu, nu) takes L = M x_P N with h(m, n) =
(n>m m^-1, n m>n^-1); the universal presentation on the same pair has one
generator m(x)n per pair and the two pairing identities as its relator
schema, with boundary words matching the completion formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import coset
from .grouptable import GroupTable
from .groupoid import ValidationReport
from .intlinalg import AbGroup, AbPres, abelian_tensor
from .presented import DEFAULT_BOUND, RewriteBound
from .xmod import XModTable, validate_xmod, xmod_from_group_data


@dataclass(frozen=True, eq=False)
class CrossedSquare:
    l: GroupTable
    m: GroupTable
    n: GroupTable
    p: GroupTable
    lam: dict[str, str]  # L -> M
    lam2: dict[str, str]  # L -> N
    mu: dict[str, str]  # M -> P
    nu: dict[str, str]  # N -> P
    act_l: dict[str, dict[str, str]]  # P-action on L
    act_m: dict[str, dict[str, str]]  # P-action on M
    act_n: dict[str, dict[str, str]]  # P-action on N
    h: dict[tuple[str, str], str]  # M x N -> L
    name: str = ""

    def m_on_n(self, n_el: str, m_el: str) -> str:
        """m>n = n^(mu(m)^-1)."""
        return self.act_n[self.p.inv(self.mu[m_el])][n_el]

    def n_on_m(self, m_el: str, n_el: str) -> str:
        """n>m = m^(nu(n)^-1)."""
        return self.act_m[self.p.inv(self.nu[n_el])][m_el]


def _is_hom(dom: GroupTable, cod: GroupTable, f: dict[str, str]) -> bool:
    return all(
        f[dom.mul(a, b)] == cod.mul(f[a], f[b])
        for a in dom.elements
        for b in dom.elements
    )


def _action_ok(p: GroupTable, g: GroupTable, act: dict[str, dict[str, str]]) -> bool:
    if set(act) != set(p.elements):
        return False
    for s in p.elements:
        amap = act[s]
        if set(amap) != set(g.elements):
            return False
        for a in g.elements:
            for b in g.elements:
                if amap[g.mul(a, b)] != g.mul(amap[a], amap[b]):
                    return False
    for a in g.elements:
        if act[p.identity][a] != a:
            return False
    for s in p.elements:
        for t in p.elements:
            st = p.mul(s, t)
            for a in g.elements:
                if act[t][act[s][a]] != act[st][a]:
                    return False
    return True


def validate_xsq_partial(s: CrossedSquare) -> ValidationReport:
    """The frozen, documented subset of the crossed-square axioms."""
    bad = []
    for f, dom, cod, nm in (
        (s.lam, s.l, s.m, "lambda"),
        (s.lam2, s.l, s.n, "lambda'"),
        (s.mu, s.m, s.p, "mu"),
        (s.nu, s.n, s.p, "nu"),
    ):
        if set(f) != set(dom.elements) or not _is_hom(dom, cod, f):
            bad.append(f"{nm} is not a homomorphism")
    for act, g, nm in ((s.act_l, s.l, "L"), (s.act_m, s.m, "M"), (s.act_n, s.n, "N")):
        if not _action_ok(s.p, g, act):
            bad.append(f"P-action on {nm} is not an action")
    if bad:
        return ValidationReport(tuple(bad))
    # square commutes
    for x in s.l.elements:
        if s.mu[s.lam[x]] != s.nu[s.lam2[x]]:
            bad.append(f"square does not commute at {x}")
    # equivariance of the four maps (P acts on itself by conjugation)
    for q in s.p.elements:
        for x in s.l.elements:
            if s.lam[s.act_l[q][x]] != s.act_m[q][s.lam[x]]:
                bad.append(f"lambda not equivariant at ({x},{q})")
            if s.lam2[s.act_l[q][x]] != s.act_n[q][s.lam2[x]]:
                bad.append(f"lambda' not equivariant at ({x},{q})")
        for m_el in s.m.elements:
            if s.mu[s.act_m[q][m_el]] != s.p.conj(s.mu[m_el], q):
                bad.append(f"mu not equivariant at ({m_el},{q})")
        for n_el in s.n.elements:
            if s.nu[s.act_n[q][n_el]] != s.p.conj(s.nu[n_el], q):
                bad.append(f"nu not equivariant at ({n_el},{q})")
    if bad:
        return ValidationReport(tuple(bad))
    # five crossed modules
    for name, table in (
        ("mu", _as_xmod(s.m, s.p, s.mu, s.act_m)),
        ("nu", _as_xmod(s.n, s.p, s.nu, s.act_n)),
        ("mu.lambda", _as_xmod(s.l, s.p, {x: s.mu[s.lam[x]] for x in s.l.elements}, s.act_l)),
        ("lambda", _lambda_xmod(s)),
        ("lambda'", _lambda2_xmod(s)),
    ):
        rep = validate_xmod(table)
        if not rep.ok:
            bad.append(f"{name} is not a crossed module ({rep.violations[0]})")
    if bad:
        return ValidationReport(tuple(bad))
    # pairing identities
    for m_el in s.m.elements:
        for n_el in s.n.elements:
            hx = s.h.get((m_el, n_el))
            if hx is None:
                bad.append(f"h undefined at ({m_el},{n_el})")
                continue
            lam_expect = s.m.mul(s.n_on_m(m_el, n_el), s.m.inv(m_el))
            lam2_expect = s.n.mul(n_el, s.n.inv(s.m_on_n(n_el, m_el)))
            if s.lam[hx] != lam_expect:
                bad.append(f"lambda h wrong at ({m_el},{n_el})")
            if s.lam2[hx] != lam2_expect:
                bad.append(f"lambda' h wrong at ({m_el},{n_el})")
    if bad:
        return ValidationReport(tuple(bad))
    for m1 in s.m.elements:
        for m2 in s.m.elements:
            for n_el in s.n.elements:
                lhs = s.h[(s.m.mul(m1, m2), n_el)]
                pm = s.p.inv(s.mu[m1])
                rhs = s.l.mul(
                    s.h[(m1, n_el)],
                    s.act_l[pm][s.h[(m2, n_el)]],
                )
                if lhs != rhs:
                    bad.append(f"h(mm',n) identity fails at ({m1},{m2},{n_el})")
    for m_el in s.m.elements:
        for n1 in s.n.elements:
            for n2 in s.n.elements:
                lhs = s.h[(m_el, s.n.mul(n1, n2))]
                pn = s.p.inv(s.nu[n1])
                rhs = s.l.mul(
                    s.act_l[pn][s.h[(m_el, n2)]],
                    s.h[(m_el, n1)],
                )
                if lhs != rhs:
                    bad.append(f"h(m,nn') identity fails at ({m_el},{n1},{n2})")
    for q in s.p.elements:
        for m_el in s.m.elements:
            for n_el in s.n.elements:
                if s.act_l[q][s.h[(m_el, n_el)]] != s.h[
                    (s.act_m[q][m_el], s.act_n[q][n_el])
                ]:
                    bad.append(f"h not equivariant at ({m_el},{n_el},{q})")
    return ValidationReport(tuple(bad))


def _as_xmod(m: GroupTable, p: GroupTable, mu: dict, act) -> XModTable:
    return xmod_from_group_data(
        m, p, mu, {q: dict(act[q]) for q in p.elements}
    )


def _lambda_xmod(s: CrossedSquare) -> XModTable:
    """lambda: L -> M as a crossed module, M acting on L through mu."""
    act = {m_el: {x: s.act_l[s.mu[m_el]][x] for x in s.l.elements} for m_el in s.m.elements}
    return xmod_from_group_data(s.l, s.m, dict(s.lam), act)


def _lambda2_xmod(s: CrossedSquare) -> XModTable:
    act = {n_el: {x: s.act_l[s.nu[n_el]][x] for x in s.l.elements} for n_el in s.n.elements}
    return xmod_from_group_data(s.l, s.n, dict(s.lam2), act)


# -- completion of a pair of crossed modules ----------------------------------------


def _one_object_data(x: XModTable) -> tuple[GroupTable, GroupTable, dict, dict]:
    if len(x.base.objects) != 1:
        raise ValueError("one-object base required")
    ob = x.base.objects[0]
    m = x.fibres[ob]
    from .groupoid import vertex_group

    p = vertex_group(x.base, ob)
    mu = dict(x.mu[ob])
    act = {q: dict(x.action[q]) for q in p.elements}
    return m, p, mu, act


def d_completion(mu_xm: XModTable, nu_xm: XModTable) -> CrossedSquare:
    """Complete a pair of crossed modules over one group to a crossed
    square: L is the fibre product over P, the legs are the projections,
    and h(m,n) = (n>m m^-1, n m>n^-1)."""
    if not validate_xmod(mu_xm).ok or not validate_xmod(nu_xm).ok:
        raise ValueError("inputs must be valid crossed modules")
    m, p, mu, act_m = _one_object_data(mu_xm)
    n, p2, nu, act_n = _one_object_data(nu_xm)
    if p.elements != p2.elements or any(
        p.mul(a, b) != p2.mul(a, b) for a in p.elements for b in p.elements
    ):
        raise ValueError("crossed modules must share one base group")
    pair = lambda a, b: f"({a},{b})"
    members = [
        (a, b) for a in m.elements for b in n.elements if mu[a] == nu[b]
    ]
    els = tuple(sorted(pair(a, b) for a, b in members))
    mult = {}
    for (a1, b1) in members:
        for (a2, b2) in members:
            mult[pair(a1, b1), pair(a2, b2)] = pair(m.mul(a1, a2), n.mul(b1, b2))
    l = GroupTable("MxPN", els, mult)
    lam = {pair(a, b): a for a, b in members}
    lam2 = {pair(a, b): b for a, b in members}
    act_l = {
        q: {pair(a, b): pair(act_m[q][a], act_n[q][b]) for a, b in members}
        for q in p.elements
    }
    h = {}
    for a in m.elements:
        for b in n.elements:
            na = act_m[p.inv(nu[b])][a]  # n>m
            mb = act_n[p.inv(mu[a])][b]  # m>n
            h[(a, b)] = pair(m.mul(na, m.inv(a)), n.mul(b, n.inv(mb)))
    sq = CrossedSquare(l, m, n, p, lam, lam2, mu, nu, act_l, act_m, act_n, h, "D")
    rep = validate_xsq_partial(sq)
    if not rep.ok:
        raise AssertionError(f"completion failed its own checks: {rep}")
    return sq


# -- the universal presentation (tensor of the pair) ---------------------------------


@dataclass(frozen=True, eq=False)
class TensorPresentation:
    m: GroupTable
    n: GroupTable
    gens: tuple[tuple[str, str], ...]  # (m, n) pairs
    relators: tuple[tuple[tuple[tuple[str, str], int], ...], ...]
    boundary_m: dict[tuple[str, str], str]
    boundary_n: dict[tuple[str, str], str]

    def structural_report(self) -> dict:
        return {"generators": len(self.gens), "relators": len(self.relators)}

    def abelianized(self) -> AbGroup:
        idx = {g: i for i, g in enumerate(self.gens)}
        rows = []
        for w in self.relators:
            row = [0] * len(self.gens)
            for g, e in w:
                row[idx[g]] += e
            rows.append(row)
        from .intlinalg import abelian_invariants

        return abelian_invariants(len(self.gens), rows)


def universal_xsq_presentation(
    mu_xm: XModTable, nu_xm: XModTable
) -> TensorPresentation:
    """Presentation of the tensor corner of the universal crossed square on
    a pair of crossed modules over one group: generators m(x)n, relators

        (mm')(x)n = (m(x)n) . (m'^(mu m)^-1 (x) n^(mu m)^-1)
        m(x)(nn') = (m^(nu n)^-1 (x) n'^(nu n)^-1) . (m(x)n)

    and boundary words delta_M(m(x)n) = n>m m^-1, delta_N(m(x)n) =
    n m>n^-1, matching the completion pairing."""
    m, p, mu, act_m = _one_object_data(mu_xm)
    n, p2, nu, act_n = _one_object_data(nu_xm)
    if p.elements != p2.elements:
        raise ValueError("crossed modules must share one base group")
    gens = tuple((a, b) for a in m.elements for b in n.elements)
    relators = []
    for m1 in m.elements:
        for m2 in m.elements:
            pm = p.inv(mu[m1])
            for b in n.elements:
                lhs = (m.mul(m1, m2), b)
                r1 = (m1, b)
                r2 = (act_m[pm][m2], act_n[pm][b])
                relators.append(((lhs, -1), (r1, 1), (r2, 1)))
    for a in m.elements:
        for n1 in n.elements:
            pn = p.inv(nu[n1])
            for n2 in n.elements:
                lhs = (a, n.mul(n1, n2))
                r1 = (act_m[pn][a], act_n[pn][n2])
                r2 = (a, n1)
                relators.append(((lhs, -1), (r1, 1), (r2, 1)))
    boundary_m = {}
    boundary_n = {}
    for a in m.elements:
        for b in n.elements:
            na = act_m[p.inv(nu[b])][a]
            mb = act_n[p.inv(mu[a])][b]
            boundary_m[(a, b)] = m.mul(na, m.inv(a))
            boundary_n[(a, b)] = n.mul(b, n.inv(mb))
    return TensorPresentation(m, n, gens, tuple(relators), boundary_m, boundary_n)


def tensor_bounded(
    pres: TensorPresentation, bound: RewriteBound = DEFAULT_BOUND
) -> GroupTable | None:
    """Finite realization of the tensor presentation within the coset
    budget, validated against every relator; None when the budget runs
    out."""
    idx = {g: i for i, g in enumerate(pres.gens)}
    rels = [
        coset.encode_word([(idx[g], e) for g, e in w]) for w in pres.relators
    ]
    enum = coset.enumerate_group(len(pres.gens), rels, bound.max_enumeration_count)
    if enum is None:
        return None
    for w in pres.relators:
        letters = [2 * idx[g] + (0 if e > 0 else 1) for g, e in w]
        if coset.apply_word(enum.table, 0, letters) != 0:
            return None
    return enum.to_group_table("tensor")


def trivial_action_tensor_oracle(m: GroupTable, n: GroupTable) -> AbGroup:
    """Independent check for trivially acting pairs: the tensor then only
    depends on the abelianizations, and equals their tensor over Z."""
    return abelian_tensor(_abelianization_pres(m), _abelianization_pres(n))


def _abelianization_pres(g: GroupTable) -> AbPres:
    els = [e for e in g.elements if e != g.identity]
    idx = {e: i for i, e in enumerate(els)}
    rows = []
    for a in g.elements:
        for b in g.elements:
            row = [0] * len(els)
            if a != g.identity:
                row[idx[a]] += 1
            if b != g.identity:
                row[idx[b]] += 1
            c = g.mul(a, b)
            if c != g.identity:
                row[idx[c]] -= 1
            if any(row):
                rows.append(row)
    from .intlinalg import abelian_invariants

    return _invariants_to_pres(abelian_invariants(len(els), rows))


def _invariants_to_pres(inv: AbGroup) -> AbPres:
    n = len(inv.torsion) + inv.free_rank
    rows = []
    for i, t in enumerate(inv.torsion):
        row = [0] * n
        row[i] = t
        rows.append(row)
    return AbPres(n, tuple(tuple(r) for r in rows))


# -- adjoint-shape battery ------------------------------------------------------------


def square_morphisms_to_completion(
    s: CrossedSquare, target: CrossedSquare
) -> tuple[int, int]:
    """Counts (square morphisms s -> target, pairs of crossed-module
    morphisms (top, side) sharing the base map).  For target a completion
    these must agree: the L-component of a square morphism into a fibre
    product is forced."""
    from .grouptable import group_homs

    pair_count = 0
    square_count = 0
    for fp in group_homs(s.p, target.p):
        for fm in group_homs(s.m, target.m):
            if not all(
                target.mu[fm[a]] == fp[s.mu[a]] for a in s.m.elements
            ):
                continue
            if not all(
                fm[s.act_m[q][a]] == target.act_m[fp[q]][fm[a]]
                for q in s.p.elements
                for a in s.m.elements
            ):
                continue
            for fn in group_homs(s.n, target.n):
                if not all(
                    target.nu[fn[b]] == fp[s.nu[b]] for b in s.n.elements
                ):
                    continue
                if not all(
                    fn[s.act_n[q][b]] == target.act_n[fp[q]][fn[b]]
                    for q in s.p.elements
                    for b in s.n.elements
                ):
                    continue
                pair_count += 1
                # forced L-component
                fl = {
                    x: f"({fm[s.lam[x]]},{fn[s.lam2[x]]})" for x in s.l.elements
                }
                if not all(v in target.l.elements for v in fl.values()):
                    continue
                ok = all(
                    fl[s.l.mul(x, y)] == target.l.mul(fl[x], fl[y])
                    for x in s.l.elements
                    for y in s.l.elements
                )
                ok = ok and all(
                    fl[s.act_l[q][x]] == target.act_l[fp[q]][fl[x]]
                    for q in s.p.elements
                    for x in s.l.elements
                )
                ok = ok and all(
                    fl[s.h[(a, b)]] == target.h[(fm[a], fn[b])]
                    for a in s.m.elements
                    for b in s.n.elements
                )
                if ok:
                    square_count += 1
    return square_count, pair_count
