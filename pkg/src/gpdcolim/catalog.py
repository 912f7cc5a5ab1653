"""Catalogs of small structures used by the test batteries.

The crossed-module catalog enumerates, for pairs of groups from the
standard list, every boundary map and compatible action, reduced to one
representative per isomorphism orbit (orbits are closed under generators
of Aut(M) x Aut(P), so the reduction is a linear-time closure rather than
a pairwise search).  Generation is deterministic; a prebuilt JSON copy
under data/ is used when present.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass

from .grouptable import (
    GroupTable,
    automorphisms,
    cyclic,
    dihedral4,
    direct_product,
    group_homs,
    klein_four,
    quaternion8,
    symmetric3,
    trivial_group,
)
from .gmodule import GroupModule, Matrix
from .groupoid import (
    FinGroupoid,
    codiscrete_groupoid,
    coproduct_gpd,
    discrete_groupoid,
    group_as_groupoid,
    obj_map,
    pullback_groupoid,
)
from .intlinalg import AbPres
from .xmod import XModTable, validate_xmod, xmod_from_group_data

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def standard_groups(max_order: int = 8) -> list[GroupTable]:
    """All isomorphism types of groups of order <= 8 (14 of them)."""
    gs = [
        trivial_group(),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        klein_four(),
        cyclic(5),
        cyclic(6),
        symmetric3(),
        cyclic(7),
        cyclic(8),
        _named(direct_product(cyclic(4), cyclic(2)), "C4xC2"),
        _named(
            direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2)), "C2^3"
        ),
        dihedral4(),
        quaternion8(),
    ]
    return [g for g in gs if g.order <= max_order]


def _named(g: GroupTable, name: str) -> GroupTable:
    return GroupTable(name, g.elements, g.mult)


def group_by_name(name: str) -> GroupTable:
    for g in standard_groups():
        if g.name == name:
            return g
    raise KeyError(name)


ACCEPTANCE_GROUPS = ("C2", "C3", "C4", "V4", "S3", "Q8", "C6", "C8")


def groupoid_catalog() -> list[FinGroupoid]:
    """Small groupoids (<= 3 objects, <= 12 arrows) for exhaustive hom-set
    enumeration."""
    c2 = group_as_groupoid(cyclic(2))
    out = [
        discrete_groupoid(["x"]),
        discrete_groupoid(["x", "y"]),
        codiscrete_groupoid(["0", "1"]),
        codiscrete_groupoid(["0", "1", "2"]),
        c2,
        group_as_groupoid(cyclic(3)),
        group_as_groupoid(cyclic(4)),
        coproduct_gpd([c2, c2]),
        pullback_groupoid(obj_map(["a", "b"], ["*"], {"a": "*", "b": "*"}), c2)[0],
    ]
    return out


def cyclic_module_catalog(g: GroupTable) -> list[GroupModule]:
    """Cyclic modules over g: the trivial Z and Z/2, the regular module
    Z[g], and a sign module for each surjection onto C2."""
    n = g.order
    eye1: Matrix = ((1,),)
    mods = [
        GroupModule(g, AbPres(1, ()), {s: eye1 for s in g.elements}, "Z-trivial"),
        GroupModule(g, AbPres(1, ((2,),)), {s: eye1 for s in g.elements}, "Z/2-trivial"),
    ]
    idx = {e: i for i, e in enumerate(g.elements)}
    reg_action = {}
    for s in g.elements:
        mat = [[0] * n for _ in range(n)]
        for e in g.elements:
            mat[idx[e]][idx[g.mul(e, s)]] = 1
        reg_action[s] = tuple(tuple(r) for r in mat)
    mods.append(GroupModule(g, AbPres(n, ()), reg_action, "regular"))
    c2 = cyclic(2)
    seen_kernels = set()
    for f in group_homs(g, c2):
        if set(f.values()) != set(c2.elements):
            continue
        kernel = frozenset(e for e in g.elements if f[e] == "e")
        if kernel in seen_kernels:
            continue
        seen_kernels.add(kernel)
        act = {s: ((1,),) if f[s] == "e" else ((-1,),) for s in g.elements}
        mods.append(GroupModule(g, AbPres(1, ()), act, f"Z-sign-{len(seen_kernels)}"))
    return mods


# -- crossed module catalog --------------------------------------------------------


@dataclass(frozen=True)
class XModEntry:
    m_name: str
    p_name: str
    mu: tuple[tuple[str, str], ...]
    action: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]

    def to_table(self) -> XModTable:
        m = group_by_name(self.m_name)
        p = group_by_name(self.p_name)
        mu = dict(self.mu)
        act = {q: dict(amap) for q, amap in self.action}
        return xmod_from_group_data(m, p, mu, act, f"{self.m_name}->{self.p_name}")


def _center(g: GroupTable) -> set[str]:
    return {
        x
        for x in g.elements
        if all(g.mul(x, y) == g.mul(y, x) for y in g.elements)
    }


def _action_homs(p: GroupTable, m: GroupTable) -> list[dict[str, dict[str, str]]]:
    """All actions of p on m by automorphisms, i.e. homs p -> Aut(m),
    returned as per-element maps."""
    auts = automorphisms(m)
    # present Aut(m) as a table to reuse hom enumeration
    keys = [tuple(sorted(a.items())) for a in auts]
    index = {k: i for i, k in enumerate(keys)}
    names = [f"a{i}" for i in range(len(auts))]

    def compose(i, j):  # apply aut i then aut j
        a, b = auts[i], auts[j]
        return index[tuple(sorted((x, b[a[x]]) for x in m.elements))]

    mult = {
        (names[i], names[j]): names[compose(i, j)]
        for i in range(len(auts))
        for j in range(len(auts))
    }
    aut_table = GroupTable(f"Aut({m.name})", tuple(names), mult)
    out = []
    for h in group_homs(p, aut_table):
        out.append({q: auts[int(h[q][1:])] for q in p.elements})
    return out


def crossed_modules_on(m: GroupTable, p: GroupTable) -> list[XModEntry]:
    """Every crossed module structure (mu, action) on the pair, raw (no
    isomorphism reduction)."""
    centre = _center(m)
    out = []
    for act in _action_homs(p, m):
        for mu in group_homs(m, p):
            if any(mu[x] == p.identity and x not in centre for x in m.elements):
                continue  # kernel must be central
            # CM2: the action of mu(m) is conjugation by m
            if any(
                act[mu[a]][b] != m.conj(b, a)
                for a in m.elements
                for b in m.elements
            ):
                continue
            # CM1: mu is equivariant
            if any(
                mu[act[q][a]] != p.conj(mu[a], q)
                for q in p.elements
                for a in m.elements
            ):
                continue
            out.append(
                XModEntry(
                    m.name,
                    p.name,
                    tuple(sorted(mu.items())),
                    tuple(
                        (q, tuple(sorted(act[q].items()))) for q in p.elements
                    ),
                )
            )
    return out


def _apply_iso(entry: XModEntry, m: GroupTable, p: GroupTable, alpha, beta) -> XModEntry:
    """Transport the structure along alpha: M -> M, beta: P -> P."""
    mu = dict(entry.mu)
    act = {q: dict(a) for q, a in entry.action}
    mu2 = {alpha[x]: beta[mu[x]] for x in m.elements}
    act2 = {
        beta[q]: {alpha[x]: alpha[act[q][x]] for x in m.elements}
        for q in p.elements
    }
    return XModEntry(
        entry.m_name,
        entry.p_name,
        tuple(sorted(mu2.items())),
        tuple((q, tuple(sorted(act2[q].items()))) for q in sorted(act2)),
    )


def dedup_entries(m: GroupTable, p: GroupTable, entries: list[XModEntry]) -> list[XModEntry]:
    """One representative per Aut(M) x Aut(P) orbit.  One-sided
    automorphisms generate the product action, so orbit closure costs
    (orbit size) x (number of automorphisms) rather than a pairwise
    isomorphism search."""
    aut_m = automorphisms(m)
    aut_p = automorphisms(p)
    one_sided = [(a, _id_map(p)) for a in aut_m] + [
        (_id_map(m), b) for b in aut_p
    ]
    remaining = set(entries)
    reps = []
    while remaining:
        seed = min(remaining)
        reps.append(seed)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            nxt = []
            for e in frontier:
                for alpha, beta in one_sided:
                    e2 = _apply_iso(e, m, p, alpha, beta)
                    if e2 not in orbit:
                        orbit.add(e2)
                        nxt.append(e2)
            frontier = nxt
        remaining -= orbit
    return reps


def _id_map(g: GroupTable) -> dict[str, str]:
    return {x: x for x in g.elements}


def generate_xmod_catalog(
    group_names: tuple[str, ...] | None = None, verbose: bool = False
) -> list[XModEntry]:
    groups = standard_groups()
    if group_names is not None:
        groups = [g for g in groups if g.name in group_names]
    out = []
    for m in groups:
        for p in groups:
            raw = crossed_modules_on(m, p)
            reps = dedup_entries(m, p, raw)
            if verbose:
                print(f"{m.name} -> {p.name}: {len(raw)} raw, {len(reps)} classes")
            out.extend(reps)
    return out


DEFAULT_CATALOG_GROUPS = (
    "C1", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C7", "C8",
    "C4xC2", "C2^3", "D4", "Q8",
)

_CATALOG_CACHE: dict[tuple, list[XModEntry]] = {}


def xmod_catalog(group_names: tuple[str, ...] = DEFAULT_CATALOG_GROUPS) -> list[XModEntry]:
    """The crossed-module catalog over the named groups; loads the shipped
    data file when it covers the request, else generates and caches."""
    key = tuple(sorted(group_names))
    if key in _CATALOG_CACHE:
        return _CATALOG_CACHE[key]
    path = os.path.join(DATA_DIR, "xmod_catalog.json")
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        entries = [
            XModEntry(
                d["m"],
                d["p"],
                tuple((k, v) for k, v in d["mu"]),
                tuple((q, tuple((k, v) for k, v in amap)) for q, amap in d["action"]),
            )
            for d in data
        ]
        entries = [e for e in entries if e.m_name in group_names and e.p_name in group_names]
        have = {(e.m_name, e.p_name) for e in entries}
        if all((m, p) in have or not _pair_admits_any(m, p)
               for m in group_names for p in group_names):
            _CATALOG_CACHE[key] = entries
            return entries
    entries = generate_xmod_catalog(group_names)
    _CATALOG_CACHE[key] = entries
    return entries


def _pair_admits_any(m_name: str, p_name: str) -> bool:
    # every pair admits at least the trivial-boundary entry when the
    # kernel-central condition allows, i.e. when M is abelian; nonabelian
    # M may genuinely admit none for some P, so don't second-guess here
    return False


def save_xmod_catalog(entries: list[XModEntry], path: str) -> None:
    data = [
        {
            "m": e.m_name,
            "p": e.p_name,
            "mu": [[k, v] for k, v in e.mu],
            "action": [[q, [[k, v] for k, v in amap]] for q, amap in e.action],
        }
        for e in entries
    ]
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=0, sort_keys=True)


def catalog_tables(
    group_names: tuple[str, ...], max_fibre: int = 8, max_base: int = 8
) -> list[XModTable]:
    out = []
    for e in xmod_catalog(group_names):
        m = group_by_name(e.m_name)
        p = group_by_name(e.p_name)
        if m.order <= max_fibre and p.order <= max_base:
            out.append(e.to_table())
    return out
