"""Finite groups as explicit multiplication tables.

Element names are strings; mult is the full table as a dict on pairs.
Tables at this scale (order <= 64) make exhaustive axiom checks and
morphism enumeration practical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True, eq=False)
class GroupTable:
    name: str
    elements: tuple[str, ...]
    mult: dict[tuple[str, str], str]

    def __post_init__(self):
        object.__setattr__(self, "_inv", None)
        object.__setattr__(self, "_id", None)

    @property
    def identity(self) -> str:
        if self._id is None:
            for e in self.elements:
                if all(self.mult[e, x] == x and self.mult[x, e] == x for x in self.elements):
                    object.__setattr__(self, "_id", e)
                    break
            else:
                raise ValueError(f"{self.name}: no identity element")
        return self._id

    def mul(self, a: str, b: str) -> str:
        return self.mult[a, b]

    def inv(self, a: str) -> str:
        if self._inv is None:
            e = self.identity
            inv = {}
            for x in self.elements:
                for y in self.elements:
                    if self.mult[x, y] == e:
                        inv[x] = y
                        break
            object.__setattr__(self, "_inv", inv)
        return self._inv[a]

    def conj(self, a: str, b: str) -> str:
        """b^-1 a b"""
        return self.mul(self.mul(self.inv(b), a), b)

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, a: str) -> int:
        e = self.identity
        x = a
        n = 1
        while x != e:
            x = self.mul(x, a)
            n += 1
        return n

    def is_valid(self) -> bool:
        els = self.elements
        for a, b in itertools.product(els, repeat=2):
            if (a, b) not in self.mult or self.mult[a, b] not in els:
                return False
        for a, b, c in itertools.product(els, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
        try:
            e = self.identity
        except ValueError:
            return False
        return all(any(self.mul(x, y) == e for y in els) for x in els)

    def power(self, a: str, n: int) -> str:
        if n < 0:
            return self.power(self.inv(a), -n)
        x = self.identity
        for _ in range(n):
            x = self.mul(x, a)
        return x

    def generating_set(self) -> tuple[str, ...]:
        """A small generating sequence, found greedily; deterministic."""
        e = self.identity
        gens: list[str] = []
        closed = {e}
        while len(closed) < self.order:
            best = None
            best_size = len(closed)
            for x in self.elements:
                if x in closed:
                    continue
                grown = self._close(closed | {x})
                if len(grown) > best_size:
                    best = x
                    best_size = len(grown)
                    if best_size == self.order:
                        break
            gens.append(best)
            closed = self._close(closed | {best})
        return tuple(gens)

    def _close(self, seed: set[str]) -> set[str]:
        out = set(seed)
        frontier = list(seed)
        while frontier:
            new = []
            for a in frontier:
                for b in list(out):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in out:
                            out.add(c)
                            new.append(c)
            frontier = new
        return out

    def subgroup_closure(self, seed: set[str]) -> set[str]:
        e = self.identity
        base = {e}
        base.update(seed)
        base.update(self.inv(x) for x in seed)
        return self._close(base)

    def word_for(self, target: str, gens: tuple[str, ...]) -> list[str]:
        """Express target as a product of the given generators (BFS)."""
        e = self.identity
        if target == e:
            return []
        frontier = {e: []}
        seen = {e}
        while frontier:
            nxt = {}
            for x, w in frontier.items():
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt[y] = w + [g]
                        if y == target:
                            return nxt[y]
            frontier = nxt
        raise ValueError(f"{target} not generated by {gens}")


def group_from_mult(name, elements, mul):
    els = tuple(elements)
    table = {(a, b): mul(a, b) for a in els for b in els}
    return GroupTable(name, els, table)


def cyclic(n: int, prefix: str = "c") -> GroupTable:
    els = [f"{prefix}{i}" if i else "e" for i in range(n)]
    return group_from_mult(
        f"C{n}", els, lambda a, b: els[(els.index(a) + els.index(b)) % n]
    )


def klein_four() -> GroupTable:
    els = ["e", "a", "b", "ab"]
    idx = {e: i for i, e in enumerate(els)}

    def mul(x, y):
        return els[idx[x] ^ idx[y]]

    return group_from_mult("V4", els, mul)


def symmetric3() -> GroupTable:
    perms = list(itertools.permutations((0, 1, 2)))
    names = {p: "e" if p == (0, 1, 2) else "s" + "".join(map(str, p)) for p in perms}

    def mul(a, b):
        pa = next(p for p, n in names.items() if n == a)
        pb = next(p for p, n in names.items() if n == b)
        # diagrammatic: apply pa then pb
        return names[tuple(pb[pa[i]] for i in range(3))]

    return group_from_mult("S3", [names[p] for p in perms], mul)


def quaternion8() -> GroupTable:
    # units {1,-1,i,-i,j,-j,k,-k}
    els = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def split(x):
        return (-1, x[1:]) if x.startswith("-") else (1, x)

    def mul(a, b):
        sa, ua = split(a)
        sb, ub = split(b)
        s = sa * sb
        if ua == "1":
            u = ub
        elif ub == "1":
            u = ua
        else:
            r = base[(ua, ub)]
            sr, u = split(r)
            s *= sr
        return u if s == 1 else ("-" + u if not u.startswith("-") else u[1:])

    return group_from_mult("Q8", els, mul)


def dihedral4() -> GroupTable:
    """Symmetries of the square, order 8: r rotation, f flip; f r f = r^-1."""
    els = [f"r{i}" for i in range(4)] + [f"fr{i}" for i in range(4)]

    def mul(a, b):
        fa, ia = (a.startswith("f"), int(a[-1]))
        fb, ib = (b.startswith("f"), int(b[-1]))
        # (f^e r^i)(f^e' r^j): push r^i through f^e'
        if fb:
            f = not fa
            i = (ib - ia) % 4
        else:
            f = fa
            i = (ia + ib) % 4
        return ("fr" if f else "r") + str(i)

    return group_from_mult("D4", els, mul)


def trivial_group() -> GroupTable:
    return cyclic(1)


def direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    els = [f"{a},{b}" for a in g.elements for b in h.elements]

    def mul(x, y):
        xa, xb = x.split(",")
        ya, yb = y.split(",")
        return f"{g.mul(xa, ya)},{h.mul(xb, yb)}"

    return group_from_mult(f"{g.name}x{h.name}", els, mul)


def subgroup_table(g: GroupTable, elements: set[str], name: str | None = None) -> GroupTable:
    els = tuple(sorted(elements, key=lambda e: (e != g.identity, e)))
    table = {(a, b): g.mul(a, b) for a in els for b in els}
    for v in table.values():
        if v not in elements:
            raise ValueError("subset not closed under multiplication")
    return GroupTable(name or f"{g.name}-sub{len(els)}", els, table)


def group_homs(g: GroupTable, h: GroupTable) -> list[dict[str, str]]:
    """All homomorphisms g -> h, as full element maps; deterministic order."""
    gens = g.generating_set()
    if not gens:
        return [{g.identity: h.identity}]
    words = {x: g.word_for(x, gens) for x in g.elements}
    out = []
    for images in itertools.product(h.elements, repeat=len(gens)):
        # image order must divide generator order
        if any(g.element_order(gen) % h.element_order(im)
               for gen, im in zip(gens, images)):
            continue
        gen_img = dict(zip(gens, images))
        full = {}
        ok = True
        for x, w in words.items():
            y = h.identity
            for letter in w:
                y = h.mul(y, gen_img[letter])
            full[x] = y
        for a in g.elements:
            for b in g.elements:
                if h.mul(full[a], full[b]) != full[g.mul(a, b)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(full)
    return out


def group_isos(g: GroupTable, h: GroupTable) -> list[dict[str, str]]:
    if g.order != h.order:
        return []
    if sorted(g.element_order(x) for x in g.elements) != sorted(
        h.element_order(x) for x in h.elements
    ):
        return []
    return [m for m in group_homs(g, h) if len(set(m.values())) == g.order]


def are_isomorphic(g: GroupTable, h: GroupTable) -> bool:
    if g.order != h.order:
        return False
    for m in group_homs(g, h):
        if len(set(m.values())) == g.order:
            return True
    return False


def automorphisms(g: GroupTable) -> list[dict[str, str]]:
    return group_isos(g, g)
