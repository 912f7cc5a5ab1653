"""Coset enumeration for finitely presented groups, with an explicit budget.

Relator-based enumeration over the trivial subgroup: on success the live
cosets are exactly the group elements and the table is its regular action,
from which a full multiplication table is rebuilt.  Exceeding the coset
budget returns None, never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grouptable import GroupTable


def _inv_letter(x: int) -> int:
    return x ^ 1


class _Table:
    def __init__(self, ngens: int, max_cosets: int):
        self.width = 2 * ngens
        self.max = max_cosets
        self.table: list[list[int | None]] = [[None] * self.width]
        self.p: list[int] = [0]
        self.queue: list[int] = []
        self.defined = 1

    def alive(self, a: int) -> bool:
        return self.p[a] == a

    def rep(self, a: int) -> int:
        r = a
        while self.p[r] != r:
            r = self.p[r]
        while self.p[a] != r:
            self.p[a], a = r, self.p[a]
        return r

    def define(self, a: int, x: int) -> bool:
        if self.defined >= self.max:
            return False
        b = len(self.table)
        self.table.append([None] * self.width)
        self.p.append(b)
        self.defined += 1
        self.table[a][x] = b
        self.table[b][_inv_letter(x)] = a
        return True

    def merge(self, a: int, b: int) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        a, b = min(a, b), max(a, b)
        self.p[b] = a
        self.queue.append(b)

    def process_coincidences(self) -> None:
        # transfer the rows of dead cosets onto their representatives
        while self.queue:
            y = self.queue.pop()
            row = self.table[y]
            for x in range(self.width):
                d = row[x]
                if d is None:
                    continue
                row[x] = None
                self.table[d][_inv_letter(x)] = None
                mu, nu = self.rep(y), self.rep(d)
                ex = self.table[mu][x]
                if ex is not None:
                    self.merge(nu, ex)
                else:
                    ex2 = self.table[nu][_inv_letter(x)]
                    if ex2 is not None:
                        self.merge(mu, ex2)
                    else:
                        self.table[mu][x] = nu
                        self.table[nu][_inv_letter(x)] = mu

    def scan_and_fill(self, a: int, word: list[int]) -> bool:
        """Scan relator word at coset a, defining cosets as needed."""
        while True:
            a = self.rep(a)
            f, i = a, 0
            n = len(word)
            # forward
            while i < n:
                nxt = self.table[f][word[i]]
                if nxt is None:
                    break
                f, i = self.rep(nxt), i + 1
            if i == n:
                if f != a:
                    self.merge(f, a)
                    self.process_coincidences()
                return True
            # backward
            b, j = a, n - 1
            while j >= i:
                nxt = self.table[b][_inv_letter(word[j])]
                if nxt is None:
                    break
                b, j = self.rep(nxt), j - 1
            if j < i:
                self.merge(f, b)
                self.process_coincidences()
                return True
            if j == i:
                # deduction closes the scan
                self.table[f][word[i]] = b
                self.table[b][_inv_letter(word[i])] = f
                return True
            if not self.define(f, word[i]):
                return False
            self.process_coincidences()


def todd_coxeter(
    ngens: int, relators: list[list[int]], max_cosets: int = 10000
) -> list[list[int]] | None:
    """Enumerate the group <x_0..x_{ngens-1} | relators> over the trivial
    subgroup.  Relator letters use the 2k / 2k+1 encoding of encode_word.
    Returns the regular action table (rows = elements, columns = 2*ngens
    letters) or None if the coset budget is exhausted."""
    t = _Table(ngens, max_cosets)
    a = 0
    while a < len(t.table):
        if not t.alive(a):
            a += 1
            continue
        for rel in relators:
            if not t.scan_and_fill(a, rel):
                return None
            if not t.alive(a):
                break
        if not t.alive(a):
            a += 1
            continue
        for x in range(t.width):
            if t.table[a][x] is None:
                if not t.define(a, x):
                    return None
        a += 1
    # compress to live cosets
    live = [c for c in range(len(t.table)) if t.alive(c)]
    index = {c: i for i, c in enumerate(live)}
    out = []
    for c in live:
        out.append([index[t.rep(t.table[c][x])] for x in range(t.width)])
    return out


def encode_word(word: list[tuple[int, int]]) -> list[int]:
    """[(gen_index, +-1), ...] -> letter list (2k for gen, 2k+1 for inverse)."""
    return [2 * g + (0 if e > 0 else 1) for g, e in word]


def apply_word(table: list[list[int]], start: int, word: list[int]) -> int:
    c = start
    for x in word:
        c = table[c][x]
    return c


@dataclass
class EnumeratedGroup:
    """A finished enumeration: elements are coset indices, 0 the identity."""

    table: list[list[int]]
    words: list[list[int]]  # representative letter word per element

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return apply_word(self.table, a, self.words[b])

    def eval_word(self, word: list[int]) -> int:
        return apply_word(self.table, 0, word)

    def to_group_table(self, name: str = "enum") -> GroupTable:
        names = ["e"] + [f"g{i}" for i in range(1, self.order)]
        mult = {
            (names[a], names[b]): names[self.mul(a, b)]
            for a in range(self.order)
            for b in range(self.order)
        }
        return GroupTable(name, tuple(names), mult)


def enumerate_group(
    ngens: int, relators: list[list[int]], max_cosets: int = 10000
) -> EnumeratedGroup | None:
    table = todd_coxeter(ngens, relators, max_cosets)
    if table is None:
        return None
    # BFS words from the identity
    words: list[list[int] | None] = [None] * len(table)
    words[0] = []
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for x in range(2 * ngens):
                d = table[c][x]
                if words[d] is None:
                    words[d] = words[c] + [x]
                    nxt.append(d)
        frontier = nxt
    return EnumeratedGroup(table, [w for w in words])
