"""Exact integer linear algebra: Smith normal form, row-span membership,
and invariant factors of finitely presented abelian groups.

All matrices are lists of lists of Python ints (arbitrary precision), row
major.  A presentation (n, rows) denotes the abelian group Z^n / <rows>.
"""

from __future__ import annotations

from dataclasses import dataclass


def zeros(r: int, c: int) -> list[list[int]]:
    return [[0] * c for _ in range(r)]


def eye(n: int) -> list[list[int]]:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    rb = len(b)
    cb = len(b[0])
    out = zeros(len(a), cb)
    for i, row in enumerate(a):
        oi = out[i]
        for k in range(rb):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cb):
                    oi[j] += x * bk[j]
    return out


@dataclass
class SmithForm:
    """U @ A @ V == D with U, V unimodular; D diagonal with d_i | d_{i+1}."""

    d: list[list[int]]
    u: list[list[int]]
    v: list[list[int]]
    vinv: list[list[int]]

    @property
    def diagonal(self) -> list[int]:
        n = min(len(self.d), len(self.d[0]) if self.d else 0)
        return [self.d[i][i] for i in range(n)]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(a: list[list[int]]) -> SmithForm:
    """Diagonalise an integer matrix by unimodular row/column operations.

    Row operations accumulate in u, column operations in v (and their
    inverses in vinv), so that u @ a @ v == d at all times.
    """
    d = [list(row) for row in a]
    r = len(d)
    c = len(d[0]) if d else 0
    u = eye(r)
    v = eye(c)
    vinv = eye(c)

    def row_add(i, j, k):  # row_i += k * row_j
        di, dj = d[i], d[j]
        for t in range(c):
            di[t] += k * dj[t]
        ui, uj = u[i], u[j]
        for t in range(r):
            ui[t] += k * uj[t]

    def col_add(i, j, k):  # col_i += k * col_j ; vinv row_j -= k * row_i
        for t in range(r):
            d[t][i] += k * d[t][j]
        for t in range(c):
            v[t][i] += k * v[t][j]
        wi, wj = vinv[i], vinv[j]
        for t in range(c):
            wj[t] -= k * wi[t]

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for t in range(r):
            d[t][i], d[t][j] = d[t][j], d[t][i]
        for t in range(c):
            v[t][i], v[t][j] = v[t][j], v[t][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_neg(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    n = min(r, c)
    for k in range(n):
        # pivot: smallest nonzero |entry| in the remaining block
        piv = None
        best = None
        for i in range(k, r):
            for j in range(k, c):
                x = d[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != k:
                row_swap(k, i)
            if j != k:
                col_swap(k, j)
            if d[k][k] < 0:
                row_neg(k)
            # clear the pivot row and column
            dirty = False
            for i in range(k + 1, r):
                q = d[i][k] // d[k][k]
                if q:
                    row_add(i, k, -q)
                if d[i][k]:
                    dirty = True
            for j in range(k + 1, c):
                q = d[k][j] // d[k][k]
                if q:
                    col_add(j, k, -q)
                if d[k][j]:
                    dirty = True
            if dirty:
                piv = None
                best = None
                for i in range(k, r):
                    for j in range(k, c):
                        x = d[i][j]
                        if x != 0 and (best is None or abs(x) < best):
                            best = abs(x)
                            piv = (i, j)
                continue
            # pivot must divide every remaining entry
            offender = None
            for i in range(k + 1, r):
                for j in range(k + 1, c):
                    if d[i][j] % d[k][k]:
                        offender = (i, j)
                        break
                if offender:
                    break
            if offender is None:
                break
            row_add(k, offender[0], 1)
            piv = (k, k)
    return SmithForm(d=d, u=u, v=v, vinv=vinv)


def row_span_contains(rows: list[list[int]], vec: list[int]) -> bool:
    """Whether vec lies in the subgroup of Z^n spanned by the given rows."""
    if not rows:
        return all(x == 0 for x in vec)
    sf = smith_normal_form(rows)
    # vec in rowspan(A)  iff  vec @ V has coords divisible by the invariant
    # factors and zero past the rank.
    n = len(vec)
    y = [sum(vec[i] * sf.v[i][j] for i in range(n)) for j in range(n)]
    diag = sf.diagonal
    for j in range(n):
        dj = diag[j] if j < len(diag) else 0
        if dj == 0:
            if y[j] != 0:
                return False
        elif y[j] % dj:
            return False
    return True


@dataclass(frozen=True)
class AbGroup:
    """Invariant-factor form: torsion factors (each >1, divisibility chain)
    plus free rank."""

    torsion: tuple[int, ...]
    free_rank: int

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n


def abelian_invariants(ngens: int, rows: list[list[int]]) -> AbGroup:
    """Invariant factors of Z^ngens / <rows>."""
    if ngens == 0:
        return AbGroup((), 0)
    if not rows:
        return AbGroup((), ngens)
    for row in rows:
        if len(row) != ngens:
            raise ValueError("relation row width mismatch")
    sf = smith_normal_form(rows)
    diag = [x for x in sf.diagonal if x != 0]
    torsion = tuple(x for x in diag if x > 1)
    return AbGroup(torsion, ngens - len(diag))


@dataclass(frozen=True)
class AbPres:
    """A finitely presented abelian group: ngens generators, relation rows."""

    ngens: int
    rows: tuple[tuple[int, ...], ...]

    def invariants(self) -> AbGroup:
        return abelian_invariants(self.ngens, [list(r) for r in self.rows])

    def contains_row(self, vec: list[int]) -> bool:
        return row_span_contains([list(r) for r in self.rows], vec)


class AbElements:
    """Element arithmetic for a finite presented abelian group.

    Elements are canonical coordinate tuples in the Smith basis; raises
    ValueError if the group is infinite.
    """

    def __init__(self, pres: AbPres):
        self.pres = pres
        n = pres.ngens
        if not pres.rows:
            sf = smith_normal_form([[0] * n]) if n else None
            diag = []
            self._v = eye(n)
            self._vinv = eye(n)
        else:
            sf = smith_normal_form([list(r) for r in pres.rows])
            diag = [x for x in sf.diagonal if x != 0]
            self._v = sf.v
            self._vinv = sf.vinv
        self.moduli = diag + [0] * (n - len(diag))
        if any(m == 0 for m in self.moduli):
            raise ValueError("group is infinite; cannot enumerate elements")
        self.n = n

    def reduce(self, coords: list[int]) -> tuple[int, ...]:
        """Canonical form of a generator-coordinate vector."""
        n = self.n
        y = [sum(coords[i] * self._v[i][j] for i in range(n)) for j in range(n)]
        return tuple(y[j] % self.moduli[j] if self.moduli[j] else y[j] for j in range(n))

    def to_gen_coords(self, elem: tuple[int, ...]) -> list[int]:
        """A generator-coordinate representative of a canonical element."""
        n = self.n
        return [sum(elem[i] * self._vinv[i][j] for i in range(n)) for j in range(n)]

    def elements(self) -> list[tuple[int, ...]]:
        out = [()]
        for m in self.moduli:
            out = [e + (k,) for e in out for k in range(m if m else 1)]
        return [tuple(e) for e in out]

    def add(self, a, b):
        return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % m if m else -x for x, m in zip(a, self.moduli))

    @property
    def zero(self):
        return tuple(0 for _ in range(self.n))

    def order(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n


def abelian_tensor(a: AbPres, b: AbPres) -> AbGroup:
    """Invariant factors of the tensor product over Z of two presented
    abelian groups (generators e_i (x) f_j; relations from both sides)."""
    na, nb = a.ngens, b.ngens
    rows: list[list[int]] = []
    for ra in a.rows:
        for j in range(nb):
            row = [0] * (na * nb)
            for i in range(na):
                row[i * nb + j] = ra[i]
            rows.append(row)
    for rb in b.rows:
        for i in range(na):
            row = [0] * (na * nb)
            for j in range(nb):
                row[i * nb + j] = rb[j]
            rows.append(row)
    return abelian_invariants(na * nb, rows)
