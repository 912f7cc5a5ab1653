"""Universal morphisms along object maps, via reduced-word normal forms.

For a groupoid G over I and an object map u: I -> J, the induced groupoid
over J has as arrows j -> j' the reduced words (g_1, ..., g_n) of
non-identity arrows of G whose endpoints match up under u and where no two
consecutive letters are composable in G.  Composition concatenates and
cascades: composable boundary letters are multiplied in G and identities
are deleted.  The empty word at j is the identity.  This is the classical
normal form generalising free products of groups; the canonical morphism
g |-> (g) is injective on non-identity arrows by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groupoid import FinGroupoid, GpdMorphism, ObjMap


@dataclass(frozen=True)
class GpdWord:
    src: str
    tgt: str
    letters: tuple[str, ...]

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)


class WordGroupoid:
    """The groupoid over u.codomain induced from base along u.

    Arrows are never materialised; they are enumerated on demand with an
    explicit cap.  Equality of arrows is equality of normal forms.
    """

    def __init__(self, base: FinGroupoid, u: ObjMap):
        if set(base.objects) != set(u.domain):
            raise ValueError("object map domain must be the base objects")
        self.base = base
        self.u = u
        self.objects = tuple(sorted(set(u.codomain)))

    # -- word formation ------------------------------------------------------

    def id_at(self, j: str) -> GpdWord:
        return GpdWord(j, j, ())

    def word_of_arrow(self, a: str) -> GpdWord:
        g, u = self.base, self.u
        if g.is_identity(a):
            return self.id_at(u(g.src(a)))
        return GpdWord(u(g.src(a)), u(g.tgt(a)), (a,))

    def check_word(self, w: GpdWord) -> None:
        g, u = self.base, self.u
        if not w.letters:
            if w.src != w.tgt:
                raise ValueError("empty word with distinct endpoints")
            return
        if u(g.src(w.letters[0])) != w.src or u(g.tgt(w.letters[-1])) != w.tgt:
            raise ValueError("word endpoints disagree with letters")
        for a in w.letters:
            if g.is_identity(a):
                raise ValueError(f"identity letter {a} in word")
        for a, b in zip(w.letters, w.letters[1:]):
            if u(g.tgt(a)) != u(g.src(b)):
                raise ValueError(f"adjacency fails between {a} and {b}")
            if g.tgt(a) == g.src(b):
                raise ValueError(f"word not reduced at ({a},{b})")

    def _append(self, out: list[str], letter: str) -> None:
        g = self.base
        if out and g.tgt(out[-1]) == g.src(letter):
            c = g.mul(out.pop(), letter)
            if not g.is_identity(c):
                out.append(c)
        else:
            out.append(letter)

    def mul(self, w1: GpdWord, w2: GpdWord) -> GpdWord:
        if w1.tgt != w2.src:
            raise ValueError(f"words not composable: {w1.tgt} != {w2.src}")
        out = list(w1.letters)
        for letter in w2.letters:
            self._append(out, letter)
        return GpdWord(w1.src, w2.tgt, tuple(out))

    def mul_many(self, words: list[GpdWord]) -> GpdWord:
        if not words:
            raise ValueError("empty product")
        acc = words[0]
        for w in words[1:]:
            acc = self.mul(acc, w)
        return acc

    def inv(self, w: GpdWord) -> GpdWord:
        g = self.base
        return GpdWord(w.tgt, w.src, tuple(g.inv(a) for a in reversed(w.letters)))

    def power(self, w: GpdWord, n: int) -> GpdWord:
        if n < 0:
            return self.power(self.inv(w), -n)
        acc = self.id_at(w.src)
        for _ in range(n):
            acc = self.mul(acc, w)
        return acc

    # -- enumeration ---------------------------------------------------------

    def arrows_up_to(self, max_len: int, cap: int = 100000) -> list[GpdWord]:
        """All reduced words of length <= max_len, by increasing length."""
        g, u = self.base, self.u
        letters = [a for a in g.non_identity_arrows()]
        out: list[GpdWord] = [self.id_at(j) for j in self.objects]
        layer = out[:]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for a in sorted(letters):
                    if u(g.src(a)) != w.tgt:
                        continue
                    if w.letters and g.tgt(w.letters[-1]) == g.src(a):
                        continue  # would reduce
                    nxt.append(GpdWord(w.src, u(g.tgt(a)), w.letters + (a,)))
                    if len(out) + len(nxt) > cap:
                        raise ValueError("enumeration cap exceeded")
            out.extend(nxt)
            layer = nxt
            if not layer:
                break
        return out

    def vertex_words(self, j: str, max_len: int) -> list[GpdWord]:
        return [w for w in self.arrows_up_to(max_len) if w.src == j and w.tgt == j]


def universal_morphism(u: ObjMap, g: FinGroupoid) -> tuple[WordGroupoid, GpdMorphism]:
    """The cocartesian lifting of u applied to g: the word groupoid together
    with the unit sending each arrow to its one-letter word (empty for
    identities)."""
    wg = WordGroupoid(g, u)
    unit = GpdMorphism(
        source=g,
        target=wg,
        object_map={x: u(x) for x in g.objects},
        arrow_map={a.id: wg.word_of_arrow(a.id) for a in g.arrows},
    )
    return wg, unit


def unit_is_injective_on_nonidentities(wg: WordGroupoid, unit: GpdMorphism) -> bool:
    seen = {}
    for a in unit.source.non_identity_arrows():
        w = unit.arrow_map[a]
        if w in seen:
            return False
        seen[w] = a
    return True


def unit_preserves_composition(wg: WordGroupoid, unit: GpdMorphism) -> bool:
    g = unit.source
    for (a, b), c in g.compose.items():
        if wg.mul(unit.arrow_map[a], unit.arrow_map[b]) != unit.arrow_map[c]:
            return False
    return True
