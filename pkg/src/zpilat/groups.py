"""Finite groups as validated multiplication tables with fixed enumerations.

Every group here is a table on indices ``0..order-1`` with index 0 the
identity.  Builders fix the enumeration (dihedral/quaternion normal forms,
product index ``g + |G|*h``) so that every matrix derived downstream is
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Words in the generators: sequences of (generator position, +1/-1).
Word = tuple[tuple[int, int], ...]

DEFAULT_ORDER_CAP = 128


class GroupError(ValueError):
    """Invalid group data or parameters."""


def _validate_table(name: str, table: list[list[int]]) -> list[int]:
    """Exhaustively check the group axioms; return the inverse map."""
    n = len(table)
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
        raise GroupError(f"{name}: table is not a {n}x{n} array of indices")
    rng = np.arange(n)
    if not (np.array_equal(t[0], rng) and np.array_equal(t[:, 0], rng)):
        raise GroupError(f"{name}: index 0 is not a two-sided identity")
    # t[t[a,b],c] == t[a,t[b,c]] for all triples, via fancy indexing.
    if not np.array_equal(t[t, :][rng[:, None, None], rng[None, :, None], rng[None, None, :]],
                          t[rng[:, None, None], t[None, :, :]]):
        raise GroupError(f"{name}: multiplication is not associative")
    inv = [-1] * n
    for a in range(n):
        hits = np.nonzero(t[a] == 0)[0]
        if len(hits) != 1 or t[hits[0], a] != 0:
            raise GroupError(f"{name}: element {a} has no two-sided inverse")
        inv[a] = int(hits[0])
    return inv


class Group:
    """An enumerated finite group with distinguished, named generators.

    Immutable after construction; safe to share between computations.
    """

    def __init__(
        self,
        name: str,
        table: list[list[int]],
        generators: list[tuple[str, int]],
        relators: list[Word],
        element_names: list[str] | None = None,
        order_cap: int = DEFAULT_ORDER_CAP,
    ):
        self.name = name
        self.order = len(table)
        if self.order == 0:
            raise GroupError("empty multiplication table")
        if self.order > order_cap:
            raise GroupError(f"group order {self.order} exceeds cap {order_cap}")
        self.table = [list(map(int, row)) for row in table]
        self.inv = _validate_table(name, self.table)
        self.generators = list(generators)
        self.gen_names = [nm for nm, _ in generators]
        self.gen_indices = [ix for _, ix in generators]
        if len(set(self.gen_names)) != len(self.gen_names):
            raise GroupError(f"{name}: duplicate generator names")
        self.relators = [tuple(r) for r in relators]
        self._words = self._closure_words()
        if len(self._words) != self.order:
            raise GroupError(f"{name}: generators do not generate the group")
        for r in self.relators:
            if self.evaluate_word(r) != 0:
                raise GroupError(f"{name}: relator {r} does not evaluate to 1")
        self.element_names = element_names or self._default_names()
        if len(self.element_names) != self.order:
            raise GroupError(f"{name}: wrong number of element names")

    # -- basic operations ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def element_order(self, a: int) -> int:
        k, g = 1, a
        while g != 0:
            g = self.table[g][a]
            k += 1
        return k

    def involutions(self) -> list[int]:
        """All g != 1 with g^2 = 1, in enumeration order."""
        return [g for g in range(1, self.order) if self.table[g][g] == 0]

    def evaluate_word(self, word: Word) -> int:
        g = 0
        for pos, sign in word:
            h = self.gen_indices[pos]
            g = self.table[g][h if sign > 0 else self.inv[h]]
        return g

    def _closure_words(self) -> dict[int, Word]:
        """BFS factorization of every element as a positive generator word."""
        words: dict[int, Word] = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for g in frontier:
                for pos, h in enumerate(self.gen_indices):
                    gh = self.table[g][h]
                    if gh not in words:
                        words[gh] = words[g] + ((pos, 1),)
                        nxt.append(gh)
            frontier = nxt
        return words

    def element_word(self, g: int) -> Word:
        """A shortest positive generator word multiplying out to ``g``."""
        return self._words[g]

    def _default_names(self) -> list[str]:
        names = []
        for g in range(self.order):
            word = self._words[g]
            if not word:
                names.append("1")
                continue
            parts: list[tuple[str, int]] = []
            for pos, _ in word:
                nm = self.gen_names[pos]
                if parts and parts[-1][0] == nm:
                    parts[-1] = (nm, parts[-1][1] + 1)
                else:
                    parts.append((nm, 1))
            names.append("*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in parts))
        return names

    def generator_position(self, name: str) -> int:
        try:
            return self.gen_names.index(name)
        except ValueError:
            raise GroupError(f"{self.name}: unknown generator {name!r}") from None

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"

    def __eq__(self, other):
        return (
            isinstance(other, Group)
            and self.table == other.table
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.name, self.order, tuple(self.gen_indices)))


def from_table(
    name: str,
    table: list[list[int]],
    generators: list[tuple[str, int]],
    relators: list[Word],
    element_names: list[str] | None = None,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> Group:
    """Generic table constructor; the table is fully validated."""
    return Group(name, table, generators, relators, element_names, order_cap)


def build_dihedral(n: int) -> Group:
    """Dihedral group of order 2n, elements x^i y^j at index i + n*j.

    Generators x (index 1) and y (index n) with y x y^-1 = x^-1.
    """
    if n < 2:
        raise GroupError(f"dihedral parameter n={n} must be >= 2")
    order = 2 * n

    def idx(i, j):
        return i % n + n * (j % 2)

    table = [[0] * order for _ in range(order)]
    for i in range(n):
        for j in range(2):
            for k in range(n):
                for l in range(2):
                    # (x^i y^j)(x^k y^l) = x^(i + (-1)^j k) y^(j+l)
                    table[idx(i, j)][idx(k, l)] = idx(i + (k if j == 0 else -k), j + l)
    names = [f"x^{i}" if i > 1 else ("1" if i == 0 else "x") for i in range(n)]
    names += [(f"x^{i}*y" if i > 1 else ("y" if i == 0 else "x*y")) for i in range(n)]
    relators = [
        tuple([(0, 1)] * n + [(1, -1)] * 2),        # x^n y^-2
        ((0, 1), (1, 1), (0, 1), (1, -1)),          # x y x y^-1
        ((1, 1), (1, 1)),                           # y^2
    ]
    return Group(f"D{order}", table, [("x", 1), ("y", n)], relators, names)


def build_quaternion(n: int) -> Group:
    """Generalized quaternion group of order 4n: x of order 2n, y^2 = x^n."""
    if n < 2:
        raise GroupError(f"quaternion parameter n={n} must be >= 2")
    m = 2 * n
    order = 4 * n

    def idx(i, j):
        return i % m + m * (j % 2)

    table = [[0] * order for _ in range(order)]
    for i in range(m):
        for j in range(2):
            for k in range(m):
                for l in range(2):
                    e = i + (k if j == 0 else -k)
                    if j == 1 and l == 1:
                        e += n  # y^2 = x^n
                    table[idx(i, j)][idx(k, l)] = idx(e, j + l)
    names = [f"x^{i}" if i > 1 else ("1" if i == 0 else "x") for i in range(m)]
    names += [(f"x^{i}*y" if i > 1 else ("y" if i == 0 else "x*y")) for i in range(m)]
    relators = [
        tuple([(0, 1)] * n + [(1, -1)] * 2),        # x^n y^-2
        ((0, 1), (1, 1), (0, 1), (1, -1)),          # x y x y^-1
    ]
    return Group(f"Q{order}", table, [("x", 1), ("y", m)], relators, names)


def build_cyclic(m: int, gen_name: str = "t") -> Group:
    """Cyclic group of order m with generator ``gen_name`` at index 1."""
    if m < 1:
        raise GroupError(f"cyclic parameter m={m} must be >= 1")
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    names = ["1"] + [gen_name if i == 1 else f"{gen_name}^{i}" for i in range(1, m)]
    gens = [(gen_name, 1 % m)]
    relators: list[Word] = [tuple([(0, 1)] * m)]
    return Group(f"Z{m}", table, gens, relators, names)


def trivial_group() -> Group:
    return Group("Z1", [[0]], [], [], ["1"])


def direct_product(g: Group, h: Group) -> Group:
    """Product with index (a, b) -> a + |G|*b; generators of G then of H."""
    if set(g.gen_names) & set(h.gen_names):
        raise GroupError(
            f"generator name clash between {g.name} and {h.name}; rename one factor"
        )
    ng, nh = g.order, h.order
    order = ng * nh
    table = [[0] * order for _ in range(order)]
    for a in range(ng):
        for b in range(nh):
            for c in range(ng):
                for d in range(nh):
                    table[a + ng * b][c + ng * d] = g.table[a][c] + ng * h.table[b][d]
    gens = [(nm, ix) for nm, ix in g.generators] + [(nm, ng * ix) for nm, ix in h.generators]
    k = len(g.generators)
    relators: list[Word] = [tuple(r) for r in g.relators]
    relators += [tuple((pos + k, s) for pos, s in r) for r in h.relators]
    for i in range(len(g.generators)):
        for j in range(len(h.generators)):
            relators.append(((i, 1), (j + k, 1), (i, -1), (j + k, -1)))
    names = []
    for b in range(nh):
        for a in range(ng):
            if a == 0 and b == 0:
                names.append("1")
            elif b == 0:
                names.append(g.element_names[a])
            elif a == 0:
                names.append(h.element_names[b])
            else:
                names.append(f"{g.element_names[a]}*{h.element_names[b]}")
    return Group(f"{g.name}x{h.name}", table, gens, relators, names)


@dataclass(frozen=True)
class SubgroupEmbedding:
    """An injective homomorphism ``subgroup -> ambient`` given on indices."""

    subgroup: Group
    ambient: Group
    image: tuple[int, ...]

    def __post_init__(self):
        sub, amb, img = self.subgroup, self.ambient, self.image
        if len(img) != sub.order:
            raise GroupError("embedding image has wrong length")
        if img[0] != 0:
            raise GroupError("embedding must send identity to identity")
        if len(set(img)) != sub.order:
            raise GroupError("embedding is not injective")
        for a in range(sub.order):
            for b in range(sub.order):
                if img[sub.table[a][b]] != amb.table[img[a]][img[b]]:
                    raise GroupError("embedding does not respect multiplication")


def subgroup_embedding(subgroup: Group, ambient: Group, gen_images: list[int]) -> SubgroupEmbedding:
    """Embed ``subgroup`` into ``ambient`` by sending its generators to ``gen_images``."""
    if len(gen_images) != len(subgroup.generators):
        raise GroupError("need one ambient image per subgroup generator")
    image = [0] * subgroup.order
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for pos, h in enumerate(subgroup.gen_indices):
                t = subgroup.table[s][h]
                if t not in seen:
                    image[t] = ambient.table[image[s]][gen_images[pos]]
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return SubgroupEmbedding(subgroup, ambient, tuple(image))


def dihedral_sylow2_embedding(g: Group, n: int) -> SubgroupEmbedding:
    """Sylow 2-subgroup of the dihedral group of order 2n, as <x^m, y> with m the odd part of n."""
    m = n
    a = 1
    while m % 2 == 0:
        m //= 2
        a *= 2
    xm = 0
    for _ in range(m):
        xm = g.table[xm][1]
    if a == 1:
        return subgroup_embedding(build_cyclic(2, "y"), g, [n])
    return subgroup_embedding(build_dihedral(a), g, [xm, n])
