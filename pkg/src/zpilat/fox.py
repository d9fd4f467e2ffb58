"""Free differential calculus on presentation words and the induced
two-stage partial free resolution of the trivial module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .group_ring import RingElement
from .groups import Group, Word


class PresentationError(ValueError):
    """Parse failure or a relator that does not hold in the bound group."""

    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Presentation:
    """Named generators and relator words (exponent-sign expanded)."""

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __str__(self):
        return f"<{', '.join(self.generator_names)} | {', '.join(self.relator_strings())}>"

    def relator_strings(self) -> list[str]:
        out = []
        for rel in self.relators:
            parts: list[tuple[str, int]] = []
            for pos, sign in rel:
                nm = self.generator_names[pos]
                if parts and parts[-1][0] == nm and (parts[-1][1] > 0) == (sign > 0):
                    parts[-1] = (nm, parts[-1][1] + sign)
                else:
                    parts.append((nm, sign))
            out.append("*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in parts))
        return out


_PRES_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>-?\d+)|(?P<op>[<>|,*^]))")


def parse_presentation(text: str) -> Presentation:
    """Parse ``<x, y | x^4*y^-2, x*y*x*y^-1, y^2>``."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _PRES_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise PresentationError(f"unexpected character {text[pos]!r}", pos)
        for kind in ("name", "int", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take(kind=None, val=None):
        nonlocal i
        t = tokens[i]
        if kind and (t[0] != kind or (val is not None and t[1] != val)):
            raise PresentationError(f"expected {val or kind}, found {t[1]!r}", t[2])
        i += 1
        return t

    take("op", "<")
    names = [take("name")[1]]
    while peek()[:2] == ("op", ","):
        take()
        names.append(take("name")[1])
    if len(set(names)) != len(names):
        raise PresentationError("duplicate generator names", 0)
    index = {nm: k for k, nm in enumerate(names)}
    take("op", "|")

    def parse_word() -> Word:
        letters: list[tuple[int, int]] = []
        while True:
            kind, val, p = take()
            if kind != "name":
                raise PresentationError("expected a generator name in relator", p)
            if val not in index:
                raise PresentationError(f"unknown generator {val!r}", p)
            exp = 1
            if peek()[:2] == ("op", "^"):
                take()
                k2, v2, p2 = take()
                if k2 != "int":
                    raise PresentationError("expected an integer exponent", p2)
                exp = int(v2)
            letters.extend([(index[val], 1 if exp > 0 else -1)] * abs(exp))
            if peek()[:2] == ("op", "*"):
                take()
                continue
            return tuple(letters)

    relators = [parse_word()]
    while peek()[:2] == ("op", ","):
        take()
        relators.append(parse_word())
    take("op", ">")
    take("end")
    return Presentation(tuple(names), tuple(relators))


def presentation_of_group(group: Group) -> Presentation:
    """The presentation the group was built with (generators bind positionally)."""
    return Presentation(tuple(group.gen_names), tuple(group.relators))


def fox_derivative(word: Word, gen_pos: int, group: Group) -> RingElement:
    """Derivative of a generator word with respect to one generator, pushed
    into the group ring: d(uv) = d(u) + u d(v), d(g) = 1, d(g^-1) = -g^-1.
    """
    if any(pos >= len(group.gen_indices) for pos, _ in word):
        raise PresentationError("word uses a generator the group does not have")
    out = [0] * group.order
    prefix = 0  # group element of the word prefix read so far
    for pos, sign in word:
        g = group.gen_indices[pos]
        if sign > 0:
            if pos == gen_pos:
                out[prefix] += 1
            prefix = group.table[prefix][g]
        else:
            prefix = group.table[prefix][group.inv[g]]
            if pos == gen_pos:
                out[prefix] -= 1
    return RingElement(group, out)


class ZPiMatrix:
    """A matrix over the group ring, acting on row vectors from the right.

    Composition of the induced maps is the matrix product taken in the same
    order: v (d2 d1) = (v d2) d1.
    """

    def __init__(self, group: Group, entries: list[list[RingElement]]):
        self.group = group
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != self.cols or any(e.group != group for e in row):
                raise ValueError("inconsistent group-ring matrix")
        self.entries = entries

    def __matmul__(self, other: "ZPiMatrix") -> "ZPiMatrix":
        if self.cols != other.rows or self.group != other.group:
            raise ValueError("group-ring matrix shapes do not compose")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RingElement.zero(self.group)
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return ZPiMatrix(self.group, out)

    def transpose_involute(self) -> "ZPiMatrix":
        """The dual matrix: transpose with the bar involution applied entrywise."""
        out = [
            [self.entries[i][j].involution() for i in range(self.rows)]
            for j in range(self.cols)
        ]
        return ZPiMatrix(self.group, out)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def augmentation_is_zero(self) -> bool:
        return all(e.augmentation() == 0 for row in self.entries for e in row)

    def __repr__(self):
        from .group_ring import render

        body = "; ".join(
            ", ".join(render(e) for e in row) for row in self.entries
        )
        return f"ZPiMatrix[{body}]"


@dataclass
class PresentationComplex:
    """The two differentials of the chain complex attached to a presentation.

    d2 is (#relators x #generators), d1 is (#generators x 1); both act by
    right multiplication on row vectors, and d2 @ d1 = 0.
    """

    group: Group
    presentation: Presentation
    d2: ZPiMatrix
    d1: ZPiMatrix


def presentation_complex(pres: Presentation, group: Group) -> PresentationComplex:
    """Bind a presentation to a group (positional generator matching) and
    assemble the Fox-derivative differentials; relators are validated.
    """
    if len(pres.generator_names) != len(group.generators):
        raise PresentationError(
            f"presentation has {len(pres.generator_names)} generators, "
            f"group {group.name} has {len(group.generators)}"
        )
    for k, rel in enumerate(pres.relators):
        if group.evaluate_word(rel) != 0:
            raise PresentationError(
                f"relator {pres.relator_strings()[k]} does not hold in {group.name}"
            )
    ngen = len(pres.generator_names)
    d2 = ZPiMatrix(
        group,
        [[fox_derivative(rel, j, group) for j in range(ngen)] for rel in pres.relators],
    )
    d1 = ZPiMatrix(
        group,
        [
            [RingElement.monomial(group, group.gen_indices[j]) - RingElement.one(group)]
            for j in range(ngen)
        ],
    )
    comp = d2 @ d1
    if not comp.is_zero():
        raise PresentationError("chain condition d2 d1 = 0 failed; invalid presentation data")
    if not d1.augmentation_is_zero():
        raise PresentationError("augmentation of d1 is nonzero")
    return PresentationComplex(group, pres, d2, d1)


def complex_of_group(group: Group) -> PresentationComplex:
    return presentation_complex(presentation_of_group(group), group)
