"""Arithmetic in the integral group ring of a finite group.

Elements are dense integer coefficient vectors over the group's fixed
enumeration; all arithmetic is exact (Python integers).
"""

from __future__ import annotations

import re

from .groups import Group, GroupError, Word


class RingElement:
    """An element of the integral group ring, as a coefficient vector."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: Group, coeffs: list[int]):
        if len(coeffs) != group.order:
            raise ValueError("coefficient vector length must equal the group order")
        self.group = group
        self.coeffs = [int(c) for c in coeffs]

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, group: Group) -> "RingElement":
        return cls(group, [0] * group.order)

    @classmethod
    def one(cls, group: Group) -> "RingElement":
        return cls.monomial(group, 0)

    @classmethod
    def monomial(cls, group: Group, g: int, coeff: int = 1) -> "RingElement":
        c = [0] * group.order
        c[g] = int(coeff)
        return cls(group, c)

    # -- ring structure ------------------------------------------------------

    def _check(self, other: "RingElement"):
        if self.group is not other.group and self.group != other.group:
            raise ValueError("ring elements live over different groups")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "RingElement":
        return RingElement(self.group, [-a for a in self.coeffs])

    def scale(self, k: int) -> "RingElement":
        return RingElement(self.group, [k * a for a in self.coeffs])

    def __mul__(self, other: "RingElement") -> "RingElement":
        """Convolution product: coefficient of g is sum over hk = g of a_h b_k."""
        self._check(other)
        table = self.group.table
        out = [0] * self.group.order
        for h, a in enumerate(self.coeffs):
            if a == 0:
                continue
            row = table[h]
            for k, b in enumerate(other.coeffs):
                if b:
                    out[row[k]] += a * b
        return RingElement(self.group, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingElement)
            and self.group == other.group
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.group), tuple(self.coeffs)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # -- the operations the homology computations rely on --------------------

    def involution(self) -> "RingElement":
        """The antiautomorphism induced by g -> g^-1."""
        inv = self.group.inv
        out = [0] * self.group.order
        for g, c in enumerate(self.coeffs):
            out[inv[g]] = c
        return RingElement(self.group, out)

    def augmentation(self) -> int:
        return sum(self.coeffs)

    def __repr__(self):
        return f"<{render(self)} in Z[{self.group.name}]>"


def norm_element(group: Group) -> RingElement:
    """The sum of all group elements."""
    return RingElement(group, [1] * group.order)


def partial_norm(group: Group, g: int) -> RingElement:
    """1 + g + ... + g^(ord(g)-1)."""
    coeffs = [0] * group.order
    h = 0
    while True:
        coeffs[h] += 1
        h = group.table[h][g]
        if h == 0:
            break
    return RingElement(group, coeffs)


def word_to_ring(group: Group, word: Word) -> RingElement:
    """Evaluate a generator word to the single group element it spells."""
    return RingElement.monomial(group, group.evaluate_word(word))


# -- textual rendering and parsing ------------------------------------------


def render(a: RingElement) -> str:
    """Signed monomial sum, e.g. ``1 - x*y + 2*x^3``."""
    parts = []
    for g, c in enumerate(a.coeffs):
        if c == 0:
            continue
        name = a.group.element_names[g]
        if name == "1":
            body = str(abs(c))
        elif abs(c) == 1:
            body = name
        else:
            body = f"{abs(c)}*{name}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


class RingParseError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"parse error at position {pos}: {message} (in {text!r})")
        self.pos = pos


def parse(group: Group, text: str) -> RingElement:
    """Parse the rendered syntax back into a ring element.

    Generator powers may be negative, e.g. ``x^-1*y``; coefficients are
    optionally separated from monomials by ``*``.
    """
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise RingParseError(text, pos, "unexpected character")
        for kind in ("int", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))

    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def parse_power() -> tuple[str, int]:
        kind, val, p = take()
        if kind != "name":
            raise RingParseError(text, p, "expected a generator name")
        exp = 1
        if peek()[:2] == ("op", "^"):
            take()
            sign = 1
            if peek()[:2] == ("op", "-"):
                take()
                sign = -1
            kind2, val2, p2 = take()
            if kind2 != "int":
                raise RingParseError(text, p2, "expected an integer exponent")
            exp = sign * int(val2)
        return val, exp

    def monomial_to_element(powers: list[tuple[str, int]]) -> RingElement:
        word: list[tuple[int, int]] = []
        for nm, exp in powers:
            gpos = group.generator_position(nm)
            word.extend([(gpos, 1 if exp > 0 else -1)] * abs(exp))
        return word_to_ring(group, tuple(word))

    def parse_term() -> RingElement:
        coeff = 1
        kind, val, p = peek()
        if kind == "int":
            take()
            coeff = int(val)
            if peek()[:2] == ("op", "*"):
                take()
            elif peek()[0] != "name":
                return RingElement.monomial(group, 0, coeff)
        powers = [parse_power()]
        while peek()[:2] == ("op", "*"):
            take()
            powers.append(parse_power())
        return monomial_to_element(powers).scale(coeff)

    result = RingElement.zero(group)
    sign = 1
    if peek()[:2] == ("op", "-"):
        take()
        sign = -1
    elif peek()[:2] == ("op", "+"):
        take()
    while True:
        term = parse_term()
        result = result + (term if sign > 0 else -term)
        kind, val, p = peek()
        if kind == "end":
            return result
        if (kind, val) == ("op", "+"):
            take()
            sign = 1
        elif (kind, val) == ("op", "-"):
            take()
            sign = -1
        else:
            raise RingParseError(text, p, "expected '+' or '-' between terms")
