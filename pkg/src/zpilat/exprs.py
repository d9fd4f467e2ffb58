"""Parsers for the command-line group and module-expression grammars.

Group specs: ``D8``, ``Q8``, ``Z6`` and products such as ``D8xZ2``.
Module expressions: atoms ``I, I2, N2, ZpiN, Z, Zpi(k), kerd2, cokerd2, D, F``
and combinators ``gamma(_), dual(_), tensor(_,_), sum(_,_)``.
"""

from __future__ import annotations

import re

from .constructions import build_named, quotient_D, quotient_F, syzygy_of_complex
from .fox import complex_of_group
from .gamma import gamma
from .groups import Group, GroupError, build_cyclic, build_dihedral, build_quaternion, direct_product
from .lattices import (
    Lattice,
    direct_sum_lattice,
    dual_lattice,
    free_lattice,
    tensor_lattice,
)


class ExprError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


_FACTOR = re.compile(r"([DQZ])(\d+)")
_CYCLIC_NAMES = ("z", "w", "v", "u", "s", "r")


def parse_group(spec: str) -> Group:
    """Group spec like ``D8``, ``Q16``, ``Z2`` or a product ``D8xZ2``."""
    spec = spec.strip()
    pos = 0
    factors = []
    while True:
        m = _FACTOR.match(spec, pos)
        if not m:
            raise ExprError(spec, pos, "expected D<order>, Q<order> or Z<order>")
        factors.append((m.group(1), int(m.group(2))))
        pos = m.end()
        if pos == len(spec):
            break
        if spec[pos] != "x":
            raise ExprError(spec, pos, "expected 'x' between group factors")
        pos += 1
    groups = []
    cyclic_used = 0
    for kind, order in factors:
        if kind == "D":
            if order % 2 != 0 or order < 4:
                raise ExprError(spec, 0, f"dihedral order {order} must be even and >= 4")
            groups.append(build_dihedral(order // 2))
        elif kind == "Q":
            if order % 4 != 0 or order < 8:
                raise ExprError(spec, 0, f"quaternion order {order} must be divisible by 4 and >= 8")
            groups.append(build_quaternion(order // 4))
        else:
            if cyclic_used >= len(_CYCLIC_NAMES):
                raise ExprError(spec, 0, "too many cyclic factors")
            groups.append(build_cyclic(order, _CYCLIC_NAMES[cyclic_used]))
            cyclic_used += 1
    out = groups[0]
    for g in groups[1:]:
        try:
            out = direct_product(out, g)
        except GroupError as e:
            raise ExprError(spec, 0, str(e)) from None
    return out


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<int>\d+)|(?P<op>[(),]))")

_ATOMS = ("I2", "I", "N2", "ZpiN", "Zpi", "Z", "kerd2", "cokerd2", "D", "F")
_COMBINATORS = ("gamma", "dual", "tensor", "sum")


def _dihedral_n(group: Group) -> int:
    m = re.fullmatch(r"D(\d+)", group.name)
    if not m or int(m.group(1)) % 4 != 0:
        raise ValueError(
            f"module requires a dihedral group of order divisible by 4, not {group.name}"
        )
    return int(m.group(1)) // 2


def parse_module_expr(text: str, group: Group) -> Lattice:
    """Evaluate a module expression over the given group."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ExprError(text, pos, "unexpected character")
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
            raise ExprError(text, t[2], f"expected {val or kind}, found {t[1]!r}")
        i += 1
        return t

    def parse_expr() -> Lattice:
        kind, val, p = take()
        if kind != "name":
            raise ExprError(text, p, "expected a module name")
        if val == "gamma":
            take("op", "(")
            inner = parse_expr()
            take("op", ")")
            return gamma(inner)
        if val == "dual":
            take("op", "(")
            inner = parse_expr()
            take("op", ")")
            return dual_lattice(inner)
        if val in ("tensor", "sum"):
            take("op", "(")
            a = parse_expr()
            take("op", ",")
            b = parse_expr()
            take("op", ")")
            return tensor_lattice(a, b) if val == "tensor" else direct_sum_lattice(a, b)
        if val == "Zpi":
            take("op", "(")
            k = int(take("int")[1])
            take("op", ")")
            return free_lattice(group, k)
        if val in ("I", "I2", "N2", "ZpiN", "Z"):
            return build_named(group, val).lattice
        if val == "kerd2":
            return syzygy_of_complex(complex_of_group(group))[0]
        if val == "cokerd2":
            from .constructions import cokernel_of_dual

            pc = complex_of_group(group)
            return cokernel_of_dual(pc, pc.d2.transpose_involute()).lattice
        if val == "D":
            return quotient_D(_dihedral_n(group))[0]
        if val == "F":
            return quotient_F(_dihedral_n(group))[0]
        raise ExprError(text, p, f"unknown module name {val!r}")

    result = parse_expr()
    take("end")
    return result
