"""Finitely generated abelian groups in canonical invariant-factor form."""

from __future__ import annotations

import re
from dataclasses import dataclass


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are small)."""
    n = abs(int(n))
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbGroup:
    """free_rank copies of Z plus cyclic factors d1 | d2 | ... | dk, each >= 2."""

    free_rank: int
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        fs = self.invariant_factors
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors {fs} violate divisibility")
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")

    @classmethod
    def from_factors(cls, free_rank: int, factors: list[int]) -> "AbGroup":
        """Canonicalize an arbitrary list of cyclic orders into chain form."""
        primary: dict[int, list[int]] = {}
        for d in factors:
            d = abs(int(d))
            if d == 0:
                free_rank += 1
                continue
            for p, e in factorint(d).items():
                primary.setdefault(p, []).append(e)
        return cls.from_primary(free_rank, primary)

    @classmethod
    def from_primary(cls, free_rank: int, primary: dict[int, list[int]]) -> "AbGroup":
        """Build from prime -> list of exponents of primary cyclic factors."""
        slots = max((len(v) for v in primary.values()), default=0)
        chain = []
        for k in range(slots):
            d = 1
            for p, exps in primary.items():
                padded = sorted(exps, reverse=True) + [0] * slots
                d *= p ** padded[k]
            chain.append(d)
        chain = [d for d in reversed(chain) if d > 1]
        return cls(free_rank, tuple(chain))

    @classmethod
    def trivial(cls) -> "AbGroup":
        return cls(0, ())

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def order(self) -> int:
        """Order as a finite group; 0 if infinite."""
        if self.free_rank:
            return 0
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_cyclic(self) -> bool:
        return self.free_rank == 0 and len(self.invariant_factors) <= 1

    def torsion(self) -> "AbGroup":
        return AbGroup(0, self.invariant_factors)

    def direct_sum(self, other: "AbGroup") -> "AbGroup":
        return AbGroup.from_factors(
            self.free_rank + other.free_rank,
            list(self.invariant_factors) + list(other.invariant_factors),
        )

    def primary_exponents(self, p: int) -> list[int]:
        """Exponents e with a Z/p^e summand, descending."""
        out = [factorint(d).get(p, 0) for d in self.invariant_factors]
        return sorted((e for e in out if e), reverse=True)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "factors": list(self.invariant_factors)}

    @classmethod
    def from_string(cls, text: str) -> "AbGroup":
        """Parse the rendered form, e.g. ``Z^2 + Z/2 + Z/4`` or ``0``."""
        text = text.strip()
        if text == "0":
            return cls.trivial()
        free = 0
        factors = []
        for part in text.split("+"):
            part = part.strip()
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"(?:\()?Z/(\d+)(?:\))?(?:\^(\d+))?", part)
            if m:
                factors.extend([int(m.group(1))] * int(m.group(2) or 1))
                continue
            raise ValueError(f"cannot parse abelian group summand {part!r}")
        return cls.from_factors(free, factors)
