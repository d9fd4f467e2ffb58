"""Tate homology in degrees 1, 0, -1 for lattices over finite groups.

Degree 0 is the torsion of the coinvariants (one Smith form); the norm-map
kernel route is available as an independent cross-check.  Large coinvariant
presentations use the modular cokernel routine, which is exact here because
Tate groups of a finite group are annihilated by the group order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abgroups import AbGroup
from .fox import PresentationComplex
from .group_ring import RingElement
from .intlinalg import (
    IntMatrix,
    LinearSolver,
    coker_invariants_bounded,
    kernel_basis,
    snf,
)
from .lattices import Lattice, ValidationError, _mm

# Exact Smith form below this rank; the annihilator-bounded modular route
# above it.  Both routes are exact; property tests compare them.
_EXACT_SNF_CAP = 240


def coinvariant_relation_matrix(l: Lattice) -> IntMatrix:
    """Columns (action(g) - 1)e_i over all generators g and basis vectors;
    the coinvariants are the cokernel."""
    return IntMatrix.from_numpy(_relation_np(l))


def _relation_np(l: Lattice) -> np.ndarray:
    m = l.rank
    if not l.group.generators:
        return np.zeros((m, 0), dtype=np.int64)
    eye = np.eye(m, dtype=np.int64)
    return np.hstack([a - eye for a in l.actions])


def element_actions(l: Lattice) -> list[np.ndarray]:
    """Action matrices of every group element, built along the word tree."""
    group = l.group
    out: list[np.ndarray | None] = [None] * group.order
    out[0] = np.eye(l.rank, dtype=np.int64)
    order = sorted(range(group.order), key=lambda g: len(group.element_word(g)))
    for g in order:
        if out[g] is not None:
            continue
        word = group.element_word(g)
        prefix = group.evaluate_word(word[:-1])
        pos = word[-1][0]
        out[g] = _mm(out[prefix], l.actions[pos])
    return out  # type: ignore[return-value]


def norm_matrix(l: Lattice) -> np.ndarray:
    """Multiplication by the sum of all group elements."""
    acts = element_actions(l)
    total = np.zeros((l.rank, l.rank), dtype=np.int64)
    for a in acts:
        total += a
    return total


def fixed_point_basis(l: Lattice) -> IntMatrix:
    """Canonical basis of the invariant vectors (common kernel of action(g)-1)."""
    m = l.rank
    if not l.group.generators:
        return IntMatrix.identity(m)
    eye = np.eye(m, dtype=np.int64)
    stacked = np.vstack([a - eye for a in l.actions])
    return kernel_basis(IntMatrix.from_numpy(stacked))


@dataclass
class NormMapData:
    """The ingredients of the norm map for external verification."""

    fixed_basis: IntMatrix
    relation_matrix: IntMatrix
    norm: IntMatrix


def norm_map_data(l: Lattice) -> NormMapData:
    return NormMapData(
        fixed_point_basis(l),
        coinvariant_relation_matrix(l),
        IntMatrix.from_numpy(norm_matrix(l)),
    )


def _h0_from_coinvariants(l: Lattice, method: str) -> AbGroup:
    m = l.rank
    if m == 0:
        return AbGroup.trivial()
    rel = _relation_np(l)
    if rel.shape[1] == 0:
        return AbGroup.trivial()  # trivial group: coinvariants are free
    if method == "auto":
        method = "exact" if m <= _EXACT_SNF_CAP else "bounded"
    if method == "exact":
        coker = snf(IntMatrix.from_numpy(rel)).coker
    elif method == "bounded":
        # Tate groups are annihilated by |G|, so |G| bounds every finite
        # invariant factor of the coinvariant presentation.
        coker = coker_invariants_bounded(rel, l.group.order)
    else:
        raise ValueError(f"unknown method {method!r}")
    return coker.torsion()


def _h0_norm_route(l: Lattice) -> AbGroup:
    """ker(norm) on coinvariants: vectors killed by the norm, modulo the
    relation columns."""
    m = l.rank
    if m == 0 or not l.group.generators:
        return AbGroup.trivial()
    n = norm_matrix(l)
    k = kernel_basis(IntMatrix.from_numpy(n))
    if k.cols == 0:
        return AbGroup.trivial()
    rel = coinvariant_relation_matrix(l)
    w = LinearSolver(k).solve(rel)
    if w is None:
        raise ValidationError("relation columns do not lie in the norm kernel")
    res = snf(w).coker
    if res.free_rank != 0:
        raise ValidationError(f"norm-kernel route produced free rank {res.free_rank}")
    return res.torsion()


def tate_h0(l: Lattice, method: str = "auto", check_norm: bool = False) -> AbGroup:
    """Torsion of the coinvariants (free rank reported as zero)."""
    primary = _h0_from_coinvariants(l, method)
    if check_norm:
        other = _h0_norm_route(l)
        if other != primary:
            raise ValidationError(
                f"degree-0 routes disagree: coinvariants {primary}, norm kernel {other}"
            )
    return primary


def tate_h_minus1(l: Lattice) -> AbGroup:
    """Fixed points modulo the image of the norm map."""
    m = l.rank
    if m == 0:
        return AbGroup.trivial()
    f = fixed_point_basis(l)
    if f.cols == 0:
        return AbGroup.trivial()
    n = norm_matrix(l)
    w = LinearSolver(f).solve(IntMatrix.from_numpy(n))
    if w is None:
        raise ValidationError("norm image does not lie in the fixed points")
    res = snf(w).coker
    if res.free_rank != 0:
        raise ValidationError(f"degree -1 must be finite, got free rank {res.free_rank}")
    return res.torsion()


def ring_element_action(l: Lattice, a: RingElement, acts: list[np.ndarray] | None = None) -> np.ndarray:
    if a.group != l.group:
        raise ValidationError("ring element over a different group")
    if acts is None:
        acts = element_actions(l)
    out = np.zeros((l.rank, l.rank), dtype=np.int64)
    for g, c in enumerate(a.coeffs):
        if c:
            out += c * acts[g]
    return out


def tate_h1(l: Lattice, pc: PresentationComplex) -> AbGroup:
    """Middle homology of the presentation complex tensored down over the
    group ring."""
    if pc.group != l.group:
        raise ValidationError("presentation complex bound to a different group")
    m = l.rank
    if m == 0:
        return AbGroup.trivial()
    acts = element_actions(l)
    ngen = pc.d1.rows
    nrel = pc.d2.rows
    b1 = np.hstack(
        [ring_element_action(l, pc.d1.entries[i][0].involution(), acts) for i in range(ngen)]
    )
    blocks = []
    for i in range(ngen):
        row = [
            ring_element_action(l, pc.d2.entries[j][i].involution(), acts)
            for j in range(nrel)
        ]
        blocks.append(np.hstack(row))
    b2 = np.vstack(blocks)
    if np.any(_mm(b1, b2)):
        raise ValidationError("chain condition failed after tensoring")
    k = kernel_basis(IntMatrix.from_numpy(b1))
    if k.cols == 0:
        return AbGroup.trivial()
    w = LinearSolver(k).solve(IntMatrix.from_numpy(b2))
    if w is None:
        raise ValidationError("boundary image does not lie in the cycle lattice")
    res = snf(w).coker
    if res.free_rank != 0:
        raise ValidationError(f"degree 1 must be finite, got free rank {res.free_rank}")
    return res.torsion()
