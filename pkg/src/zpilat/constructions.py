"""Named modules and the specific sequences the verification suite computes:
the augmentation ideal and its companions, the dihedral syzygy and cosyzygy
with their structure maps, the norm-ideal exactness check, the quotient
modules built from the quadratic functor, and the order-16 counterexample
instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fox import (
    Presentation,
    PresentationComplex,
    ZPiMatrix,
    complex_of_group,
    presentation_complex,
)
from .gamma import gamma, gamma_map
from .group_ring import RingElement, norm_element, partial_norm
from .groups import Group, build_cyclic, build_dihedral, direct_product
from .intlinalg import IntMatrix, LinearSolver, hnf, hstack, kernel_basis, snf, solve_integer
from .lattices import (
    Lattice,
    LatticeError,
    LatticeMap,
    TorsionObstruction,
    ValidationError,
    free_lattice,
    kernel_lattice,
    quotient_by_span,
    quotient_with_lift,
    sublattice,
    trivial_lattice,
    zpi_matrix_to_map,
)

NAMED_KINDS = ("I", "I2", "ZpiN", "N2", "Z")


@dataclass
class NamedModule:
    """A named lattice together with its structural map into or out of the
    rank-one free module."""

    kind: str
    lattice: Lattice
    incl: LatticeMap | None = None  # for the ideals: inclusion into Zpi
    proj: LatticeMap | None = None  # for the quotient: projection from Zpi


def build_named(group: Group, kind: str) -> NamedModule:
    """I (augmentation ideal), I2 = (I,2), ZpiN = Zpi/N, N2 = (N,2), Z."""
    n = group.order
    if kind == "Z":
        return NamedModule("Z", trivial_lattice(group))
    free1 = free_lattice(group, 1)
    if kind == "I":
        cols = [[(1 if h == g else 0) - (1 if h == 0 else 0) for h in range(n)] for g in range(1, n)]
        lat, incl = sublattice(free1, IntMatrix.from_columns(cols, n), name="I")
        return NamedModule("I", lat, incl=incl)
    if kind == "I2":
        cols = [[2 if h == 0 else 0 for h in range(n)]]
        cols += [[(1 if h == g else 0) - (1 if h == 0 else 0) for h in range(n)] for g in range(1, n)]
        lat, incl = sublattice(free1, IntMatrix.from_columns(cols, n), name="(I,2)")
        return NamedModule("I2", lat, incl=incl)
    if kind == "N2":
        gens = [[1] * n] + [[2 if h == g else 0 for h in range(n)] for g in range(n)]
        basis = hnf(IntMatrix.from_columns(gens, n), transform=False)
        cols = basis.h.take_columns(list(range(basis.rank)))
        lat, incl = sublattice(free1, cols, name="(N,2)")
        return NamedModule("N2", lat, incl=incl)
    if kind == "ZpiN":
        # canonical basis: the images of the non-identity group elements
        proj_rows = []
        for g in range(1, n):
            proj_rows.append([-1 if h == 0 else (1 if h == g else 0) for h in range(n)])
        proj = IntMatrix.from_rows(proj_rows)
        lift = IntMatrix.from_rows(
            [[1 if (g >= 1 and k == g - 1) else 0 for k in range(n - 1)] for g in range(n)]
        )
        pr = proj.to_numpy()
        li = lift.to_numpy()
        actions = [pr @ a @ li for a in free1.actions]
        lat = Lattice(group, actions, name="Zpi/N")
        proj_map = LatticeMap(free1, lat, proj)
        return NamedModule("ZpiN", lat, proj=proj_map)
    raise LatticeError(f"unknown named module kind {kind!r}")


def ring_coords(elements: list[RingElement]) -> list[int]:
    """Coordinates of a tuple of ring elements in the free-module basis."""
    out: list[int] = []
    for e in elements:
        out.extend(e.coeffs)
    return out


def _column(vec: list[int]) -> IntMatrix:
    return IntMatrix.from_columns([vec], len(vec))


@dataclass
class SequenceCheck:
    """Verification record for one short exact sequence."""

    injective: bool
    image_equals_kernel: bool
    surjective: bool

    @property
    def exact(self) -> bool:
        return self.injective and self.image_equals_kernel and self.surjective


def verify_short_exact(i_map: LatticeMap, j_map: LatticeMap) -> SequenceCheck:
    """First map injective, saturated image equal to the kernel of the second,
    second surjective."""
    inj = i_map.is_injective()
    surj = j_map.is_surjective()
    image = hnf(i_map.matrix, transform=False)
    image_basis = image.h.take_columns(list(range(image.rank)))
    kernel = kernel_basis(j_map.matrix)
    eq = image_basis == kernel
    return SequenceCheck(inj, eq, surj)


def dihedral_presentation(n: int) -> Presentation:
    return Presentation(
        ("x", "y"),
        (
            tuple([(0, 1)] * n + [(1, -1)] * 2),
            ((0, 1), (1, 1), (0, 1), (1, -1)),
            ((1, 1), (1, 1)),
        ),
    )


def alternate_dihedral_presentation(n: int) -> Presentation:
    """A second presentation of the same group: <x, y | x^n, y^2, (xy)^2>."""
    return Presentation(
        ("x", "y"),
        (
            tuple([(0, 1)] * n),
            ((1, 1), (1, 1)),
            ((0, 1), (1, 1), (0, 1), (1, 1)),
        ),
    )


@dataclass
class Syzygy:
    """ker(d2) of a presentation complex with its structure maps."""

    group: Group
    complex: PresentationComplex
    lattice: Lattice          # J
    incl: LatticeMap          # J -> free module of the relator stage
    i_map: LatticeMap | None  # ZpiN -> J (dihedral case)
    j_map: LatticeMap | None  # J -> (I,2) (dihedral case)
    zpin: NamedModule | None
    i2: NamedModule | None


def syzygy_of_complex(pc: PresentationComplex, name: str = "kerd2") -> tuple[Lattice, LatticeMap]:
    f2 = zpi_matrix_to_map(pc.d2)
    return kernel_lattice(f2, name=name)


def dihedral_syzygy(n: int) -> Syzygy:
    """The kernel lattice over the dihedral group of order 2n (n even) along
    with the maps exhibiting 0 -> Zpi/N -> J -> (I,2) -> 0."""
    if n % 2 != 0:
        raise ValueError(
            f"n={n} is odd: these groups have 4-periodic cohomology and are out of scope"
        )
    if n < 2:
        raise ValueError("n must be >= 2")
    group = build_dihedral(n)
    pc = complex_of_group(group)
    j_lat, incl = syzygy_of_complex(pc)
    zpin = build_named(group, "ZpiN")
    i2 = build_named(group, "I2")

    x = RingElement.monomial(group, 1)
    y = RingElement.monomial(group, group.gen_indices[1])
    one = RingElement.one(group)
    nx = partial_norm(group, 1)

    # i: class(a) -> a * (x-1, 1-xy, 0), well defined because N kills the row
    row = ZPiMatrix(group, [[x - one, one - x * y, RingElement.zero(group)]])
    f_row = zpi_matrix_to_map(row)
    nvec = _column(ring_coords([norm_element(group)]))
    if not (f_row.matrix @ nvec).is_zero():
        raise ValidationError("the defining row of i is not killed by the norm")
    cols = f_row.matrix.take_columns(list(range(1, group.order)))  # lifts of g != 1
    solver = LinearSolver(incl.matrix)
    i_matrix = solver.solve(cols)
    if i_matrix is None:
        raise ValidationError("image of i does not lie in ker(d2)")
    i_map = LatticeMap(zpin.lattice, j_lat, i_matrix)

    # j: third coordinate, corestricted to (I,2)
    col = ZPiMatrix(group, [[RingElement.zero(group)], [RingElement.zero(group)], [one]])
    f_col = zpi_matrix_to_map(col)
    composite = f_col.matrix @ incl.matrix
    for jcol in range(composite.cols):
        if sum(composite.column(jcol)) % 2 != 0:
            raise ValidationError("third coordinate of a kernel vector has odd augmentation")
    j_matrix = LinearSolver(i2.incl.matrix).solve(composite)
    if j_matrix is None:
        raise ValidationError("third coordinates do not lie in (I,2)")
    j_map = LatticeMap(j_lat, i2.lattice, j_matrix)
    return Syzygy(group, pc, j_lat, incl, i_map, j_map, zpin, i2)


def syzygy_kernel_membership(s: Syzygy, elements: list[RingElement]) -> list[int] | None:
    """Coordinates of a free-module vector in the kernel basis, or None."""
    vec = _column(ring_coords(elements))
    sol = solve_integer(s.incl.matrix, vec)
    return sol.column(0) if sol is not None else None


def syzygy_j_value(s: Syzygy, elements: list[RingElement]) -> RingElement:
    """Apply j to a kernel vector given by free-module coordinates and return
    the result as an element of the group ring (via the inclusion of (I,2))."""
    coords = syzygy_kernel_membership(s, elements)
    if coords is None:
        raise ValidationError("vector is not in the kernel")
    in_i2 = s.j_map.apply(coords)
    ring_vec = s.i2.incl.apply(in_i2)
    return RingElement(s.group, ring_vec)


@dataclass
class Cosyzygy:
    group: Group
    lattice: Lattice          # coker of the dual differential
    proj: LatticeMap          # free module -> coker
    lift: IntMatrix           # a section of proj (not equivariant)
    dual_matrix: ZPiMatrix
    i_map: LatticeMap | None  # (N,2) -> coker
    j_map: LatticeMap | None  # coker -> I
    n2: NamedModule | None
    aug_ideal: NamedModule | None


def cokernel_of_dual(pc: PresentationComplex, d_dual: ZPiMatrix, name: str = "cokerd2") -> Cosyzygy:
    f = zpi_matrix_to_map(d_dual)
    quo, proj, lift = quotient_with_lift(f.target, f.matrix, name=name)
    return Cosyzygy(pc.group, quo, proj, lift, d_dual, None, None, None, None)


def dihedral_cosyzygy(n: int) -> Cosyzygy:
    """coker of the dual differential over the dihedral group of order 2n,
    with the maps exhibiting 0 -> (N,2) -> coker -> I -> 0.

    The dual differential is taken after the substitution x -> x^-1 (a group
    automorphism), which clears inverses from its entries; the generator
    identities pinned below fix the sign convention of j'.
    """
    if n % 2 != 0:
        raise ValueError(
            f"n={n} is odd: these groups have 4-periodic cohomology and are out of scope"
        )
    group = build_dihedral(n)
    pc = complex_of_group(group)
    x = RingElement.monomial(group, 1)
    y = RingElement.monomial(group, group.gen_indices[1])
    one = RingElement.one(group)
    zero = RingElement.zero(group)
    nx = partial_norm(group, 1)
    d_dual = ZPiMatrix(
        group,
        [
            [nx, one + y * x, zero],
            [-(one + y), x - one, one + y],
        ],
    )
    cs = cokernel_of_dual(pc, d_dual)
    quo, proj, lift = cs.lattice, cs.proj, cs.lift
    f = zpi_matrix_to_map(d_dual)
    norm = norm_element(group)

    # pinned identity: (0,0,N) = 2(N_x,0,0) in the cokernel
    nx_vec = _column(ring_coords([nx, zero, zero]))
    n3_vec = _column(ring_coords([zero, zero, norm]))
    diff = n3_vec - nx_vec.scale(2)
    if solve_integer(f.matrix, diff) is None:
        raise ValidationError("(0,0,N) - 2(N_x,0,0) is not a boundary")

    n2 = build_named(group, "N2")
    aug = build_named(group, "I")

    # i': determined by 2 -> class(0,0,1) and N -> class(N_x,0,0); a basis
    # vector w = a N + 2 b of (N,2) maps to class(a (N_x,0,0) + (0,0,b)).
    ncol = _column(ring_coords([norm]))
    gens_matrix = hstack([ncol, IntMatrix.identity(group.order).scale(2)])
    gsolver = LinearSolver(gens_matrix)
    i_cols = []
    for k in range(n2.lattice.rank):
        w = _column(n2.incl.matrix.column(k))
        dec = gsolver.solve(w)
        if dec is None:
            raise ValidationError("(N,2) basis vector is not of the form aN + 2b")
        a = dec[0, 0]
        b = dec.column(0)[1:]
        vec = [a * v for v in nx_vec.column(0)]
        for h in range(group.order):
            vec[2 * group.order + h] += b[h]
        i_cols.append(proj.apply(vec))
    i_map = LatticeMap(n2.lattice, quo, IntMatrix.from_columns(i_cols, quo.rank))

    # j': induced by the column (x-1, 1-yx, 0), corestricted to I
    jcolumn = ZPiMatrix(group, [[x - one], [one - y * x], [zero]])
    if not (d_dual @ jcolumn).is_zero():
        raise ValidationError("the defining column of j' does not kill the boundaries")
    f_col = zpi_matrix_to_map(jcolumn)
    on_lift = f_col.matrix @ lift
    j_matrix = LinearSolver(aug.incl.matrix).solve(on_lift)
    if j_matrix is None:
        raise ValidationError("j' does not land in the augmentation ideal")
    j_map = LatticeMap(quo, aug.lattice, j_matrix)

    return Cosyzygy(group, quo, proj, lift, d_dual, i_map, j_map, n2, aug)


def cosyzygy_j_value(cs: Cosyzygy, elements: list[RingElement]) -> RingElement:
    """Apply j' to the class of a free-module vector, returned inside the
    group ring via the inclusion of I."""
    coords = cs.proj.apply(ring_coords(elements))
    in_i = cs.j_map.apply(coords)
    return RingElement(cs.group, cs.aug_ideal.incl.apply(in_i))


@dataclass
class FourTermCheck:
    """Exactness report for 0 -> Z -> Zpi -> Zpi^2 -> Zpi^2."""

    group: Group
    norm_injective: bool
    exact_at_ring: bool
    exact_at_middle: bool

    @property
    def exact(self) -> bool:
        return self.norm_injective and self.exact_at_ring and self.exact_at_middle


def norm_ideal_sequence_check(n: int, mutate: bool = False) -> FourTermCheck:
    """Verify exactness of the norm / (x-1, 1-xy) / 2x2-block sequence over
    the dihedral group of order 2n.  ``mutate`` flips a sign as a negative
    control."""
    if n < 2:
        raise ValueError("n must be >= 2")
    group = build_dihedral(n)
    x = RingElement.monomial(group, 1)
    y = RingElement.monomial(group, group.gen_indices[1])
    one = RingElement.one(group)
    nx = partial_norm(group, 1)
    m1 = ZPiMatrix(group, [[x - one, one - x * y]])
    sign = -1 if not mutate else 1
    m2 = ZPiMatrix(group, [[nx, (one + y).scale(sign)], [one + x * y, x - one]])
    f1 = zpi_matrix_to_map(m1)
    f2 = zpi_matrix_to_map(m2)
    norm_col = _column(ring_coords([norm_element(group)]))

    inj = hnf(norm_col, transform=False).rank == 1
    ker1 = kernel_basis(f1.matrix)
    im0 = hnf(norm_col, transform=False)
    im0_basis = im0.h.take_columns(list(range(im0.rank)))
    exact_ring = ker1 == im0_basis
    ker2 = kernel_basis(f2.matrix)
    im1 = hnf(f1.matrix, transform=False)
    im1_basis = im1.h.take_columns(list(range(im1.rank)))
    exact_mid = ker2 == im1_basis
    return FourTermCheck(group, inj, exact_ring, exact_mid)


def quotient_D(n: int):
    """Quadratic functor of the syzygy modulo the functor of Zpi/N."""
    s = dihedral_syzygy(n)
    gamma_j = gamma(s.lattice, name="Gamma(kerd2)")
    gamma_zpin = gamma(s.zpin.lattice, name="Gamma(Zpi/N)")
    gi = gamma_map(s.i_map, gamma_zpin, gamma_j)
    d_lat, proj = quotient_by_span(gamma_j, gi.matrix, name="D")
    return d_lat, proj, s


def quotient_F(n: int):
    """Quadratic functor of (N,2) modulo the functor of the norm line."""
    if n % 2 != 0:
        raise ValueError("n must be even")
    group = build_dihedral(n)
    n2 = build_named(group, "N2")
    triv = trivial_lattice(group)
    ncoords = LinearSolver(n2.incl.matrix).solve(_column(ring_coords([norm_element(group)])))
    if ncoords is None:
        raise ValidationError("the norm element is not in (N,2)")
    n_map = LatticeMap(triv, n2.lattice, ncoords)
    gamma_n2 = gamma(n2.lattice, name="Gamma((N,2))")
    gamma_z = gamma(triv)
    gn = gamma_map(n_map, gamma_z, gamma_n2)
    f_lat, proj = quotient_by_span(gamma_n2, gn.matrix, name="F")
    return f_lat, proj, n2


@dataclass
class Counterexample:
    group: Group
    complex: PresentationComplex
    j_lattice: Lattice
    j_incl: LatticeMap
    jstar: Cosyzygy


def counterexample_order16() -> Counterexample:
    """The product of the order-8 dihedral group with a 2-element group,
    where the syzygy passes the torsion test but its dual does not."""
    group = direct_product(build_dihedral(4), build_cyclic(2, "z"))
    pc = complex_of_group(group)
    j_lat, incl = syzygy_of_complex(pc)
    d_dual = pc.d2.transpose_involute()
    jstar = cokernel_of_dual(pc, d_dual)
    return Counterexample(group, pc, j_lat, incl, jstar)
