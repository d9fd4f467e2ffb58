"""Integer representations of a finite group ("lattices") and the category
operations on them: kernels, cokernels, duals, tensor products, quotients,
and restriction to subgroups.

Action matrices are stored as int64 arrays; every product that could
conceivably overflow is bound-checked first and recomputed exactly when the
check fails, so all results are exact.
"""

from __future__ import annotations

import numpy as np

from .fox import ZPiMatrix
from .groups import Group, SubgroupEmbedding, Word
from .intlinalg import (
    IntMatrix,
    LinearSolver,
    hnf,
    kernel_basis,
    snf_with_transforms,
)

# Full matrix-product relator validation up to this rank; beyond it the same
# words are checked on a battery of deterministic probe vectors instead
# (construction-level identities stay exact either way).
_FULL_WORD_VALIDATION_CAP = 1400
_PROBE_VECTORS = 8
_INT64_SAFE = 2**62


class LatticeError(Exception):
    pass


class ValidationError(LatticeError):
    """An internal consistency check failed; carries the offending data."""


class TorsionObstruction(LatticeError):
    """A quotient that was required to be a lattice has torsion."""

    def __init__(self, factors: tuple[int, ...], context: str = ""):
        super().__init__(
            f"quotient has torsion with invariant factors {list(factors)}"
            + (f" ({context})" if context else "")
        )
        self.factors = factors


def _as_int64(mat, rank: int | None = None) -> np.ndarray:
    if isinstance(mat, IntMatrix):
        arr = mat.to_numpy()
    else:
        arr = np.asarray(mat, dtype=np.int64)
    if arr.ndim != 2:
        raise LatticeError("action matrix must be 2-dimensional")
    if rank is not None and arr.shape != (rank, rank):
        raise LatticeError(f"action matrix shape {arr.shape} != ({rank}, {rank})")
    out = arr.copy()
    out.setflags(write=False)
    return out


def _maxabs(a: np.ndarray) -> int:
    return int(np.abs(a).max(initial=0))


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact int64 matrix product, recomputed in arbitrary precision if the
    machine-width bound is not provably safe."""
    if _maxabs(a) * _maxabs(b) * max(a.shape[1], 1) < _INT64_SAFE:
        return a @ b
    exact = IntMatrix.from_numpy(a) @ IntMatrix.from_numpy(b)
    return exact.to_numpy()  # raises OverflowError if genuinely too large


def _positivized(group: Group, word: Word) -> list[int]:
    """Rewrite a signed generator word as generator positions only,
    substituting g^-1 -> g^(ord(g)-1)."""
    out: list[int] = []
    for pos, sign in word:
        if sign > 0:
            out.append(pos)
        else:
            out.extend([pos] * (group.element_order(group.gen_indices[pos]) - 1))
    return out


class Lattice:
    """A free Z-module of finite rank with one integer matrix per generator.

    The generator matrices must satisfy every relator of the group's
    presentation; this is asserted at construction.
    """

    __slots__ = ("group", "rank", "actions", "name")

    def __init__(
        self,
        group: Group,
        actions,
        name: str = "",
        validate: bool = True,
        rank: int | None = None,
    ):
        self.group = group
        if len(actions) != len(group.generators):
            raise LatticeError(
                f"need {len(group.generators)} action matrices, got {len(actions)}"
            )
        if actions:
            first = actions[0]
            rank = first.rows if isinstance(first, IntMatrix) else np.asarray(first).shape[0]
        elif rank is None:
            raise LatticeError("rank is required for a lattice over a generator-free group")
        self.rank = rank
        self.actions = tuple(_as_int64(a, rank) for a in actions)
        self.name = name
        if validate:
            self.validate_relators()

    # -- actions -----------------------------------------------------------

    def action(self, gen_pos: int) -> np.ndarray:
        return self.actions[gen_pos]

    def action_matrix(self, gen_pos: int) -> IntMatrix:
        return IntMatrix.from_numpy(self.actions[gen_pos])

    def word_action(self, positions: list[int]) -> np.ndarray:
        out = np.eye(self.rank, dtype=np.int64)
        for pos in positions:
            out = _mm(out, self.actions[pos])
        return out

    def element_action(self, g: int) -> np.ndarray:
        """Action of an arbitrary group element, via its generator word."""
        return self.word_action([pos for pos, _ in self.group.element_word(g)])

    def gen_inverse_action(self, gen_pos: int) -> np.ndarray:
        return self.element_action(self.group.inv[self.group.gen_indices[gen_pos]])

    # -- validation ----------------------------------------------------------

    def _validation_words(self) -> list[list[int]]:
        words = []
        for pos, g in enumerate(self.group.gen_indices):
            words.append([pos] * self.group.element_order(g))
        for rel in self.group.relators:
            words.append(_positivized(self.group, rel))
        return words

    def _run_product(self, word: list[int], powers: dict) -> np.ndarray:
        """Product over a positive word, memoizing binary powers of each
        generator to keep the matrix-product count logarithmic in run length."""

        def power(pos: int, k: int) -> np.ndarray:
            key = (pos, k)
            if key not in powers:
                if k == 1:
                    powers[key] = self.actions[pos]
                elif k % 2 == 0:
                    h = power(pos, k // 2)
                    powers[key] = _mm(h, h)
                else:
                    powers[key] = _mm(power(pos, k - 1), self.actions[pos])
            return powers[key]

        runs: list[tuple[int, int]] = []
        for pos in word:
            if runs and runs[-1][0] == pos:
                runs[-1] = (pos, runs[-1][1] + 1)
            else:
                runs.append((pos, 1))
        out = None
        for pos, k in runs:
            p = power(pos, k)
            out = p if out is None else _mm(out, p)
        return out if out is not None else np.eye(self.rank, dtype=np.int64)

    def validate_relators(self):
        if self.rank == 0 or not self.group.generators:
            return
        if self.rank <= _FULL_WORD_VALIDATION_CAP:
            eye = np.eye(self.rank, dtype=np.int64)
            powers: dict = {}
            for word in self._validation_words():
                prod = self._run_product(word, powers)
                if not np.array_equal(prod, eye):
                    raise ValidationError(
                        f"lattice {self.name or '?'}: word {word} does not act as the identity"
                    )
        else:
            # Deterministic probe vectors; exact integer identities, applied
            # as matrix-vector chains to keep the check linear in the rank.
            rng = np.random.default_rng(self.rank * 1000003 + self.group.order)
            probes = rng.integers(-9, 10, size=(self.rank, _PROBE_VECTORS)).astype(np.int64)
            for word in self._validation_words():
                v = probes
                for pos in reversed(word):
                    v = _mm(self.actions[pos], v)
                if not np.array_equal(v, probes):
                    raise ValidationError(
                        f"lattice {self.name or '?'}: word {word} fails on probe vectors"
                    )

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"Lattice({self.group.name}{nm}, rank={self.rank})"

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.group == other.group
            and self.rank == other.rank
            and all(np.array_equal(a, b) for a, b in zip(self.actions, other.actions))
        )

    def __hash__(self):
        return hash((self.group.name, self.rank))

    def renamed(self, name: str) -> "Lattice":
        out = Lattice(self.group, self.actions, name=name, validate=False)
        return out


class LatticeMap:
    """An equivariance-checked integer matrix between two lattices.

    The matrix is (target.rank x source.rank), acting on coordinate columns.
    """

    __slots__ = ("source", "target", "matrix", "_np")

    def __init__(self, source: Lattice, target: Lattice, matrix: IntMatrix, validate: bool = True):
        if source.group != target.group:
            raise LatticeError("lattice map between different groups")
        if matrix.rows != target.rank or matrix.cols != source.rank:
            raise LatticeError(
                f"map matrix is {matrix.rows}x{matrix.cols}, expected {target.rank}x{source.rank}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        self._np = matrix.to_numpy() if matrix.max_abs() < _INT64_SAFE else None
        if validate:
            self.validate_equivariance()

    def matrix_np(self) -> np.ndarray:
        if self._np is None:
            raise OverflowError("map entries exceed int64")
        return self._np

    def validate_equivariance(self):
        m = self.matrix_np()
        for pos in range(len(self.source.group.generators)):
            lhs = _mm(self.target.actions[pos], m)
            rhs = _mm(m, self.source.actions[pos])
            if not np.array_equal(lhs, rhs):
                raise ValidationError(
                    f"map is not equivariant for generator "
                    f"{self.source.group.gen_names[pos]}"
                )

    def __repr__(self):
        return f"LatticeMap({self.source!r} -> {self.target!r})"

    def compose(self, inner: "LatticeMap") -> "LatticeMap":
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise LatticeError("composition mismatch")
        return LatticeMap(inner.source, self.target, self.matrix @ inner.matrix, validate=False)

    def is_injective(self) -> bool:
        return hnf(self.matrix, transform=False).rank == self.source.rank

    def is_surjective(self) -> bool:
        res = hnf(self.matrix, transform=False)
        if res.rank != self.target.rank:
            return False
        diag = snf_with_transforms(self.matrix).diag
        return all(d == 1 for d in diag)

    def apply(self, coords: list[int]) -> list[int]:
        return self.matrix.matvec(coords)


def identity_map(l: Lattice) -> LatticeMap:
    return LatticeMap(l, l, IntMatrix.identity(l.rank), validate=False)


# -- constructions --------------------------------------------------------------


def trivial_lattice(group: Group, name: str = "Z") -> Lattice:
    one = np.eye(1, dtype=np.int64)
    return Lattice(group, [one] * len(group.generators), name=name, validate=False, rank=1)


def zero_lattice(group: Group) -> Lattice:
    z = np.zeros((0, 0), dtype=np.int64)
    return Lattice(group, [z] * len(group.generators), name="0", validate=False, rank=0)


def free_lattice(group: Group, k: int, name: str | None = None) -> Lattice:
    """Free module of rank k over the group ring; basis (block, element),
    index block * |G| + element, with left-multiplication permutation actions."""
    if k < 0:
        raise LatticeError("free rank must be >= 0")
    n = group.order
    if k == 0:
        return zero_lattice(group)
    actions = []
    for g in group.gen_indices:
        a = np.zeros((k * n, k * n), dtype=np.int64)
        for i in range(k):
            for h in range(n):
                a[i * n + group.table[g][h], i * n + h] = 1
        actions.append(a)
    return Lattice(group, actions, name=name or f"Zpi^{k}", validate=False, rank=k * n)


def zpi_matrix_to_map(a: ZPiMatrix) -> LatticeMap:
    """The Z-linear map of free lattices induced by right multiplication."""
    group = a.group
    n = group.order
    src = free_lattice(group, a.rows)
    tgt = free_lattice(group, a.cols)
    mat = np.zeros((a.cols * n, a.rows * n), dtype=np.int64)
    for i in range(a.rows):
        for j in range(a.cols):
            coeffs = a.entries[i][j].coeffs
            if all(c == 0 for c in coeffs):
                continue
            for g in range(n):
                ginv = group.inv[g]
                col = i * n + g
                for h in range(n):
                    c = coeffs[group.table[ginv][h]]
                    if c:
                        mat[j * n + h, col] = c
    return LatticeMap(src, tgt, IntMatrix.from_numpy(mat))


def sublattice(ambient: Lattice, basis: IntMatrix, name: str = "") -> tuple[Lattice, LatticeMap]:
    """The sublattice spanned by the given (independent) columns, with the
    induced action obtained by exact solving; fails if the span is not
    invariant."""
    if basis.rows != ambient.rank:
        raise LatticeError("sublattice basis has wrong ambient rank")
    solver = LinearSolver(basis)
    if solver.rank != basis.cols:
        raise LatticeError("sublattice basis columns are dependent")
    actions = []
    for pos in range(len(ambient.group.generators)):
        moved = _mm(ambient.actions[pos], basis.to_numpy())
        sol = solver.solve(IntMatrix.from_numpy(moved))
        if sol is None:
            raise ValidationError(
                f"span is not invariant under generator {ambient.group.gen_names[pos]}"
            )
        actions.append(sol)
    sub = Lattice(ambient.group, actions, name=name, rank=basis.cols)
    incl = LatticeMap(sub, ambient, basis)
    return sub, incl


def kernel_lattice(f: LatticeMap, name: str = "") -> tuple[Lattice, LatticeMap]:
    """Kernel with its canonical (Hermite) basis and inclusion."""
    k = kernel_basis(f.matrix)
    return sublattice(f.source, k, name=name or f"ker({f.source.name or '?'})")


def image_sublattice(f: LatticeMap, name: str = "") -> tuple[Lattice, LatticeMap]:
    """Image of f inside its target, on the canonical basis of the image."""
    res = hnf(f.matrix, transform=False)
    basis = res.h.take_columns(list(range(res.rank)))
    return sublattice(f.target, basis, name=name or "im")


def quotient_with_lift(ambient: Lattice, b: IntMatrix, name: str = "", context: str = "") -> tuple[Lattice, LatticeMap, IntMatrix]:
    """Quotient of a lattice by the column span of b, with the projection and
    a (non-equivariant) integer section of it; raises TorsionObstruction if
    the quotient is not torsion-free."""
    st = snf_with_transforms(b)
    bad = tuple(d for d in sorted(st.diag) if d > 1)
    if bad:
        from .abgroups import AbGroup

        raise TorsionObstruction(
            AbGroup.from_factors(0, list(bad)).invariant_factors, context or name
        )
    r = len(st.diag)
    m = ambient.rank
    proj = st.p.take_rows(list(range(r, m)))
    lift = st.pinv.take_columns(list(range(r, m)))
    pr = proj.to_numpy()
    li = lift.to_numpy()
    actions = [_mm(_mm(pr, ambient.actions[pos]), li) for pos in range(len(ambient.group.generators))]
    quo = Lattice(ambient.group, actions, name=name, rank=m - r)
    proj_map = LatticeMap(ambient, quo, proj)
    return quo, proj_map, lift


def quotient_by_span(ambient: Lattice, b: IntMatrix, name: str = "", context: str = "") -> tuple[Lattice, LatticeMap]:
    """Quotient lattice and projection; raises TorsionObstruction if the
    quotient is not torsion-free."""
    quo, proj_map, _ = quotient_with_lift(ambient, b, name=name, context=context)
    return quo, proj_map


def quotient_lattice(ambient: Lattice, incl: LatticeMap, name: str = "") -> tuple[Lattice, LatticeMap]:
    """Quotient of a lattice by the image of an inclusion map into it."""
    if incl.target is not ambient and incl.target != ambient:
        raise LatticeError("inclusion does not land in the ambient lattice")
    return quotient_by_span(ambient, incl.matrix, name=name, context=f"quotient of {ambient.name}")


def cokernel_lattice(f: LatticeMap, name: str = "") -> tuple[Lattice, LatticeMap]:
    """Cokernel of f as a lattice (torsion in the cokernel is an error)."""
    return quotient_by_span(
        f.target, f.matrix, name=name or f"coker({f.target.name or '?'})",
        context="cokernel",
    )


def dual_lattice(l: Lattice, name: str = "") -> Lattice:
    """Integer-valued homomorphisms with the contragredient action
    g . phi = phi(g^-1 . -): action of g is transpose(action(g^-1))."""
    actions = [l.gen_inverse_action(pos).T.copy() for pos in range(len(l.group.generators))]
    return Lattice(l.group, actions, name=name or f"dual({l.name or '?'})")


def dual_map(f: LatticeMap, dual_source: Lattice | None = None, dual_target: Lattice | None = None) -> LatticeMap:
    """The contravariant dual of f: a map dual(target) -> dual(source)."""
    ds = dual_source or dual_lattice(f.target)
    dt = dual_target or dual_lattice(f.source)
    return LatticeMap(ds, dt, f.matrix.transpose())


def tensor_lattice(a: Lattice, b: Lattice, name: str = "") -> Lattice:
    """Tensor product over Z with the diagonal action (Kronecker matrices)."""
    if a.group != b.group:
        raise LatticeError("tensor product of lattices over different groups")
    actions = []
    for pos in range(len(a.group.generators)):
        x, y = a.actions[pos], b.actions[pos]
        if _maxabs(x) * _maxabs(y) < _INT64_SAFE:
            actions.append(np.kron(x, y))
        else:  # exact fallback for absurdly large entries
            xa, yb = IntMatrix.from_numpy(x), IntMatrix.from_numpy(y)
            k = IntMatrix.zeros(a.rank * b.rank, a.rank * b.rank)
            for i in range(a.rank):
                for j in range(a.rank):
                    v = xa.data[i][j]
                    if v:
                        for s in range(b.rank):
                            for t in range(b.rank):
                                k.data[i * b.rank + s][j * b.rank + t] = v * yb.data[s][t]
            actions.append(k)
    return Lattice(a.group, actions, name=name or f"({a.name})x({b.name})")


def direct_sum_lattice(a: Lattice, b: Lattice, name: str = "") -> Lattice:
    if a.group != b.group:
        raise LatticeError("direct sum of lattices over different groups")
    actions = []
    for pos in range(len(a.group.generators)):
        m = np.zeros((a.rank + b.rank, a.rank + b.rank), dtype=np.int64)
        m[: a.rank, : a.rank] = a.actions[pos]
        m[a.rank :, a.rank :] = b.actions[pos]
        actions.append(m)
    return Lattice(a.group, actions, name=name or f"({a.name})+({b.name})")


def restrict(l: Lattice, emb: SubgroupEmbedding, name: str = "") -> Lattice:
    """The same underlying Z-module viewed over the subgroup: each subgroup
    generator acts through its image in the ambient group."""
    if emb.ambient != l.group:
        raise LatticeError("embedding's ambient group does not match the lattice")
    actions = [
        l.element_action(emb.image[emb.subgroup.gen_indices[pos]])
        for pos in range(len(emb.subgroup.generators))
    ]
    return Lattice(emb.subgroup, actions, name=name or f"res({l.name or '?'})")


# -- serialization ---------------------------------------------------------------


def dump_lattice(l: Lattice, kind: str | None = None) -> str:
    from .intlinalg import dump_matrix

    lines = []
    if kind:
        lines.append(f"kind {kind}")
    lines.append(f"group {l.group.name}")
    lines.append(f"rank {l.rank}")
    for pos, nm in enumerate(l.group.gen_names):
        lines.append(f"generator {nm}")
        lines.append(dump_matrix(l.action_matrix(pos)).rstrip("\n"))
    return "\n".join(lines) + "\n"


def load_lattice(text: str, group: Group) -> Lattice:
    from .intlinalg import load_matrix

    lines = text.splitlines()
    i = 0
    if i < len(lines) and lines[i].startswith("kind "):
        i += 1
    if not lines[i].startswith("group "):
        raise LatticeError("bad lattice dump: missing group line")
    gname = lines[i].split(None, 1)[1]
    if gname != group.name:
        raise LatticeError(f"lattice dump is over group {gname}, expected {group.name}")
    i += 1
    rank = int(lines[i].split()[1])
    i += 1
    actions = []
    for nm in group.gen_names:
        if not lines[i].startswith("generator "):
            raise LatticeError("bad lattice dump: missing generator line")
        i += 1
        header = lines[i].split()
        rows = int(header[0])
        actions_text = "\n".join(lines[i : i + rows + 1])
        actions.append(load_matrix(actions_text))
        i += rows + 1
    lat = Lattice(group, actions)
    if lat.rank != rank:
        raise LatticeError("bad lattice dump: rank mismatch")
    return lat
