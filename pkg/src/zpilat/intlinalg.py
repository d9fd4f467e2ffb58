"""Exact integer matrix algorithms: Hermite/Smith forms, kernels, solving.

Everything public is exact.  Matrices are arbitrary-precision (Python int)
internally; numpy int64 is used only as a fast path where products provably
fit, and for the modular cokernel routine whose exactness rests on an
explicitly supplied annihilator bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abgroups import AbGroup, factorint

_NP_SAFE = 2**62


class DimensionMismatch(ValueError):
    pass


class IntMatrix:
    """A dense integer matrix with exact arithmetic."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: list[list[int]], rows: int | None = None, cols: int | None = None):
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        self.rows = rows
        self.cols = cols
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionMismatch("inconsistent matrix data")
        self.data = data

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> "IntMatrix":
        return cls([[int(x) for x in r] for r in rows])

    @classmethod
    def from_columns(cls, cols: list[list[int]], nrows: int | None = None) -> "IntMatrix":
        if not cols:
            return cls.zeros(nrows or 0, 0)
        nrows = len(cols[0])
        return cls([[int(c[i]) for c in cols] for i in range(nrows)])

    @classmethod
    def from_numpy(cls, a: np.ndarray) -> "IntMatrix":
        return cls([[int(x) for x in row] for row in a], a.shape[0], a.shape[1])

    def to_numpy(self) -> np.ndarray:
        if self.max_abs() >= _NP_SAFE:
            raise OverflowError("entries too large for int64")
        return np.array(self.data, dtype=np.int64).reshape(self.rows, self.cols)

    # -- accessors ----------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def take_columns(self, idx: list[int]) -> "IntMatrix":
        return IntMatrix([[row[j] for j in idx] for row in self.data], self.rows, len(idx))

    def take_rows(self, idx: list[int]) -> "IntMatrix":
        return IntMatrix([list(self.data[i]) for i in idx], len(idx), self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def copy(self) -> "IntMatrix":
        return IntMatrix([list(r) for r in self.data], self.rows, self.cols)

    def max_abs(self) -> int:
        return max((abs(x) for row in self.data for x in row), default=0)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.data], self.rows, self.cols)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self.data], self.rows, self.cols)

    def _same_shape(self, other: "IntMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(f"{self!r} vs {other!r}")

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self!r} @ {other!r}")
        # Machine-width product when it provably cannot overflow.
        bound = self.max_abs() * other.max_abs() * max(self.cols, 1)
        if bound < _NP_SAFE and self.rows * other.cols > 256:
            c = self.to_numpy() @ other.to_numpy()
            return IntMatrix.from_numpy(c)
        bt = other.transpose().data
        out = [
            [sum(a * b for a, b in zip(row, col)) for col in bt]
            for row in self.data
        ]
        return IntMatrix(out, self.rows, other.cols)

    def matvec(self, v: list[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]


def hstack(mats: list[IntMatrix]) -> IntMatrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise DimensionMismatch("hstack with differing row counts")
    data = [sum((m.data[i] for m in mats), []) for i in range(rows)]
    return IntMatrix(data, rows, sum(m.cols for m in mats))


def vstack(mats: list[IntMatrix]) -> IntMatrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise DimensionMismatch("vstack with differing column counts")
    data = [list(r) for m in mats for r in m.data]
    return IntMatrix(data, sum(m.rows for m in mats), cols)


# -- Hermite normal form (column style) ---------------------------------------


@dataclass
class HnfResult:
    h: IntMatrix
    u: IntMatrix | None
    pivots: list[tuple[int, int]]  # (row, column-slot of h), increasing rows

    @property
    def rank(self) -> int:
        return len(self.pivots)


def hnf(m: IntMatrix, transform: bool = True) -> HnfResult:
    """Canonical column Hermite form h = m @ u with u unimodular.

    Columns are in echelon order with strictly increasing pivot rows,
    positive pivots, entries to the left of each pivot reduced into
    [0, pivot), and zero columns trailing.
    """
    nrows, ncols = m.rows, m.cols
    cols = [m.column(j) for j in range(ncols)]
    ucols = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)] if transform else None

    def colop_sub(j, k, q):
        # col_j -= q * col_k
        cj, ck = cols[j], cols[k]
        for i in range(nrows):
            cj[i] -= q * ck[i]
        if ucols is not None:
            uj, uk = ucols[j], ucols[k]
            for i in range(ncols):
                uj[i] -= q * uk[i]

    def swap(j, k):
        cols[j], cols[k] = cols[k], cols[j]
        if ucols is not None:
            ucols[j], ucols[k] = ucols[k], ucols[j]

    def negate(j):
        cols[j] = [-x for x in cols[j]]
        if ucols is not None:
            ucols[j] = [-x for x in ucols[j]]

    r = 0
    pivots: list[tuple[int, int]] = []
    for i in range(nrows):
        if r == ncols:
            break
        # Euclid across row i in the active columns until one survivor remains.
        while True:
            nz = [j for j in range(r, ncols) if cols[j][i] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][i]))
            if jmin != r:
                swap(r, jmin)
            a = cols[r][i]
            done = True
            for j in range(r + 1, ncols):
                v = cols[j][i]
                if v:
                    q = v // a
                    if q:
                        colop_sub(j, r, q)
                    if cols[j][i]:
                        done = False
            if done:
                break
        if cols[r][i] == 0:
            continue
        if cols[r][i] < 0:
            negate(r)
        p = cols[r][i]
        for j in range(r):
            q = cols[j][i] // p
            if q:
                colop_sub(j, r, q)
        pivots.append((i, r))
        r += 1
    h = IntMatrix.from_columns(cols, nrows) if ncols else IntMatrix.zeros(nrows, 0)
    u = IntMatrix.from_columns(ucols, ncols) if transform and ncols else (
        IntMatrix.zeros(ncols, ncols) if transform else None
    )
    return HnfResult(h, u, pivots)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form the canonical basis of the integer kernel {v : m v = 0}."""
    res = hnf(m, transform=True)
    r = res.rank
    ker_cols = [res.u.column(j) for j in range(r, m.cols)]
    if not ker_cols:
        return IntMatrix.zeros(m.cols, 0)
    canon = hnf(IntMatrix.from_columns(ker_cols, m.cols), transform=False)
    return canon.h.take_columns(list(range(canon.rank)))


def solve_integer(a: IntMatrix, b: IntMatrix) -> IntMatrix | None:
    """Exact solution x of a @ x = b over the integers, or None if there is none."""
    return LinearSolver(a).solve(b)


class LinearSolver:
    """Caches the Hermite data of a fixed matrix for repeated exact solves."""

    def __init__(self, a: IntMatrix):
        self.a = a
        self._res = hnf(a, transform=True)
        self._hcols = [self._res.h.column(j) for j in range(self._res.rank)]
        self._ucols = [self._res.u.column(j) for j in range(self._res.rank)]

    @property
    def rank(self) -> int:
        return self._res.rank

    def solve(self, b: IntMatrix) -> IntMatrix | None:
        if b.rows != self.a.rows:
            raise DimensionMismatch(f"solve: {self.a!r} vs {b!r}")
        xcols = []
        for jb in range(b.cols):
            resid = b.column(jb)
            x = [0] * self.a.cols
            ok = True
            for k, (i, _) in enumerate(self._res.pivots):
                v = resid[i]
                p = self._hcols[k][i]
                if v % p != 0:
                    ok = False
                    break
                q = v // p
                if q:
                    hk = self._hcols[k]
                    for t in range(self.a.rows):
                        resid[t] -= q * hk[t]
                    uk = self._ucols[k]
                    for t in range(self.a.cols):
                        x[t] += q * uk[t]
            if not ok or any(resid):
                return None
            xcols.append(x)
        return IntMatrix.from_columns(xcols, self.a.cols)


def saturation(m: IntMatrix) -> IntMatrix:
    """Canonical basis of the saturation {v : k v in colspan(m) for some k > 0}."""
    if m.cols == 0:
        return IntMatrix.zeros(m.rows, 0)
    # The saturation is the kernel of the projection presenting coker(m)'s
    # free part; computing ker(ker(m^T)^T) avoids any fraction arithmetic.
    kt = kernel_basis(m.transpose())
    return kernel_basis(kt.transpose())


# -- Smith normal form ---------------------------------------------------------


@dataclass
class SnfResult:
    invariant_factors: tuple[int, ...]  # d1 | d2 | ... | dr including any 1s
    coker: AbGroup


def _diagonalize(a: list[list[int]], hooks=None) -> list[int]:
    """In-place reduction of ``a`` to diagonal form by unimodular row/column
    operations; returns the (positive, unordered) diagonal values.

    ``hooks``, if given, is an object receiving row_op/col_op/swaps for
    transform tracking.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while True:
        # locate minimal-absolute-value nonzero entry of the active submatrix
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if abs(v) == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            a[t], a[bi] = a[bi], a[t]
            if hooks:
                hooks.row_swap(t, bi)
        if bj != t:
            for row in a:
                row[t], row[bj] = row[bj], row[t]
            if hooks:
                hooks.col_swap(t, bj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                        if hooks:
                            hooks.row_op(i, t, q)
                    if a[i][t]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared in the column; promote it
                i0 = min(
                    (i for i in range(t + 1, m) if a[i][t]),
                    key=lambda i: abs(a[i][t]),
                )
                a[t], a[i0] = a[i0], a[t]
                if hooks:
                    hooks.row_swap(t, i0)
                continue
            for j in range(t + 1, n):
                v = a[t][j]
                if v:
                    q = v // p
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                        if hooks:
                            hooks.col_op(j, t, q)
                    if a[t][j]:
                        dirty = True
            if not dirty:
                break
            j0 = min(
                (j for j in range(t + 1, n) if a[t][j]),
                key=lambda j: abs(a[t][j]),
            )
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            if hooks:
                hooks.col_swap(t, j0)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if hooks:
                hooks.row_negate(t)
        diag.append(a[t][t])
        t += 1
        if t == m or t == n:
            break
    return diag


def _chain_from_diagonal(diag: list[int]) -> tuple[int, ...]:
    nontrivial = AbGroup.from_factors(0, [d for d in diag if d > 1]).invariant_factors
    ones = len(diag) - len(nontrivial)
    return tuple([1] * ones + list(nontrivial))


def snf(m: IntMatrix) -> SnfResult:
    """Invariant factors of ``m`` and the cokernel of m : Z^cols -> Z^rows."""
    a = [list(r) for r in m.data]
    diag = _diagonalize(a)
    chain = _chain_from_diagonal(diag)
    coker = AbGroup.from_factors(m.rows - len(diag), [d for d in diag if d > 1])
    return SnfResult(chain, coker)


class _TransformHooks:
    """Tracks S = P A Q with P inverse maintained alongside."""

    def __init__(self, m: int, n: int):
        self.p = IntMatrix.identity(m).data
        self.pinv = IntMatrix.identity(m).data
        self.q = IntMatrix.identity(n).data

    def row_swap(self, i, j):
        self.p[i], self.p[j] = self.p[j], self.p[i]
        for row in self.pinv:
            row[i], row[j] = row[j], row[i]

    def row_op(self, i, t, q):
        # row_i -= q * row_t  =>  pinv col_t += q * pinv col_i
        pi, pt = self.p[i], self.p[t]
        for k in range(len(pt)):
            pi[k] -= q * pt[k]
        for row in self.pinv:
            row[t] += q * row[i]

    def row_negate(self, i):
        self.p[i] = [-x for x in self.p[i]]
        for row in self.pinv:
            row[i] = -row[i]

    def col_swap(self, i, j):
        for row in self.q:
            row[i], row[j] = row[j], row[i]

    def col_op(self, j, t, q):
        # col_j -= q * col_t on A  =>  same on Q
        for row in self.q:
            row[j] -= q * row[t]


@dataclass
class SnfTransforms:
    diag: list[int]
    p: IntMatrix
    pinv: IntMatrix
    q: IntMatrix


def snf_with_transforms(m: IntMatrix) -> SnfTransforms:
    """Diagonal s = p @ m @ q with p, q unimodular and p^-1 returned too.

    The diagonal is positive but not divisibility-ordered.
    """
    a = [list(r) for r in m.data]
    hooks = _TransformHooks(m.rows, m.cols)
    diag = _diagonalize(a, hooks)
    return SnfTransforms(
        diag,
        IntMatrix(hooks.p, m.rows, m.rows),
        IntMatrix(hooks.pinv, m.rows, m.rows),
        IntMatrix(hooks.q, m.cols, m.cols),
    )


# -- cokernel with a known annihilator ----------------------------------------


def _padic_pivot_valuations(a: np.ndarray, p: int, kmax: int) -> list[int]:
    """Valuations of the nonzero elementary divisors of ``a`` over the p-adics,
    assuming every nonzero divisor has valuation < kmax.

    Dense elimination mod p^kmax with unit-first pivot sweeps; int64 working
    values stay far below overflow because p^kmax is tiny.
    """
    pk = p**kmax
    mat = np.array(a, dtype=np.int64, copy=True) % pk
    m, n = mat.shape
    vals: list[int] = []
    top = 0
    for v in range(kmax):
        pv = p**v
        pv1 = p ** (v + 1)
        pkv = p ** (kmax - v)
        while top < m:
            progressed = False
            for j in range(n):
                if top >= m:
                    break
                col = mat[top:, j]
                hit = np.nonzero(col % pv1)[0]
                if hit.size == 0:
                    continue
                i0 = top + int(hit[0])
                if i0 != top:
                    mat[[top, i0]] = mat[[i0, top]]
                piv = int(mat[top, j])
                u = piv // pv
                uinv = pow(u, -1, pkv)
                below = mat[top + 1 :, j]
                rows = np.nonzero(below)[0]
                if rows.size:
                    q = ((below[rows] // pv) * uinv) % pkv
                    mat[top + 1 + rows] = (mat[top + 1 + rows] - q[:, None] * mat[top][None, :]) % pk
                mat[top] = 0  # pivot row is spent (column ops on the rest of the row)
                vals.append(v)
                top += 1
                progressed = True
            if not progressed:
                break
    return vals


def coker_invariants_bounded(r: IntMatrix | np.ndarray, exponent: int) -> AbGroup:
    """Cokernel of r : Z^cols -> Z^rows, given that every finite invariant
    factor of r divides ``exponent``.

    Works prime by prime modulo small prime powers; exact under the stated
    bound, with the per-prime ranks cross-checked against each other.
    """
    if isinstance(r, IntMatrix):
        m, n = r.rows, r.cols
        arr = r.to_numpy() if m and n else np.zeros((m, n), dtype=np.int64)
    else:
        arr = np.asarray(r, dtype=np.int64)
        m, n = arr.shape
    if exponent < 1:
        raise ValueError("exponent bound must be >= 1")
    if n == 0 or m == 0:
        return AbGroup(m, ())
    primes = factorint(exponent)
    if not primes:
        if arr.any():
            raise ValueError("exponent 1 demands a zero relation matrix")
        return AbGroup(m, ())
    rank = None
    primary: dict[int, list[int]] = {}
    for p, e in sorted(primes.items()):
        vals = _padic_pivot_valuations(arr, p, e + 1)
        if rank is None:
            rank = len(vals)
        elif rank != len(vals):
            raise ArithmeticError(
                f"inconsistent ranks between primes: {rank} vs {len(vals)} at p={p}"
            )
        exps = sorted((v for v in vals if v > 0), reverse=True)
        if exps:
            primary[p] = exps
    return AbGroup.from_primary(m - rank, primary)


# -- serialization --------------------------------------------------------------


def dump_matrix(m: IntMatrix) -> str:
    """First line ``rows cols``, then row-major whitespace-separated integers."""
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in m.data)
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> IntMatrix:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix dump must start with 'rows cols'")
    rows, cols = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
    it = iter(body)
    data = [[int(next(it)) for _ in range(cols)] for _ in range(rows)]
    return IntMatrix(data, rows, cols)
