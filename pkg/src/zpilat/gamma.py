"""Whitehead's quadratic functor on lattices, realized as the symmetric part
of the tensor square.

Basis order: pairs (i, j) with i <= j, lexicographic; (i, i) is the square
basis vector b_i (x) b_i and (i, j) with i < j the symmetrized b_i (x) b_j +
b_j (x) b_i.  The action is computed by pushing each basis pair through the
tensor-square action and reading the result back off the symmetric basis;
the read-off is validated to reproduce the tensor image exactly.
"""

from __future__ import annotations

import numpy as np

from .intlinalg import IntMatrix
from .lattices import Lattice, LatticeMap, LatticeError, _INT64_SAFE, tensor_lattice


def gamma_rank(r: int) -> int:
    return r * (r + 1) // 2


def pair_indices(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays I, J with (I[k], J[k]) the k-th basis pair, I <= J, lex order."""
    ii, jj = np.triu_indices(r)
    return ii.astype(np.int64), jj.astype(np.int64)


def pair_position(i: int, j: int, r: int) -> int:
    if i > j:
        i, j = j, i
    return i * r - i * (i - 1) // 2 + (j - i)


def _symmetric_square_matrix(c: np.ndarray, rows_r: int, cols_r: int) -> np.ndarray:
    """Matrix of the induced map on symmetric squares for a linear map with
    matrix ``c`` (rows_r x cols_r): basis pair (a, b) of the source maps to
    the symmetrization of c_a (x) c_b, expressed in target pairs."""
    if _maxabs := int(np.abs(c).max(initial=0)):
        if 2 * _maxabs * _maxabs >= _INT64_SAFE:
            raise OverflowError("entries too large for the symmetric-square fast path")
    ri, rj = pair_indices(rows_r)
    ci, cj = pair_indices(cols_r)
    # entry((k,l),(a,b)) = c[k,a] c[l,b] + c[k,b] c[l,a], halved on square columns
    m = c[np.ix_(ri, ci)] * c[np.ix_(rj, cj)] + c[np.ix_(ri, cj)] * c[np.ix_(rj, ci)]
    sq = ci == cj
    m[:, sq] //= 2
    return m


def _validate_readoff(c: np.ndarray, m: np.ndarray, rows_r: int, cols_r: int, what: str):
    """Check that the symmetric read-off agrees with the full tensor image on
    a deterministic sample of basis pairs (all pairs when small)."""
    ncols = m.shape[1]
    if ncols <= 4096:
        sample = range(ncols)
    else:
        rng = np.random.default_rng(ncols)
        sample = rng.choice(ncols, size=256, replace=False)
    ci, cj = pair_indices(cols_r)
    ri, rj = pair_indices(rows_r)
    for k in sample:
        a, b = int(ci[k]), int(cj[k])
        w = np.outer(c[:, a], c[:, b])
        w = w + w.T if a != b else w
        # read-off must reproduce w on and above the diagonal (w is symmetric)
        if not np.array_equal(w[ri, rj], m[:, k]) or not np.array_equal(w, w.T):
            raise LatticeError(f"{what}: symmetric-square restriction failed on pair ({a},{b})")


def gamma(l: Lattice, name: str = "", validate: bool = True) -> Lattice:
    """The quadratic functor applied to a lattice, with the diagonal action."""
    actions = []
    for pos in range(len(l.group.generators)):
        c = l.actions[pos]
        m = _symmetric_square_matrix(c, l.rank, l.rank)
        if validate:
            _validate_readoff(c, m, l.rank, l.rank, f"gamma({l.name or '?'})")
        actions.append(m)
    return Lattice(
        l.group,
        actions,
        name=name or f"Gamma({l.name or '?'})",
        validate=validate,
        rank=gamma_rank(l.rank),
    )


def gamma_map(f: LatticeMap, gamma_source: Lattice | None = None, gamma_target: Lattice | None = None) -> LatticeMap:
    """Induced map on symmetric squares: squares to squares, symmetrized
    pairs to symmetrized pairs; functorial."""
    gs = gamma_source if gamma_source is not None else gamma(f.source)
    gt = gamma_target if gamma_target is not None else gamma(f.target)
    c = f.matrix_np()
    m = _symmetric_square_matrix(c, f.target.rank, f.source.rank)
    _validate_readoff(c, m, f.target.rank, f.source.rank, "gamma_map")
    return LatticeMap(gs, gt, IntMatrix.from_numpy(m))


def embed_symmetric_square(l: Lattice, gamma_l: Lattice | None = None, tensor_l: Lattice | None = None) -> LatticeMap:
    """The inclusion of the symmetric part into the tensor square:
    (i, i) -> b_i (x) b_i and (i, j) -> b_i (x) b_j + b_j (x) b_i."""
    g = gamma_l if gamma_l is not None else gamma(l)
    t = tensor_l if tensor_l is not None else tensor_lattice(l, l, name=f"({l.name})^(x)2")
    r = l.rank
    ii, jj = pair_indices(r)
    e = np.zeros((r * r, gamma_rank(r)), dtype=np.int64)
    for k in range(gamma_rank(r)):
        i, j = int(ii[k]), int(jj[k])
        e[i * r + j, k] += 1
        if i != j:
            e[j * r + i, k] += 1
    return LatticeMap(g, t, IntMatrix.from_numpy(e))
