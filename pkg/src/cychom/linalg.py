"""Exact rank / kernel / solve primitives on top of ExactMatrix.

Field computations use dense reduced row echelon form with the
leftmost-pivot rule, so kernels come out in a canonical reduced
column-echelon basis (pivot order lexicographic in the column index).
Integer computations reduce to the Smith normal form.
"""

from __future__ import annotations

from .matrix import ExactMatrix
from .rings import BaseRing, Scalar, ZZ
from .snf import smith_normal_form


# ---------------------------------------------------------------------------
# fields


def rref(A: ExactMatrix) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form (dense) and the list of pivot columns."""
    ring = A.ring
    if not ring.is_field:
        raise ValueError("rref requires a field")
    M = A.to_rows()
    nrows, ncols = A.nrows, A.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = ring.inv(M[r][c])
        if inv != 1:
            M[r] = [ring.mul(v, inv) for v in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                row_i, row_r = M[i], M[r]
                M[i] = [ring.sub(row_i[k], ring.mul(f, row_r[k])) for k in range(ncols)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def rank(A: ExactMatrix) -> int:
    if A.ring.is_field:
        return len(rref(A)[1])
    _, D, _ = smith_normal_form(A)
    return len([i for i in range(min(D.nrows, D.ncols)) if D.entry(i, i) != 0])


def rank_kernel(A: ExactMatrix) -> tuple[int, ExactMatrix]:
    """Rank and a canonical kernel basis (columns) over a field.

    The basis vectors correspond to the free columns of the RREF in
    increasing order; each has a 1 in its free coordinate and the usual
    negated pivot-row entries elsewhere, so the result is reproducible
    across runs.
    """
    ring = A.ring
    M, pivots = rref(A)
    pivot_set = set(pivots)
    free = [c for c in range(A.ncols) if c not in pivot_set]
    entries: dict[tuple[int, int], Scalar] = {}
    for k, c in enumerate(free):
        entries[(c, k)] = ring.one
        for r, pc in enumerate(pivots):
            v = M[r][c]
            if v != 0:
                entries[(pc, k)] = ring.neg(v)
    return len(pivots), ExactMatrix(ring, A.ncols, len(free), entries, _normalized=True)


def solve_field(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Solve A X = B over a field; raises ValueError if inconsistent.

    When the solution is not unique the free variables are set to zero,
    which again makes the output canonical.
    """
    ring = A.ring
    aug = A.hstack(B)
    M, pivots = rref(aug)
    n = A.ncols
    if any(p >= n for p in pivots):
        raise ValueError("inconsistent linear system")
    entries: dict[tuple[int, int], Scalar] = {}
    for r, pc in enumerate(pivots):
        for j in range(B.ncols):
            v = M[r][n + j]
            if v != 0:
                entries[(pc, j)] = v
    return ExactMatrix(ring, n, B.ncols, entries, _normalized=True)


def is_invertible(A: ExactMatrix) -> bool:
    """Invertibility over the base: full-rank square (fields) or |det| = 1 (Z)."""
    if A.nrows != A.ncols:
        return False
    if A.ring.is_field:
        return rank(A) == A.nrows
    from .snf import det_bareiss

    return det_bareiss(A) in (1, -1)


# ---------------------------------------------------------------------------
# integers


def integer_kernel_basis(A: ExactMatrix) -> ExactMatrix:
    """Basis (columns) of ker(A) as a direct summand of Z^ncols.

    Taken from the columns of V in U A V = D corresponding to zero
    diagonal entries; these always span the full integer kernel lattice.
    """
    if A.ring != ZZ:
        raise ValueError("integer kernel requires base Z")
    _, D, V = smith_normal_form(A)
    r = len([i for i in range(min(D.nrows, D.ncols)) if D.entry(i, i) != 0])
    cols = list(range(r, A.ncols))
    return V.submatrix(list(range(A.ncols)), cols)


def integer_solve(K: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Solve K X = B over Z; raises ValueError when no integral solution exists.

    K need not be square but must have linearly independent columns,
    so any solution is unique.
    """
    if K.ring != ZZ or B.ring != ZZ:
        raise ValueError("integer_solve requires base Z")
    U, D, V = smith_normal_form(K)
    r = len([i for i in range(min(D.nrows, D.ncols)) if D.entry(i, i) != 0])
    if r != K.ncols:
        raise ValueError("columns are not independent")
    UB = U * B
    Y_entries: dict[tuple[int, int], int] = {}
    for (i, j), v in UB.entries.items():
        if i >= r:
            raise ValueError("no solution over Z")
        d = D.entry(i, i)
        if v % d:
            raise ValueError("no integral solution")
        Y_entries[(i, j)] = v // d
    Y = ExactMatrix(ZZ, K.ncols, B.ncols, Y_entries, _normalized=True)
    return V * Y
