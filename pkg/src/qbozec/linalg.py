"""Dense exact linear algebra over any field whose elements support
+, -, *, /, is_zero().  Matrices are lists of row lists.  Pivoting always
scans rows/columns in order, so results are deterministic."""

from __future__ import annotations


def mat_vec(A, x, zero):
    out = []
    for row in A:
        acc = zero
        for a, b in zip(row, x):
            if not (a.is_zero() or b.is_zero()):
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(A, B, zero):
    if not B:
        return [[] for _ in A]
    ncols = len(B[0])
    out = []
    for row in A:
        acc = [zero] * ncols
        for k, a in enumerate(row):
            if a.is_zero():
                continue
            Bk = B[k]
            for j in range(ncols):
                if not Bk[j].is_zero():
                    acc[j] = acc[j] + a * Bk[j]
        out.append(acc)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def rref(A, zero, one):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = [list(row) for row in A]
    nrows = len(R)
    ncols = len(R[0]) if nrows else 0
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        sel = None
        for r in range(prow, nrows):
            if not R[r][col].is_zero():
                sel = r
                break
        if sel is None:
            continue
        R[prow], R[sel] = R[sel], R[prow]
        inv = one / R[prow][col]
        R[prow] = [x * inv for x in R[prow]]
        for r in range(nrows):
            if r != prow and not R[r][col].is_zero():
                f = R[r][col]
                R[r] = [x - f * y for x, y in zip(R[r], R[prow])]
        pivots.append(col)
        prow += 1
        if prow == nrows:
            break
    return R, pivots


def rank(A, zero, one) -> int:
    if not A:
        return 0
    _, pivots = rref(A, zero, one)
    return len(pivots)


def solve(A, b, zero, one):
    """Solve A x = b exactly.  Returns x, or None if inconsistent.
    If the system is underdetermined, free variables are set to zero."""
    if not A:
        return []
    ncols = len(A[0])
    aug = [list(row) + [bb] for row, bb in zip(A, b)]
    R, pivots = rref(aug, zero, one)
    if ncols in pivots:
        return None  # pivot in the constant column: inconsistent
    x = [zero] * ncols
    for r, col in enumerate(pivots):
        x[col] = R[r][ncols]
    return x


def solve_unique(A, b, zero, one):
    """Solve A x = b requiring a unique solution; raises otherwise."""
    if not A:
        if any(not bb.is_zero() for bb in b):
            raise ValueError("inconsistent empty system")
        return []
    ncols = len(A[0])
    aug = [list(row) + [bb] for row, bb in zip(A, b)]
    R, pivots = rref(aug, zero, one)
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) != ncols:
        raise ValueError("linear system is underdetermined")
    x = [zero] * ncols
    for r, col in enumerate(pivots):
        x[col] = R[r][ncols]
    return x


def nullspace(A, ncols, zero, one):
    """Basis of the right kernel of A (vectors of length ncols)."""
    if not A:
        basis = []
        for j in range(ncols):
            v = [zero] * ncols
            v[j] = one
            basis.append(v)
        return basis
    R, pivots = rref(A, zero, one)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [zero] * ncols
        v[j] = one
        for r, col in enumerate(pivots):
            v[col] = zero - R[r][j]
        basis.append(v)
    return basis


def inverse(A, zero, one):
    n = len(A)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug, zero, one)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def det(A, zero, one):
    """Determinant by fraction-full elimination (fields are exact here)."""
    n = len(A)
    if n == 0:
        return one
    M = [list(row) for row in A]
    out = one
    for col in range(n):
        sel = None
        for r in range(col, n):
            if not M[r][col].is_zero():
                sel = r
                break
        if sel is None:
            return zero
        if sel != col:
            M[col], M[sel] = M[sel], M[col]
            out = zero - out
        out = out * M[col][col]
        inv = one / M[col][col]
        for r in range(col + 1, n):
            if not M[r][col].is_zero():
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return out


def column_span_coords(basis_cols, target, zero, one):
    """Express target in the span of basis_cols (lists of equal length).
    Returns coordinates or None if target is outside the span."""
    if not basis_cols:
        return [] if all(t.is_zero() for t in target) else None
    A = [[col[r] for col in basis_cols] for r in range(len(target))]
    return solve(A, target, zero, one)
