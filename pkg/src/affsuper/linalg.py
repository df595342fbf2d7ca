# Tiny exact linear algebra over any field-like scalar type.
#
# Entries only need +, -, *, /, bool() (nonzero test) and a `zero`/`one`
# sample; this covers Fraction and GaussRational.  Matrices are lists of
# lists and stay small (a few hundred rows at most), so plain Gaussian
# elimination is fine.


def row_reduce(rows):
    """In-place fraction-free-ish RREF; returns (rref_rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows):
    return len(row_reduce(rows)[1])


def nullspace(rows, zero, one):
    """Basis of the right nullspace of the matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = zero - rref[r][f]
        basis.append(v)
    return basis


def solve(rows, rhs, zero):
    """One solution of A x = b, or None if inconsistent."""
    if not rows:
        return None
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = row_reduce(aug)
    ncols = len(rows[0])
    for row in rref:
        if row[-1] and not any(row[c] for c in range(ncols)):
            return None
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        if c < ncols:
            x[c] = rref[r][-1]
    return x


def in_span(vectors, target):
    """Is `target` in the span of `vectors` (all lists of scalars)?"""
    if not vectors:
        return not any(target)
    cols = [list(v) for v in vectors]
    rows = [[col[i] for col in cols] for i in range(len(target))]
    zero = target[0] - target[0]
    return solve(rows, list(target), zero) is not None
