"""Exact integer matrix utilities: HNF, SNF with transforms, inverses.

All matrices are lists of rows of ints (or Fractions where noted).  Sizes
here are tiny (rank <= 3 in practice), so clarity beats asymptotics.
"""

from fractions import Fraction


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(a):
    return [row[:] for row in a]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    n, m = len(a), len(b[0]) if b else 0
    k = len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def matvec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def det(a):
    """Determinant via exact fraction-free Gaussian elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in a]
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        d *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    assert d.denominator == 1
    return int(d)


def rational_inverse(a):
    """Inverse of a square integer (or rational) matrix, as Fractions."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def integer_inverse(a):
    """Inverse of a unimodular integer matrix, as ints."""
    inv = rational_inverse(a)
    out = []
    for row in inv:
        r = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            r.append(int(x))
        out.append(r)
    return out


def row_hnf(a):
    """Row-style Hermite normal form (echelon, positive pivots,
    entries above a pivot reduced into [0, pivot))."""
    m = copy_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        # find a row with nonzero entry in column c at or below r
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        # euclidean elimination below
        while True:
            nz = [i for i in range(r + 1, rows) if m[i][c] != 0]
            if not nz:
                break
            # move smallest absolute value into pivot position
            best = min(nz + [r], key=lambda i: abs(m[i][c]))
            if best != r:
                m[r], m[best] = m[best], m[r]
            for i in range(r + 1, rows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    # drop zero rows
    return [row for row in m if any(row)]


def column_hnf(a):
    """Canonical basis (as columns) of the column span of `a`."""
    rows = transpose(a)
    h = row_hnf(rows)
    return transpose(h)


def snf(a):
    """Smith normal form with transforms: returns (s, u, v) with
    u @ a @ v = s, u and v unimodular, s diagonal with the divisor chain
    s[0][0] | s[1][1] | ... and nonnegative diagonal."""
    m = copy_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i -= q * row_j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, q):  # col_i -= q * col_j
        for row in m:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # find pivot: smallest nonzero entry in the remaining block
        entries = [(abs(m[i][j]), i, j) for i in range(t, rows)
                   for j in range(t, cols) if m[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, q)
                    if m[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, q)
                    if m[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # ensure pivot divides the rest of the block
        piv = m[t][t]
        bad = next(((i, j) for i in range(t + 1, rows)
                    for j in range(t + 1, cols) if m[i][j] % piv != 0), None)
        if bad is not None:
            # fold the offending row into the pivot row; the next column
            # reduction then replaces the pivot by a strictly smaller gcd
            add_row(t, bad[0], -1)  # row_t += row_bad
            continue
        if m[t][t] < 0:
            negate_row(t)
        t += 1

    s = [[m[i][j] if i == j else 0 for j in range(cols)] for i in range(rows)]
    return s, u, v


def invariant_factors(a, ambient_rank=None):
    """Nontrivial invariant factors and free rank of Z^r / colspan(a)."""
    rows = len(a)
    r = ambient_rank if ambient_rank is not None else rows
    if rows == 0 or not a or not a[0]:
        return [], r
    s, _, _ = snf(a)
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    nonzero = [d for d in diag if d != 0]
    factors = [d for d in nonzero if d != 1]
    free_rank = r - len(nonzero)
    return factors, free_rank


def adapted_basis(sub, ambient_rank):
    """Adapted basis for a sublattice of Z^r given by columns of `sub`.

    Returns (basis, dlist): `basis` is a unimodular r x r matrix whose
    columns b_i satisfy: the sublattice is spanned by {d_i * b_i : d_i != 0},
    with dlist the divisor chain padded by zeros for free directions.
    """
    r = ambient_rank
    if not sub or not sub[0]:
        return identity(r), [0] * r
    s, u, _ = snf(sub)
    uinv = integer_inverse(u)
    diag = [s[i][i] if i < len(s[0]) else 0 for i in range(r)]
    return uinv, diag
