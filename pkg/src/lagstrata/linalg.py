"""Dense exact linear algebra over a coefficient field.

Matrices are lists of row lists of field scalars.  Echelon forms are fully
reduced with pivots normalized to 1 and pivot columns chosen left to right,
so the row space of a matrix has a unique representative and subspace
equality is matrix equality.
"""

from __future__ import annotations

from .fields import check_same_field


def rref(rows, field):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are kept in place
    at the bottom.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not field.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(nrows):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                mi, mr = m[i], m[r]
                m[i] = [field.sub(mi[j], field.mul(f, mr[j])) for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows, field) -> int:
    if not rows:
        return 0
    return len(rref(rows, field)[1])


def right_nullspace(rows, field):
    """Basis of ``{x : M x = 0}``, canonical w.r.t. the rref of M."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(red[i][fc])
        basis.append(v)
    return basis


def solve(rows, rhs, field):
    """One solution of ``M x = rhs`` or ``None`` if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    # pivot in the augmented column means inconsistency
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return x


def mat_mul(A, B, field):
    n = len(B)
    ncols = len(B[0]) if n else 0
    Bt = [[B[k][j] for k in range(n)] for j in range(ncols)]
    out = []
    for row in A:
        orow = []
        for col in Bt:
            s = field.zero
            for a, b in zip(row, col):
                if not field.is_zero(a) and not field.is_zero(b):
                    s = field.add(s, field.mul(a, b))
            orow.append(s)
        out.append(orow)
    return out


def mat_vec(A, v, field):
    out = []
    for row in A:
        s = field.zero
        for a, b in zip(row, v):
            if not field.is_zero(a) and not field.is_zero(b):
                s = field.add(s, field.mul(a, b))
        out.append(s)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def identity(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_inverse(A, field):
    n = len(A)
    aug = [list(A[i]) + [field.one if j == i else field.zero for j in range(n)]
           for i in range(n)]
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def mat_eq(A, B, field) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for a, b in zip(ra, rb):
            if not field.is_zero(field.sub(a, b)):
                return False
    return True


def is_symmetric(M, field) -> bool:
    n = len(M)
    for i in range(n):
        for j in range(i + 1, n):
            if not field.is_zero(field.sub(M[i][j], M[j][i])):
                return False
    return True


def symmetric_with_kernel(field, n, kernel_rows, rng, diag=None):
    """Random symmetric n-by-n matrix whose kernel is exactly the given span.

    Extends the kernel basis to an invertible X (kernel vectors as the first
    columns) and returns ``(X^-1)^T D X^-1`` with D zero on the kernel slots
    and nonzero diagonal elsewhere.
    """
    k = len(kernel_rows)
    cols = [list(v) for v in kernel_rows]
    while len(cols) < n:
        cand = [field.random(rng) for _ in range(n)]
        if rank(cols + [cand], field) == len(cols) + 1:
            cols.append(cand)
    X = transpose(cols)
    Xi = mat_inverse(X, field)
    if diag is None:
        diag = [field.random_nonzero(rng) for _ in range(n - k)]
    if len(diag) != n - k or any(field.is_zero(d) for d in diag):
        raise ValueError("diagonal data must supply n-k nonzero scalars")
    D = [[field.zero] * n for _ in range(n)]
    for i, d in enumerate(diag):
        D[k + i][k + i] = d
    return mat_mul(transpose(Xi), mat_mul(D, Xi, field), field)


class LinearSubspace:
    """Subspace of a coordinate space, stored as a reduced-echelon basis.

    The representation is canonical, so ``==`` on instances is subspace
    equality.
    """

    __slots__ = ("field", "ambient", "rows")

    def __init__(self, field, ambient, rows):
        self.field = field
        self.ambient = ambient
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_vectors(cls, field, ambient, vectors):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        if not vectors:
            return cls(field, ambient, [])
        red, pivots = rref(vectors, field)
        return cls(field, ambient, red[: len(pivots)])

    @classmethod
    def full(cls, field, ambient):
        return cls(field, ambient, identity(ambient, field))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, vec) -> bool:
        if self.dim == 0:
            return all(self.field.is_zero(x) for x in vec)
        return rank(list(self.rows) + [list(vec)], self.field) == self.dim

    def contains_subspace(self, other) -> bool:
        return all(self.contains(r) for r in other.rows)

    def coordinates_of(self, vec):
        """Coefficients of ``vec`` in the echelon basis, or None."""
        if self.dim == 0:
            return [] if all(self.field.is_zero(x) for x in vec) else None
        return solve(transpose([list(r) for r in self.rows]), list(vec), self.field)

    def __eq__(self, other):
        return (isinstance(other, LinearSubspace) and self.field == other.field
                and self.ambient == other.ambient and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __repr__(self):
        return f"LinearSubspace(dim={self.dim}, ambient={self.ambient})"

    def to_json(self):
        f = self.field
        return {"ambient": self.ambient, "rows": [[f.to_str(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, field, obj):
        rows = [[field.from_str(x) for x in r] for r in obj["rows"]]
        return cls.from_vectors(field, obj["ambient"], rows)


def subspace_sum(S1: LinearSubspace, S2: LinearSubspace) -> LinearSubspace:
    check_same_field(S1.field, S2.field)
    if S1.ambient != S2.ambient:
        raise ValueError("ambient dimensions differ")
    return LinearSubspace.from_vectors(S1.field, S1.ambient, list(S1.rows) + list(S2.rows))


def intersect(S1: LinearSubspace, S2: LinearSubspace) -> LinearSubspace:
    """S1 ∩ S2 via the kernel of [S1^T | -S2^T]."""
    check_same_field(S1.field, S2.field)
    if S1.ambient != S2.ambient:
        raise ValueError("ambient dimensions differ")
    field = S1.field
    r1, r2 = S1.dim, S2.dim
    if r1 == 0 or r2 == 0:
        return LinearSubspace(field, S1.ambient, [])
    rows = []
    for i in range(S1.ambient):
        rows.append([S1.rows[j][i] for j in range(r1)]
                    + [field.neg(S2.rows[j][i]) for j in range(r2)])
    vectors = []
    for sol in right_nullspace(rows, field):
        c = sol[:r1]
        vec = [field.zero] * S1.ambient
        for j, cj in enumerate(c):
            if not field.is_zero(cj):
                row = S1.rows[j]
                vec = [field.add(vec[i], field.mul(cj, row[i])) for i in range(S1.ambient)]
        vectors.append(vec)
    return LinearSubspace.from_vectors(field, S1.ambient, vectors)


def annihilator(S: LinearSubspace, pairing) -> LinearSubspace:
    """All y with <x, y> = 0 for x in S, under a bilinear pairing matrix.

    ``pairing`` has shape (S.ambient, right_dim); the result lives in the
    right-hand space.  dim = right_dim - rank(pairing restricted to S).
    """
    if len(pairing) != S.ambient:
        raise ValueError("pairing left dimension does not match subspace ambient")
    right_dim = len(pairing[0]) if pairing else 0
    field = S.field
    if S.dim == 0:
        return LinearSubspace.full(field, right_dim)
    restricted = mat_mul([list(r) for r in S.rows], pairing, field)
    return LinearSubspace.from_vectors(field, right_dim, right_nullspace(restricted, field))
