"""Dense exact matrices over QQ or F_p.

Rows are lists of field scalars.  Elimination over F_p is vectorized with
numpy int64 (safe: entries < p < 2**31, products < 2**62); over QQ it runs
on Fractions directly.  Pivoting is deterministic (first nonzero, scanning
top-down / left-right) so every derived basis is reproducible.
"""

import numpy as np

from .fields import PrimeField

_NP_THRESHOLD = 400  # use numpy elimination for F_p when nrows*ncols exceeds this


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            for r in self.rows:
                assert len(r) == self.ncols, "ragged rows"
        else:
            assert ncols is not None, "empty matrix needs explicit ncols"
            self.ncols = ncols

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(field, nrows, ncols):
        z = field.zero
        return Matrix(field, [[z] * ncols for _ in range(nrows)], ncols)

    @staticmethod
    def identity(field, n):
        z, o = field.zero, field.one
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @staticmethod
    def from_cols(field, cols, nrows=None):
        if not cols:
            assert nrows is not None
            return Matrix(field, [[] for _ in range(nrows)], 0)
        nrows = len(cols[0])
        return Matrix(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @staticmethod
    def from_entries(field, nrows, ncols, entries):
        """entries: dict (i, j) -> scalar."""
        m = Matrix.zeros(field, nrows, ncols)
        for (i, j), v in entries.items():
            m.rows[i][j] = v
        return m

    # -- basic ops ---------------------------------------------------------

    def copy(self):
        return Matrix(self.field, self.rows, self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return "Matrix(%s, %dx%d)" % (self.field, self.nrows, self.ncols)

    def is_zero(self):
        f = self.field
        return all(f.is_zero(x) for row in self.rows for x in row)

    def col(self, j):
        return [row[j] for row in self.rows]

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, [self.col(j) for j in range(self.ncols)], self.nrows)

    def add(self, other):
        f = self.field
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(
            f,
            [[f.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.ncols,
        )

    def sub(self, other):
        f = self.field
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(
            f,
            [[f.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.ncols,
        )

    def scale(self, c):
        f = self.field
        return Matrix(f, [[f.mul(c, x) for x in row] for row in self.rows], self.ncols)

    def matmul(self, other):
        f = self.field
        assert self.ncols == other.nrows, "shape mismatch %d vs %d" % (self.ncols, other.nrows)
        if isinstance(f, PrimeField) and self.nrows * other.ncols * max(1, self.ncols) > _NP_THRESHOLD:
            a = np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)
            b = np.array(other.rows, dtype=np.int64).reshape(other.nrows, other.ncols)
            c = _matmul_fp(a, b, f.p)
            return Matrix(f, c.tolist(), other.ncols)
        z = f.zero
        out = [[z] * other.ncols for _ in range(self.nrows)]
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out[i]
            for k in range(self.ncols):
                a = ri[k]
                if f.is_zero(a):
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    oi[j] = f.add(oi[j], f.mul(a, rk[j]))
        return Matrix(f, out, other.ncols)

    def apply(self, vec):
        """Matrix times column vector."""
        f = self.field
        assert len(vec) == self.ncols
        out = []
        for row in self.rows:
            acc = f.zero
            for a, x in zip(row, vec):
                if not f.is_zero(a) and not f.is_zero(x):
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return out

    def hstack(self, other):
        assert self.nrows == other.nrows
        return Matrix(
            self.field,
            [ra + rb for ra, rb in zip(self.rows, other.rows)],
            self.ncols + other.ncols,
        )

    def vstack(self, other):
        assert self.ncols == other.ncols
        return Matrix(self.field, self.rows + other.rows, self.ncols)

    # -- elimination -------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (Matrix, pivot column list)."""
        f = self.field
        if isinstance(f, PrimeField) and self.nrows * self.ncols > _NP_THRESHOLD:
            a = np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)
            r, piv = _rref_fp(a, f.p)
            return Matrix(f, r.tolist(), self.ncols), piv
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            pr = None
            for i in range(r, self.nrows):
                if not f.is_zero(rows[i][c]):
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, x) for x in rows[r]]
            for i in range(self.nrows):
                if i != r and not f.is_zero(rows[i][c]):
                    fac = rows[i][c]
                    rows[i] = [f.sub(x, f.mul(fac, y)) for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix(f, rows, self.ncols), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel, one vector per free column."""
        f = self.field
        red, pivots = self.rref()
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        basis = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(red.rows[i][fc])
            basis.append(v)
        return basis

    def column_pivots(self):
        """Indices of a lexicographically-least column basis."""
        return self.rref()[1]

    def solve(self, b):
        """One solution x of A x = b, or None if inconsistent."""
        f = self.field
        aug = self.hstack(Matrix(f, [[x] for x in b], 1))
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [f.zero] * self.ncols
        for i, pc in enumerate(pivots):
            x[pc] = red.rows[i][self.ncols]
        return x

    def inverse(self):
        f = self.field
        assert self.nrows == self.ncols
        aug = self.hstack(Matrix.identity(f, self.nrows))
        red, pivots = aug.rref()
        if pivots[: self.nrows] != list(range(self.nrows)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(f, [row[self.nrows :] for row in red.rows], self.nrows)


def _matmul_fp(a, b, p):
    # Split to keep intermediate sums below 2**62: n * (p-1)^2 must fit.
    n = a.shape[1]
    max_terms = max(1, (1 << 62) // max(1, (p - 1) ** 2))
    if n <= max_terms:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, max_terms):
        out = (out + a[:, s : s + max_terms] @ b[s : s + max_terms, :]) % p
    return out


def _rref_fp(a, p):
    a = a % p
    nr, nc = a.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzrows = np.nonzero(col)[0]
        if nzrows.size:
            a[nzrows] = (a[nzrows] - np.outer(col[nzrows], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def kernel_basis(mat):
    """Module-level alias: basis vectors spanning ker(mat)."""
    return mat.kernel_basis()


# -- span bookkeeping -------------------------------------------------------


class Subspace:
    """Growing echelonized subspace of field^n with membership tests."""

    def __init__(self, field, n):
        self.field = field
        self.n = n
        self.rows = []  # echelon rows, leading col strictly increasing
        self.leads = []

    def dim(self):
        return len(self.rows)

    def _reduce(self, v):
        f = self.field
        v = list(v)
        for lead, row in zip(self.leads, self.rows):
            if not f.is_zero(v[lead]):
                fac = v[lead]
                v = [f.sub(x, f.mul(fac, y)) for x, y in zip(v, row)]
        return v

    def contains(self, v):
        f = self.field
        return all(f.is_zero(x) for x in self._reduce(v))

    def add(self, v):
        """Insert v; returns True if the dimension grew."""
        f = self.field
        v = self._reduce(v)
        lead = None
        for i, x in enumerate(v):
            if not f.is_zero(x):
                lead = i
                break
        if lead is None:
            return False
        inv = f.inv(v[lead])
        v = [f.mul(inv, x) for x in v]
        # keep rows sorted by lead and fully reduced
        for i, row in enumerate(self.rows):
            if not f.is_zero(row[lead]):
                fac = row[lead]
                self.rows[i] = [f.sub(x, f.mul(fac, y)) for x, y in zip(row, v)]
        pos = 0
        while pos < len(self.leads) and self.leads[pos] < lead:
            pos += 1
        self.rows.insert(pos, v)
        self.leads.insert(pos, lead)
        return True

    def basis(self):
        return [list(r) for r in self.rows]
