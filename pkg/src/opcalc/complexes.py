"""Chain complexes supported on a finite integer interval of degrees."""

from .linalg import Matrix


class ChainComplex:
    """Spaces C_n for n in [lo, hi] with differentials d_n : C_n -> C_{n-1}.

    d is stored for lo < n <= hi; d(lo) and d(hi+1) are implicitly zero.
    """

    def __init__(self, field, dims, diffs, check=True):
        self.field = field
        self.dims = dict(dims)
        self.diffs = dict(diffs)
        degs = sorted(self.dims)
        assert degs == list(range(degs[0], degs[-1] + 1)), "support must be an interval"
        self.lo = degs[0]
        self.hi = degs[-1]
        for n, d in self.diffs.items():
            assert d.nrows == self.dims[n - 1] and d.ncols == self.dims[n], (
                "differential at %d has shape %dx%d, expected %dx%d"
                % (n, d.nrows, d.ncols, self.dims[n - 1], self.dims[n])
            )
        if check and not self.is_complex():
            raise ValueError("d o d != 0")

    def space_dim(self, n):
        return self.dims.get(n, 0)

    def d(self, n):
        if n in self.diffs:
            return self.diffs[n]
        return Matrix.zeros(self.field, self.space_dim(n - 1), self.space_dim(n))

    def is_complex(self):
        for n in range(self.lo + 2, self.hi + 1):
            if not self.d(n - 1).matmul(self.d(n)).is_zero():
                return False
        return True

    def homology_dims(self):
        """dim H_n = dim ker d_n - rank d_{n+1} for each n in support."""
        out = {}
        for n in range(self.lo, self.hi + 1):
            ker = self.space_dim(n) - self.d(n).rank()
            img = self.d(n + 1).rank() if n + 1 <= self.hi else 0
            out[n] = ker - img
        return out


def homology_dims(complex_):
    if not complex_.is_complex():
        raise ValueError("d o d != 0")
    return complex_.homology_dims()


def cochain_homology_dims(field, dims, diffs):
    """Cohomology of a cochain complex C^n --d^n--> C^{n+1}.

    dims: degree -> dimension; diffs: n -> Matrix for d^n.  Returns
    degree -> dim H^n over the degrees present in dims.
    """
    out = {}
    degs = sorted(dims)
    for n in degs:
        dn = diffs.get(n)
        ker = dims[n] - (dn.rank() if dn is not None else 0)
        dprev = diffs.get(n - 1)
        img = dprev.rank() if dprev is not None else 0
        out[n] = ker - img
    return out
