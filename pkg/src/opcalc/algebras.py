"""Associative algebras by structure constants, their left modules, greedy
free resolutions, and Ext computed as cohomology of Hom(resolution, N).
"""

from .linalg import Matrix, Subspace
from .complexes import cochain_homology_dims


class AssocAlgebra:
    """Finite-dimensional unital associative algebra over an exact field.

    table[i][j] is the coordinate vector of e_i * e_j; unit is the coordinate
    vector of 1.  Certification checks associativity on all basis triples and
    two-sided unitality.
    """

    def __init__(self, field, table, unit, names=None, check=True):
        self.field = field
        self.dim = len(table)
        self.table = [[list(v) for v in row] for row in table]
        self.unit = list(unit)
        self.names = list(names) if names else ["e%d" % i for i in range(self.dim)]
        # left multiplication matrices: lmat[i] has column j = e_i * e_j
        self.lmat = [
            Matrix.from_cols(field, [self.table[i][j] for j in range(self.dim)], self.dim)
            for i in range(self.dim)
        ]
        if check:
            err = self.first_axiom_failure()
            if err is not None:
                raise ValueError("not a unital associative algebra: %s" % err)

    def mul_vec(self, a, b):
        f = self.field
        out = [f.zero] * self.dim
        for i, ai in enumerate(a):
            if f.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                if f.is_zero(bj):
                    continue
                c = f.mul(ai, bj)
                for k, t in enumerate(self.table[i][j]):
                    if not f.is_zero(t):
                        out[k] = f.add(out[k], f.mul(c, t))
        return out

    def lmul_matrix(self, a):
        f = self.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for i, ai in enumerate(a):
            if f.is_zero(ai):
                continue
            for r in range(self.dim):
                row = self.lmat[i].rows[r]
                m.rows[r] = [f.add(x, f.mul(ai, y)) for x, y in zip(m.rows[r], row)]
        return m

    def first_axiom_failure(self):
        f = self.field
        n = self.dim
        basis = [[f.one if t == i else f.zero for t in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.mul_vec(self.mul_vec(basis[i], basis[j]), basis[k])
                    rhs = self.mul_vec(basis[i], self.mul_vec(basis[j], basis[k]))
                    if lhs != rhs:
                        return "associativity fails at (%s,%s,%s)" % (
                            self.names[i], self.names[j], self.names[k])
        for i in range(n):
            if self.mul_vec(self.unit, basis[i]) != basis[i]:
                return "left unit fails at %s" % self.names[i]
            if self.mul_vec(basis[i], self.unit) != basis[i]:
                return "right unit fails at %s" % self.names[i]
        return None

    def opposite(self):
        f = self.field
        table = [[self.table[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return AssocAlgebra(f, table, self.unit, names=[n + "^op" for n in self.names])

    def tensor(self, other):
        """A (x) B with basis (i, j) ordered lexicographically."""
        f = self.field
        n, m = self.dim, other.dim
        idx = lambda i, j: i * m + j

        def prod(i1, j1, i2, j2):
            a = self.table[i1][i2]
            b = other.table[j1][j2]
            out = [f.zero] * (n * m)
            for k, ak in enumerate(a):
                if f.is_zero(ak):
                    continue
                for l, bl in enumerate(b):
                    if not f.is_zero(bl):
                        out[idx(k, l)] = f.mul(ak, bl)
            return out

        table = [
            [prod(p // m, p % m, q // m, q % m) for q in range(n * m)]
            for p in range(n * m)
        ]
        unit = [f.zero] * (n * m)
        for i, a in enumerate(self.unit):
            for j, b in enumerate(other.unit):
                unit[idx(i, j)] = f.mul(a, b)
        names = ["%s*%s" % (a, b) for a in self.names for b in other.names]
        return AssocAlgebra(f, table, unit, names=names)

    def enveloping(self):
        """A (x) A^op, whose left modules are A-bimodules."""
        return self.tensor(self.opposite())


class LeftModule:
    """Left module over an AssocAlgebra, given by action matrices per basis
    element of the algebra."""

    def __init__(self, algebra, action, check=True):
        self.algebra = algebra
        self.field = algebra.field
        self.dim = action[0].nrows if action else 0
        self.action = list(action)
        if check:
            err = self.first_axiom_failure()
            if err is not None:
                raise ValueError("not a left module: %s" % err)

    def act_vec(self, r, v):
        """(sum r_i e_i) . v"""
        f = self.field
        out = [f.zero] * self.dim
        for i, ri in enumerate(r):
            if f.is_zero(ri):
                continue
            w = self.action[i].apply(v)
            out = [f.add(x, f.mul(ri, y)) for x, y in zip(out, w)]
        return out

    def act_matrix(self, r):
        f = self.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for i, ri in enumerate(r):
            if f.is_zero(ri):
                continue
            for row_out, row_in in zip(m.rows, self.action[i].rows):
                for j in range(self.dim):
                    row_out[j] = f.add(row_out[j], f.mul(ri, row_in[j]))
        return m

    def first_axiom_failure(self):
        A = self.algebra
        for i in range(A.dim):
            for j in range(A.dim):
                prod = A.table[i][j]
                lhs = self.act_matrix(prod)
                rhs = self.action[i].matmul(self.action[j])
                if lhs != rhs:
                    return "associativity fails at (%s,%s)" % (A.names[i], A.names[j])
        if self.act_matrix(A.unit) != Matrix.identity(self.field, self.dim):
            return "unit does not act as identity"
        return None

    @staticmethod
    def regular(algebra):
        return LeftModule(algebra, algebra.lmat, check=False)


def bimodule_as_left_module(A, left_action, right_action, check=True):
    """Turn an (A,A)-bimodule into a left module over A (x) A^op.

    left_action/right_action: lists of matrices for each basis element of A,
    commuting actions with (x.m).y == x.(m.y).
    """
    env = A.enveloping()
    n = A.dim
    action = []
    for p in range(n * n):
        i, j = p // n, p % n
        action.append(left_action[i].matmul(right_action[j]))
    return LeftModule(env, action, check=check), env


class Resolution:
    """Free resolution ... -> R^{b_1} -> R^{b_0} -> M -> 0.

    diffs[j] is the underlying linear map R^{b_j} -> R^{b_{j-1}} on coordinate
    spaces (dim b*r); aug maps R^{b_0} onto M.  Exactness in degrees
    1..computed_length-1 plus H_0 = M is certified by rank bookkeeping.
    """

    def __init__(self, algebra, module, ranks, diffs, aug):
        self.algebra = algebra
        self.module = module
        self.ranks = ranks
        self.diffs = diffs
        self.aug = aug
        self.computed_length = len(ranks) - 1

    def certify(self):
        r = self.algebra.dim
        # surjectivity of the augmentation onto M
        if self.aug.rank() != self.module.dim:
            return "augmentation not surjective"
        # H_0: ker(aug) = im(d_1)
        ker0 = self.ranks[0] * r - self.aug.rank()
        if self.diffs:
            if self.diffs[0].rank() != ker0:
                return "homology at degree 0 interface nonzero"
            if not self.aug.matmul(self.diffs[0]).is_zero():
                return "aug o d_1 != 0"
        for j in range(1, len(self.diffs)):
            dj, dnext = self.diffs[j - 1], self.diffs[j]
            if not dj.matmul(dnext).is_zero():
                return "d_%d o d_%d != 0" % (j, j + 1)
            ker = dj.ncols - dj.rank()
            if dnext.rank() != ker:
                return "homology nonzero at degree %d" % j
        return None


def _free_action_matrices(algebra, rank):
    """Left action of basis elements on R^rank, block diagonal."""
    f = algebra.field
    r = algebra.dim
    out = []
    for i in range(r):
        m = Matrix.zeros(f, rank * r, rank * r)
        for s in range(rank):
            for a in range(r):
                for b in range(r):
                    m.rows[s * r + a][s * r + b] = algebra.lmat[i].rows[a][b]
        out.append(m)
    return out


def _module_generators(field, span_mats, vectors, ambient_dim):
    """Greedy generators of the span-closure of vectors under span_mats."""
    gens = []
    closed = Subspace(field, ambient_dim)
    for v in vectors:
        if closed.contains(v):
            continue
        gens.append(v)
        queue = [v]
        while queue:
            w = queue.pop()
            if closed.add(w):
                for m in span_mats:
                    queue.append(m.apply(w))
    return gens


def free_resolution(algebra, module, length):
    """Greedy free resolution of a left module, length+1 free terms."""
    f = algebra.field
    r = algebra.dim
    basis = [
        [f.one if t == i else f.zero for t in range(module.dim)]
        for i in range(module.dim)
    ]
    gens = _module_generators(f, module.action, basis, module.dim)
    b0 = len(gens)
    # augmentation: column (s, i) = e_i . g_s
    aug_cols = []
    for g in gens:
        for i in range(r):
            aug_cols.append(module.action[i].apply(g))
    aug = Matrix.from_cols(f, aug_cols, module.dim)
    ranks = [b0]
    diffs = []
    cur_rank = b0
    cur_map = aug
    for _ in range(length):
        kb = cur_map.kernel_basis()
        if not kb:
            ranks.append(0)
            diffs.append(Matrix.zeros(f, cur_rank * r, 0))
            cur_rank = 0
            cur_map = Matrix.zeros(f, 0, 0)
            continue
        acts = _free_action_matrices(algebra, cur_rank)
        kgens = _module_generators(f, acts, kb, cur_rank * r)
        cols = []
        for g in kgens:
            for i in range(r):
                cols.append(acts[i].apply(g))
        d = Matrix.from_cols(f, cols, cur_rank * r)
        diffs.append(d)
        ranks.append(len(kgens))
        cur_rank = len(kgens)
        cur_map = d
    return Resolution(algebra, module, ranks, diffs, aug)


def _hom_differential(algebra, coef, d, rank_src, rank_tgt):
    """Induced map Hom(R^rank_src, N) -> Hom(R^rank_tgt, N).

    d : R^rank_tgt -> R^rank_src on coordinates; a module map phi out of
    R^rank_src is the tuple of its values on slot generators.
    """
    f = algebra.field
    r = algebra.dim
    m = coef.dim
    out = Matrix.zeros(f, rank_tgt * m, rank_src * m)
    for t in range(rank_tgt):
        # generator t = unit of R sitting in slot t
        gen = [f.zero] * (rank_tgt * r)
        for i, ui in enumerate(algebra.unit):
            gen[t * r + i] = ui
        img = d.apply(gen)  # element of R^rank_src coordinates
        for s in range(rank_src):
            block = Matrix.zeros(f, m, m)
            for i in range(r):
                c = img[s * r + i]
                if f.is_zero(c):
                    continue
                for rr in range(m):
                    row = coef.action[i].rows[rr]
                    block.rows[rr] = [f.add(x, f.mul(c, y)) for x, y in zip(block.rows[rr], row)]
            for rr in range(m):
                for cc in range(m):
                    out.rows[t * m + rr][s * m + cc] = block.rows[rr][cc]
    return out


def ext_groups(algebra, module, coef, max_degree):
    """dim Ext^n(module, coef) over the algebra, for 0 <= n <= max_degree."""
    res = free_resolution(algebra, module, max_degree + 1)
    err = res.certify()
    if err is not None:
        raise RuntimeError("resolution certificate failed: %s" % err)
    m = coef.dim
    dims = {n: res.ranks[n] * m for n in range(max_degree + 2)}
    diffs = {}
    for n in range(max_degree + 1):
        d = res.diffs[n]  # R^{b_{n+1}} -> R^{b_n}
        diffs[n] = _hom_differential(algebra, coef, d, res.ranks[n], res.ranks[n + 1])
    h = cochain_homology_dims(algebra.field, dims, diffs)
    return {n: h[n] for n in range(max_degree + 1)}


def hom_space_basis(algebra, M, N):
    """Basis of Hom_R(M, N) by direct solve of the intertwining system."""
    f = algebra.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    for i in range(algebra.dim):
        AM, AN = M.action[i], N.action[i]
        for a in range(n):
            for b in range(m):
                row = [f.zero] * (n * m)
                # entry (a,b) of  AN T - T AM
                for k in range(n):
                    row[k * m + b] = f.add(row[k * m + b], AN.rows[a][k])
                for k in range(m):
                    row[a * m + k] = f.sub(row[a * m + k], AM.rows[k][b])
                rows.append(row)
    sys = Matrix(f, rows, n * m)
    basis = []
    for v in sys.kernel_basis():
        basis.append(Matrix(f, [[v[a * m + b] for b in range(m)] for a in range(n)], m))
    return basis
