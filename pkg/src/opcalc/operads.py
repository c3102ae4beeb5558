"""Operads as monoids in collections, their algebras, and stock examples.

Composition is stored as a total function gamma on full shapes (no partial
compositions to re-derive); every constructed operad is certified by
exhaustively checking unitality, both equivariance laws and associativity
on all shapes within the arity bound.

Symmetric action conventions (fixed once, certified everywhere):
  * Ass(n) is the set of linear orders mu = (mu(1)..mu(n)), read as the
    monomial x_{mu(1)}..x_{mu(n)}; sigma*(mu) = sigma^{-1} o mu, matching
    the endomorphism action (sigma* f)(y) = f(y_{sigma^{-1}(1)},...).
  * gamma(sigma*(mu); nu_{sigma(1)}..nu_{sigma(k)}) =
    block_perm(sigma, sizes)* gamma(mu; nu_1..nu_k).
  * gamma(mu; tau_1*(nu_1)..tau_k*(nu_k)) =
    (tau_1 + ... + tau_k)* gamma(mu; nu_1..nu_k).
"""

from itertools import product

from .linalg import Matrix
from .perms import (
    all_perms,
    block_perm,
    compose as pcompose,
    identity_perm,
    invert,
)
from .symcoll import LinCollection, Seq, SetCollection, all_seqs


class OperadAxiomError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def dsum_perm(taus):
    out = []
    off = 0
    for t in taus:
        out.extend(off + x for x in t)
        off += len(t)
    return tuple(out)


def _compositions(k, total_bound):
    """All tuples of k nonnegative ints with sum <= total_bound."""
    if k == 0:
        yield ()
        return
    for first in range(total_bound + 1):
        for rest in _compositions(k - 1, total_bound - first):
            yield (first,) + rest


def iter_gamma_shapes(colors, bound):
    """(root_seq, [block_seqs]) with matching colors, root arity <= bound and
    total block arity <= bound."""
    for k in range(bound + 1):
        for dbar in product(colors, repeat=k):
            for c in colors:
                root = Seq(dbar, c)
                for sizes in _compositions(k, bound):
                    for ins_tuple in product(
                        *[list(product(colors, repeat=m)) for m in sizes]
                    ):
                        yield root, [Seq(ins_tuple[i], dbar[i]) for i in range(k)]


# -- index helpers for tensor bases ------------------------------------------


def tuple_to_index(t, dims):
    idx = 0
    for x, d in zip(t, dims):
        idx = idx * d + x
    return idx


def index_to_tuple(idx, dims):
    out = []
    for d in reversed(dims):
        out.append(idx % d)
        idx //= d
    return tuple(reversed(out))


def tensor_perm_matrix(field, field_dims_new, sigma):
    """Shuffle of tensor factors: source basis indexed by tuples over the
    permuted positions, e_t -> e_x with x_j = t_{sigma^{-1}(j)}."""
    n = len(sigma)
    inv = invert(sigma)
    dims_new = list(field_dims_new)
    dims_old = [dims_new[inv[j] - 1] for j in range(n)]
    total = 1
    for d in dims_new:
        total *= d
    m = Matrix.zeros(field, total, total)
    for idx in range(total):
        t = index_to_tuple(idx, dims_new)
        x = tuple(t[inv[j] - 1] for j in range(n))
        m.rows[tuple_to_index(x, dims_old)][idx] = field.one
    return m


def kron(field, mats):
    """Kronecker product in row-major (lex, leftmost most significant) order."""
    if not mats:
        return Matrix.identity(field, 1)
    out = mats[0]
    for m in mats[1:]:
        nr, nc = out.nrows * m.nrows, out.ncols * m.ncols
        new = Matrix.zeros(field, nr, nc)
        for i1 in range(out.nrows):
            for j1 in range(out.ncols):
                a = out.rows[i1][j1]
                if field.is_zero(a):
                    continue
                for i2 in range(m.nrows):
                    row = new.rows[i1 * m.nrows + i2]
                    src = m.rows[i2]
                    for j2 in range(m.ncols):
                        row[j1 * m.ncols + j2] = field.mul(a, src[j2])
        out = new
    return out


# -- set-valued operads -------------------------------------------------------


class SetOperad:
    kind = "set"

    def __init__(self, carrier, unit, gamma, name="operad", check=True):
        self.carrier = carrier
        self.colors = carrier.colors
        self.bound = carrier.bound
        self.unit = dict(unit)
        self._gamma = gamma
        self.name = name
        if check:
            v = self.certify()
            if v:
                raise OperadAxiomError(v)

    def level(self, s):
        return self.carrier.level(s)

    def act(self, s, perm, elem):
        return self.carrier.act(s, perm, elem)

    def gamma(self, root_seq, mu, blocks):
        return self._gamma(root_seq, mu, blocks)

    def unit_block(self, c):
        return (Seq((c,), c), self.unit[c])

    def comp_at(self, root_seq, mu, i, sub_seq, nu):
        """Plug nu into input i (1-based), units elsewhere."""
        blocks = []
        for j in range(1, root_seq.arity + 1):
            if j == i:
                blocks.append((sub_seq, nu))
            else:
                blocks.append(self.unit_block(root_seq.ins[j - 1]))
        return self.gamma(root_seq, mu, blocks)

    def decompose_binary(self, s, p):
        """Write p as q o_i b with b binary, if possible; cached.

        Used to evaluate high-arity module actions through bounded
        intermediates; coherence of the results is certified downstream.
        """
        if not hasattr(self, "_decomp_cache"):
            self._decomp_cache = {}
        key = (s, p)
        if key in self._decomp_cache:
            return self._decomp_cache[key]
        n = s.arity
        found = None
        if n >= 3:
            for i in range(1, n):
                pair = (s.ins[i - 1], s.ins[i])
                for d in self.colors:
                    bs = Seq(pair, d)
                    qs = Seq(s.ins[: i - 1] + (d,) + s.ins[i + 1:], s.out)
                    for b in self.level(bs):
                        for q in self.level(qs):
                            if self.comp_at(qs, q, i, bs, b) == p:
                                found = (qs, q, i, bs, b)
                                break
                        if found:
                            break
                    if found:
                        break
                if found:
                    break
        self._decomp_cache[key] = found
        return found

    @staticmethod
    def result_seq(root_seq, blocks):
        ins = tuple(x for s, _ in blocks for x in s.ins)
        return Seq(ins, root_seq.out)

    # certification ---------------------------------------------------------

    def _table(self, root, blocks):
        """Full composition table of a shape: {(mu,) + nus: gamma value}."""
        key = (root, blocks)
        tab = self._tables.get(key)
        if tab is None:
            tab = {}
            gamma = self._gamma
            levels = [self.level(b) for b in blocks]
            mus = self.level(root)
            for nus in product(*levels):
                bl = list(zip(blocks, nus))
                for mu in mus:
                    tab[(mu,) + nus] = gamma(root, mu, bl)
            self._tables[key] = tab
        return tab

    def certify(self):
        self._tables = {}
        try:
            for check in (self._check_units, self._check_equivariance,
                          self._check_associativity):
                v = check()
                if v:
                    return [v]
            return []
        finally:
            self._tables = {}

    def _check_units(self):
        try:
            self.carrier.check_equivariance()
        except AssertionError as e:
            return str(e)
        for c in self.colors:
            if self.unit[c] not in self.level(Seq((c,), c)):
                return "unit at color %r not in its level" % (c,)
        for s in all_seqs(self.colors, self.bound):
            for mu in self.level(s):
                blocks = [self.unit_block(ci) for ci in s.ins]
                if self.gamma(s, mu, blocks) != mu:
                    return "right unit law fails at %r, mu=%r" % (s, mu)
                top = Seq((s.out,), s.out)
                if self.gamma(top, self.unit[s.out], [(s, mu)]) != mu:
                    return "left unit law fails at %r, mu=%r" % (s, mu)
        return None

    def _check_equivariance(self):
        for root, blocks in iter_gamma_shapes(self.colors, self.bound):
            k = root.arity
            if k < 1:
                continue
            mus = self.level(root)
            levels = [self.level(b) for b in blocks]
            if not mus or any(not l for l in levels):
                continue
            sizes = [b.arity for b in blocks]
            res = self.result_seq(root, [(b, None) for b in blocks])
            tab = self._table(root, tuple(blocks))
            perm_data = []
            for sg in all_perms(k):
                root2 = root.permuted(sg)
                blocks2 = tuple(blocks[sg[i] - 1] for i in range(k))
                perm_data.append((sg, root2, self._table(root2, blocks2),
                                  block_perm(sg, sizes)))
            tau_data = []
            for i in range(k):
                for tau in all_perms(sizes[i]):
                    blocks2 = list(blocks)
                    blocks2[i] = blocks[i].permuted(tau)
                    taus = [identity_perm(sizes[j]) if j != i else tau
                            for j in range(k)]
                    tau_data.append((i, tau, tuple(blocks2),
                                     self._table(root, tuple(blocks2)),
                                     dsum_perm(taus)))
            for mu in mus:
                for nus in product(*levels):
                    base = tab[(mu,) + nus]
                    for sg, root2, tab2, bp in perm_data:
                        mu2 = self.act(root, sg, mu)
                        nus2 = tuple(nus[sg[i] - 1] for i in range(k))
                        if tab2[(mu2,) + nus2] != self.act(res, bp, base):
                            return "top equivariance fails at %r sigma=%r mu=%r" % (
                                root, sg, mu)
                    for i, tau, blocks2, tab2, ds in tau_data:
                        nus2 = list(nus)
                        nus2[i] = self.act(blocks[i], tau, nus[i])
                        if tab2[(mu,) + tuple(nus2)] != self.act(res, ds, base):
                            return "bottom equivariance fails at %r slot %d" % (
                                root, i + 1)
        return None

    def _check_associativity(self):
        for root, mids in iter_gamma_shapes(self.colors, self.bound):
            k = root.arity
            mus = self.level(root)
            mid_levels = [self.level(m) for m in mids]
            if not mus or any(not l for l in mid_levels):
                continue
            mid_arities = [m.arity for m in mids]
            n = sum(mid_arities)
            inner_seq = self.result_seq(root, [(m, None) for m in mids])
            inner_tab = self._table(root, tuple(mids))
            flat_targets = [m.ins[j] for m in mids for j in range(m.arity)]
            for bot_sizes in _compositions(n, self.bound):
                choice_lists = []
                for idx, tgt in enumerate(flat_targets):
                    choice_lists.append(
                        [Seq(ins, tgt) for ins in product(self.colors,
                                                          repeat=bot_sizes[idx])])
                for combo in product(*choice_lists):
                    bot_levels = [self.level(s2) for s2 in combo]
                    if any(not l for l in bot_levels):
                        continue
                    slices = []
                    pos = 0
                    for i in range(k):
                        slices.append((pos, pos + mid_arities[i]))
                        pos += mid_arities[i]
                    lhs_tab = self._table(inner_seq, combo)
                    sub_tabs = [self._table(mids[i], combo[lo:hi])
                                for i, (lo, hi) in enumerate(slices)]
                    new_seqs = tuple(
                        Seq(tuple(x for s2 in combo[lo:hi] for x in s2.ins),
                            mids[i].out)
                        for i, (lo, hi) in enumerate(slices))
                    rhs_tab = self._table(root, new_seqs)
                    for nus in product(*mid_levels):
                        for kaps in product(*bot_levels):
                            new_vals = tuple(
                                sub_tabs[i][(nus[i],) + kaps[lo:hi]]
                                for i, (lo, hi) in enumerate(slices))
                            for mu in mus:
                                inner = inner_tab[(mu,) + nus]
                                lhs = lhs_tab[(inner,) + kaps]
                                rhs = rhs_tab[(mu,) + new_vals]
                                if lhs != rhs:
                                    return ("associativity fails at "
                                            "(mu=%r; nus=%r; kaps=%r)"
                                            % (mu, nus, kaps))
        return None


# -- stock operads ------------------------------------------------------------


_STOCK_CACHE = {}


def make_ass(bound=4, colors=("*",), check=True):
    """The associative operad: Ass(n) = linear orders on n letters."""
    assert len(colors) == 1, "Ass is single-colored"
    key = ("ass", bound, colors)
    if check and key in _STOCK_CACHE:
        return _STOCK_CACHE[key]
    c = colors[0]
    levels = {Seq((c,) * n, c): tuple(all_perms(n)) for n in range(bound + 1)}

    def action(s, perm, mu):
        return pcompose(invert(perm), mu)

    carrier = SetCollection(colors, bound, levels, action, complete=False)

    def gamma(root_seq, mu, blocks):
        offs = []
        acc = 0
        for b in blocks:
            offs.append(acc)
            acc += len(b[0].ins)
        out = []
        for t in mu:
            b = t - 1
            o = offs[b]
            out += [o + v for v in blocks[b][1]]
        return tuple(out)

    P = SetOperad(carrier, {c: (1,)}, gamma, name="ass", check=check)
    if check:
        _STOCK_CACHE[key] = P
    return P


def _make_point_operad(bound, colors, with_nullary, name, check=True):
    key = (name, bound, colors)
    if check and key in _STOCK_CACHE:
        return _STOCK_CACHE[key]
    c = colors[0]
    levels = {}
    for n in range(bound + 1):
        if n == 0 and not with_nullary:
            levels[Seq((), c)] = ()
        else:
            levels[Seq((c,) * n, c)] = ("c",)
    carrier = SetCollection(colors, bound, levels, lambda s, p, e: e, complete=False)

    def gamma(root_seq, mu, blocks):
        return "c"

    P = SetOperad(carrier, {c: "c"}, gamma, name=name, check=check)
    if check:
        _STOCK_CACHE[key] = P
    return P


def make_com(bound=4, colors=("*",), check=True):
    """The commutative operad: a point in every arity."""
    assert len(colors) == 1
    return _make_point_operad(bound, colors, True, "com", check)


def make_nucom(bound=4, colors=("*",), check=True):
    """Nonunital commutative operad: Com with the nullary level removed."""
    assert len(colors) == 1
    return _make_point_operad(bound, colors, False, "nucom", check)


# -- linear operads -----------------------------------------------------------


class LinOperad:
    """Linear operad: based levels, action matrices, multilinear gamma given
    on basis labels (values are coefficient dicts label -> scalar)."""

    kind = "linear"

    def __init__(self, field, carrier, unit, gamma_basis, name="linoperad", check=True):
        self.field = field
        self.carrier = carrier
        self.colors = carrier.colors
        self.bound = carrier.bound
        self.unit = dict(unit)  # color -> coefficient dict
        self._gamma_basis = gamma_basis
        self.name = name
        if check:
            v = self.certify()
            if v:
                raise OperadAxiomError(v)

    def level(self, s):
        return self.carrier.level(s)

    def dim(self, s):
        return len(self.carrier.level(s))

    def act_matrix(self, s, perm):
        return self.carrier.act_matrix(s, perm)

    def gamma_basis(self, root_seq, mu, blocks):
        """mu and the block labels are basis labels; returns dict."""
        return self._gamma_basis(root_seq, mu, blocks)

    def gamma_vec(self, root_seq, mu_coefs, blocks):
        """Multilinear extension; blocks: list of (Seq, coefs dict)."""
        f = self.field
        out = {}
        for mu, cm in mu_coefs.items():
            if f.is_zero(cm):
                continue
            for labels in product(*[list(b[1].items()) for b in blocks]):
                coef = cm
                for _, cx in labels:
                    coef = f.mul(coef, cx)
                if f.is_zero(coef):
                    continue
                term = self.gamma_basis(root_seq, mu,
                                        [(blocks[i][0], labels[i][0])
                                         for i in range(len(blocks))])
                for lab, cv in term.items():
                    acc = f.add(out.get(lab, f.zero), f.mul(coef, cv))
                    out[lab] = acc
        return {k: v for k, v in out.items() if not f.is_zero(v)}

    def vec_of(self, s, coefs):
        f = self.field
        basis = self.level(s)
        index = {b: i for i, b in enumerate(basis)}
        v = [f.zero] * len(basis)
        for lab, c in coefs.items():
            v[index[lab]] = c
        return v

    def coefs_of(self, s, vec):
        f = self.field
        basis = self.level(s)
        return {b: vec[i] for i, b in enumerate(basis) if not f.is_zero(vec[i])}

    @staticmethod
    def result_seq(root_seq, blocks):
        ins = tuple(x for s, _ in blocks for x in s.ins)
        return Seq(ins, root_seq.out)

    def certify(self):
        f = self.field
        try:
            self.carrier.check_equivariance()
        except AssertionError as e:
            return [str(e)]
        # unit laws on basis elements
        for s in all_seqs(self.colors, self.bound):
            for mu in self.level(s):
                blocks = [(Seq((ci,), ci), self.unit[ci]) for ci in s.ins]
                got = self.gamma_vec(s, {mu: f.one}, blocks)
                if got != {mu: f.one}:
                    return ["right unit law fails at %r, mu=%r" % (s, mu)]
                top = Seq((s.out,), s.out)
                got = self.gamma_vec(top, self.unit[s.out], [(s, {mu: f.one})])
                if got != {mu: f.one}:
                    return ["left unit law fails at %r, mu=%r" % (s, mu)]
        # equivariance
        for root, blocks in iter_gamma_shapes(self.colors, self.bound):
            k = root.arity
            if k < 1:
                continue
            if not self.level(root) or any(not self.level(b) for b in blocks):
                continue
            sizes = [b.arity for b in blocks]
            res = self.result_seq(root, [(b, None) for b in blocks])
            for mu in self.level(root):
                for nus in product(*[self.level(b) for b in blocks]):
                    base = self.gamma_vec(root, {mu: f.one},
                                          [(blocks[i], {nus[i]: f.one})
                                           for i in range(k)])
                    base_vec = self.vec_of(res, base)
                    for sg in all_perms(k):
                        mu2 = self.coefs_of(
                            root.permuted(sg),
                            self.act_matrix(root, sg).apply(
                                self.vec_of(root, {mu: f.one})))
                        root2 = root.permuted(sg)
                        blocks2 = [(blocks[sg[i] - 1], {nus[sg[i] - 1]: f.one})
                                   for i in range(k)]
                        lhs = self.gamma_vec(root2, mu2, blocks2)
                        bp = block_perm(sg, sizes)
                        rhs_vec = self.act_matrix(res, bp).apply(base_vec)
                        if self.vec_of(res.permuted(bp), lhs) != rhs_vec:
                            return ["top equivariance fails at %r sigma=%r" % (root, sg)]
                    for i in range(k):
                        for tau in all_perms(sizes[i]):
                            nu2 = self.coefs_of(
                                blocks[i].permuted(tau),
                                self.act_matrix(blocks[i], tau).apply(
                                    self.vec_of(blocks[i], {nus[i]: f.one})))
                            blocks2 = [(blocks[j], {nus[j]: f.one}) for j in range(k)]
                            blocks2[i] = (blocks[i].permuted(tau), nu2)
                            taus = [identity_perm(sizes[j]) if j != i else tau
                                    for j in range(k)]
                            ds = dsum_perm(taus)
                            lhs = self.gamma_vec(root, {mu: f.one}, blocks2)
                            rhs_vec = self.act_matrix(res, ds).apply(base_vec)
                            if self.vec_of(res.permuted(ds), lhs) != rhs_vec:
                                return ["bottom equivariance fails at %r slot %d"
                                        % (root, i + 1)]
        # associativity
        for root, mids in iter_gamma_shapes(self.colors, self.bound):
            k = root.arity
            if not self.level(root) or any(not self.level(m) for m in mids):
                continue
            n = sum(m.arity for m in mids)
            flat_targets = [m.ins[j] for m in mids for j in range(m.arity)]
            for bot_sizes in _compositions(n, self.bound):
                choice_lists = [
                    [Seq(ins, tgt) for ins in product(self.colors, repeat=bot_sizes[i])]
                    for i, tgt in enumerate(flat_targets)
                ]
                for combo in product(*choice_lists):
                    if any(not self.level(s2) for s2 in combo):
                        continue
                    for mu in self.level(root):
                        for nus in product(*[self.level(m) for m in mids]):
                            inner_blocks = [(mids[i], {nus[i]: f.one})
                                            for i in range(k)]
                            inner = self.gamma_vec(root, {mu: f.one}, inner_blocks)
                            inner_seq = self.result_seq(root, inner_blocks)
                            for kaps in product(*[self.level(s2) for s2 in combo]):
                                lhs = self.gamma_vec(
                                    inner_seq, inner,
                                    [(combo[t], {kaps[t]: f.one})
                                     for t in range(len(combo))])
                                new_blocks = []
                                pos = 0
                                for i in range(k):
                                    m = mids[i].arity
                                    sub = [(combo[pos + j], {kaps[pos + j]: f.one})
                                           for j in range(m)]
                                    val = self.gamma_vec(mids[i], {nus[i]: f.one}, sub)
                                    new_blocks.append(
                                        (self.result_seq(mids[i], sub), val))
                                    pos += m
                                rhs = self.gamma_vec(root, {mu: f.one}, new_blocks)
                                if lhs != rhs:
                                    return ["associativity fails at (%r;%r;%r)"
                                            % (mu, nus, kaps)]
        return []


# -- algebras ------------------------------------------------------------------


class AlgebraAxiomError(ValueError):
    pass


class Algebra:
    """Algebra over a (set or linear) operad: one based space per color and
    one action matrix tensor-space -> space per operation.

    Certification checks that the action tensors define a map of operads
    into the endomorphism operad: unit acts as identity, the symmetric
    action matches tensor-factor shuffling, and composition matches
    Kronecker substitution.
    """

    def __init__(self, operad, field, spaces, action, name="A", check=True):
        self.operad = operad
        self.field = field
        self.spaces = {c: tuple(spaces[c]) for c in operad.colors}
        self._action = action
        self._cache = {}
        self.name = name
        if check:
            v = self.certify()
            if v is not None:
                raise AlgebraAxiomError(v)

    def dim(self, c):
        return len(self.spaces[c])

    def names(self, c):
        return self.spaces[c]

    def in_dims(self, s):
        return [self.dim(c) for c in s.ins]

    def tensor_dim(self, s):
        t = 1
        for d in self.in_dims(s):
            t *= d
        return t

    def act(self, s, p):
        key = (s, p)
        if key not in self._cache:
            m = self._action(s, p)
            assert m.nrows == self.dim(s.out) and m.ncols == self.tensor_dim(s), (
                "action tensor at %r has wrong shape" % (s,))
            self._cache[key] = m
        return self._cache[key]

    def act_vec(self, s, coefs):
        """Linear-operad action extended over a coefficient dict."""
        f = self.field
        out = Matrix.zeros(f, self.dim(s.out), self.tensor_dim(s))
        for p, c in coefs.items():
            if f.is_zero(c):
                continue
            out = out.add(self.act(s, p).scale(c))
        return out

    def unit_action(self, c):
        s = Seq((c,), c)
        if self.operad.kind == "set":
            return self.act(s, self.operad.unit[c])
        return self.act_vec(s, self.operad.unit[c])

    def certify(self):
        f = self.field
        P = self.operad
        for c in P.colors:
            if self.unit_action(c) != Matrix.identity(f, self.dim(c)):
                return "unit of color %r does not act as identity" % (c,)
        # equivariance
        for s in all_seqs(P.colors, P.bound):
            n = s.arity
            if n < 2 or not P.level(s):
                continue
            for sg in all_perms(n):
                s2 = s.permuted(sg)
                T = tensor_perm_matrix(f, self.in_dims(s2), sg)
                if P.kind == "set":
                    for p in P.level(s):
                        if self.act(s2, P.act(s, sg, p)) != self.act(s, p).matmul(T):
                            return "equivariance fails at %r, op %r, sigma %r" % (
                                s, p, sg)
                else:
                    for j, p in enumerate(P.level(s)):
                        col = P.act_matrix(s, sg).col(j)
                        moved = P.coefs_of(s2, col)
                        if self.act_vec(s2, moved) != self.act(s, p).matmul(T):
                            return "equivariance fails at %r, op %r, sigma %r" % (
                                s, p, sg)
        # composition
        for root, blocks in iter_gamma_shapes(P.colors, P.bound):
            if not P.level(root) or any(not P.level(b) for b in blocks):
                continue
            res = Seq(tuple(x for b in blocks for x in b.ins), root.out)
            for mu in P.level(root):
                for nus in product(*[P.level(b) for b in blocks]):
                    rhs = self.act(root, mu).matmul(
                        kron(f, [self.act(blocks[i], nus[i])
                                 for i in range(len(blocks))]))
                    if P.kind == "set":
                        comp = P.gamma(root, mu, list(zip(blocks, nus)))
                        lhs = self.act(res, comp)
                    else:
                        comp = P.gamma_vec(
                            root, {mu: f.one},
                            [(blocks[i], {nus[i]: f.one}) for i in range(len(blocks))])
                        lhs = self.act_vec(res, comp)
                    if lhs != rhs:
                        return ("composition fails at root %r with (mu=%r; nus=%r)"
                                % (root, mu, nus))
        return None


def algebra_over_ass(P, assoc, name=None):
    """The Ass-algebra of a unital associative algebra given by structure
    constants; operation mu acts by the monomial x_{mu(1)}..x_{mu(n)}."""
    field = assoc.field
    spaces = {P.colors[0]: tuple(assoc.names)}
    basis = [[field.one if i == j else field.zero for j in range(assoc.dim)]
             for i in range(assoc.dim)]

    def action(seq, mu):
        n = seq.arity
        cols = []
        for t in product(range(assoc.dim), repeat=n):
            vec = assoc.unit
            for pos in range(n):
                vec = assoc.mul_vec(vec, basis[t[mu[pos] - 1]])
            cols.append(vec)
        return Matrix.from_cols(field, cols, assoc.dim)

    return Algebra(P, field, spaces, action, name=name or "ass-algebra")


def algebra_over_com(P, assoc, name=None):
    """Com-algebra of a commutative associative algebra; certification fails
    on a non-commutative input."""
    field = assoc.field
    spaces = {P.colors[0]: tuple(assoc.names)}
    basis = [[field.one if i == j else field.zero for j in range(assoc.dim)]
             for i in range(assoc.dim)]

    def action(seq, _p):
        cols = []
        for t in product(range(assoc.dim), repeat=seq.arity):
            vec = assoc.unit
            for pos in range(seq.arity):
                vec = assoc.mul_vec(vec, basis[t[pos]])
            cols.append(vec)
        return Matrix.from_cols(field, cols, assoc.dim)

    return Algebra(P, field, spaces, action, name=name or "com-algebra")


def algebra_over_lie(P, field, basis_names, bracket, name=None):
    """Algebra over the truncated Lie operad from a bracket tensor
    (Matrix g (x) g -> g); bracket words act by iterated bracketing."""
    dim = len(basis_names)
    spaces = {P.colors[0]: tuple(basis_names)}
    basis = [[field.one if i == j else field.zero for j in range(dim)]
             for i in range(dim)]

    def pair(u, v):
        tens = [field.zero] * (dim * dim)
        for i, ui in enumerate(u):
            if field.is_zero(ui):
                continue
            for j, vj in enumerate(v):
                if not field.is_zero(vj):
                    tens[i * dim + j] = field.mul(ui, vj)
        return bracket.apply(tens)

    def action(seq, word):
        n = seq.arity
        cols = []
        for t in product(range(dim), repeat=n):
            cur = basis[t[word[0] - 1]]
            for letter in word[1:]:
                cur = pair(cur, basis[t[letter - 1]])
            cols.append(cur)
        return Matrix.from_cols(field, cols, dim)

    return Algebra(P, field, spaces, action, name=name or "lie-algebra")


# -- dict-driven constructors --------------------------------------------------


def operad_from_data(colors, bound, levels, actions, unit, gamma_table):
    """Build and certify a set-valued operad from explicit tables.

    levels: {Seq: tuple(labels)}; actions: {(Seq, perm): {label: label}}
    (identity permutations may be omitted); gamma_table keyed by
    (root_seq, block_seqs_tuple, mu, nus_tuple).
    """

    def action(s, perm, elem):
        tab = actions.get((s, perm))
        if tab is None:
            raise OperadAxiomError(["missing action table at %r, %r" % (s, perm)])
        return tab[elem]

    carrier = SetCollection(colors, bound, levels, action)

    def gamma(root_seq, mu, blocks):
        key = (root_seq, tuple(s for s, _ in blocks), mu, tuple(x for _, x in blocks))
        if key not in gamma_table:
            raise OperadAxiomError(
                ["missing composition value at %r for (%r; %r)"
                 % (root_seq, mu, tuple(x for _, x in blocks))])
        return gamma_table[key]

    return SetOperad(carrier, unit, gamma, name="custom")
