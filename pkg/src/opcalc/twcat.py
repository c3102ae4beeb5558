"""Finite categories: pointed-set truncations with the inert/active
calculus, the operadic categories built from a discrete operad, the twisted
arrow category as a category of elements, functor coefficients, and the
cobar complex computing derived limits.

A morphism of the operadic category from (c_1..c_n;c) to (d_1..d_m;d) is a
pointed map f : <m> -> <n> together with an operation over the basepoint
fiber (first input reserved for the source output) and one operation per
nonzero fiber.  Composition grafts everything and re-sorts the inputs; the
category axioms are certified exhaustively on truncations.
"""

from itertools import product

from .linalg import Matrix
from .perms import identity_perm, invert, sort_perm
from .symcoll import Seq, all_seqs
from .complexes import ChainComplex


class FiniteCategory:
    """Objects, hom sets of opaque tokens, identities, lazy composition.

    compose(g, f) means g after f.  Associativity and unit laws are
    certified exhaustively when the size permits, otherwise on a generating
    set whose closure is verified to reach every morphism.
    """

    def __init__(self, objects, homs, identity, compose, name="cat"):
        self.objects = list(objects)
        self._homs = homs  # dict (x, y) -> tuple of morphism tokens
        self.identity = identity  # x -> token
        self._compose = compose  # (y,z-token g, x,y-token f) with sources known
        self.name = name

    def hom(self, x, y):
        return self._homs.get((x, y), ())

    def morphisms(self):
        for (x, y), ms in sorted(self._homs.items(), key=lambda kv: repr(kv[0])):
            for m in ms:
                yield x, y, m

    def compose(self, x, y, z, g, f):
        """g o f for f : x -> y, g : y -> z."""
        return self._compose(x, y, z, g, f)

    def certify(self, max_triples=2 * 10 ** 5):
        # unit laws
        for x, y, m in self.morphisms():
            if self.compose(x, x, y, m, self.identity(x)) != m:
                return "right unit law fails at %r" % (m,)
            if self.compose(x, y, y, self.identity(y), m) != m:
                return "left unit law fails at %r" % (m,)
        # associativity, exhaustively if affordable
        triples = 0
        pairs = []
        for x in self.objects:
            for y in self.objects:
                for f in self.hom(x, y):
                    for z in self.objects:
                        for g in self.hom(y, z):
                            pairs.append((x, y, z, f, g))
        for x, y, z, f, g in pairs:
            gf = self.compose(x, y, z, g, f)
            for w in self.objects:
                for h in self.hom(z, w):
                    triples += 1
                    if triples > max_triples:
                        return None  # size guard; callers use certify_generated
                    if self.compose(x, z, w, h, gf) != self.compose(
                            x, y, w, self.compose(y, z, w, h, g), f):
                        return "associativity fails at (%r;%r;%r)" % (f, g, h)
        return None


# -- pointed finite sets ------------------------------------------------------


def pointed_maps(m, n):
    """All pointed maps <m> -> <n> as tuples of images of 1..m."""
    return [tuple(t) for t in product(range(n + 1), repeat=m)]


def is_inert(f, n):
    """Every nonzero fiber is a singleton."""
    seen = set()
    for v in f:
        if v != 0:
            if v in seen:
                return False
            seen.add(v)
    return len(seen) == n


def is_active(f):
    """The basepoint fiber is just the basepoint."""
    return all(v != 0 for v in f)


def is_surjective_pointed(f, n):
    return set(v for v in f if v != 0) == set(range(1, n + 1))


def compose_pointed(g, f):
    """g o f for f : <m> -> <n>, g : <n> -> <k>."""
    return tuple(g[v - 1] if v != 0 else 0 for v in f)


def factor_inert_active(f, n):
    """Unique factorization f = active o inert: the inert part collapses the
    basepoint fiber (keeping the order of the survivors), the active part
    carries the surviving letters to their images."""
    survivors = [i for i, v in enumerate(f, start=1) if v != 0]
    k = len(survivors)
    inert = tuple(survivors.index(i) + 1 if v != 0 else 0
                  for i, v in enumerate(f, start=1))
    active = tuple(f[i - 1] for i in survivors)
    assert is_inert(inert, k) and is_active(active)
    assert compose_pointed(active, inert) == f
    return inert, k, active


def fin_star(N, name=None):
    """Truncation of pointed finite sets on <0>..<N> with inert/active
    markings on every morphism."""
    objects = list(range(N + 1))
    homs = {}
    for m in objects:
        for n in objects:
            homs[(m, n)] = tuple(pointed_maps(m, n))

    def identity(m):
        return tuple(range(1, m + 1))

    def compose(x, y, z, g, f):
        return compose_pointed(g, f)

    cat = FiniteCategory(objects, homs, identity, compose, name=name or "fin*")
    cat.markings = {}
    for m in objects:
        for n in objects:
            for f in homs[(m, n)]:
                cat.markings[(m, n, f)] = (is_inert(f, n), is_active(f))
    return cat


def opposite(cat, name=None):
    homs = {}
    for x in cat.objects:
        for y in cat.objects:
            homs[(x, y)] = cat.hom(y, x)

    def compose(x, y, z, g, f):
        # in the opposite: g o^op f = f o g in the original
        return cat.compose(z, y, x, f, g)

    return FiniteCategory(cat.objects, homs, cat.identity, compose,
                          name=name or cat.name + "^op")


# -- the operadic categories ---------------------------------------------------


class IbMor:
    """Morphism token of the operadic category: a pointed map f from the
    target's input set to the source's, the basepoint operation alpha0 (its
    first input reserved for the source output), and one operation per
    nonzero fiber."""

    __slots__ = ("f", "alpha0", "alphas", "_hash")

    def __init__(self, f, alpha0, alphas):
        self.f = tuple(f)
        self.alpha0 = alpha0
        self.alphas = tuple(alphas)
        self._hash = hash((self.f, self.alpha0, self.alphas))

    def __eq__(self, other):
        return (self._hash == other._hash and self.f == other.f
                and self.alpha0 == other.alpha0 and self.alphas == other.alphas)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "IbMor(f=%r, a0=%r, as=%r)" % (self.f, self.alpha0, self.alphas)


def _fiber0(f):
    return [j for j, v in enumerate(f, start=1) if v == 0]


def _fiber(f, i):
    return [j for j, v in enumerate(f, start=1) if v == i]


def ib_hom(P, x, y):
    """Morphism tokens x -> y in the operadic category."""
    n, m = x.arity, y.arity
    out = []
    for f in pointed_maps(m, n):
        F0 = _fiber0(f)
        a0_seq = Seq((x.out,) + tuple(y.ins[j - 1] for j in F0), y.out)
        if a0_seq.arity > P.bound:
            continue
        a0_level = P.level(a0_seq)
        if not a0_level:
            continue
        levels = []
        ok = True
        for i in range(1, n + 1):
            Fi = _fiber(f, i)
            si = Seq(tuple(y.ins[j - 1] for j in Fi), x.ins[i - 1])
            li = P.level(si)
            if not li:
                ok = False
                break
            levels.append(li)
        if not ok:
            continue
        for a0 in a0_level:
            for alphas in product(*levels):
                out.append(IbMor(f, a0, alphas))
    return tuple(out)


def ib_act(P, x, y, mor, mseqs_act):
    """Action of a morphism on an infinitesimal bimodule element given by
    callables; used for P itself and for functor transport."""
    raise NotImplementedError


def ib_apply_p(P, x, y, mor, mu):
    """The action of a morphism on P as a bimodule over itself: graft the
    fiber operations below, the basepoint operation above, then sort the
    inputs back into the target's order."""
    f, a0, alphas = mor.f, mor.alpha0, mor.alphas
    n, m = x.arity, y.arity
    # right action: plug alpha_i into input i of mu
    blocks = []
    for i in range(1, n + 1):
        Fi = _fiber(f, i)
        blocks.append((Seq(tuple(y.ins[j - 1] for j in Fi), x.ins[i - 1]),
                       mor.alphas[i - 1]))
    rho = P.gamma(x, mu, blocks)
    rho_seq = P.result_seq(x, blocks)
    # infinitesimal left action by alpha0 at its first slot
    F0 = _fiber0(f)
    a0_seq = Seq((x.out,) + tuple(y.ins[j - 1] for j in F0), y.out)
    lam = P.comp_at(a0_seq, a0, 1, rho_seq, rho)
    # input order is now (fibers of 1..n, then fiber of 0); sort to 1..m
    order = []
    for i in range(1, n + 1):
        order.extend(_fiber(f, i))
    order.extend(F0)
    lam_seq = Seq(tuple(y.ins[j - 1] for j in order), y.out)
    return P.act(lam_seq, invert(tuple(order)), lam)


def ib_compose(P, x, y, z, g, f_mor):
    """Composition in the operadic category: graft everything, then sort."""
    f, alpha0, alphas = f_mor.f, f_mor.alpha0, f_mor.alphas
    gf = compose_pointed(f, g.f)
    n, m, l = x.arity, y.arity, z.arity
    # component over each nonzero fiber of gf
    new_alphas = []
    for i in range(1, n + 1):
        Fi = _fiber(f, i)
        sub_blocks = []
        for j in Fi:
            Gj = _fiber(g.f, j)
            sub_blocks.append((Seq(tuple(z.ins[t - 1] for t in Gj), y.ins[j - 1]),
                               g.alphas[j - 1]))
        si = Seq(tuple(y.ins[j - 1] for j in Fi), x.ins[i - 1])
        comp = P.gamma(si, alphas[i - 1], sub_blocks)
        # sort the concatenated fibers into ascending order
        order = [t for j in Fi for t in _fiber(g.f, j)]
        comp_seq = Seq(tuple(z.ins[t - 1] for t in order), x.ins[i - 1])
        srt = sort_perm(order)
        new_alphas.append(P.act(comp_seq, _perm_to_sorted(order), comp))
    # basepoint component: g.alpha0 o_1 alpha0, then the fiber operations of
    # g over f's basepoint fiber, then sort (first slot fixed)
    F0 = _fiber0(f)
    a0_seq = Seq((x.out,) + tuple(y.ins[j - 1] for j in F0), y.out)
    G0 = _fiber0(g.f)
    g0_seq = Seq((y.out,) + tuple(z.ins[t - 1] for t in G0), z.out)
    top = P.comp_at(g0_seq, g.alpha0, 1, a0_seq, alpha0)
    top_seq = Seq(a0_seq.ins + tuple(z.ins[t - 1] for t in G0), z.out)
    blocks = [(Seq((x.out,), x.out), P.unit[x.out])]
    for j in F0:
        Gj = _fiber(g.f, j)
        blocks.append((Seq(tuple(z.ins[t - 1] for t in Gj), y.ins[j - 1]),
                       g.alphas[j - 1]))
    for t in G0:
        blocks.append((Seq((z.ins[t - 1],), z.ins[t - 1]), P.unit[z.ins[t - 1]]))
    comp0 = P.gamma(top_seq, top, blocks)
    order0 = [t for j in F0 for t in _fiber(g.f, j)] + list(G0)
    comp0_seq = Seq((x.out,) + tuple(z.ins[t - 1] for t in order0), z.out)
    fix_first = (1,) + tuple(1 + v for v in _perm_to_sorted(order0))
    new_alpha0 = P.act(comp0_seq, fix_first, comp0)
    return IbMor(gf, new_alpha0, tuple(new_alphas))


def _perm_to_sorted(order):
    """Permutation p with apply_seq(p, order-enumerated values) ascending:
    entry t of the result is position of the t-th smallest."""
    n = len(order)
    sorted_vals = sorted(order)
    remaining = list(order)
    out = []
    for v in sorted_vals:
        idx = remaining.index(v)
        out.append(idx + 1)
        remaining[idx] = None
    return tuple(out)


def ib_category(P, bound=None, name=None):
    """The category of sequences with operadic morphisms (discrete P)."""
    bound = P.bound if bound is None else bound
    objects = [s for s in all_seqs(P.colors, bound)]
    homs = {}
    for x in objects:
        for y in objects:
            homs[(x, y)] = ib_hom(P, x, y)

    def identity(x):
        return IbMor(identity_perm(x.arity), P.unit[x.out],
                     tuple(P.unit[c] for c in x.ins))

    def compose(x, y, z, g, f):
        return ib_compose(P, x, y, z, g, f)

    cat = FiniteCategory(objects, homs, identity, compose,
                         name=name or "ib(%s)" % P.name)
    cat.operad = P
    return cat


def r_category(P, bound=None):
    """Subcategory of active maps with identity basepoint component."""
    full = ib_category(P, bound)
    homs = {}
    for x in full.objects:
        for y in full.objects:
            homs[(x, y)] = tuple(
                m for m in full.hom(x, y)
                if is_active(m.f) and x.out == y.out and m.alpha0 == P.unit[x.out])
    return FiniteCategory(full.objects, homs, full.identity, full._compose,
                          name="r(%s)" % P.name)


def il_category(P, bound=None):
    """Subcategory of inert maps with identity fiber components."""
    full = ib_category(P, bound)
    homs = {}
    for x in full.objects:
        for y in full.objects:
            ms = []
            for m in full.hom(x, y):
                if not is_inert(m.f, x.arity):
                    continue
                if all(m.alphas[i - 1] == P.unit[x.ins[i - 1]]
                       and y.ins[_fiber(m.f, i)[0] - 1] == x.ins[i - 1]
                       for i in range(1, x.arity + 1)):
                    ms.append(m)
            homs[(x, y)] = tuple(ms)
    return FiniteCategory(full.objects, homs, full.identity, full._compose,
                          name="il(%s)" % P.name)


# -- twisted arrow category -----------------------------------------------------


def twisted_arrow(P, bound=None, name=None):
    """Category of elements of P as a bimodule over itself: objects are
    operations, morphisms are operadic-category morphisms carrying the
    source operation to the target one."""
    bound = P.bound if bound is None else bound
    ib = ib_category(P, bound)
    objects = []
    for s in ib.objects:
        for mu in P.level(s):
            objects.append((s, mu))

    homs = {}
    for (sx, mux) in objects:
        for (sy, muy) in objects:
            ms = [m for m in ib.hom(sx, sy)
                  if ib_apply_p(P, sx, sy, m, mux) == muy]
            homs[((sx, mux), (sy, muy))] = tuple(ms)

    def identity(obj):
        return ib.identity(obj[0])

    def compose(x, y, z, g, f):
        return ib_compose(P, x[0], y[0], z[0], g, f)

    cat = FiniteCategory(objects, homs, identity, compose,
                         name=name or "tw(%s)" % P.name)
    cat.operad = P
    cat.ib = ib
    return cat


# -- linear functors --------------------------------------------------------------


class LinearFunctor:
    """Functor to vector spaces: a dimension per object and a matrix per
    morphism, certified on identities and all composable pairs."""

    def __init__(self, cat, field, dims, mat, name="F", check=True):
        self.cat = cat
        self.field = field
        self.dims = dict(dims)
        self._mat = mat
        self._cache = {}
        self.name = name
        if check:
            err = self.certify()
            if err is not None:
                raise ValueError("functor %s: %s" % (name, err))

    def dim(self, x):
        return self.dims[x]

    def mat(self, x, y, m):
        key = (x, y, m)
        if key not in self._cache:
            v = self._mat(x, y, m)
            assert v.nrows == self.dims[y] and v.ncols == self.dims[x]
            self._cache[key] = v
        return self._cache[key]

    def certify(self, max_pairs=2 * 10 ** 5):
        f = self.field
        for x in self.cat.objects:
            if self.mat(x, x, self.cat.identity(x)) != Matrix.identity(f, self.dims[x]):
                return "identity not preserved at %r" % (x,)
        count = 0
        for x in self.cat.objects:
            for y in self.cat.objects:
                for m1 in self.cat.hom(x, y):
                    m1mat = self.mat(x, y, m1)
                    for z in self.cat.objects:
                        for m2 in self.cat.hom(y, z):
                            count += 1
                            if count > max_pairs:
                                return None
                            comp = self.cat.compose(x, y, z, m2, m1)
                            if self.mat(x, z, comp) != self.mat(y, z, m2).matmul(m1mat):
                                return "composition not preserved at (%r;%r)" % (m1, m2)
        return None


def constant_functor(cat, field, dim=1, name="k"):
    dims = {x: dim for x in cat.objects}
    eye = Matrix.identity(field, dim)

    def mat(x, y, m):
        return eye

    return LinearFunctor(cat, field, dims, mat, name=name, check=False)


def module_to_functor(M, ib=None):
    """A linear infinitesimal bimodule becomes a functor on the operadic
    category; inverse of functor_to_module up to equality of matrices."""
    P = M.operad
    if ib is None:
        ib = ib_category(P, M.bound)
    f = M.field
    dims = {s: M.dim(s) for s in ib.objects}

    def mat(x, y, mor):
        # right action by the fibers, then the basepoint operation, then sort
        blocks = []
        for i in range(1, x.arity + 1):
            Fi = _fiber(mor.f, i)
            blocks.append((Seq(tuple(y.ins[j - 1] for j in Fi), x.ins[i - 1]),
                           mor.alphas[i - 1]))
        rho = M.right_mat(x, blocks)
        rho_seq = M.right_result(x, blocks)
        F0 = _fiber0(mor.f)
        a0_seq = Seq((x.out,) + tuple(y.ins[j - 1] for j in F0), y.out)
        lam = M.infleft_mat(a0_seq, mor.alpha0, 1, rho_seq)
        order = []
        for i in range(1, x.arity + 1):
            order.extend(_fiber(mor.f, i))
        order.extend(F0)
        lam_seq = Seq(tuple(y.ins[j - 1] for j in order), y.out)
        srt = M.act_matrix(lam_seq, invert(tuple(order)))
        return srt.matmul(lam).matmul(rho)

    return LinearFunctor(ib.objects and ib or ib, f, dims, mat,
                         name="functor(%s)" % M.name, check=False), ib


def functor_to_module(F, P):
    """Extract the module actions back from a functor on ib_category(P)."""
    from .opmodules import LinOpModule
    from .symcoll import LinCollection

    f = F.field
    ib = F.cat
    levels = {s: tuple("b%d" % i for i in range(F.dim(s))) for s in ib.objects}

    def action_matrix(s, perm):
        # the permutation is the inert morphism relabeling the inputs
        y = s.permuted(perm)
        fmap = invert(perm)
        mor = IbMor(fmap, P.unit[s.out], tuple(P.unit[c] for c in s.ins))
        return F.mat(s, y, mor)

    carrier = LinCollection(f, P.colors, max(s.arity for s in ib.objects),
                            levels, action_matrix)

    def right_mat(s, blocks):
        m = sum(b.arity for b, _ in blocks)
        fmap = []
        for i, (b, _) in enumerate(blocks, start=1):
            fmap.extend([i] * b.arity)
        mor = IbMor(tuple(fmap), P.unit[s.out], tuple(p for _, p in blocks))
        y = LinOpModule.right_result(s, blocks)
        return F.mat(s, y, mor)

    def infleft_mat(root, p, i, mseq):
        y = LinOpModule.infleft_result(root, i, mseq)
        n, mm = root.arity, mseq.arity
        # f sends the embedded copy of mseq's inputs to 1..m, the rest to 0
        fmap = [0] * y.arity
        for t in range(mm):
            fmap[i - 1 + t] = t + 1
        # alpha0 = p with its i-th input rotated to the front
        from .opmodules import _move_to_front

        a0 = P.act(root, _move_to_front(n, i), p)
        mor = IbMor(tuple(fmap), a0, tuple(P.unit[c] for c in mseq.ins))
        return F.mat(mseq, y, mor)

    return LinOpModule(P, f, carrier, "inf-bi", right_mat=right_mat,
                       infleft_mat=infleft_mat, name="module(%s)" % F.name,
                       check=False)


# -- cobar complex ---------------------------------------------------------------


def nondegenerate_chains(cat, p):
    """Composable p-tuples of non-identity morphisms."""
    if p == 0:
        return [((x,), ()) for x in cat.objects]
    out = []

    def extend(chain_objs, chain_mors, length):
        if length == p:
            out.append((tuple(chain_objs), tuple(chain_mors)))
            return
        x = chain_objs[-1]
        for y in cat.objects:
            for m in cat.hom(x, y):
                if m == cat.identity(x) and x == y:
                    continue
                extend(chain_objs + [y], chain_mors + [(x, y, m)], length + 1)

    for x in cat.objects:
        extend([x], [], 0)
    return out


def limit_cochain_complex(cat, F, degree_bound=6):
    """Cobar (cosimplicial replacement) cochain complex of a functor; its
    degree-n cohomology is the n-th derived limit.  Returns a ChainComplex
    whose degree p holds the product over nondegenerate p-chains of the
    value at the chain's end, truncated above degree_bound + 1 so that
    cohomology through degree_bound is exact."""
    f = F.field
    top = degree_bound + 1
    chains = {p: nondegenerate_chains(cat, p) for p in range(top + 1)}
    index = {}
    dims = {}
    for p in range(top + 1):
        offs = []
        acc = 0
        for objs, mors in chains[p]:
            offs.append(acc)
            acc += F.dim(objs[-1])
        index[p] = offs
        dims[p] = acc

    diffs = {}
    for p in range(1, top + 1):
        mat = Matrix.zeros(f, dims[p], dims[p - 1])
        lower_pos = {chain: i for i, chain in enumerate(chains[p - 1])}
        for ci, (objs, mors) in enumerate(chains[p]):
            off = index[p][ci]
            dend = F.dim(objs[-1])
            # face 0: drop the first object
            sub = (objs[1:], mors[1:])
            if sub in lower_pos:
                soff = index[p - 1][lower_pos[sub]]
                for t in range(dend):
                    mat.rows[off + t][soff + t] = f.add(mat.rows[off + t][soff + t],
                                                        f.one)
            sign = f.neg(f.one)
            # inner faces: compose consecutive morphisms
            for i in range(1, p):
                x, y, m1 = mors[i - 1]
                _, z, m2 = mors[i]
                comp = cat.compose(x, y, z, m2, m1)
                if comp == cat.identity(x) and x == z:
                    sub = None
                else:
                    sub = (objs[: i] + objs[i + 1:],
                           mors[: i - 1] + ((x, z, comp),) + mors[i + 1:])
                if sub is not None and sub in lower_pos:
                    soff = index[p - 1][lower_pos[sub]]
                    for t in range(dend):
                        mat.rows[off + t][soff + t] = f.add(
                            mat.rows[off + t][soff + t], sign)
                sign = f.neg(sign)
            # last face: drop the last morphism, push forward along it
            sub = (objs[:-1], mors[:-1])
            if sub in lower_pos:
                x, y, m = mors[-1]
                soff = index[p - 1][lower_pos[sub]]
                fm = F.mat(x, y, m)
                for t in range(dend):
                    for u in range(F.dim(x)):
                        v = fm.rows[t][u]
                        if not f.is_zero(v):
                            mat.rows[off + t][soff + u] = f.add(
                                mat.rows[off + t][soff + u], f.mul(sign, v))
        diffs[p] = mat

    # package as a chain complex with C_p in homological degree -p flipped:
    # store as cohomological data via degrees 0..top with d_p : C_{p} -> C_{p-1}
    # transposed convention; we keep a cochain dict instead
    return CobarComplex(f, dims, diffs, degree_bound)


class CobarComplex:
    """Cochain complex C^0 -> C^1 -> ...; cohomology through degree_bound."""

    def __init__(self, field, dims, diffs, degree_bound):
        self.field = field
        self.dims = dims
        self.diffs = diffs  # p -> Matrix C^{p-1} -> C^p
        self.degree_bound = degree_bound
        for p, m in diffs.items():
            assert m.ncols == dims[p - 1] and m.nrows == dims[p]
        for p in range(1, degree_bound + 1):
            if p + 1 in diffs and not diffs[p + 1].matmul(diffs[p]).is_zero():
                raise ValueError("cobar differential does not square to zero")

    def as_chain_complex(self):
        """Homological repackaging (degree -p in homological degree p)."""
        dims = {p: self.dims[p] for p in self.dims}
        diffs = {p: self.diffs[p].transpose() for p in self.diffs}
        # transposing turns the cochain complex into a chain complex with
        # d_p : C_p -> C_{p-1}
        return ChainComplex(self.field, dims, diffs)

    def cohomology_dims(self):
        out = {}
        for n in range(self.degree_bound + 1):
            dn = self.diffs.get(n + 1)
            ker = self.dims[n] - (dn.rank() if dn is not None else 0)
            dprev = self.diffs.get(n)
            img = dprev.rank() if dprev is not None else 0
            out[n] = ker - img
        return out
