"""Arity-truncated symmetric colored collections and their two products.

A collection stores a finite level (set of labels, or a based vector space)
for every color sequence (c_1..c_n; c) with n <= bound, together with the
right symmetric action sigma* : M(c_1..c_n;c) -> M(c_s(1)..c_s(n);c)
satisfying sigma* tau* = (tau sigma)*.

The composite product M o N is presented by canonical two-level trees: a
root label, an assignment of leaves to root slots, and one label per slot;
the simultaneous slot-permutation action is quotiented by taking the
lexicographically least representative (slots end up ordered by least leaf,
empty slots last).  The infinitesimal composite M o_(1) N marks exactly one
slot with an N-label and puts units everywhere else; no quotient is needed
because distinct unit slots carry distinct single leaves.
"""

from itertools import combinations, product

from .linalg import Matrix
from .perms import all_perms, apply_seq, compose as pcompose, identity_perm, invert


class Seq:
    """A color sequence (inputs; output)."""

    __slots__ = ("ins", "out", "_hash")

    def __init__(self, ins, out):
        self.ins = tuple(ins)
        self.out = out
        self._hash = hash((self.ins, out))

    @property
    def arity(self):
        return len(self.ins)

    def permuted(self, s):
        return Seq(apply_seq(s, self.ins), self.out)

    def __eq__(self, other):
        return self.ins == other.ins and self.out == other.out

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "(%s;%s)" % (",".join(map(str, self.ins)), self.out)


def all_seqs(colors, max_arity):
    for n in range(max_arity + 1):
        for ins in product(colors, repeat=n):
            for out in colors:
                yield Seq(ins, out)


def _key(label):
    """Deterministic total order on heterogeneous hashable labels: nested
    type-tagged tuples (strings stay strings; ints tagged; trees recurse)."""
    if isinstance(label, int):
        return ("i", label)
    if isinstance(label, str):
        return ("s", label)
    if isinstance(label, tuple):
        return ("t",) + tuple(_key(x) for x in label)
    key = getattr(label, "key", None)
    if key is not None:
        return ("o",) + tuple(key())
    return ("r", repr(label))


class DivergenceError(ValueError):
    """Composite would need unboundedly many root arities."""


class SetCollection:
    """Set-valued symmetric collection on a finite color set.

    levels: dict Seq -> iterable of labels; action(seq, perm, elem) -> elem,
    or None for collections whose every level is free on "rigid" labels that
    the caller never permutes (action defaults to identity only for n <= 1).
    """

    flavor = "set"

    def __init__(self, colors, bound, levels, action, complete=False):
        self.colors = tuple(colors)
        if not self.colors:
            raise ValueError("empty color set")
        self.bound = bound
        self.levels = {}
        for s in all_seqs(self.colors, bound):
            elems = levels.get(s, ())
            self.levels[s] = tuple(sorted(elems, key=_key))
        self._action = action
        self.complete = complete

    def level(self, s):
        return self.levels.get(s, ())

    def act(self, s, perm, elem):
        if perm == identity_perm(s.arity):
            return elem
        return self._action(s, perm, elem)

    def is_reduced(self):
        return all(not self.level(s) for s in self.levels if s.arity == 0)

    def support_arities(self):
        return sorted({s.arity for s, v in self.levels.items() if v})

    def check_equivariance(self):
        """sigma* tau* = (tau sigma)* and id* = id on every level."""
        for s in self.levels:
            n = s.arity
            for x in self.level(s):
                assert self.act(s, identity_perm(n), x) == x, "identity action broken"
            if n < 2:
                continue
            for x in self.level(s):
                for tau in all_perms(n):
                    mid = self.act(s, tau, x)
                    smid = s.permuted(tau)
                    for sigma in all_perms(n):
                        lhs = self.act(smid, sigma, mid)
                        rhs = self.act(s, pcompose(tau, sigma), x)
                        if lhs != rhs:
                            raise AssertionError(
                                "equivariance fails at %r: %r" % (s, (tau, sigma, x)))
        return True


class LinCollection:
    """Linear symmetric collection: based levels with invertible action
    matrices act(seq, perm) sending the basis at seq to the level at the
    permuted sequence."""

    flavor = "linear"

    def __init__(self, field, colors, bound, levels, action_matrix, complete=False):
        self.field = field
        self.colors = tuple(colors)
        if not self.colors:
            raise ValueError("empty color set")
        self.bound = bound
        self.levels = {}
        for s in all_seqs(self.colors, bound):
            self.levels[s] = tuple(levels.get(s, ()))
        self._action_matrix = action_matrix
        self.complete = complete

    def level(self, s):
        return self.levels.get(s, ())

    def dim(self, s):
        return len(self.level(s))

    def act_matrix(self, s, perm):
        if perm == identity_perm(s.arity):
            return Matrix.identity(self.field, self.dim(s))
        return self._action_matrix(s, perm)

    def is_reduced(self):
        return all(not self.level(s) for s in self.levels if s.arity == 0)

    def check_equivariance(self):
        for s in self.levels:
            n = s.arity
            if n < 2 or not self.level(s):
                continue
            for tau in all_perms(n):
                mid = self.act_matrix(s, tau)
                smid = s.permuted(tau)
                for sigma in all_perms(n):
                    lhs = self.act_matrix(smid, sigma).matmul(mid)
                    rhs = self.act_matrix(s, pcompose(tau, sigma))
                    if lhs != rhs:
                        raise AssertionError("equivariance fails at %r" % (s,))
        return True


# -- stock collections -------------------------------------------------------


def unit_collection(colors, bound=6):
    """I_C: a single point at (c; c) for each color, empty elsewhere."""
    levels = {Seq((c,), c): ("1",) for c in colors}

    def action(s, perm, elem):
        return elem  # only Sigma_1 acts

    return SetCollection(colors, bound, levels, action, complete=True)


def e_collection(colors, bound=6):
    """E_C: a single point in arity 0 at each color, empty elsewhere."""
    levels = {Seq((), c): ("*",) for c in colors}
    return SetCollection(colors, bound, levels, lambda s, p, e: e, complete=True)


def truncate(M, new_bound, complete=True):
    """Forget levels above new_bound; by default treat the rest as all of M."""
    levels = {s: M.level(s) for s in all_seqs(M.colors, new_bound)}
    if M.flavor == "set":
        return SetCollection(M.colors, new_bound, levels, M._action, complete=complete)
    return LinCollection(M.field, M.colors, new_bound, levels, M._action_matrix,
                         complete=complete)


def reindex_colors(Q, alpha, new_colors):
    """Pull back Q along alpha : new_colors -> Q.colors."""
    for c in new_colors:
        assert alpha(c) in Q.colors, "alpha not into the color set of Q"
    if Q.flavor == "set":
        levels = {}
        for s in all_seqs(new_colors, Q.bound):
            levels[s] = Q.level(Seq(tuple(alpha(c) for c in s.ins), alpha(s.out)))

        def action(s, perm, elem):
            qs = Seq(tuple(alpha(c) for c in s.ins), alpha(s.out))
            return Q.act(qs, perm, elem)

        return SetCollection(new_colors, Q.bound, levels, action, complete=Q.complete)
    levels = {}
    for s in all_seqs(new_colors, Q.bound):
        levels[s] = Q.level(Seq(tuple(alpha(c) for c in s.ins), alpha(s.out)))

    def action_matrix(s, perm):
        qs = Seq(tuple(alpha(c) for c in s.ins), alpha(s.out))
        return Q.act_matrix(qs, perm)

    return LinCollection(Q.field, new_colors, Q.bound, levels, action_matrix,
                         complete=Q.complete)


def linearize(M, field):
    """Free linear collection on a set-valued one; actions become
    permutation matrices."""
    assert M.flavor == "set"
    levels = {s: M.level(s) for s in M.levels}

    def action_matrix(s, perm):
        src = M.level(s)
        tgt_seq = s.permuted(perm)
        tgt = M.level(tgt_seq)
        index = {e: i for i, e in enumerate(tgt)}
        m = Matrix.zeros(field, len(tgt), len(src))
        for j, e in enumerate(src):
            m.rows[index[M.act(s, perm, e)]][j] = field.one
        return m

    return LinCollection(field, M.colors, M.bound, levels, action_matrix,
                         complete=M.complete)


# -- composite product -------------------------------------------------------


class Tree2:
    """Canonical two-level tree: root label mu over slots colored dbar,
    leaves assigned to slots by a, slot i labelled nus[i-1]."""

    __slots__ = ("a", "dbar", "mu", "nus", "_hash", "_key")

    def __init__(self, a, dbar, mu, nus):
        self.a = tuple(a)
        self.dbar = tuple(dbar)
        self.mu = mu
        self.nus = tuple(nus)
        self._hash = hash((self.a, self.dbar, self.mu, self.nus))
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (self.a, tuple(map(_key, self.dbar)), _key(self.mu),
                         tuple(map(_key, self.nus)))
        return self._key

    def __eq__(self, other):
        return (self._hash == other._hash and self.a == other.a
                and self.dbar == other.dbar and self.mu == other.mu
                and self.nus == other.nus)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Tree2(a=%r, dbar=%r, mu=%r, nus=%r)" % (self.a, self.dbar, self.mu, self.nus)


def _slot_leaves(a, k):
    out = [[] for _ in range(k)]
    for leaf, s in enumerate(a, start=1):
        out[s - 1].append(leaf)
    return out


def _canonical_tree(M, N, seq, tree):
    """Least representative of the Sigma_k orbit of a labelled tree."""
    k = len(tree.dbar)
    if k < 2:
        return tree
    root_seq = Seq(tree.dbar, seq.out)
    best = None
    for sigma in all_perms(k):
        inv = invert(sigma)
        a2 = tuple(inv[s - 1] for s in tree.a)
        dbar2 = apply_seq(sigma, tree.dbar)
        mu2 = M.act(root_seq, sigma, tree.mu)
        nus2 = apply_seq(sigma, tree.nus)
        cand = Tree2(a2, dbar2, mu2, nus2)
        ck = cand.key()
        if best is None or ck < best[0]:
            best = (ck, cand)
    return best[1]


def compose(M, N, bound=None):
    """The composite product M o N as a set-valued collection.

    Requires N reduced or M complete (otherwise root arities are unbounded).
    Levels are exact up to the returned bound.
    """
    assert M.flavor == "set" and N.flavor == "set"
    assert M.colors == N.colors, "color sets differ"
    colors = M.colors
    if not N.is_reduced() and not M.complete:
        raise DivergenceError(
            "M o N diverges: N has nullary elements and M is an arity "
            "truncation; truncate M explicitly first")
    if bound is not None:
        out_bound = bound
    elif M.complete:
        out_bound = N.bound  # no root arity is lost, leaves cap the bound
    else:
        out_bound = min(M.bound, N.bound)
    kmax = M.bound

    levels = {}
    for s in all_seqs(colors, out_bound):
        n = s.arity
        found = set()
        for k in range(kmax + 1):
            for a in product(range(1, k + 1), repeat=n):
                slots = _slot_leaves(a, k)
                if any(len(b) > N.bound for b in slots):
                    continue
                for dbar in product(colors, repeat=k):
                    root_seq = Seq(dbar, s.out)
                    mus = M.level(root_seq)
                    if not mus:
                        continue
                    slot_levels = []
                    ok = True
                    for i in range(k):
                        block_seq = Seq(tuple(s.ins[l - 1] for l in slots[i]), dbar[i])
                        lv = N.level(block_seq)
                        if not lv:
                            ok = False
                            break
                        slot_levels.append(lv)
                    if not ok:
                        continue
                    for mu in mus:
                        for nus in product(*slot_levels) if k else ((),):
                            t = _canonical_tree(M, N, s, Tree2(a, dbar, mu, nus))
                            found.add(t)
        levels[s] = found

    def action(s, perm, tree):
        # relabel leaves by perm, act inside each slot, recanonicalize
        n = s.arity
        k = len(tree.dbar)
        a2 = tuple(tree.a[perm[j] - 1] for j in range(n))
        old_slots = _slot_leaves(tree.a, k)
        new_slots = _slot_leaves(a2, k)
        nus2 = []
        for i in range(k):
            old_sorted = old_slots[i]
            visited = [perm[j - 1] for j in new_slots[i]]
            pi = tuple(old_sorted.index(v) + 1 for v in visited)
            old_seq = Seq(tuple(s.ins[l - 1] for l in old_sorted), tree.dbar[i])
            nus2.append(N.act(old_seq, pi, tree.nus[i]))
        t2 = Tree2(a2, tree.dbar, tree.mu, nus2)
        return _canonical_tree(M, N, s.permuted(perm), t2)

    complete = M.complete and N.complete and out_bound >= min(M.bound, N.bound)
    return SetCollection(colors, out_bound, levels, action, complete=complete)


# -- infinitesimal composite -------------------------------------------------


class Marked:
    """Basis element of M o_(1) N: root label mu in M(d, c_T; c) whose first
    input carries the N-label nu eating the leaves in S."""

    __slots__ = ("S", "d", "mu", "nu", "_hash", "_key")

    def __init__(self, S, d, mu, nu):
        self.S = tuple(S)
        self.d = d
        self.mu = mu
        self.nu = nu
        self._hash = hash((self.S, self.d, self.mu, self.nu))
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (self.S, _key(self.d), _key(self.mu), _key(self.nu))
        return self._key

    def __eq__(self, other):
        return (self._hash == other._hash and self.S == other.S
                and self.d == other.d and self.mu == other.mu
                and self.nu == other.nu)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Marked(S=%r, d=%r, mu=%r, nu=%r)" % (self.S, self.d, self.mu, self.nu)


def infinitesimal_compose(M, N, bound=None):
    """M o_(1) N: exactly one root slot carries an N-label, the rest are
    units.  The marked slot is normalized to root input 1."""
    assert M.flavor == "set" and N.flavor == "set"
    assert M.colors == N.colors
    colors = M.colors
    if bound is not None:
        out_bound = bound
    elif M.complete:
        out_bound = N.bound  # root arities above M.bound are genuinely empty
    elif N.is_reduced():
        out_bound = min(M.bound, N.bound)
    else:
        out_bound = min(M.bound - 1, N.bound)

    levels = {}
    for s in all_seqs(colors, out_bound):
        n = s.arity
        found = []
        for m in range(0, min(n, N.bound) + 1):
            r = n - m + 1
            if r > M.bound:
                continue
            for S in combinations(range(1, n + 1), m):
                T = [l for l in range(1, n + 1) if l not in S]
                for d in colors:
                    mu_seq = Seq((d,) + tuple(s.ins[l - 1] for l in T), s.out)
                    nu_seq = Seq(tuple(s.ins[l - 1] for l in S), d)
                    for mu in M.level(mu_seq):
                        for nu in N.level(nu_seq):
                            found.append(Marked(S, d, mu, nu))
        levels[s] = found

    def action(s, perm, el):
        n = s.arity
        S2 = tuple(sorted(j for j in range(1, n + 1) if perm[j - 1] in el.S))
        T_old = [l for l in range(1, n + 1) if l not in el.S]
        T2 = [j for j in range(1, n + 1) if j not in S2]
        old_S = list(el.S)
        pi_S = tuple(old_S.index(perm[j - 1]) + 1 for j in S2)
        nu_seq = Seq(tuple(s.ins[l - 1] for l in old_S), el.d)
        nu2 = N.act(nu_seq, pi_S, el.nu)
        pi_T = tuple(T_old.index(perm[j - 1]) + 1 for j in T2)
        mu_perm = (1,) + tuple(1 + t for t in pi_T)
        mu_seq = Seq((el.d,) + tuple(s.ins[l - 1] for l in T_old), s.out)
        mu2 = M.act(mu_seq, mu_perm, el.mu)
        return Marked(S2, el.d, mu2, nu2)

    complete = M.complete and N.complete
    return SetCollection(colors, out_bound, levels, action, complete=complete)
