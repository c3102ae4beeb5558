"""Poincare-Birkhoff-Witt desk check.

The induced algebra Ass o_Lie g is presented on the tensor algebra of g
(words = orbit representatives under the free symmetric action on linear
orders), modulo the relations that let a grafted Lie operation act either
through word rearrangement or through the bracket of g.  The filtration by
tensor weight then has graded dimensions dim Sym^w(g).
"""

from itertools import product
from math import comb

from .lie import lie_basis
from .linalg import Matrix


def word_orders(word):
    """Expansion of a left-normed bracket word into linear orders with signs:
    [u, x] -> u.x - x.u applied letter by letter."""
    out = {(word[0],): 1}
    for x in word[1:]:
        new = {}
        for u, c in out.items():
            new[u + (x,)] = new.get(u + (x,), 0) + c
            new[(x,) + u] = new.get((x,) + u, 0) - c
        out = {k: v for k, v in new.items() if v}
    return out


def _eval_word(field, bracket, basis_vecs, word, idxs):
    """Iterated bracket of basis elements g_{idxs[letter]} along a word."""
    dim = len(basis_vecs)

    def pair(u, v):
        tens = [field.zero] * (dim * dim)
        for i, ui in enumerate(u):
            if field.is_zero(ui):
                continue
            for j, vj in enumerate(v):
                if not field.is_zero(vj):
                    tens[i * dim + j] = field.mul(ui, vj)
        return bracket.apply(tens)

    cur = basis_vecs[idxs[word[0] - 1]]
    for letter in word[1:]:
        cur = pair(cur, basis_vecs[idxs[letter - 1]])
    return cur


def pbw_check(field, bracket, dim, weight_bound):
    """Graded dimensions of Ass o_Lie g through the weight bound, compared
    with dim Sym^w(g).  bracket: Matrix g (x) g -> g (Jacobi assumed
    certified by the caller)."""
    if field.char != 0:
        raise ValueError("PBW comparison requires characteristic 0")
    D = weight_bound
    offsets = []
    total = 0
    for w in range(D + 1):
        offsets.append(total)
        total += dim ** w

    def coord(widx, letters):
        idx = 0
        for x in letters:
            idx = idx * dim + x
        return offsets[widx] + idx

    basis_vecs = [[field.one if i == j else field.zero for j in range(dim)]
                  for i in range(dim)]

    rows = []
    for m in range(2, D + 1):
        for k in range(1, m):
            for sizes in _compositions(k, m):
                if any(s == 0 for s in sizes):
                    continue
                if all(s == 1 for s in sizes):
                    continue
                for words in product(*[lie_basis(s) for s in sizes]):
                    for idxs in product(range(dim), repeat=m):
                        pos = 0
                        blocks = []
                        for s in sizes:
                            blocks.append(idxs[pos: pos + s])
                            pos += s
                        v = [field.zero] * total
                        # grafted word acting through rearrangement (weight m)
                        expansions = [word_orders(w) for w in words]
                        for combo in product(*[list(e.items()) for e in expansions]):
                            letters = []
                            coef = 1
                            for (order, c), blk in zip(combo, blocks):
                                letters.extend(blk[o - 1] for o in order)
                                coef *= c
                            i = coord(m, letters)
                            v[i] = field.add(v[i], field(coef))
                        # the same operations evaluated in g (weight k)
                        vals = [
                            _eval_word(field, bracket, basis_vecs, words[i], blocks[i])
                            for i in range(k)
                        ]
                        for tup in product(range(dim), repeat=k):
                            coef = field.one
                            for i in range(k):
                                coef = field.mul(coef, vals[i][tup[i]])
                                if field.is_zero(coef):
                                    break
                            if field.is_zero(coef):
                                continue
                            i = coord(k, tup)
                            v[i] = field.sub(v[i], coef)
                        if any(not field.is_zero(x) for x in v):
                            rows.append(v)
    # echelonize with coordinates ordered by descending weight
    order = []
    for w in range(D, -1, -1):
        order.extend(range(offsets[w], offsets[w] + dim ** w))
    inv_order = [0] * total
    for newpos, old in enumerate(order):
        inv_order[old] = newpos
    reordered = [[r[order[j]] for j in range(total)] for r in rows]
    if reordered:
        red, pivots = Matrix(field, reordered, total).rref()
    else:
        pivots = []
    # pivots are positions in descending-weight order; a pivot eliminates a
    # coordinate of that weight
    weight_of_newpos = []
    for w in range(D, -1, -1):
        weight_of_newpos.extend([w] * (dim ** w))
    killed_by_weight = [0] * (D + 1)
    for p in pivots:
        killed_by_weight[weight_of_newpos[p]] += 1
    graded = []
    filt_prev = 0
    for w in range(D + 1):
        full = sum(dim ** u for u in range(w + 1))
        killed_within = sum(killed_by_weight[u] for u in range(w + 1))
        filt = full - killed_within
        graded.append(filt - filt_prev)
        filt_prev = filt
    sym = [comb(w + dim - 1, dim - 1) for w in range(D + 1)]
    return {"graded": graded, "sym": sym, "match": graded == sym,
            "weight_bound": D}


def _compositions(k, total):
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(k - 1, total - first):
            yield (first,) + rest
