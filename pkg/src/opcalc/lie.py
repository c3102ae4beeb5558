"""Truncated Lie operad on the left-normed bracket-word basis.

Lie(n) has basis the words (1, j_2, .., j_n) over {1..n}, read as the
left-normed bracket [[..[x_1, x_{j_2}]..], x_{j_n}]; dim Lie(n) = (n-1)!.
Arbitrary bracket expressions are straightened into this basis with
antisymmetry and the Jacobi expansion [u,[v,w]] = [[u,v],w] - [[u,w],v].
Characteristic zero only.
"""

from itertools import permutations, product

from .linalg import Matrix
from .perms import invert
from .symcoll import LinCollection, Seq
from .operads import LinOperad


def _add(out, w, c):
    v = out.get(w, 0) + c
    if v:
        out[w] = v
    elif w in out:
        del out[w]


def bracket_words(w1, w2):
    """[w1, w2] for basis words with disjoint letters -> {word: int coeff}."""
    if len(w2) == 1:
        x = w2[0]
        if w1[0] < x:
            return {w1 + (x,): 1}
        if len(w1) == 1:
            return {(x, w1[0]): -1}
        return {w: -c for w, c in _letter_left(x, w1).items()}
    W2, y = w2[:-1], w2[-1]
    out = {}
    for u, c in bracket_words(w1, W2).items():
        for v, d in bracket_words(u, (y,)).items():
            _add(out, v, c * d)
    for u, c in bracket_words(w1, (y,)).items():
        for v, d in bracket_words(u, W2).items():
            _add(out, v, -c * d)
    return out


def _letter_left(x, w):
    """[x, w] where the letter x is smaller than every letter of w."""
    if len(w) == 1:
        return {(x, w[0]): 1}
    W, y = w[:-1], w[-1]
    out = {}
    for u, c in _letter_left(x, W).items():
        _add(out, u + (y,), c)  # [[x,W],y]: u begins with the global minimum
    for v, d in bracket_words((x, y), W).items():
        _add(out, v, -d)
    return out


def bracket_combos(c1, c2):
    out = {}
    for w1, a in c1.items():
        for w2, b in c2.items():
            for w, c in bracket_words(w1, w2).items():
                _add(out, w, a * b * c)
    return out


def normalize_word(letters):
    """Straighten the left-normed bracket on an arbitrary letter sequence."""
    combo = {(letters[0],): 1}
    for x in letters[1:]:
        combo = bracket_combos(combo, {(x,): 1})
    return combo


def substitute(word, blocks):
    """gamma for bracket words: replace letter i by blocks[i-1], a combo of
    words over the global letters of block i."""
    combo = blocks[word[0] - 1]
    for letter in word[1:]:
        combo = bracket_combos(combo, blocks[letter - 1])
    return combo


def lie_basis(n):
    if n == 0:
        return ()
    if n == 1:
        return ((1,),)
    return tuple(sorted((1,) + p for p in permutations(range(2, n + 1))))


_CACHE = {}


def make_lie_truncated(field, bound=4, check=True):
    """The Lie operad truncated at the arity bound, over a field of
    characteristic zero."""
    if field.char != 0:
        raise ValueError("Lie truncation requires characteristic 0")
    if bound > 5:
        raise ValueError("arity bound above 5 is not supported (sizes blow up)")
    key = (field, bound)
    if check and key in _CACHE:
        return _CACHE[key]
    c = "*"
    levels = {Seq((c,) * n, c): lie_basis(n) for n in range(bound + 1)}

    def to_field(combo):
        return {w: field(v) for w, v in combo.items()}

    def action_matrix(s, perm):
        n = s.arity
        basis = lie_basis(n)
        index = {w: i for i, w in enumerate(basis)}
        inv = invert(perm)
        m = Matrix.zeros(field, len(basis), len(basis))
        for j, w in enumerate(basis):
            relabeled = tuple(inv[l - 1] for l in w)
            for w2, coef in normalize_word(relabeled).items():
                m.rows[index[w2]][j] = field(coef)
        return m

    carrier = LinCollection(field, (c,), bound, levels, action_matrix, complete=False)

    def gamma_basis(root_seq, word, blocks):
        sizes = [s.arity for s, _ in blocks]
        offs = []
        acc = 0
        for sz in sizes:
            offs.append(acc)
            acc += sz
        shifted = []
        for i, (s, w) in enumerate(blocks):
            shifted.append({tuple(offs[i] + l for l in w): 1})
        return to_field(substitute(word, shifted))

    unit = {c: {(1,): field.one}}
    P = LinOperad(field, carrier, unit, gamma_basis, name="lie", check=check)
    if check:
        _CACHE[key] = P
    return P
