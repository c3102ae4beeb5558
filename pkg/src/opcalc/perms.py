"""Permutations of {1..n} stored as tuples of images.

A permutation s acts on positions: s[i-1] is the image of i.  Composition
is (s*t)(i) = s(t(i)).  The right action on a sequence used throughout is
``apply_seq(s, xs)[i] = xs[s(i)]``, i.e. entry i of the result is the entry
of xs sitting at position s(i).
"""

from itertools import permutations


def identity_perm(n):
    return tuple(range(1, n + 1))


def compose(s, t):
    # (s*t)(i) = s(t(i))
    assert len(s) == len(t)
    return tuple(s[t[i] - 1] for i in range(len(s)))


def invert(s):
    out = [0] * len(s)
    for i, si in enumerate(s):
        out[si - 1] = i + 1
    return tuple(out)


def apply_seq(s, xs):
    """Reindex xs by s: result[i] = xs[s(i+1)-1]."""
    assert len(s) == len(xs)
    return tuple(xs[s[i] - 1] for i in range(len(s)))


def all_perms(n):
    return [tuple(p) for p in permutations(range(1, n + 1))]


def block_perm(s, sizes):
    """Permutation of sum(sizes) letters moving whole blocks by s.

    Block i of the result (with size sizes[s(i)-1]) is the s(i)-th block of
    the source, order inside blocks preserved.
    """
    k = len(s)
    assert len(sizes) == k
    offsets = [0] * k
    acc = 0
    for i in range(k):
        offsets[i] = acc
        acc += sizes[i]
    images = []
    for i in range(k):
        b = s[i] - 1
        images.extend(range(offsets[b] + 1, offsets[b] + sizes[b] + 1))
    return tuple(images)


def sort_perm(values):
    """Permutation s with apply_seq(s, values) sorted (stable)."""
    n = len(values)
    order = sorted(range(n), key=lambda i: (values[i], i))
    return tuple(i + 1 for i in order)


def perm_from_images(images):
    s = tuple(images)
    assert sorted(s) == list(range(1, len(s) + 1)), "not a permutation: %r" % (s,)
    return s
