"""Collections, the composite product, and the infinitesimal composite."""

import pytest

from opcalc.fields import QQ, PrimeField
from opcalc.perms import all_perms, identity_perm
from opcalc.symcoll import (
    DivergenceError,
    Seq,
    compose,
    e_collection,
    infinitesimal_compose,
    linearize,
    reindex_colors,
    truncate,
    unit_collection,
)
from opcalc.operads import make_ass, make_com, make_nucom

F7 = PrimeField(7)


def seq1(n):
    return Seq(("*",) * n, "*")


def test_unit_collection_single_color():
    I = unit_collection(("*",))
    assert len(I.level(seq1(1))) == 1
    for n in (0, 2, 3):
        assert I.level(seq1(n)) == ()
    assert I.act(seq1(1), (1,), I.level(seq1(1))[0]) == I.level(seq1(1))[0]


def test_unit_collection_two_colors():
    I = unit_collection(("a", "b"))
    nonzero = [s for s in I.levels if I.level(s)]
    assert sorted((s.ins, s.out) for s in nonzero) == [(("a",), "a"), (("b",), "b")]


def test_empty_colors_rejected():
    with pytest.raises(ValueError):
        unit_collection(())


def test_unit_law_left():
    ass = make_ass(3)
    I = unit_collection(("*",), bound=3)
    out = compose(I, ass.carrier)
    for n in range(4):
        level = out.level(seq1(n))
        assert len(level) == len(ass.level(seq1(n)))
        # the canonical iso: the unique slot carries the Ass label
        for t in level:
            assert len(t.dbar) == 1
            assert t.nus[0] in ass.level(seq1(n))


def test_unit_law_right():
    ass = make_ass(3)
    I = unit_collection(("*",), bound=3)
    out = compose(ass.carrier, I)
    for n in range(4):
        level = out.level(seq1(n))
        assert len(level) == len(ass.level(seq1(n)))
        for t in level:
            assert t.a == tuple(range(1, n + 1))
            assert t.mu in ass.level(seq1(n))


def test_nucom_compose_nucom_arity2():
    # two-level trees on nucom: either one 2-block slot under a unary root,
    # or two singleton slots under a binary root
    nu = make_nucom(3)
    out = compose(nu.carrier, nu.carrier)
    assert len(out.level(seq1(2))) == 2


def test_com_truncated_compose_full_arity0():
    com = make_com(4)
    m2 = truncate(com.carrier, 2, complete=True)
    out = compose(m2, com.carrier)
    # k = 0, 1, 2 root arities, all slots empty
    assert len(out.level(seq1(0))) == 3


def test_divergence_guard():
    com = make_com(3)
    with pytest.raises(DivergenceError):
        compose(com.carrier, com.carrier)


def test_compose_equivariance():
    ass = make_ass(3)
    nu = make_nucom(3)
    out = compose(ass.carrier, nu.carrier)
    out.check_equivariance()


def test_inf_compose_shift():
    # P o_(1) E has level n = P(n+1), the module slot sitting first
    for P in (make_ass(4), make_com(4), make_nucom(4)):
        E = e_collection(("*",), bound=4)
        out = infinitesimal_compose(P.carrier, E)
        for n in range(out.bound + 1):
            assert len(out.level(seq1(n))) == len(P.level(seq1(n + 1)))
        out.check_equivariance()


def test_inf_compose_shift_action_is_slot_restriction():
    # the induced action on P o_(1) E fixes the first root slot
    P = make_ass(3)
    E = e_collection(("*",), bound=3)
    out = infinitesimal_compose(P.carrier, E)
    n = 2
    for el in out.level(seq1(n)):
        for sg in all_perms(n):
            moved = out.act(seq1(n), sg, el)
            lifted = (1,) + tuple(1 + x for x in sg)
            assert moved.mu == P.act(seq1(n + 1), lifted, el.mu)


def test_inf_unit_law():
    ass = make_ass(3)
    I = unit_collection(("*",), bound=3)
    out = infinitesimal_compose(I, ass.carrier)
    # I o_(1) N = N: root must be the unit with everything in the marked slot
    for n in range(4):
        level = out.level(seq1(n))
        assert len(level) == len(ass.level(seq1(n)))
        for el in level:
            assert el.S == tuple(range(1, n + 1))


def test_com_inf_com_dimensions():
    # marked-tree oracle: a marked subset S of {1..n} and points elsewhere,
    # so the count at arity n is sum_m C(n, m) = 2^n
    com = make_com(4)
    out = infinitesimal_compose(com.carrier, com.carrier)
    lin = linearize(out, QQ)
    from math import comb

    for n in range(out.bound + 1):
        assert lin.dim(seq1(n)) == sum(comb(n, m) for m in range(n + 1)) == 2 ** n


def test_reindex_identity():
    ass = make_ass(3)
    out = reindex_colors(ass.carrier, lambda c: c, ("*",))
    for s in ass.carrier.levels:
        assert out.level(s) == ass.carrier.level(s)


def test_reindex_collapse():
    # pull a single-colored collection back along {a,b} -> {*}
    ass = make_ass(2)
    out = reindex_colors(ass.carrier, lambda c: "*", ("a", "b"))
    assert len(out.level(Seq(("a", "b"), "a"))) == len(ass.level(seq1(2))) == 2
    assert len(out.level(Seq(("b", "b"), "a"))) == 2
    out.check_equivariance()


def test_linearize_ass_dims_and_permutation_actions():
    ass = make_ass(3)
    lin = linearize(ass.carrier, F7)
    from math import factorial

    for n in range(4):
        assert lin.dim(seq1(n)) == factorial(n)
    for n in (2, 3):
        for sg in all_perms(n):
            m = lin.act_matrix(seq1(n), sg)
            for row in m.rows:
                assert all(x in (0, 1) for x in row)
            # permutation matrix: one 1 per column and per row
            assert all(sum(col) == 1 for col in zip(*m.rows))
    lin.check_equivariance()


def test_linearize_com_dims():
    com = make_com(4)
    lin = linearize(com.carrier, QQ)
    for n in range(5):
        assert lin.dim(seq1(n)) == 1


def _reduced(P):
    """Carrier of P with the nullary level removed."""
    from opcalc.symcoll import SetCollection

    levels = {s: (() if s.arity == 0 else P.carrier.level(s))
              for s in P.carrier.levels}
    return SetCollection(P.colors, P.bound, levels, P.carrier._action)


def reassociate(L, M, N, MN, s, t):
    """Canonical relabeling (L o M) o N -> L o (M o N) on two-level trees."""
    from opcalc.symcoll import Tree2, _canonical_tree

    rho = t.mu  # Tree2 for L o M sitting at Seq(t.dbar, s.out)
    lam, ebar, a_rho, mus = rho.mu, rho.dbar, rho.a, rho.nus
    K = len(ebar)
    groups = [[] for _ in range(K)]  # outer slots grouped under lam slots
    for slot in range(1, len(t.dbar) + 1):
        groups[a_rho[slot - 1] - 1].append(slot)
    a_new = tuple(a_rho[t.a[l - 1] - 1] for l in range(1, s.arity + 1))
    inners = []
    for i in range(K):
        ts = groups[i]
        slot_leaves = [l for l in range(1, s.arity + 1) if a_new[l - 1] == i + 1]
        a_loc = tuple(ts.index(t.a[l - 1]) + 1 for l in slot_leaves)
        dbar_loc = tuple(t.dbar[x - 1] for x in ts)
        nus_loc = tuple(t.nus[x - 1] for x in ts)
        seq_i = Seq(tuple(s.ins[l - 1] for l in slot_leaves), ebar[i])
        inners.append(_canonical_tree(M, N, seq_i, Tree2(a_loc, dbar_loc, mus[i], nus_loc)))
    outer = Tree2(a_new, ebar, lam, tuple(inners))
    return _canonical_tree(L, MN, s, outer)


def test_compose_associativity_counts_and_bijection():
    # reduced inputs (nullary level removed) so all composites stay exact
    for P in (make_nucom(4), make_ass(4)):
        C = _reduced(P)
        MN = compose(C, C)
        left = compose(MN, C)
        right = compose(C, MN)
        bound = min(left.bound, right.bound)
        for n in range(bound + 1):
            s = seq1(n)
            assert len(left.level(s)) == len(right.level(s)), (
                "associativity count fails at arity %d for %s" % (n, P.name))
            image = {reassociate(C, C, C, MN, s, t) for t in left.level(s)}
            assert len(image) == len(left.level(s)), "reassociation not injective"
            assert image == set(right.level(s)), (
                "reassociation not onto at arity %d for %s" % (n, P.name))
