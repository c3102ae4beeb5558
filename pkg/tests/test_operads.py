"""Stock operads, the Lie truncation, and certified algebras."""

import pytest
from fractions import Fraction

from opcalc.fields import QQ, PrimeField
from opcalc.linalg import Matrix
from opcalc.perms import all_perms
from opcalc.symcoll import Seq
from opcalc.operads import (
    Algebra,
    AlgebraAxiomError,
    OperadAxiomError,
    algebra_over_ass,
    algebra_over_com,
    algebra_over_lie,
    make_ass,
    make_com,
    make_nucom,
    operad_from_data,
)
from opcalc.lie import make_lie_truncated, bracket_words, normalize_word

F5 = PrimeField(5)
F7 = PrimeField(7)


def seq1(n):
    return Seq(("*",) * n, "*")


def test_make_ass_certifies_and_counts():
    P = make_ass(4)
    assert len(P.level(seq1(3))) == 6
    # free transitive Sigma_3 action
    mu = P.level(seq1(3))[0]
    orbit = {P.act(seq1(3), sg, mu) for sg in all_perms(3)}
    assert len(orbit) == 6


def test_ass_composition_oracle():
    # independent oracle: order-preserving block concatenation on sequences
    P = make_ass(4)

    def oracle(mu, nus):
        sizes = [len(nu) for nu in nus]
        offs = [sum(sizes[:i]) for i in range(len(sizes))]
        out = []
        for b in mu:
            out.extend(offs[b - 1] + v for v in nus[b - 1])
        return tuple(out)

    from itertools import product as iproduct

    for k in range(5):
        for mu in P.level(seq1(k)):
            for sizes in iproduct(range(3), repeat=k):
                if sum(sizes) > 4:
                    continue
                for nus in iproduct(*[P.level(seq1(m)) for m in sizes]):
                    blocks = [(seq1(sizes[i]), nus[i]) for i in range(k)]
                    assert P.gamma(seq1(k), mu, blocks) == oracle(mu, nus)


def test_make_com_and_nucom():
    com = make_com(4)
    for n in range(5):
        assert len(com.level(seq1(n))) == 1
    nu = make_nucom(4)
    assert nu.level(seq1(0)) == ()
    for n in range(1, 5):
        assert len(nu.level(seq1(n))) == 1


def test_operad_from_data_roundtrip_ass():
    P = make_ass(2)
    levels = {s: P.level(s) for s in P.carrier.levels}
    actions = {}
    for s in P.carrier.levels:
        for sg in all_perms(s.arity):
            actions[(s, sg)] = {e: P.act(s, sg, e) for e in P.level(s)}
    gamma_table = {}
    from opcalc.operads import iter_gamma_shapes
    from itertools import product as iproduct

    for root, blocks in iter_gamma_shapes(P.colors, P.bound):
        for mu in P.level(root):
            for nus in iproduct(*[P.level(b) for b in blocks]):
                key = (root, tuple(blocks), mu, nus)
                gamma_table[key] = P.gamma(root, mu, list(zip(blocks, nus)))
    Q = operad_from_data(("*",), 2, levels, actions, dict(P.unit), gamma_table)
    for s in P.carrier.levels:
        assert Q.level(s) == P.level(s)


def test_operad_from_data_broken_gamma():
    # swap one composition value so that associativity fails
    P = make_ass(2)
    levels = {s: P.level(s) for s in P.carrier.levels}
    actions = {}
    for s in P.carrier.levels:
        for sg in all_perms(s.arity):
            actions[(s, sg)] = {e: P.act(s, sg, e) for e in P.level(s)}
    gamma_table = {}
    from opcalc.operads import iter_gamma_shapes
    from itertools import product as iproduct

    for root, blocks in iter_gamma_shapes(P.colors, P.bound):
        for mu in P.level(root):
            for nus in iproduct(*[P.level(b) for b in blocks]):
                gamma_table[(root, tuple(blocks), mu, nus)] = P.gamma(
                    root, mu, list(zip(blocks, nus)))
    bad_key = (seq1(2), (seq1(1), seq1(1)), (1, 2), ((1,), (1,)))
    gamma_table[bad_key] = (2, 1)
    with pytest.raises(OperadAxiomError):
        operad_from_data(("*",), 2, levels, actions, dict(P.unit), gamma_table)


def test_monoid_as_unary_operad():
    # a 2-element monoid {1, e} with e*e = e, concentrated in arity 1
    levels = {seq1(1): ("1", "e")}
    actions = {(seq1(1), (1,)): {"1": "1", "e": "e"}}
    table = {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}
    gamma_table = {}
    for a in ("1", "e"):
        for b in ("1", "e"):
            gamma_table[(seq1(1), (seq1(1),), a, (b,))] = table[(a, b)]
    P = operad_from_data(("*",), 1, levels, actions, {"*": "1"}, gamma_table)
    assert P.level(seq1(1)) == ("1", "e")


# -- Lie ----------------------------------------------------------------------


def test_bracket_straightening_basics():
    # [x2, x1] = -[x1, x2]
    assert bracket_words((2,), (1,)) == {(1, 2): -1}
    # Jacobi expansion [x1, [x2, x3]] = [[x1,x2],x3] - [[x1,x3],x2]
    assert bracket_words((1,), (2, 3)) == {(1, 2, 3): 1, (1, 3, 2): -1}
    # cyclic sum vanishes
    acc = {}
    for w, c in normalize_word((1, 2, 3)).items():
        acc[w] = acc.get(w, 0) + c
    for w, c in normalize_word((2, 3, 1)).items():
        acc[w] = acc.get(w, 0) + c
    for w, c in normalize_word((3, 1, 2)).items():
        acc[w] = acc.get(w, 0) + c
    assert all(v == 0 for v in acc.values())


def test_lie_dims_and_sign():
    L = make_lie_truncated(QQ, 4)
    assert L.dim(seq1(0)) == 0
    assert L.dim(seq1(1)) == 1
    assert L.dim(seq1(2)) == 1
    assert L.dim(seq1(3)) == 2
    assert L.dim(seq1(4)) == 6
    swap = L.act_matrix(seq1(2), (2, 1))
    assert swap == Matrix(QQ, [[QQ(-1)]])


def test_lie_rejects_positive_characteristic():
    with pytest.raises(ValueError):
        make_lie_truncated(F5, 3)


def test_lie_jacobi_rank():
    # the three one-slot insertions of the bracket into itself span a
    # 2-dimensional space; the Jacobi relation is the unique dependency
    L = make_lie_truncated(QQ, 3)
    b = {(1, 2): QQ.one}
    s2, s3 = seq1(2), seq1(3)
    i1 = L.gamma_vec(s2, b, [(s2, b), (seq1(1), {(1,): QQ.one})])
    i2 = L.gamma_vec(s2, b, [(seq1(1), {(1,): QQ.one}), (s2, b)])
    # the third insertion: rotate i1 by the cycle (2 3 1)
    v1 = L.vec_of(s3, i1)
    v2 = L.vec_of(s3, i2)
    cyc = (2, 3, 1)
    v3 = L.act_matrix(s3, cyc).apply(v1)
    m = Matrix.from_cols(QQ, [v1, v2, v3], 3)
    assert m.rank() == 2
    assert len(m.kernel_basis()) == 1


# -- algebras -------------------------------------------------------------------


def dual_numbers_assoc(field):
    from opcalc.algebras import AssocAlgebra

    one = [field.one, field.zero]
    x = [field.zero, field.one]
    zero = [field.zero, field.zero]
    return AssocAlgebra(field, [[one, x], [x, zero]], one, names=["1", "x"])


def test_dual_numbers_as_ass_algebra():
    P = make_ass(3)
    A = algebra_over_ass(P, dual_numbers_assoc(F5))
    assert A.dim("*") == 2


def test_ground_field_as_com_algebra():
    from opcalc.algebras import AssocAlgebra

    P = make_com(3)
    k = AssocAlgebra(QQ, [[[QQ(1)]]], [QQ(1)], names=["1"])
    A = algebra_over_com(P, k)
    assert A.dim("*") == 1


def test_noncommutative_fails_over_com():
    from opcalc.algebras import AssocAlgebra

    z = [F7.zero] * 3
    e11 = [F7.one, F7.zero, F7.zero]
    e12 = [F7.zero, F7.one, F7.zero]
    e22 = [F7.zero, F7.zero, F7.one]
    ut2 = AssocAlgebra(F7, [[e11, e12, z], [z, z, e12], [z, z, e22]],
                       [F7.one, F7.zero, F7.one])
    P = make_com(2)
    with pytest.raises(AlgebraAxiomError):
        algebra_over_com(P, ut2)


def test_random_structure_constants_rarely_associative():
    # negative test: certification catches a broken multiplication
    import random

    rng = random.Random(5)
    P = make_ass(2)
    from opcalc.algebras import AssocAlgebra

    broken = 0
    for _ in range(10):
        table = [[[F7(rng.randrange(7)) for _ in range(2)] for _ in range(2)]
                 for _ in range(2)]
        try:
            A = AssocAlgebra(F7, table, [F7.one, F7.zero])
            algebra_over_ass(P, A)
        except ValueError:
            broken += 1
    assert broken >= 9


def test_heisenberg_as_lie_algebra():
    # h3: [x, y] = z, z central
    L = make_lie_truncated(QQ, 3)
    f = QQ
    bracket = Matrix.zeros(f, 3, 9)
    # basis x=0, y=1, z=2; tensor index row-major
    bracket.rows[2][0 * 3 + 1] = f.one
    bracket.rows[2][1 * 3 + 0] = f(-1)
    A = algebra_over_lie(L, f, ["x", "y", "z"], bracket)
    assert A.dim("*") == 3


def test_broken_jacobi_fails():
    # [x,y] = z, [y,z] = x, [z,x] = z has Jacobi sum [[x,y],z]+[[y,z],x]+
    # [[z,x],y] = [z,y] = -x, nonzero
    L = make_lie_truncated(QQ, 3)
    f = QQ
    bracket = Matrix.zeros(f, 3, 9)
    bracket.rows[2][0 * 3 + 1] = f.one
    bracket.rows[2][1 * 3 + 0] = f(-1)
    bracket.rows[0][1 * 3 + 2] = f.one
    bracket.rows[0][2 * 3 + 1] = f(-1)
    bracket.rows[2][2 * 3 + 0] = f.one
    bracket.rows[2][0 * 3 + 2] = f(-1)
    with pytest.raises(AlgebraAxiomError):
        algebra_over_lie(L, f, ["x", "y", "z"], bracket)
