"""Flat connections, the module-structure recursion and its round trips."""

from fractions import Fraction
from random import Random

import pytest

from hscalc.coideal import CoIdeal
from hscalc.connection import (Connection, connection_make, delement_check,
                               nabla_bar, psi_construct, psi_extract_connection,
                               psi_substitution_check, random_flat_connection,
                               trivial_connection)
from hscalc.errors import NotFlat
from hscalc.poly import Poly
from hscalc.rings import MatRing, OppositeRing, WeylRing
from hscalc.series import OpSeries, epsilon, epsilon_family, filtration_check
from hscalc.subst import make_scalar, make_sigma_i, pair_embeddings
from hscalc import hs
from hscalc.weyl import MatOp, WeylOp


def test_single_variable_is_always_flat():
    c = connection_make([[[Poly.constant(1, Fraction(1, 3))]]], "left")
    assert c.n == 1 and c.m == 1


def test_flat_two_variable_example():
    y, x = Poly.variable(2, 2), Poly.variable(2, 1)
    c = connection_make([[[y]], [[x]]], "left")
    assert c.side == "left"


def test_nonflat_witness():
    y, z = Poly.variable(2, 2), Poly.zero(2)
    with pytest.raises(NotFlat) as err:
        connection_make([[[y]], [[z]]], "left")
    assert err.value.i == 1 and err.value.j == 2
    assert err.value.witness[0][0] == Poly.constant(2, -1)


def test_nabla_trivial_connection():
    c = trivial_connection(1, 1)
    got = c.nabla([Poly.one(1)])
    assert got == MatOp.scalar_op(WeylOp.partial(1, 1), 1)


def test_nabla_rank_one_with_potential():
    cpoly = Poly.constant(1, Fraction(1, 2))
    c = connection_make([[[cpoly]]], "left")
    got = c.nabla([Poly.one(1)])
    expected = MatOp.scalar_op(WeylOp.partial(1, 1) + WeylOp.from_poly(cpoly), 1)
    assert got == expected


def test_nabla_is_linear_over_base():
    c = connection_make([[[Poly.variable(1, 1)]]], "left")
    a = Poly.variable(1, 1)
    R = c.ring()
    assert c.nabla([a]) == R.mul(R.iota(a), c.nabla([Poly.one(1)]))


def test_psi_on_trivial_connection_is_tautological():
    delta = CoIdeal.total_degree(3, 2)
    D = hs.random_hs(5, delta, 2, 1)
    psi = psi_construct(trivial_connection(2, 1), D)
    for a in delta:
        assert psi.coeff(a).entries[0][0] == D.coeff(a)


def test_psi_of_taylor_with_constant_potential():
    cpoly = Poly.constant(1, Fraction(1, 2))
    conn = connection_make([[[cpoly]]], "left")
    t = hs.taylor(WeylOp.partial(1, 1), 4)
    psi = psi_construct(conn, t)
    base = MatOp.scalar_op(WeylOp.partial(1, 1) + WeylOp.from_poly(cpoly), 1)
    acc, fact = MatOp.identity(1, 1), 1
    for j in range(1, 5):
        acc = acc * base
        fact *= j
        assert psi.coeff((j,)) == acc.scale(Fraction(1, fact))


def test_psi_of_identity_is_one():
    delta = CoIdeal.total_degree(2, 2)
    conn = random_flat_connection(Random(1), 2, 2, "left")
    one = OpSeries.one(WeylRing(2), delta)
    assert psi_construct(conn, one) == OpSeries.one(conn.ring(), delta)


def test_psi_group_homomorphism_and_filtration():
    delta = CoIdeal.total_degree(3, 2)
    conn = random_flat_connection(Random(2), 2, 2, "left")
    D = hs.random_hs(6, delta, 2, 1)
    E = hs.random_hs(7, delta, 2, 1)
    PD, PE = psi_construct(conn, D), psi_construct(conn, E)
    assert psi_construct(conn, D * E) == PD * PE
    assert filtration_check(PD)


def test_epsilon_compatibility_both_sides():
    delta = CoIdeal.total_degree(3, 2)
    for side, seed in (("left", 3), ("right", 4)):
        conn = random_flat_connection(Random(seed), 2, 2, side)
        D = hs.random_hs(seed + 10, delta, 2, 1)
        psi = psi_construct(conn, D)
        famD, famP = epsilon_family(D), epsilon_family(psi)
        assert famP.total == nabla_bar(conn, famD.total)
        for i in range(2):
            assert famP.parts[i] == nabla_bar(conn, famD.parts[i])


def test_delement_property():
    delta = CoIdeal.total_degree(3, 2)
    conn = random_flat_connection(Random(8), 2, 2, "left")
    D = hs.random_hs(9, delta, 2, 1)
    psi = psi_construct(conn, D)
    assert delement_check(D, psi)
    # the identity matrix is not a D-element once D moves the generators
    one = OpSeries.one(conn.ring(), delta)
    assert D.coeff((1, 0)) != WeylOp.zero(2) or D.coeff((0, 1)) != WeylOp.zero(2)
    assert not delement_check(D, one)
    # while for the identity derivation any central series is
    ident = OpSeries.one(WeylRing(2), delta)
    assert delement_check(ident, one)


def test_extraction_round_trip_left_and_right():
    for side, seed in (("left", 11), ("right", 12)):
        conn = random_flat_connection(Random(seed), 2, 2, side)
        back = psi_extract_connection(lambda D: psi_construct(conn, D),
                                      2, 2, side)
        assert back.matrices == conn.matrices and back.side == side


def test_extraction_of_tautological_structure_is_trivial():
    conn = trivial_connection(2, 1)
    back = psi_extract_connection(lambda D: psi_construct(conn, D), 2, 1, "left")
    assert all(e.is_zero() for M in back.matrices for row in M for e in row)


def test_extraction_rejects_non_flat_provider():
    y, z = Poly.variable(2, 2), Poly.zero(2)
    bad = Connection(n=2, m=1, side="left", matrices=(((y,),), ((z,),)))
    with pytest.raises(NotFlat):
        psi_extract_connection(lambda D: psi_construct(bad, D), 2, 1, "left")


def test_substitution_compatibility_three_maps():
    conn = random_flat_connection(Random(14), 2, 2, "left")
    box3 = CoIdeal.box((3,))
    D1 = hs.random_hs(20, box3, 2, 1)
    phi = make_scalar(Poly.variable(2, 1), box3)
    assert psi_substitution_check(conn, D1, phi)

    box1 = CoIdeal.box((1,))
    D2 = hs.random_hs(21, box1, 2, 1)
    _, _, prod_map = pair_embeddings(2)
    assert psi_substitution_check(conn, D2, prod_map)

    delta = CoIdeal.total_degree(2, 2)
    D3 = hs.random_hs(22, delta, 2, 1)
    assert psi_substitution_check(conn, D3, make_sigma_i(1, delta, 2))


def test_nonlie_connection_breaks_group_homomorphism():
    y, z = Poly.variable(2, 2), Poly.zero(2)
    bad = Connection(n=2, m=1, side="left", matrices=(((y,),), ((z,),)))
    delta = CoIdeal.total_degree(2, 2)
    rng = Random(99)
    D = hs.random_hs(rng, delta, 2, 2)
    E = hs.random_hs(rng, delta, 2, 2)
    assert psi_construct(bad, D * E) != psi_construct(bad, D) * psi_construct(bad, E)


def test_right_connection_leibniz_sign():
    # in the opposite ring the distinguished derivation elements carry the
    # sign that keeps nabla(d) a = a nabla(d) + d(a)
    conn = random_flat_connection(Random(30), 1, 1, "right")
    R = conn.ring()
    a = Poly.variable(1, 1)
    nd = conn.nabla([Poly.one(1)])
    lhs = R.mul(nd, R.iota(a))
    rhs = R.add(R.mul(R.iota(a), nd), R.iota(a.partial(1)))
    assert lhs == rhs


def test_random_flat_connection_is_validated():
    for seed in range(5):
        for side in ("left", "right"):
            conn = random_flat_connection(Random(seed), 2, 2, side)
            connection_make(conn.matrices, side)  # revalidates, raises if curved
