"""Higher derivations: Leibniz validation, group structure, epsilon and its inverse."""

from fractions import Fraction
from random import Random

import pytest

from hscalc.coideal import CoIdeal
from hscalc.errors import NonzeroConstantTerm, ZeroTermNotIdentity
from hscalc.freealg import NCPoly
from hscalc.poly import Poly
from hscalc.rings import FreeRing, WeylRing
from hscalc.series import OpSeries, epsilon, epsilon_family
from hscalc.subst import make_scalar, make_sigma_i, pair_embeddings
from hscalc import hs
from hscalc.weyl import WeylOp

WR1, WR2 = WeylRing(1), WeylRing(2)


def test_taylor_family_passes_leibniz():
    t = hs.taylor(WeylOp.partial(1, 1), 4)
    assert hs.check_leibniz(t).ok


def test_identity_series_passes():
    one = hs.identity_series(2, CoIdeal.total_degree(2, 2))
    assert hs.check_leibniz(one).ok


def test_truncated_tail_fails_at_order_two():
    # d in degree one with nothing above it: the second-order defect shows on (x, x)
    box2 = CoIdeal.box((2,))
    broken = OpSeries(WR1, box2, {(0,): WeylOp.one(1), (1,): WeylOp.partial(1, 1)})
    report = hs.check_leibniz(broken)
    assert not report.ok
    assert report.failing_indices() == [(2,)]
    alpha, mu, nu, defect = report.failures[0]
    assert not defect.is_zero()


def test_zero_term_must_be_identity():
    box1 = CoIdeal.box((1,))
    with pytest.raises(ZeroTermNotIdentity):
        hs.check_leibniz(OpSeries(WR1, box1, {(0,): WeylOp.partial(1, 1)}))


def test_group_laws():
    delta = CoIdeal.total_degree(3, 2)
    D = hs.random_hs(1, delta, 2, 1)
    E = hs.random_hs(2, delta, 2, 1)
    one = OpSeries.one(WR2, delta)
    assert hs.compose(D, D.inverse(), validate=False) == one
    assert (D * E).inverse() == E.inverse() * D.inverse()


def test_compose_of_taylor_families_first_order():
    t1 = hs.taylor(WeylOp.partial(2, 1), 3)
    t2 = hs.taylor(WeylOp.partial(2, 2), 3)
    both = hs.compose(t1, t2)
    assert both.coeff((1,)) == WeylOp.partial(2, 1) + WeylOp.partial(2, 2)


def test_substitute_product_map_keeps_leibniz():
    _, _, prod_map = pair_embeddings(1)
    src = CoIdeal.box((1,))
    D = OpSeries(WR1, src, {(0,): WeylOp.one(1), (1,): WeylOp.partial(1, 1)})
    moved = hs.substitute(prod_map, D)
    assert moved.coeff((1, 1)) == WeylOp.partial(1, 1)
    assert moved.coeff((1, 0)).is_zero()


def test_substitute_scalar_action():
    # a . (1 + d s) = 1 + a d s: the module structure on derivations
    src = CoIdeal.box((1,))
    a = Poly.variable(1, 1)
    phi = make_scalar(a, src)
    D = OpSeries(WR1, src, {(0,): WeylOp.one(1), (1,): WeylOp.partial(1, 1)})
    moved = hs.substitute(phi, D)
    assert moved.coeff((1,)) == WeylOp(1, {(1,): a})


def test_substitute_sigma_on_taylor():
    # the coefficient at (j, 1) of sigma^1 . D is j D_j
    t = hs.taylor(WeylOp.partial(1, 1), 3)
    s1 = make_sigma_i(1, t.coideal, 1)
    moved = hs.substitute(s1, t, validate=False)
    for j in range(1, 4):
        assert moved.coeff((j, 1)) == t.coeff((j,)).scale(j)
        assert moved.coeff((j, 0)) == t.coeff((j,))
    assert hs.check_leibniz(moved).ok


def test_epsilon_first_component_is_linear_one():
    delta = CoIdeal.total_degree(3, 2)
    D = hs.random_hs(3, delta, 2, 2)
    fam = hs.hs_epsilon(D)
    assert fam.total.coeff((1, 0)) == D.coeff((1, 0))
    assert fam.total.coeff((0, 1)) == D.coeff((0, 1))


def test_epsilon_third_order_expansion():
    # 3 D3 - 2 D1 D2 - D2 D1 + D1^3, checked in the oracle and in operators
    ring = FreeRing(["D1", "D2", "D3"])
    box3 = CoIdeal.box((3,))
    d1, d2, d3 = (NCPoly.generator(k) for k in range(3))
    r = OpSeries(ring, box3, {(0,): NCPoly.one(), (1,): d1, (2,): d2, (3,): d3})
    expect = d3.scale(3) - (d1 * d2).scale(2) - d2 * d1 + d1 * d1 * d1
    assert epsilon(r).coeff((3,)) == expect

    D = hs.random_hs(17, box3, 1, 2)
    w1, w2, w3 = D.coeff((1,)), D.coeff((2,)), D.coeff((3,))
    expect_op = (w3.scale(3) - w1.compose(w2).scale(2) - w2.compose(w1)
                 + w1.compose(w1).compose(w1))
    assert hs.hs_epsilon(D).total.coeff((3,)) == expect_op


def test_epsilon_of_taylor():
    t = hs.taylor(WeylOp.partial(1, 1), 4)
    fam = hs.hs_epsilon(t)
    assert fam.total == OpSeries(WR1, t.coideal, {(1,): WeylOp.partial(1, 1)})


def test_integrate_constant_series_gives_taylor():
    box4 = CoIdeal.box((4,))
    dop = WeylOp.partial(1, 1)
    delta = OpSeries(WR1, box4, {(1,): dop})
    D = hs.integrate(delta)
    for j in range(5):
        assert D.coeff((j,)) == hs.taylor(dop, 4).coeff((j,))


def test_integrate_zero_gives_identity():
    delta = CoIdeal.total_degree(2, 2)
    assert hs.integrate(OpSeries.zero(WR2, delta)) == OpSeries.one(WR2, delta)


def test_integrate_rejects_constant_term():
    delta = CoIdeal.box((1,))
    bad = OpSeries(WR1, delta, {(0,): WeylOp.partial(1, 1)})
    with pytest.raises(NonzeroConstantTerm):
        hs.integrate(bad)


def test_round_trips():
    delta = CoIdeal.total_degree(4, 2)
    rng = Random(55)
    for k in range(8):
        D = hs.random_hs(rng, delta, 2, 1)
        assert hs.integrate(hs.hs_epsilon(D).total, validate=False) == D
    for k in range(8):
        ds = hs.random_derivation_series(rng, delta, 2, 1)
        assert epsilon(hs.integrate(ds, validate=False)) == ds


def test_random_hs_is_deterministic_and_valid():
    delta = CoIdeal.total_degree(3, 2)
    D1 = hs.random_hs(123, delta, 2, 1)
    D2 = hs.random_hs(123, delta, 2, 1)
    assert D1 == D2
    assert hs.check_leibniz(D1).ok


def test_random_hs_degree_zero_gives_constant_derivations():
    delta = CoIdeal.box((3,))
    D = hs.random_hs(9, delta, 1, 0)
    fam = hs.hs_epsilon(D)
    for v in fam.total.coeffs.values():
        for a in v.as_derivation():
            assert a.is_constant()


def test_epsilon_cocycle_and_inverse_identities():
    delta = CoIdeal.total_degree(3, 2)
    rng = Random(66)
    for _ in range(10):
        D = hs.random_hs(rng, delta, 2, 1)
        E = hs.random_hs(rng, delta, 2, 1)
        famD, famE = epsilon_family(D), epsilon_family(E)
        lhs = epsilon(D * E)
        assert lhs == famE.unit_inverse * famD.total * E + famE.total
        assert epsilon(famD.unit_inverse) == -famD.bar_total
