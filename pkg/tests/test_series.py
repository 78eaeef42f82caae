"""Truncated series: convolution, units, Euler maps and the epsilon calculus."""

from fractions import Fraction
from random import Random

import pytest

from hscalc.coideal import CoIdeal
from hscalc.errors import (CoidealMismatch, FiltrationUnavailable, NonzeroConstantTerm,
                           NotASubCoideal, NotAUnit, RingMismatch)
from hscalc.freealg import NCPoly
from hscalc.hs import taylor
from hscalc.poly import Poly
from hscalc.rings import FreeRing, WeylRing
from hscalc.series import (OpSeries, epsilon, epsilon_bar, epsilon_family,
                           epsilon_totals, filtration_check, is_derivation_family, xi)
from hscalc.weyl import WeylOp

AB = FreeRing(["a", "b"])
A, B = NCPoly.generator(0), NCPoly.generator(1)


def unit_ab(coideal):
    return (OpSeries(AB, coideal, {(0,): NCPoly.one(), (1,): A}),
            OpSeries(AB, coideal, {(0,): NCPoly.one(), (1,): B}))


def test_convolution_product():
    c = CoIdeal.box((2,))
    u, v = unit_ab(c)
    prod = u * v
    assert prod.coeff((0,)) == NCPoly.one()
    assert prod.coeff((1,)) == A + B
    assert prod.coeff((2,)) == A * B


def test_one_is_neutral():
    c = CoIdeal.box((2,))
    u, _ = unit_ab(c)
    assert u * OpSeries.one(AB, c) == u


def test_truncation_in_product():
    c = CoIdeal.box((1,))
    u, v = unit_ab(c)
    prod = u * v
    assert prod.coeff((1,)) == A + B
    assert prod.support() == [(0,), (1,)]


def test_mismatch_errors():
    u, _ = unit_ab(CoIdeal.box((2,)))
    v, _ = unit_ab(CoIdeal.box((1,)))
    with pytest.raises(CoidealMismatch):
        u * v
    w = OpSeries.one(FreeRing(["a"]), CoIdeal.box((2,)))
    with pytest.raises(RingMismatch):
        u * w


def test_unit_inverse_univariate():
    c = CoIdeal.box((2,))
    r = OpSeries(AB, c, {(0,): NCPoly.one(), (1,): A})
    # solved degree by degree: 1 - a s + a^2 s^2
    assert r.inverse() == OpSeries(AB, c, {(0,): NCPoly.one(), (1,): -A,
                                           (2,): A * A})


def test_inverse_of_one():
    one = OpSeries.one(AB, CoIdeal.box((3,)))
    assert one.inverse() == one


def test_inverse_two_variables_single_step():
    c = CoIdeal.total_degree(1, 2)
    r = OpSeries(AB, c, {(0, 0): NCPoly.one(), (1, 0): A, (0, 1): B})
    assert r.inverse() == OpSeries(AB, c, {(0, 0): NCPoly.one(), (1, 0): -A,
                                           (0, 1): -B})


def test_inverse_requires_unit():
    with pytest.raises(NotAUnit):
        OpSeries.zero(AB, CoIdeal.box((1,))).inverse()


def test_truncate():
    c = CoIdeal.box((2,))
    r = OpSeries(AB, c, {(0,): NCPoly.one(), (1,): A, (2,): B})
    assert r.truncate(CoIdeal.box((0,))).coeff((0,)) == NCPoly.one()
    assert r.truncate(c) == r
    with pytest.raises(NotASubCoideal):
        r.truncate(CoIdeal.box((3,)))


def test_truncate_is_ring_homomorphism():
    c = CoIdeal.box((3,))
    sub = CoIdeal.box((2,))
    rng = Random(5)
    r = OpSeries(AB, c, {(0,): NCPoly.one(), (1,): AB.random_element(rng),
                         (2,): AB.random_element(rng)})
    u = OpSeries(AB, c, {(0,): NCPoly.one(), (1,): AB.random_element(rng),
                         (3,): AB.random_element(rng)})
    assert (r * u).truncate(sub) == r.truncate(sub) * u.truncate(sub)


def test_euler_partial():
    c = CoIdeal.total_degree(2, 2)
    r = OpSeries(AB, c, {(0, 0): NCPoly.one(), (1, 0): A, (0, 1): B})
    chi1 = r.euler(1)
    assert chi1 == OpSeries(AB, c, {(1, 0): A})
    assert OpSeries.one(AB, c).euler_total().is_zero()
    s = OpSeries(AB, c, {(1, 1): A})
    assert s.euler_total() == s.scale(2)


def test_epsilon_matches_low_order_expansions():
    names = ("D1", "D2")
    ring = FreeRing(names)
    c = CoIdeal.box((2,))
    d1, d2 = NCPoly.generator(0), NCPoly.generator(1)
    r = OpSeries(ring, c, {(0,): NCPoly.one(), (1,): d1, (2,): d2})
    fam = epsilon_family(r)
    assert fam.total.coeff((1,)) == d1
    assert fam.total.coeff((2,)) == d2.scale(2) - d1 * d1


def test_epsilon_of_one_is_zero():
    c = CoIdeal.total_degree(2, 2)
    one = OpSeries.one(AB, c)
    fam = epsilon_family(one)
    assert fam.total.is_zero() and fam.bar_total.is_zero()
    assert all(p.is_zero() for p in fam.parts + fam.bar_parts)


def test_epsilon_of_taylor_series_is_linear():
    t = taylor(WeylOp.partial(1, 1), 4)
    expected = OpSeries(WeylRing(1), t.coideal, {(1,): WeylOp.partial(1, 1)})
    assert epsilon(t) == expected
    assert epsilon_bar(t) == expected


def test_epsilon_totals_and_family_agree():
    rng = Random(9)
    c = CoIdeal.total_degree(3, 2)
    r = OpSeries(AB, c, {(0, 0): NCPoly.one(),
                         (1, 0): AB.random_element(rng),
                         (0, 1): AB.random_element(rng),
                         (1, 1): AB.random_element(rng)})
    fam = epsilon_family(r)
    t_eps, t_bar, rstar = epsilon_totals(r)
    assert t_eps == fam.total and t_bar == fam.bar_total
    assert rstar == fam.unit_inverse
    # the total is the sum of the p component maps
    total = fam.parts[0] + fam.parts[1]
    assert total == fam.total
    assert is_derivation_family(fam.parts)


def test_xi_basics():
    c = CoIdeal.box((2,))
    zero = OpSeries.zero(AB, c)
    assert xi(zero) == OpSeries.one(AB, c.product01())
    d = OpSeries(AB, c, {(1,): A})
    assert xi(d) == OpSeries(AB, c.product01(), {(0, 0): NCPoly.one(), (1, 1): A})
    with pytest.raises(NonzeroConstantTerm):
        xi(OpSeries.one(AB, c))


def test_xi_is_additive_to_multiplicative():
    c = CoIdeal.box((1,))
    da = OpSeries(AB, c, {(1,): A})
    db = OpSeries(AB, c, {(1,): B})
    assert xi(da) * xi(db) == xi(da + db)


def test_filtration_check():
    t = taylor(WeylOp.partial(1, 1), 3)
    assert filtration_check(t)
    wr = WeylRing(1)
    bad = OpSeries(wr, CoIdeal.box((1,)),
                   {(0,): WeylOp.one(1),
                    (1,): WeylOp.partial(1, 1).compose(WeylOp.partial(1, 1))})
    assert not filtration_check(bad)
    assert filtration_check(OpSeries.one(wr, CoIdeal.box((2,))))
    with pytest.raises(FiltrationUnavailable):
        filtration_check(OpSeries.one(AB, CoIdeal.box((1,))))


def test_group_laws_random():
    rng = Random(77)
    c = CoIdeal.total_degree(3, 2)
    one = OpSeries.one(AB, c)
    for _ in range(30):
        coeffs = {c.zero(): NCPoly.one()}
        for a in c:
            if sum(a) and rng.random() < 0.7:
                coeffs[a] = AB.random_element(rng)
        r = OpSeries(AB, c, coeffs)
        rstar = r.inverse()
        assert r * rstar == one and rstar * r == one
