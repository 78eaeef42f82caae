"""Substitution maps between truncated series algebras and their dot actions.

A substitution map phi sends each source variable s_i to a series c_i of
order >= 1 over the target co-ideal, with coefficients in the base algebra.
It acts on operator series from the left and from the right:

    phi . r = sum_alpha phi(s^alpha) r_alpha
    r . phi = sum_alpha r_alpha phi(s^alpha)

with the base-algebra factors embedded through the coefficient ring's iota.
When every c_i has constant (rational) coefficients, the two actions agree
and both are ring homomorphisms; with genuinely polynomial coefficients
neither of those holds, so multiplicativity-dependent paths must check the
``constant_coefficients`` flag first.
"""

from __future__ import annotations

from .coideal import CoIdeal, MultiIndex, unit_index
from .errors import (ChainMismatch, CoidealMismatch, IndexNotInSourceCoideal,
                     IndexOutOfRange, NonPositiveOrderImage, RingMismatch)
from .poly import Poly
from .rings import PolyRing
from .series import OpSeries


class SubstMap:
    """Map determined by the images of the source variables.

    The memo of monomial images behaves as a write-once-per-key cache: safe
    to share once warmed, or warm it before fanning out.
    """

    __slots__ = ("source", "target", "images", "n", "constant_coefficients",
                 "_monomials")

    def __init__(self, images, source: CoIdeal, target: CoIdeal):
        images = tuple(images)
        if len(images) != source.p:
            raise CoidealMismatch(
                f"{len(images)} images for {source.p} source variables")
        n = None
        for c in images:
            if not isinstance(c.ring, PolyRing):
                raise RingMismatch("images must have base-algebra coefficients")
            if c.coideal != target:
                raise CoidealMismatch("image not a series over the target co-ideal")
            if not c.is_plus_part():
                raise NonPositiveOrderImage("image has a nonzero constant term")
            n = c.ring.n
        self.source = source
        self.target = target
        self.images = images
        self.n = n if n is not None else 1
        self.constant_coefficients = all(
            v.is_constant() for c in images for v in c.coeffs.values())
        self._monomials: dict[MultiIndex, OpSeries] = {}

    def monomial(self, alpha: MultiIndex) -> OpSeries:
        """phi(s^alpha) = prod_i c_i^(alpha_i), truncated to the target."""
        alpha = tuple(alpha)
        if alpha not in self.source:
            raise IndexNotInSourceCoideal(f"{alpha} not in the source co-ideal")
        memo = self._monomials
        got = memo.get(alpha)
        if got is not None:
            return got
        if sum(alpha) == 0:
            out = OpSeries.one(PolyRing(self.n), self.target)
        else:
            i = next(k for k, a in enumerate(alpha) if a)
            prev = tuple(a - 1 if k == i else a for k, a in enumerate(alpha))
            out = self.monomial(prev) * self.images[i]
        memo[alpha] = out
        return out

    def apply_to_base_series(self, a: OpSeries) -> OpSeries:
        """Value of the map on a series with base-algebra coefficients."""
        return bullet_left(self, a)

    def compose(self, inner: "SubstMap") -> "SubstMap":
        """self after inner."""
        if inner.target != self.source:
            raise ChainMismatch("inner target co-ideal differs from outer source")
        return SubstMap([self.apply_to_base_series(c) for c in inner.images],
                        inner.source, self.target)

    def __repr__(self):
        return (f"SubstMap(p={self.source.p} -> q={self.target.p}, "
                f"constant={self.constant_coefficients})")


def _embedder(phi: SubstMap, ring):
    """How a base coefficient of phi lands in the series' coefficient ring."""
    if phi.constant_coefficients:
        return lambda c: ring.from_rational(c.constant_value())
    return ring.iota  # raises RingMismatch for rings without base coefficients


def bullet_left(phi: SubstMap, r: OpSeries) -> OpSeries:
    """phi . r; sends units to units and, for series of higher derivations,
    lands back in higher derivations."""
    if r.coideal != phi.source:
        raise CoidealMismatch("series co-ideal differs from the map's source")
    R = r.ring
    embed = _embedder(phi, R)
    out = OpSeries(R, phi.target)
    acc: dict[MultiIndex, object] = {}
    for alpha, v in r.coeffs.items():
        for e, c in phi.monomial(alpha).coeffs.items():
            w = R.mul(embed(c), v)
            s = R.add(acc[e], w) if e in acc else w
            if R.is_zero(s):
                acc.pop(e, None)
            else:
                acc[e] = s
    out.coeffs = acc
    return out


def bullet_right(r: OpSeries, phi: SubstMap) -> OpSeries:
    """r . phi; the base-algebra factors multiply from the right."""
    if r.coideal != phi.source:
        raise CoidealMismatch("series co-ideal differs from the map's source")
    R = r.ring
    embed = _embedder(phi, R)
    out = OpSeries(R, phi.target)
    acc: dict[MultiIndex, object] = {}
    for alpha, v in r.coeffs.items():
        for e, c in phi.monomial(alpha).coeffs.items():
            w = R.mul(v, embed(c))
            s = R.add(acc[e], w) if e in acc else w
            if R.is_zero(s):
                acc.pop(e, None)
            else:
                acc[e] = s
    out.coeffs = acc
    return out


def _variable_series(ring: PolyRing, coideal: CoIdeal, keys) -> OpSeries:
    coeffs = {k: ring.one() for k in keys if k in coideal}
    return OpSeries(ring, coideal, coeffs)


def make_sigma_i(i: int, delta: CoIdeal, n: int = 1) -> SubstMap:
    """s_i -> s_i + s_i tau, other variables fixed; lands in Delta x {0,1}."""
    p = delta.p
    if not 1 <= i <= p:
        raise IndexOutOfRange(f"sigma index {i} not in 1..{p}")
    target = delta.product01()
    ring = PolyRing(n)
    images = []
    for j in range(1, p + 1):
        e = unit_index(p, j)
        keys = [e + (0,), e + (1,)] if j == i else [e + (0,)]
        images.append(_variable_series(ring, target, keys))
    return SubstMap(images, delta, target)


def make_sigma(delta: CoIdeal, n: int = 1) -> SubstMap:
    """s_i -> s_i + s_i tau for every i."""
    p = delta.p
    target = delta.product01()
    ring = PolyRing(n)
    images = [_variable_series(ring, target,
                               [unit_index(p, j) + (0,), unit_index(p, j) + (1,)])
              for j in range(1, p + 1)]
    return SubstMap(images, delta, target)


def make_iota(delta: CoIdeal, n: int = 1) -> SubstMap:
    """The tau-free inclusion of Delta-series into Delta x {0,1}-series."""
    p = delta.p
    target = delta.product01()
    ring = PolyRing(n)
    images = [_variable_series(ring, target, [unit_index(p, j) + (0,)])
              for j in range(1, p + 1)]
    return SubstMap(images, delta, target)


def make_scalar(a: Poly, delta: CoIdeal) -> SubstMap:
    """One-variable map s -> a s over a fixed co-ideal; the module action of a."""
    if delta.p != 1:
        raise CoidealMismatch("scalar action is a one-variable map")
    ring = PolyRing(a.n)
    image = OpSeries(ring, delta, {(1,): a} if (1,) in delta else {})
    return SubstMap([image], delta, delta)


def pair_embeddings(n: int = 1):
    """The three one-variable maps into the (1,1)-box used to express brackets:
    s -> s, s -> s', and s -> s s'."""
    src = CoIdeal.box((1,))
    tgt = CoIdeal.box((1, 1))
    ring = PolyRing(n)
    first = SubstMap([_variable_series(ring, tgt, [(1, 0)])], src, tgt)
    second = SubstMap([_variable_series(ring, tgt, [(0, 1)])], src, tgt)
    product = SubstMap([_variable_series(ring, tgt, [(1, 1)])], src, tgt)
    return first, second, product
