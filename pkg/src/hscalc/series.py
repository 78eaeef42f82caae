"""Truncated power series over a coefficient ring, and the epsilon calculus.

A series lives in R[[s1..sp]] truncated to a finite co-ideal Delta: only the
coefficients with exponent in Delta exist, and every product is the plain
convolution (u v)_alpha = sum_{beta+gamma=alpha} u_beta v_gamma.  Units are
series with constant term 1; they form a group, and the logarithmic
derivative

    eps(r) = r^* . chi(r),        chi = sum_i s_i d/ds_i,

sends that group to the additive group of series with zero constant term
(bijectively over Q, see ``hs.integrate`` for the inverse).  The component
maps eps^i use the partial Euler derivations chi^i instead of chi.

Coefficients are computed from the closed convolution formulas

    eps^i(r)_alpha    = sum_{beta+gamma=alpha} gamma_i r*_beta r_gamma
    epsbar^i(r)_alpha = sum_{beta+gamma=alpha} beta_i  r_beta  r*_gamma

rather than by differentiating; the definitional form stays available as an
independent cross-check (multiply r^* against the Euler derivative).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coideal import CoIdeal, MultiIndex, grlex_key, midx_add
from .errors import (CoidealMismatch, IndexOutOfRange, NonzeroConstantTerm,
                     NotASubCoideal, NotAUnit, RingMismatch)
from .rings import CoefficientRing


class OpSeries:
    """Series over ``ring`` supported on the co-ideal ``coideal``.

    Missing coefficients are zero.  Values are never mutated after
    construction, so series can be shared freely.
    """

    __slots__ = ("ring", "coideal", "coeffs")

    def __init__(self, ring: CoefficientRing, coideal: CoIdeal, coeffs=None):
        clean = {}
        if coeffs:
            for alpha, v in coeffs.items():
                alpha = tuple(alpha)
                if alpha not in coideal:
                    raise CoidealMismatch(f"exponent {alpha} outside the co-ideal")
                if not ring.owns(v):
                    raise RingMismatch(f"coefficient at {alpha} not in {ring!r}")
                if not ring.is_zero(v):
                    clean[alpha] = v
        self.ring = ring
        self.coideal = coideal
        self.coeffs = clean

    @classmethod
    def zero(cls, ring, coideal) -> "OpSeries":
        return cls(ring, coideal)

    @classmethod
    def one(cls, ring, coideal) -> "OpSeries":
        return cls(ring, coideal, {coideal.zero(): ring.one()})

    @classmethod
    def constant(cls, ring, coideal, value) -> "OpSeries":
        return cls(ring, coideal, {coideal.zero(): value})

    def coeff(self, alpha: MultiIndex):
        return self.coeffs.get(tuple(alpha), self.ring.zero())

    def support(self):
        return sorted(self.coeffs, key=grlex_key)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_plus_part(self) -> bool:
        """True when the constant term vanishes."""
        return self.coideal.zero() not in self.coeffs

    def is_unit(self) -> bool:
        z = self.coeffs.get(self.coideal.zero())
        return z is not None and self.ring.eq(z, self.ring.one())

    def require_unit(self):
        if not self.is_unit():
            raise NotAUnit("constant term is not 1")

    def _compat(self, other: "OpSeries"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        if self.coideal != other.coideal:
            raise CoidealMismatch("series over different co-ideals")

    def __add__(self, other: "OpSeries") -> "OpSeries":
        self._compat(other)
        R = self.ring
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            s = R.add(out[a], v) if a in out else v
            if R.is_zero(s):
                out.pop(a, None)
            else:
                out[a] = s
        r = OpSeries(R, self.coideal)
        r.coeffs = out
        return r

    def __neg__(self) -> "OpSeries":
        r = OpSeries(self.ring, self.coideal)
        r.coeffs = {a: self.ring.neg(v) for a, v in self.coeffs.items()}
        return r

    def __sub__(self, other: "OpSeries") -> "OpSeries":
        return self + (-other)

    def __mul__(self, other: "OpSeries") -> "OpSeries":
        self._compat(other)
        R = self.ring
        members = self.coideal.elements
        out = {}
        for b, u in self.coeffs.items():
            for g, v in other.coeffs.items():
                a = midx_add(b, g)
                if a not in members:
                    continue
                w = R.mul(u, v)
                s = R.add(out[a], w) if a in out else w
                if R.is_zero(s):
                    out.pop(a, None)
                else:
                    out[a] = s
        r = OpSeries(R, self.coideal)
        r.coeffs = out
        return r

    def scale(self, q) -> "OpSeries":
        R = self.ring
        q = Fraction(q)
        r = OpSeries(R, self.coideal)
        if q:
            r.coeffs = {a: R.scalar(q, v) for a, v in self.coeffs.items()}
        return r

    def map_coefficients(self, fn, ring: CoefficientRing) -> "OpSeries":
        """Apply fn to every coefficient, landing in ``ring``."""
        return OpSeries(ring, self.coideal,
                        {a: fn(v) for a, v in self.coeffs.items()})

    def truncate(self, sub: CoIdeal) -> "OpSeries":
        if not sub.is_subcoideal(self.coideal):
            raise NotASubCoideal("truncation target is not a sub-co-ideal")
        r = OpSeries(self.ring, sub)
        r.coeffs = {a: v for a, v in self.coeffs.items() if a in sub}
        return r

    def inverse(self) -> "OpSeries":
        """Multiplicative inverse r^* of a unit, by graded recursion.

        r*_0 = 1 and r*_alpha = - sum_{beta+gamma=alpha, gamma != alpha}
        r*_gamma r_beta; graded-lex order guarantees every r*_gamma needed is
        already known.
        """
        self.require_unit()
        R = self.ring
        zero_idx = self.coideal.zero()
        support = [b for b in self.support() if b != zero_idx]
        inv = {zero_idx: R.one()}
        for alpha in self.coideal:
            if alpha == zero_idx:
                continue
            acc = None
            for b in support:
                if not all(x <= y for x, y in zip(b, alpha)):
                    continue
                g = tuple(y - x for x, y in zip(b, alpha))
                prev = inv.get(g)
                if prev is None:
                    continue
                w = R.mul(prev, self.coeffs[b])
                acc = w if acc is None else R.add(acc, w)
            if acc is not None and not R.is_zero(acc):
                inv[alpha] = R.neg(acc)
        r = OpSeries(R, self.coideal)
        r.coeffs = {a: v for a, v in inv.items() if not R.is_zero(v)}
        return r

    def euler(self, i: int) -> "OpSeries":
        """Partial Euler derivation chi^i: scales the alpha-coefficient by alpha_i."""
        if not 1 <= i <= self.coideal.p:
            raise IndexOutOfRange(f"Euler index {i} not in 1..{self.coideal.p}")
        R = self.ring
        r = OpSeries(R, self.coideal)
        r.coeffs = {a: R.scalar(a[i - 1], v)
                    for a, v in self.coeffs.items() if a[i - 1]}
        return r

    def euler_total(self) -> "OpSeries":
        """chi = sum_i chi^i: scales the alpha-coefficient by |alpha|."""
        R = self.ring
        r = OpSeries(R, self.coideal)
        r.coeffs = {a: R.scalar(sum(a), v)
                    for a, v in self.coeffs.items() if sum(a)}
        return r

    def __eq__(self, other) -> bool:
        return (isinstance(other, OpSeries) and self.ring == other.ring
                and self.coideal == other.coideal and self.coeffs == other.coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"{a}: {v}" for a, v in
                         sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0])))
        return f"OpSeries({{{body}}})"


@dataclass
class EpsilonFamily:
    """eps^i, epsbar^i and their totals for one unit; also keeps r^*."""

    parts: tuple          # eps^1 .. eps^p
    bar_parts: tuple      # epsbar^1 .. epsbar^p
    total: OpSeries       # eps = sum_i eps^i
    bar_total: OpSeries   # epsbar = sum_i epsbar^i
    unit_inverse: OpSeries


def epsilon_family(r: OpSeries, inverse: OpSeries | None = None) -> EpsilonFamily:
    """All logarithmic-derivative data of a unit in one convolution pass.

    Every output has zero constant term, and eps^i vanishes at alpha whenever
    alpha_i = 0 (visible in the closed formula: the weight is gamma_i <= alpha_i).
    Pass ``inverse`` when r^* is already known to skip recomputing it.
    """
    r.require_unit()
    R = r.ring
    p = r.coideal.p
    members = r.coideal.elements
    rstar = inverse if inverse is not None else r.inverse()

    eps = [dict() for _ in range(p + 1)]       # slot p is the total
    bar = [dict() for _ in range(p + 1)]

    def bump(table, a, weight, value):
        if not weight:
            return
        w = value if weight == 1 else R.scalar(weight, value)
        s = R.add(table[a], w) if a in table else w
        if R.is_zero(s):
            table.pop(a, None)
        else:
            table[a] = s

    for b, u in rstar.coeffs.items():
        for g, v in r.coeffs.items():
            a = midx_add(b, g)
            if a not in members:
                continue
            prod = R.mul(u, v)
            for i in range(p):
                bump(eps[i], a, g[i], prod)
            bump(eps[p], a, sum(g), prod)
    for b, u in r.coeffs.items():
        for g, v in rstar.coeffs.items():
            a = midx_add(b, g)
            if a not in members:
                continue
            prod = R.mul(u, v)
            for i in range(p):
                bump(bar[i], a, b[i], prod)
            bump(bar[p], a, sum(b), prod)

    def pack(table):
        s = OpSeries(R, r.coideal)
        s.coeffs = table
        return s

    return EpsilonFamily(parts=tuple(pack(eps[i]) for i in range(p)),
                         bar_parts=tuple(pack(bar[i]) for i in range(p)),
                         total=pack(eps[p]), bar_total=pack(bar[p]),
                         unit_inverse=rstar)


def epsilon_parts(r: OpSeries,
                  inverse: OpSeries | None = None) -> tuple[tuple, OpSeries, OpSeries]:
    """(eps^1..eps^p, eps, r^*) without the mirrored family; saves the whole
    second convolution pass when the epsbar data is not needed."""
    r.require_unit()
    R = r.ring
    p = r.coideal.p
    members = r.coideal.elements
    rstar = inverse if inverse is not None else r.inverse()
    eps = [dict() for _ in range(p + 1)]

    def bump(table, a, weight, value):
        if not weight:
            return
        w = value if weight == 1 else R.scalar(weight, value)
        s = R.add(table[a], w) if a in table else w
        if R.is_zero(s):
            table.pop(a, None)
        else:
            table[a] = s

    for b, u in rstar.coeffs.items():
        for g, v in r.coeffs.items():
            a = midx_add(b, g)
            if a not in members:
                continue
            prod = R.mul(u, v)
            for i in range(p):
                bump(eps[i], a, g[i], prod)
            bump(eps[p], a, sum(g), prod)

    def pack(table):
        s = OpSeries(R, r.coideal)
        s.coeffs = table
        return s

    return tuple(pack(eps[i]) for i in range(p)), pack(eps[p]), rstar


def epsilon_totals(r: OpSeries,
                   inverse: OpSeries | None = None) -> tuple[OpSeries, OpSeries, OpSeries]:
    """(eps(r), epsbar(r), r^*) without the per-index components; cheaper when
    only the totals are compared."""
    r.require_unit()
    R = r.ring
    members = r.coideal.elements
    rstar = inverse if inverse is not None else r.inverse()
    eps: dict = {}
    bar: dict = {}

    def bump(table, a, weight, value):
        if not weight:
            return
        w = value if weight == 1 else R.scalar(weight, value)
        s = R.add(table[a], w) if a in table else w
        if R.is_zero(s):
            table.pop(a, None)
        else:
            table[a] = s

    for b, u in rstar.coeffs.items():
        for g, v in r.coeffs.items():
            a = midx_add(b, g)
            if a in members:
                bump(eps, a, sum(g), R.mul(u, v))
    for b, u in r.coeffs.items():
        for g, v in rstar.coeffs.items():
            a = midx_add(b, g)
            if a in members:
                bump(bar, a, sum(b), R.mul(u, v))
    out_eps = OpSeries(R, r.coideal)
    out_eps.coeffs = eps
    out_bar = OpSeries(R, r.coideal)
    out_bar.coeffs = bar
    return out_eps, out_bar, rstar


def epsilon(r: OpSeries) -> OpSeries:
    return epsilon_totals(r)[0]


def epsilon_bar(r: OpSeries) -> OpSeries:
    return epsilon_totals(r)[1]


def is_derivation_family(parts) -> bool:
    """Membership test for the family conditions satisfied by {eps^i(r)}:

    (a) the i-th member is supported where alpha_i > 0, and
    (b) chi^j(d^i) - chi^i(d^j) = [d^i, d^j] for all i, j.
    """
    p = len(parts)
    for i, d in enumerate(parts):
        if not d.is_plus_part():
            return False
        if any(a[i] == 0 for a in d.coeffs):
            return False
    # both sides are antisymmetric in (i, j) and vanish on the diagonal
    for i in range(p):
        for j in range(i + 1, p):
            lhs = parts[i].euler(j + 1) - parts[j].euler(i + 1)
            rhs = parts[i] * parts[j] - parts[j] * parts[i]
            if lhs != rhs:
                return False
    return True


def xi(d: OpSeries) -> OpSeries:
    """1 + sum d_alpha s^alpha tau, a unit over Delta x {0,1}.

    An injective group homomorphism from series with zero constant term: the
    cross terms of a product carry tau^2 and are truncated away.
    """
    if not d.is_plus_part():
        raise NonzeroConstantTerm("xi needs a series with zero constant term")
    target = d.coideal.product01()
    coeffs = {a + (1,): v for a, v in d.coeffs.items()}
    coeffs[target.zero()] = d.ring.one()
    return OpSeries(d.ring, target, coeffs)


def filtration_check(r: OpSeries) -> bool:
    """True when order(r_alpha) <= |alpha| for every stored coefficient."""
    return all(r.ring.order(v) <= sum(a) for a, v in r.coeffs.items())
