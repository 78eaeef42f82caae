"""Coefficient rings that truncated series can be taken over.

Every ring is a Q-algebra presented through a small uniform interface:
zero/one/add/mul, exact equality, scalar action of Q, and optionally an
embedding iota of the base polynomial algebra and an order filtration.
Series code is generic over this interface; the concrete instances are

  FreeRing      free noncommutative algebra on named symbols (the oracle),
  PolyRing      the commutative base algebra itself,
  WeylRing      differential operators on the base algebra,
  MatRing       m x m matrices of differential operators,
  OppositeRing  any of the above with reversed multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .errors import FiltrationUnavailable, RingMismatch
from .freealg import NCPoly
from .poly import Poly
from .weyl import MatOp, WeylOp


def random_fraction(rng: Random, nonzero=False) -> Fraction:
    q = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    if nonzero and not q:
        q = Fraction(rng.choice([-2, -1, 1, 2]))
    return q


def random_poly(rng: Random, n: int, degree: int, max_terms: int = 2) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = [0] * n
        for _ in range(degree):
            if rng.random() < 0.6:
                exp[rng.randrange(n)] += 1
        terms[tuple(exp)] = random_fraction(rng)
    return Poly(n, terms)


class CoefficientRing:
    """Interface shared by all coefficient rings."""

    def key(self):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def scalar(self, q, a):
        """Action of q in Q; every instance is a Q-algebra."""
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def from_rational(self, q):
        return self.scalar(q, self.one())

    def iota(self, a: Poly):
        """Embedding of the base polynomial algebra, when there is one."""
        raise RingMismatch(f"{self!r} has no polynomial coefficient embedding")

    def order(self, a) -> int:
        raise FiltrationUnavailable(f"{self!r} carries no order filtration")

    def deriv(self, i: int):
        """Element d with [d, iota(a)] = iota(d_i a); only on operator rings."""
        raise RingMismatch(f"{self!r} has no distinguished derivations")

    def owns(self, a) -> bool:
        raise NotImplementedError

    def random_element(self, rng: Random, degree: int = 2):
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.key()))


class FreeRing(CoefficientRing):
    """Free associative Q-algebra on an ordered tuple of symbol names."""

    def __init__(self, names):
        self.names = tuple(str(s) for s in names)

    def key(self):
        return self.names

    def zero(self):
        return NCPoly.zero()

    def one(self):
        return NCPoly.one()

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scalar(self, q, a):
        return a.scale(q)

    def generator(self, i: int):
        return NCPoly.generator(i)

    def owns(self, a) -> bool:
        return isinstance(a, NCPoly)

    def render(self, a: NCPoly) -> str:
        return a.render(self.names)

    def random_element(self, rng: Random, degree: int = 2):
        terms = {}
        for _ in range(rng.randint(1, 2)):
            w = tuple(rng.randrange(len(self.names))
                      for _ in range(rng.randint(0, min(degree, 2))))
            terms[w] = random_fraction(rng)
        return NCPoly(terms)

    def __repr__(self):
        return f"FreeRing({len(self.names)} symbols)"


class PolyRing(CoefficientRing):
    """The base algebra Q[x1..xn] viewed as a coefficient ring."""

    def __init__(self, n: int):
        self.n = n

    def key(self):
        return self.n

    def zero(self):
        return Poly.zero(self.n)

    def one(self):
        return Poly.one(self.n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scalar(self, q, a):
        return a.scale(q)

    def iota(self, a: Poly):
        if a.n != self.n:
            raise RingMismatch(f"polynomial in {a.n} variables, ring has {self.n}")
        return a

    def owns(self, a) -> bool:
        return isinstance(a, Poly) and a.n == self.n

    def random_element(self, rng: Random, degree: int = 2):
        return random_poly(rng, self.n, degree)

    def __repr__(self):
        return f"PolyRing(n={self.n})"


class WeylRing(CoefficientRing):
    """Differential operators on Q[x1..xn]."""

    def __init__(self, n: int):
        self.n = n

    def key(self):
        return self.n

    def zero(self):
        return WeylOp.zero(self.n)

    def one(self):
        return WeylOp.one(self.n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a.compose(b)

    def scalar(self, q, a):
        return a.scale(q)

    def iota(self, a: Poly):
        if a.n != self.n:
            raise RingMismatch(f"polynomial in {a.n} variables, ring has {self.n}")
        return WeylOp.from_poly(a)

    def order(self, a) -> int:
        return a.order()

    def deriv(self, i: int):
        return WeylOp.partial(self.n, i)

    def owns(self, a) -> bool:
        return isinstance(a, WeylOp) and a.n == self.n

    def random_element(self, rng: Random, degree: int = 2, max_order: int = 2):
        terms = {}
        for _ in range(rng.randint(1, 2)):
            beta = [0] * self.n
            for _ in range(rng.randint(0, max_order)):
                beta[rng.randrange(self.n)] += 1
            c = random_poly(rng, self.n, degree)
            if not c.is_zero():
                terms[tuple(beta)] = c
        return WeylOp(self.n, terms)

    def __repr__(self):
        return f"WeylRing(n={self.n})"


class MatRing(CoefficientRing):
    """m x m matrices of differential operators: End of the free module A^m."""

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m

    def key(self):
        return (self.n, self.m)

    def zero(self):
        return MatOp.zero(self.n, self.m)

    def one(self):
        return MatOp.identity(self.n, self.m)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scalar(self, q, a):
        return a.scale(q)

    def iota(self, a: Poly):
        if a.n != self.n:
            raise RingMismatch(f"polynomial in {a.n} variables, ring has {self.n}")
        return MatOp.scalar_op(WeylOp.from_poly(a), self.m)

    def order(self, a) -> int:
        return a.order()

    def deriv(self, i: int):
        return MatOp.scalar_op(WeylOp.partial(self.n, i), self.m)

    def owns(self, a) -> bool:
        return isinstance(a, MatOp) and a.n == self.n and a.m == self.m

    def random_element(self, rng: Random, degree: int = 2, max_order: int = 2):
        wr = WeylRing(self.n)
        return MatOp(self.n, self.m,
                     [[wr.random_element(rng, degree, max_order) if rng.random() < 0.7
                       else WeylOp.zero(self.n) for _ in range(self.m)]
                      for _ in range(self.m)])

    def __repr__(self):
        return f"MatRing(n={self.n}, m={self.m})"


class OppositeRing(CoefficientRing):
    """Same elements as the base ring, multiplication reversed.

    Hosts right module structures; the distinguished derivations flip sign so
    that the Leibniz commutation rule keeps its shape in the reversed product.
    """

    def __init__(self, base: CoefficientRing):
        self.base = base

    def key(self):
        return self.base

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.base.one()

    def add(self, a, b):
        return self.base.add(a, b)

    def neg(self, a):
        return self.base.neg(a)

    def mul(self, a, b):
        return self.base.mul(b, a)

    def scalar(self, q, a):
        return self.base.scalar(q, a)

    def eq(self, a, b) -> bool:
        return self.base.eq(a, b)

    def iota(self, a: Poly):
        return self.base.iota(a)

    def order(self, a) -> int:
        return self.base.order(a)

    def deriv(self, i: int):
        return self.base.neg(self.base.deriv(i))

    def owns(self, a) -> bool:
        return self.base.owns(a)

    def random_element(self, rng: Random, degree: int = 2):
        return self.base.random_element(rng, degree)

    def __repr__(self):
        return f"OppositeRing({self.base!r})"
