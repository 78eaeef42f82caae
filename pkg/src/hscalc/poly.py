"""Sparse exact polynomials over Q in n commuting variables x1..xn."""

from __future__ import annotations

from fractions import Fraction

from .coideal import MultiIndex, grlex_key, midx_add
from .errors import ArityMismatch, IndexOutOfRange

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _falling(e: int, b: int) -> int:
    """e * (e-1) * ... * (e-b+1)."""
    out = 1
    for k in range(b):
        out *= e - k
    return out


class Poly:
    """Polynomial stored as a map exponent-tuple -> nonzero Fraction."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        clean: dict[MultiIndex, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ArityMismatch(f"exponent {exp} in a {n}-variable polynomial")
                c = Fraction(c)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
                    if not clean[exp]:
                        del clean[exp]
        self.n = n
        self.terms = clean

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: Fraction(c)})

    @classmethod
    def one(cls, n: int) -> "Poly":
        return cls.constant(n, 1)

    @classmethod
    def variable(cls, n: int, i: int) -> "Poly":
        """x_i, i in 1..n."""
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"variable index {i} not in 1..{n}")
        return cls(n, {tuple(1 if k == i - 1 else 0 for k in range(n)): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, exp, c=1) -> "Poly":
        return cls(n, {tuple(exp): Fraction(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def total_degree(self) -> int:
        """Degree of the polynomial; 0 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        if self.n != other.n:
            raise ArityMismatch(f"{self.n} vs {other.n} variables")
        out = dict(self.terms)
        for e, c in other.terms.items():
            prev = out.get(e)
            s = c if prev is None else prev + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = Poly(self.n)
        p.terms = out
        return p

    def __neg__(self) -> "Poly":
        p = Poly(self.n)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.n != other.n:
            raise ArityMismatch(f"{self.n} vs {other.n} variables")
        if len(self.terms) == 1:
            (e1, c1), = self.terms.items()
            if not any(e1):
                return other.scale(c1)
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            if not any(e2):
                return self.scale(c2)
        out: dict[MultiIndex, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = midx_add(e1, e2)
                prev = out.get(e)
                s = c1 * c2 if prev is None else prev + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        p = Poly(self.n)
        p.terms = out
        return p

    def scale(self, q) -> "Poly":
        if type(q) is not Fraction:
            q = Fraction(q)
        if q == _ONE:
            return self
        p = Poly(self.n)
        if q:
            p.terms = {e: c * q for e, c in self.terms.items()}
        return p

    def partial(self, i: int) -> "Poly":
        """Formal partial derivative with respect to x_i, i in 1..n."""
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"variable index {i} not in 1..{self.n}")
        out: dict[MultiIndex, Fraction] = {}
        k = i - 1
        for e, c in self.terms.items():
            if e[k]:
                out[tuple(x - 1 if j == k else x for j, x in enumerate(e))] = c * e[k]
        p = Poly(self.n)
        p.terms = out
        return p

    def partial_multi(self, beta: MultiIndex) -> "Poly":
        """Iterated derivative d^beta, computed by falling factorials."""
        out: dict[MultiIndex, Fraction] = {}
        for e, c in self.terms.items():
            if all(x >= b for x, b in zip(e, beta)):
                f = 1
                for x, b in zip(e, beta):
                    f *= _falling(x, b)
                if f:
                    out[tuple(x - b for x, b in zip(e, beta))] = c * f
        p = Poly(self.n)
        p.terms = out
        return p

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=grlex_key):
            c = self.terms[e]
            vars_ = "*".join(f"x{i + 1}" + (f"^{x}" if x > 1 else "")
                             for i, x in enumerate(e) if x)
            if not vars_:
                parts.append(str(c))
            elif c == 1:
                parts.append(vars_)
            elif c == -1:
                parts.append(f"-{vars_}")
            else:
                parts.append(f"{c}*{vars_}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"
