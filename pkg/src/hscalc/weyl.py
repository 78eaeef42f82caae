"""Differential operators on Q[x1..xn] and matrices of them.

A WeylOp is kept in the normal form sum_beta c_beta * d^beta with polynomial
coefficients on the left, so structural equality of normal forms decides
equality of operators.  Composition re-normalizes with the commutation rule
[d_i, a] = d_i(a).

MatOp is an m x m matrix of WeylOps: the concrete endomorphism ring of the
free module A^m that all module-side computations happen in.
"""

from __future__ import annotations

import math

from .coideal import MultiIndex, grlex_key, iter_below, midx_add, unit_index
from .errors import ArityMismatch, IndexOutOfRange, NotADerivation, RankMismatch
from .poly import Poly


class WeylOp:
    """Operator sum_beta c_beta * d^beta acting on polynomials."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        clean: dict[MultiIndex, Poly] = {}
        if terms:
            for beta, c in terms.items():
                beta = tuple(beta)
                if len(beta) != n:
                    raise ArityMismatch(f"derivative exponent {beta} with n={n}")
                if c.n != n:
                    raise ArityMismatch("coefficient variable count differs")
                if not c.is_zero():
                    clean[beta] = c
        self.n = n
        self.terms = clean

    @classmethod
    def zero(cls, n: int) -> "WeylOp":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "WeylOp":
        return cls(n, {(0,) * n: Poly.one(n)})

    @classmethod
    def from_poly(cls, a: Poly) -> "WeylOp":
        """Multiplication by a."""
        return cls(a.n, {(0,) * a.n: a})

    @classmethod
    def partial(cls, n: int, i: int) -> "WeylOp":
        """d_i, i in 1..n."""
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"derivative index {i} not in 1..{n}")
        return cls(n, {unit_index(n, i): Poly.one(n)})

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Max |beta| over stored terms; 0 for the zero operator."""
        return max((sum(b) for b in self.terms), default=0)

    def __add__(self, other: "WeylOp") -> "WeylOp":
        if self.n != other.n:
            raise ArityMismatch(f"{self.n} vs {other.n} variables")
        out = dict(self.terms)
        for b, c in other.terms.items():
            s = out.get(b)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(b, None)
            else:
                out[b] = s
        w = WeylOp(self.n)
        w.terms = out
        return w

    def __neg__(self) -> "WeylOp":
        w = WeylOp(self.n)
        w.terms = {b: -c for b, c in self.terms.items()}
        return w

    def __sub__(self, other: "WeylOp") -> "WeylOp":
        return self + (-other)

    def scale(self, q) -> "WeylOp":
        if q == 1:
            return self
        w = WeylOp(self.n)
        w.terms = {b: s for b, c in self.terms.items()
                   if not (s := c.scale(q)).is_zero()}
        return w

    def compose(self, other: "WeylOp") -> "WeylOp":
        """Operator composition, renormalized to coefficients-left form.

        Uses d^beta (a f) = sum_{mu <= beta} C(beta, mu) d^mu(a) d^(beta-mu)(f).
        """
        if self.n != other.n:
            raise ArityMismatch(f"{self.n} vs {other.n} variables")
        out: dict[MultiIndex, Poly] = {}

        def put(beta, coeff):
            acc = out.get(beta)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero():
                out.pop(beta, None)
            else:
                out[beta] = acc

        for bp, cp in self.terms.items():
            pure_mult = not any(bp)
            for bq, cq in other.terms.items():
                if pure_mult or cq.is_constant():
                    # no commutation needed
                    put(midx_add(bp, bq), cp * cq)
                    continue
                for mu in iter_below(bp):
                    shifted = cq.partial_multi(mu)
                    if shifted.is_zero():
                        continue
                    comb = 1
                    for x, y in zip(bp, mu):
                        comb *= math.comb(x, y)
                    put(midx_add(tuple(x - y for x, y in zip(bp, mu)), bq),
                        (cp * shifted).scale(comb))
        w = WeylOp(self.n)
        w.terms = out
        return w

    def apply(self, f: Poly) -> Poly:
        if self.n != f.n:
            raise ArityMismatch(f"{self.n} vs {f.n} variables")
        out = Poly.zero(self.n)
        for b, c in self.terms.items():
            d = f.partial_multi(b)
            if not d.is_zero():
                out = out + c * d
        return out

    def as_derivation(self) -> list[Poly]:
        """Coefficient vector (a1..an) when the operator is sum a_i d_i.

        Requires order <= 1 and zero action on constants.
        """
        if (0,) * self.n in self.terms:
            raise NotADerivation("nonzero action on 1")
        if self.order() > 1:
            raise NotADerivation(f"order {self.order()} > 1")
        return [self.terms.get(unit_index(self.n, i), Poly.zero(self.n))
                for i in range(1, self.n + 1)]

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylOp) and self.n == other.n and self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b in sorted(self.terms, key=grlex_key):
            c = self.terms[b]
            ds = "*".join(f"d{i + 1}" + (f"^{x}" if x > 1 else "")
                          for i, x in enumerate(b) if x)
            cs = str(c)
            if not ds:
                parts.append(cs)
            elif cs == "1":
                parts.append(ds)
            elif cs == "-1":
                parts.append(f"-{ds}")
            else:
                if len(c.terms) > 1:
                    cs = f"({cs})"
                parts.append(f"{cs}*{ds}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self) -> str:
        return f"WeylOp({self})"


class MatOp:
    """Square matrix of WeylOps; multiplication composes entries."""

    __slots__ = ("n", "m", "entries")

    def __init__(self, n: int, m: int, entries):
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != m or any(len(row) != m for row in entries):
            raise RankMismatch(f"expected a {m}x{m} grid")
        for row in entries:
            for e in row:
                if e.n != n:
                    raise ArityMismatch("entry variable count differs")
        self.n = n
        self.m = m
        self.entries = entries

    @classmethod
    def zero(cls, n: int, m: int) -> "MatOp":
        z = WeylOp.zero(n)
        return cls(n, m, [[z] * m for _ in range(m)])

    @classmethod
    def identity(cls, n: int, m: int) -> "MatOp":
        z, e = WeylOp.zero(n), WeylOp.one(n)
        return cls(n, m, [[e if i == j else z for j in range(m)] for i in range(m)])

    @classmethod
    def scalar_op(cls, op: WeylOp, m: int) -> "MatOp":
        """op * Id."""
        z = WeylOp.zero(op.n)
        return cls(op.n, m, [[op if i == j else z for j in range(m)] for i in range(m)])

    @classmethod
    def from_poly_matrix(cls, n: int, m: int, polys) -> "MatOp":
        """Entrywise multiplication operators from an m x m grid of Polys."""
        return cls(n, m, [[WeylOp.from_poly(polys[i][j]) for j in range(m)]
                          for i in range(m)])

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def order(self) -> int:
        return max((e.order() for row in self.entries for e in row
                    if not e.is_zero()), default=0)

    def _check(self, other: "MatOp"):
        if self.n != other.n:
            raise ArityMismatch(f"{self.n} vs {other.n} variables")
        if self.m != other.m:
            raise RankMismatch(f"rank {self.m} vs {other.m}")

    def __add__(self, other: "MatOp") -> "MatOp":
        self._check(other)
        return MatOp(self.n, self.m,
                     [[a + b for a, b in zip(r1, r2)]
                      for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "MatOp":
        return MatOp(self.n, self.m, [[-e for e in row] for row in self.entries])

    def __sub__(self, other: "MatOp") -> "MatOp":
        return self + (-other)

    def __mul__(self, other: "MatOp") -> "MatOp":
        self._check(other)
        m = self.m
        rows = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = WeylOp.zero(self.n)
                for k in range(m):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a.compose(b)
                row.append(acc)
            rows.append(row)
        return MatOp(self.n, m, rows)

    def scale(self, q) -> "MatOp":
        if q == 1:
            return self
        return MatOp(self.n, self.m,
                     [[e.scale(q) for e in row] for row in self.entries])

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatOp) and self.n == other.n and self.m == other.m
                and self.entries == other.entries)

    __hash__ = None

    def __str__(self) -> str:
        rows = ["[" + ", ".join(str(e) for e in row) + "]" for row in self.entries]
        return "[" + "; ".join(rows) + "]"

    def __repr__(self) -> str:
        return f"MatOp({self})"
