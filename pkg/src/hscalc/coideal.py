"""Multi-indices and finite co-ideals of N^p.

A co-ideal is a downward-closed subset of N^p; here it is the exponent
universe of every truncated series.  Only finite co-ideals are supported:
every statement about a series is checked at a finite truncation, and the
inverse-limit structure of the full series rings makes that enough.

Multi-indices are plain tuples of non-negative ints so they can serve as
dict keys everywhere.
"""

from __future__ import annotations

import itertools
import operator
from typing import Iterable, Iterator

from .errors import ArityMismatch, EmptySet, ExplicitSetNotDownwardClosed

MultiIndex = tuple[int, ...]


def midx_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(map(operator.add, a, b))


def midx_sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    """a - b, defined only when b <= a componentwise."""
    out = tuple(x - y for x, y in zip(a, b))
    if any(x < 0 for x in out):
        raise ValueError(f"{b} is not <= {a}")
    return out


def midx_leq(a: MultiIndex, b: MultiIndex) -> bool:
    return all(x <= y for x, y in zip(a, b))


def grlex_key(a: MultiIndex) -> tuple[int, MultiIndex]:
    return (sum(a), a)


def unit_index(p: int, i: int) -> MultiIndex:
    """The i-th coordinate vector of N^p, i in 1..p."""
    return tuple(1 if k == i - 1 else 0 for k in range(p))


def iter_below(alpha: MultiIndex) -> Iterator[MultiIndex]:
    """All beta <= alpha, in no particular order."""
    return itertools.product(*(range(a + 1) for a in alpha))


class CoIdeal:
    """Finite downward-closed subset of N^p; always contains 0.

    Iteration is in graded-lexicographic order, which the graded recursions
    (series inversion, integration) rely on: every strictly smaller index is
    visited first.
    """

    __slots__ = ("p", "elements", "_ordered")

    def __init__(self, p: int, elements: frozenset):
        self.p = p
        self.elements = elements
        self._ordered = tuple(sorted(elements, key=grlex_key))

    @classmethod
    def box(cls, bounds: Iterable[int]) -> "CoIdeal":
        """All alpha with alpha_i <= bounds_i."""
        bounds = tuple(int(b) for b in bounds)
        if not bounds or any(b < 0 for b in bounds):
            raise EmptySet(f"invalid box bounds {bounds}")
        return cls(len(bounds), frozenset(iter_below(bounds)))

    @classmethod
    def total_degree(cls, degree: int, p: int) -> "CoIdeal":
        """All alpha in N^p with |alpha| <= degree."""
        if p < 1 or degree < 0:
            raise EmptySet(f"invalid total-degree bounds ({degree}, {p})")
        elems = [a for a in iter_below((degree,) * p) if sum(a) <= degree]
        return cls(p, frozenset(elems))

    @classmethod
    def from_set(cls, elements: Iterable[Iterable[int]]) -> "CoIdeal":
        """Validate an explicit element set; it is never repaired."""
        elems = frozenset(tuple(int(x) for x in a) for a in elements)
        if not elems:
            raise EmptySet("a co-ideal must contain 0")
        p = len(next(iter(elems)))
        for a in elems:
            if len(a) != p:
                raise ArityMismatch(f"mixed arities {p} and {len(a)}")
            if any(x < 0 for x in a):
                raise ExplicitSetNotDownwardClosed(f"negative entry in {a}")
        # immediate predecessors suffice: closure under alpha - e_i implies
        # closure under the full partial order
        for a in elems:
            for i in range(p):
                if a[i] > 0:
                    pred = tuple(x - 1 if k == i else x for k, x in enumerate(a))
                    if pred not in elems:
                        raise ExplicitSetNotDownwardClosed(
                            f"{a} present but {pred} missing")
        return cls(p, elems)

    def __contains__(self, alpha: MultiIndex) -> bool:
        return alpha in self.elements

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self._ordered)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CoIdeal) and self.p == other.p
                and self.elements == other.elements)

    def __hash__(self) -> int:
        return hash((self.p, self.elements))

    def __repr__(self) -> str:
        return f"CoIdeal(p={self.p}, size={len(self.elements)})"

    def zero(self) -> MultiIndex:
        return (0,) * self.p

    def max_total_degree(self) -> int:
        return max(sum(a) for a in self.elements)

    def product01(self) -> "CoIdeal":
        """Delta x {0,1} in N^(p+1); the extra variable carries degree 0 or 1."""
        return CoIdeal(self.p + 1,
                       frozenset(a + (e,) for a in self.elements for e in (0, 1)))

    def is_subcoideal(self, other: "CoIdeal") -> bool:
        """self as a subset of other; arities must agree."""
        if self.p != other.p:
            raise ArityMismatch(f"arity {self.p} vs {other.p}")
        return self.elements <= other.elements

    def splittings(self, alpha: MultiIndex) -> Iterator[tuple[MultiIndex, MultiIndex]]:
        """All (beta, gamma) with beta + gamma = alpha; both lie in the co-ideal
        automatically by downward closure."""
        for beta in iter_below(alpha):
            yield beta, tuple(a - b for a, b in zip(alpha, beta))
