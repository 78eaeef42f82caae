"""The free associative Q-algebra on a finite list of formal symbols.

No relations are imposed, so any identity verified here holds after
specializing the symbols in an arbitrary Q-algebra.  This is the symbolic
oracle against which the universal operator identities are checked.
"""

from __future__ import annotations

from fractions import Fraction

Word = tuple[int, ...]  # sequence of symbol ids (indices into a name table)


def word_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


class NCPoly:
    """Noncommutative polynomial: a map word -> nonzero Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                c = Fraction(c)
                if c:
                    w = tuple(w)
                    s = clean.get(w, Fraction(0)) + c
                    if s:
                        clean[w] = s
                    else:
                        del clean[w]
        self.terms = clean

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls()

    @classmethod
    def one(cls) -> "NCPoly":
        return cls({(): Fraction(1)})

    @classmethod
    def generator(cls, i: int) -> "NCPoly":
        return cls({(i,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            s = c if prev is None else prev + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        p = NCPoly()
        p.terms = out
        return p

    def __neg__(self) -> "NCPoly":
        p = NCPoly()
        p.terms = {w: -c for w, c in self.terms.items()}
        return p

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        """Bilinear extension of word concatenation."""
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                prev = out.get(w)
                s = c1 * c2 if prev is None else prev + c1 * c2
                if s:
                    out[w] = s
                else:
                    del out[w]
        p = NCPoly()
        p.terms = out
        return p

    def scale(self, q) -> "NCPoly":
        if type(q) is not Fraction:
            q = Fraction(q)
        if q == 1:
            return self
        p = NCPoly()
        if q:
            p.terms = {w: c * q for w, c in self.terms.items()}
        return p

    def commutator(self, other: "NCPoly") -> "NCPoly":
        return self * other - other * self

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self.terms == other.terms

    __hash__ = None

    def render(self, names: tuple[str, ...]) -> str:
        """Human-readable form; repeated adjacent symbols collapse to powers."""
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=word_key):
            c = self.terms[w]
            factors = []
            for sym in w:
                name = names[sym]
                if factors and factors[-1][0] == name:
                    factors[-1][1] += 1
                else:
                    factors.append([name, 1])
            body = "*".join(f"{nm}^{k}" if k > 1 else nm for nm, k in factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self) -> str:
        return f"NCPoly({self.terms!r})"
