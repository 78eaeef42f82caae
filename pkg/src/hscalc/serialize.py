"""JSON formats for every object the CLI reads or writes.

Rationals travel as strings so files stay bit-exact; all term lists are
emitted in graded-lexicographic order, which makes serialization canonical:
loading a file and dumping it again is byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coideal import CoIdeal, grlex_key
from .connection import Connection, connection_make
from .errors import MalformedInput, ParseError
from .poly import Poly
from .rings import MatRing, OppositeRing, PolyRing, WeylRing
from .series import OpSeries
from .subst import SubstMap
from .weyl import MatOp, WeylOp


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", position=exc.pos) from exc


def _expect(cond, message):
    if not cond:
        raise MalformedInput(message)


# -- rationals ----------------------------------------------------------------

def fraction_to_json(q: Fraction) -> str:
    return str(q)


def fraction_from_json(s) -> Fraction:
    _expect(isinstance(s, str), f"rational must be a string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {s!r}: {exc}") from exc


# -- co-ideals ----------------------------------------------------------------

def coideal_to_json(c: CoIdeal) -> dict:
    return {"type": "set", "elements": [list(a) for a in c]}


def coideal_from_json(obj) -> CoIdeal:
    _expect(isinstance(obj, dict) and "type" in obj, "co-ideal descriptor expected")
    kind = obj["type"]
    if kind == "box":
        _expect("bound" in obj, "box descriptor needs a bound")
        return CoIdeal.box(obj["bound"])
    if kind == "total":
        _expect("degree" in obj and "arity" in obj,
                "total descriptor needs degree and arity")
        return CoIdeal.total_degree(obj["degree"], obj["arity"])
    if kind == "set":
        _expect("elements" in obj, "set descriptor needs elements")
        return CoIdeal.from_set(obj["elements"])
    raise MalformedInput(f"unknown co-ideal descriptor type {kind!r}")


# -- polynomials and operators -------------------------------------------------

def poly_to_json(f: Poly) -> list:
    return [{"coeff": fraction_to_json(f.terms[e]), "exp": list(e)}
            for e in sorted(f.terms, key=grlex_key)]


def poly_from_json(obj, n: int) -> Poly:
    _expect(isinstance(obj, list), "polynomial must be a list of terms")
    terms = {}
    for t in obj:
        _expect(isinstance(t, dict) and "coeff" in t and "exp" in t,
                "polynomial term needs coeff and exp")
        terms[tuple(t["exp"])] = fraction_from_json(t["coeff"])
    return Poly(n, terms)


def weyl_to_json(w: WeylOp) -> list:
    return [{"coeff": poly_to_json(w.terms[b]), "dexp": list(b)}
            for b in sorted(w.terms, key=grlex_key)]


def weyl_from_json(obj, n: int) -> WeylOp:
    _expect(isinstance(obj, list), "operator must be a list of terms")
    terms = {}
    for t in obj:
        _expect(isinstance(t, dict) and "coeff" in t and "dexp" in t,
                "operator term needs coeff and dexp")
        terms[tuple(t["dexp"])] = poly_from_json(t["coeff"], n)
    return WeylOp(n, terms)


def matop_to_json(a: MatOp) -> list:
    return [[weyl_to_json(e) for e in row] for row in a.entries]


def matop_from_json(obj, n: int, m: int) -> MatOp:
    _expect(isinstance(obj, list) and len(obj) == m, f"expected {m} matrix rows")
    return MatOp(n, m, [[weyl_from_json(e, n) for e in row] for row in obj])


# -- series -------------------------------------------------------------------

def _ring_to_json(ring) -> dict:
    if isinstance(ring, WeylRing):
        return {"kind": "weyl", "n": ring.n}
    if isinstance(ring, PolyRing):
        return {"kind": "poly", "n": ring.n}
    if isinstance(ring, MatRing):
        return {"kind": "mat", "n": ring.n, "rank": ring.m}
    if isinstance(ring, OppositeRing):
        out = _ring_to_json(ring.base)
        out["opposite"] = True
        return out
    raise MalformedInput(f"ring {ring!r} has no serialization")


def _ring_from_json(obj):
    _expect(isinstance(obj, dict) and "kind" in obj, "ring descriptor expected")
    kind = obj["kind"]
    if kind == "weyl":
        ring = WeylRing(obj["n"])
    elif kind == "poly":
        ring = PolyRing(obj["n"])
    elif kind == "mat":
        ring = MatRing(obj["n"], obj["rank"])
    else:
        raise MalformedInput(f"unknown ring kind {kind!r}")
    if obj.get("opposite"):
        ring = OppositeRing(ring)
    return ring


def _element_codec(ring):
    base = ring.base if isinstance(ring, OppositeRing) else ring
    if isinstance(base, WeylRing):
        return weyl_to_json, lambda o: weyl_from_json(o, base.n)
    if isinstance(base, PolyRing):
        return poly_to_json, lambda o: poly_from_json(o, base.n)
    if isinstance(base, MatRing):
        return matop_to_json, lambda o: matop_from_json(o, base.n, base.m)
    raise MalformedInput(f"ring {ring!r} has no element serialization")


def series_to_json(s: OpSeries) -> dict:
    enc, _ = _element_codec(s.ring)
    return {"ring": _ring_to_json(s.ring),
            "coideal": coideal_to_json(s.coideal),
            "coeffs": [{"alpha": list(a), "value": enc(s.coeffs[a])}
                       for a in s.support()]}


def series_from_json(obj) -> OpSeries:
    _expect(isinstance(obj, dict) and "coideal" in obj and "coeffs" in obj,
            "series needs a co-ideal and coefficients")
    _expect("ring" in obj, "series needs a ring descriptor")
    ring = _ring_from_json(obj["ring"])
    _, dec = _element_codec(ring)
    coideal = coideal_from_json(obj["coideal"])
    coeffs = {}
    for t in obj["coeffs"]:
        _expect(isinstance(t, dict) and "alpha" in t and "value" in t,
                "series coefficient needs alpha and value")
        coeffs[tuple(t["alpha"])] = dec(t["value"])
    return OpSeries(ring, coideal, coeffs)


def derivation_series_to_json(s: OpSeries) -> dict:
    """Series of classical derivations stored by coefficient vectors."""
    n = s.ring.n
    out = []
    for a in s.support():
        ders = s.coeffs[a].as_derivation()
        out.append({"alpha": list(a), "ders": [poly_to_json(f) for f in ders]})
    return {"n": n, "coideal": coideal_to_json(s.coideal), "coeffs": out}


def derivation_series_from_json(obj) -> OpSeries:
    _expect(isinstance(obj, dict) and "n" in obj and "coideal" in obj
            and "coeffs" in obj, "derivation series needs n, coideal, coeffs")
    n = obj["n"]
    ring = WeylRing(n)
    coideal = coideal_from_json(obj["coideal"])
    coeffs = {}
    for t in obj["coeffs"]:
        _expect("alpha" in t and "ders" in t,
                "derivation coefficient needs alpha and ders")
        ders = t["ders"]
        _expect(len(ders) == n, f"expected {n} coefficient polynomials")
        op = WeylOp.zero(n)
        for i, p in enumerate(ders, start=1):
            a = poly_from_json(p, n)
            if not a.is_zero():
                op = op + WeylOp(n, {tuple(1 if k == i - 1 else 0
                                           for k in range(n)): a})
        coeffs[tuple(t["alpha"])] = op
    return OpSeries(ring, coideal, coeffs)


# -- substitution maps ----------------------------------------------------------

def substmap_to_json(phi: SubstMap) -> dict:
    return {"n": phi.n,
            "source": coideal_to_json(phi.source),
            "target": coideal_to_json(phi.target),
            "images": [[{"alpha": list(a), "value": poly_to_json(c.coeffs[a])}
                        for a in c.support()] for c in phi.images]}


def substmap_from_json(obj) -> SubstMap:
    _expect(isinstance(obj, dict) and "source" in obj and "target" in obj
            and "images" in obj, "substitution map needs source, target, images")
    n = obj.get("n", 1)
    source = coideal_from_json(obj["source"])
    target = coideal_from_json(obj["target"])
    ring = PolyRing(n)
    images = []
    for img in obj["images"]:
        coeffs = {tuple(t["alpha"]): poly_from_json(t["value"], n) for t in img}
        images.append(OpSeries(ring, target, coeffs))
    return SubstMap(images, source, target)


# -- connections ----------------------------------------------------------------

def connection_to_json(c: Connection) -> dict:
    return {"n": c.n, "rank": c.m, "side": c.side,
            "matrices": [[[poly_to_json(e) for e in row] for row in M]
                         for M in c.matrices]}


def connection_from_json(obj, validate: bool = True) -> Connection:
    _expect(isinstance(obj, dict) and "n" in obj and "rank" in obj
            and "side" in obj and "matrices" in obj,
            "connection needs n, rank, side, matrices")
    n, m = obj["n"], obj["rank"]
    _expect(obj["side"] in ("left", "right"), "side must be left or right")
    _expect(len(obj["matrices"]) == n, f"expected {n} matrices")
    mats = [[[poly_from_json(e, n) for e in row] for row in M]
            for M in obj["matrices"]]
    for M in mats:
        _expect(len(M) == m and all(len(row) == m for row in M),
                f"matrices must be {m}x{m}")
    return connection_make(mats, obj["side"], validate=validate)


# -- module-structure evaluations ------------------------------------------------

def psi_basis_to_json(side: str, series_list) -> dict:
    return {"side": side, "series": [series_to_json(s) for s in series_list]}


def psi_basis_from_json(obj):
    _expect(isinstance(obj, dict) and "side" in obj and "series" in obj,
            "basis evaluation needs side and series")
    return obj["side"], [series_from_json(s) for s in obj["series"]]
