"""Flat connections on free modules and the module structures they generate.

A connection of rank m assigns to each coordinate derivation d_i the operator
d_i Id + M_i on A^m, with M_i an m x m matrix over A.  Linearity over A and
the Leibniz rule are then structural; the only condition left to check is
flatness,

    d_i(M_j) - d_j(M_i) + [M_i, M_j] = 0   (left modules),

with the reversed bracket on the right side.  Right structures live in the
opposite endomorphism ring and the same generic code runs there: the
distinguished derivation elements of that ring are -d_i Id, which is exactly
the sign the reversed Leibniz rule requires.

Given a flat connection, ``psi_construct`` builds the action of any higher
derivation D by integrating the connection against the logarithmic
derivative of D:

    |alpha| Psi_alpha = sum_{beta+gamma=alpha, |beta|>0} Psi_gamma nabla(eps_beta(D)).

Exact division by |alpha| makes the solution unique, which is what all the
round-trip checks in the suites lean on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .coideal import CoIdeal, unit_index
from .errors import (ArityMismatch, CoidealMismatch, NotFlat, RankMismatch,
                     RingMismatch)
from .poly import Poly
from .rings import (CoefficientRing, MatRing, OppositeRing, WeylRing,
                    random_poly, random_fraction)
from .series import OpSeries, epsilon_family, epsilon_totals
from .subst import SubstMap, bullet_left
from .weyl import MatOp, WeylOp

SIDES = ("left", "right")


def _mat_add(A, B):
    return [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(A, B)]


def _mat_mul(A, B):
    m = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Poly.zero(A[0][0].n))
             for j in range(m)] for i in range(m)]


def _mat_partial(A, i):
    return [[e.partial(i) for e in row] for row in A]


def curvature(Mi, Mj, i: int, j: int, side: str):
    """The obstruction matrix for the pair (i, j); zero means flat."""
    first = _mat_partial(Mj, i)
    second = [[-e for e in row] for row in _mat_partial(Mi, j)]
    if side == "left":
        bracket = _mat_add(_mat_mul(Mi, Mj), [[-e for e in row]
                                              for row in _mat_mul(Mj, Mi)])
    else:
        bracket = _mat_add(_mat_mul(Mj, Mi), [[-e for e in row]
                                              for row in _mat_mul(Mi, Mj)])
    return _mat_add(_mat_add(first, second), bracket)


@dataclass(frozen=True)
class Connection:
    """Validated flat connection; ``matrices[i]`` is the matrix of nabla(d_{i+1})
    minus the derivative part."""

    n: int
    m: int
    side: str
    matrices: tuple  # n entries, each an m x m tuple-grid of Poly

    def ring(self) -> CoefficientRing:
        base = MatRing(self.n, self.m)
        return base if self.side == "left" else OppositeRing(base)

    def matrix_op(self, i: int) -> MatOp:
        """M_i as a matrix of multiplication operators, i in 1..n."""
        return MatOp.from_poly_matrix(self.n, self.m, self.matrices[i - 1])

    def nabla(self, coeffs) -> MatOp:
        """Value on the derivation sum a_i d_i, as an element of ring()."""
        coeffs = list(coeffs)
        if len(coeffs) != self.n:
            raise ArityMismatch(f"{len(coeffs)} coefficients for n={self.n}")
        R = self.ring()
        out = R.zero()
        for i, a in enumerate(coeffs, start=1):
            if a.is_zero():
                continue
            term = R.add(R.deriv(i), self.matrix_op(i))
            out = R.add(out, R.mul(R.iota(a), term))
        return out


def connection_make(matrices, side: str, validate: bool = True) -> Connection:
    """Build a connection from the n coefficient matrices; flatness is
    verified pairwise and the failing pair is reported."""
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    mats = tuple(tuple(tuple(row) for row in M) for M in matrices)
    if not mats:
        raise ArityMismatch("a connection needs at least one matrix")
    m = len(mats[0])
    n = len(mats)
    for M in mats:
        if len(M) != m or any(len(row) != m for row in M):
            raise RankMismatch("connection matrices must be square of equal rank")
        for row in M:
            for e in row:
                if e.n != n:
                    raise ArityMismatch(
                        f"matrix entries over {e.n} variables, expected {n}")
    if validate:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                C = curvature(mats[i - 1], mats[j - 1], i, j, side)
                if any(not e.is_zero() for row in C for e in row):
                    witness = "[" + "; ".join(
                        ", ".join(str(e) for e in row) for row in C) + "]"
                    raise NotFlat(f"curvature in directions ({i}, {j}): {witness}",
                                  i=i, j=j, witness=C)
    return Connection(n=n, m=m, side=side, matrices=mats)


def trivial_connection(n: int, m: int, side: str = "left") -> Connection:
    z = Poly.zero(n)
    return connection_make([[[z] * m for _ in range(m)] for _ in range(n)], side)


def psi_construct(conn: Connection, D: OpSeries) -> OpSeries:
    """The unique unit series Psi(D) over End(A^m) compatible with eps.

    Psi_0 = Id and the graded recursion in the module docstring; for right
    connections the same recursion runs in the opposite ring.
    """
    if not isinstance(D.ring, WeylRing) or D.ring.n != conn.n:
        raise RingMismatch("the acting series must be over the matching operator ring")
    R = conn.ring()
    eps = epsilon_totals(D)[0]
    nab = {}
    for beta, v in eps.coeffs.items():
        nab[beta] = conn.nabla(v.as_derivation())
    support = sorted(nab, key=lambda a: (sum(a), a))
    zero_idx = D.coideal.zero()
    coeffs = {zero_idx: R.one()}
    for alpha in D.coideal:
        if alpha == zero_idx:
            continue
        acc = None
        for b in support:
            if not all(x <= y for x, y in zip(b, alpha)):
                continue
            g = tuple(y - x for x, y in zip(b, alpha))
            prev = coeffs.get(g)
            if prev is None:
                continue
            w = R.mul(prev, nab[b])
            acc = w if acc is None else R.add(acc, w)
        if acc is not None and not R.is_zero(acc):
            coeffs[alpha] = R.scalar(Fraction(1, sum(alpha)), acc)
    out = OpSeries(R, D.coideal)
    out.coeffs = {a: v for a, v in coeffs.items() if not R.is_zero(v)}
    return out


def nabla_bar(conn: Connection, delta: OpSeries) -> OpSeries:
    """Coefficient-wise nabla on a series of derivations."""
    R = conn.ring()
    return delta.map_coefficients(lambda v: conn.nabla(v.as_derivation()), R)


def delement_check(D: OpSeries, r: OpSeries) -> bool:
    """Leibniz rule of a module action: r a = D~(a) r for base elements a.

    Witnesses are the algebra generators plus two composites; for operators
    of bounded order at desk-scale truncations these decide the identity.
    """
    if D.coideal != r.coideal:
        raise CoidealMismatch("action and acting series over different co-ideals")
    n = D.ring.n
    S = r.ring
    witnesses = [Poly.variable(n, i) for i in range(1, n + 1)]
    x1 = Poly.variable(n, 1)
    witnesses.append(x1 * x1)
    if n >= 2:
        witnesses.append(x1 * Poly.variable(n, 2))
    for a in witnesses:
        lhs = r * OpSeries.constant(S, r.coideal, S.iota(a))
        dtilde = OpSeries(S, r.coideal,
                          {g: S.iota(v.apply(a)) for g, v in D.coeffs.items()})
        if lhs != dtilde * r:
            return False
    return True


def psi_extract_connection(provider, n: int, m: int, side: str) -> Connection:
    """Recover the connection from a module structure evaluated on 1 + d_i s.

    ``provider`` maps a one-variable higher derivation over {0, 1} to its unit
    series over End(A^m).  The s-coefficient must be d_i Id plus multiplication
    operators; anything else means the provider is not a genuine module
    structure and is reported as a flatness failure.
    """
    wr = WeylRing(n)
    delta01 = CoIdeal.box((1,))
    R = MatRing(n, m) if side == "left" else OppositeRing(MatRing(n, m))
    mats = []
    for i in range(1, n + 1):
        D = OpSeries(wr, delta01, {(0,): WeylOp.one(n),
                                   (1,): WeylOp.partial(n, i)})
        psi = provider(D)
        if psi.coideal != delta01:
            raise CoidealMismatch("provider answered over the wrong co-ideal")
        rem = psi.coeff((1,)) - R.deriv(i)
        rows = []
        for row in rem.entries:
            out_row = []
            for e in row:
                if e.order() > 0:
                    raise NotFlat(
                        f"extracted coefficient in direction {i} is not "
                        f"multiplication by base elements: {e}", i=i)
                out_row.append(e.terms.get((0,) * n, Poly.zero(n)))
            rows.append(out_row)
        mats.append(rows)
    return connection_make(mats, side)


def psi_substitution_check(conn: Connection, D: OpSeries, phi: SubstMap) -> bool:
    """Compatibility of the constructed structure with a substitution map:
    Psi(phi . D) must equal phi . Psi(D) coefficient-wise."""
    lhs = psi_construct(conn, bullet_left(phi, D))
    rhs = bullet_left(phi, psi_construct(conn, D))
    return lhs == rhs


def random_flat_connection(rng: Random, n: int, m: int, side: str = "left",
                           degree: int = 1) -> Connection:
    """Random flat connection: commuting constant part plus an exact scalar
    part, gauged by a unipotent change of basis.  Flat by construction."""
    C = [[Poly.constant(n, random_fraction(rng)) for _ in range(m)]
         for _ in range(m)]
    lams = [random_fraction(rng) for _ in range(n)]
    q = random_poly(rng, n, degree + 1, max_terms=2)

    N = [[Poly.zero(n)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            N[i][j] = random_poly(rng, n, degree)
    eye = [[Poly.one(n) if i == j else Poly.zero(n) for j in range(m)]
           for i in range(m)]
    U = _mat_add(eye, N)
    # U^-1 = I - N + N^2 - ...; N is strictly triangular so the sum is finite
    Uinv = eye
    power = N
    sign = -1
    for _ in range(m - 1):
        Uinv = _mat_add(Uinv, [[e.scale(sign) for e in row] for row in power])
        power = _mat_mul(power, N)
        sign = -sign

    mats = []
    for i in range(1, n + 1):
        base = [[e.scale(lams[i - 1]) for e in row] for row in C]
        dq = q.partial(i)
        for k in range(m):
            base[k][k] = base[k][k] + dq
        Mi = _mat_add(_mat_mul(Uinv, _mat_mul(base, U)),
                      _mat_mul(Uinv, _mat_partial(U, i)))
        mats.append(Mi)
    if side == "right":
        mats = [[[M[j][i] for j in range(m)] for i in range(m)] for M in mats]
    return connection_make(mats, side)
