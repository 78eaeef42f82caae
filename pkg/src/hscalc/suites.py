"""Named verification suites behind ``hs verify``.

Each suite runs a fixed list of checks; a check has a stable id, a one-line
statement of the identity it exercises, a pass flag and, on failure, a
witness string.  All randomness flows from the single seed in the parameter
block, so a failing report can be replayed exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict
from random import Random

from .coideal import CoIdeal
from .connection import (Connection, connection_make, delement_check, nabla_bar,
                         psi_construct, psi_extract_connection,
                         psi_substitution_check, random_flat_connection,
                         trivial_connection)
from .errors import CalculusError, NotFlat, UnknownSuite
from .poly import Poly
from .rings import FreeRing, OppositeRing, WeylRing, random_poly
from .series import (OpSeries, epsilon_family, epsilon_parts, epsilon_totals,
                     filtration_check, is_derivation_family, xi)
from .subst import (bullet_left, bullet_right, make_iota, make_scalar, make_sigma,
                    make_sigma_i, pair_embeddings)
from .weyl import WeylOp
from . import hs

SUITE_NAMES = ("series", "epsilon", "substitution", "hs", "integration",
               "modules", "roundtrip", "all")

STATEMENTS = {
    "series.unit-inverse": "r r* = r* r = 1 for units of the truncated series ring",
    "series.inverse-antihomomorphism": "(r u)* = u* r*",
    "series.truncation-homomorphism":
        "truncating a product equals the product of the truncations",
    "epsilon.value-at-one": "eps(1) = epsbar(1) = 0",
    "epsilon.cocycle": "eps(r' r) = eps(r) + r* eps(r') r",
    "epsilon.bar-cocycle": "epsbar(r r') = epsbar(r) + r epsbar(r') r*",
    "epsilon.inverse": "eps(r*) = -r eps(r) r* = -epsbar(r)",
    "epsilon.support":
        "eps^i_alpha(r) = epsbar^i_alpha(r) = 0 when alpha_i = 0, and the "
        "constant terms vanish",
    "epsilon.curl": "chi^j(eps^i(r)) - chi^i(eps^j(r)) = [eps^i(r), eps^j(r)]",
    "epsilon.definitional": "eps(r) = r* chi(r) and epsbar(r) = chi(r) r*",
    "subst.xi-epsilon": "r* (sigma^i . r) = xi(eps^i(r)), r* (sigma . r) = xi(eps(r))",
    "subst.xi-epsilon-bar":
        "(sigma^i . r) r* = xi(epsbar^i(r)), (sigma . r) r* = xi(epsbar(r))",
    "subst.bracket":
        "(i.(1+rs)) (i'.(1+r's)) (i.(1+rs))* (i'.(1+r's))* = phi.(1+[r,r']s) "
        "for phi(s) = s s'",
    "subst.functoriality": "(psi o phi) . r = psi . (phi . r)",
    "subst.constant-multiplicative":
        "phi.(r r') = (phi.r)(phi.r') and phi.r = r.phi for constant coefficients",
    "subst.unit": "phi . 1 = 1 . phi = 1",
    "subst.noncommutative-witness":
        "phi . r differs from r . phi for a polynomial-coefficient map",
    "hs.leibniz": "integrated series satisfy the generalized Leibniz identities",
    "hs.group-closure": "products and inverses of higher derivations are higher derivations",
    "hs.epsilon-derivations": "every coefficient of eps(D) is a classical derivation",
    "hs.family-membership": "{eps^i(D)} satisfies the support and curl conditions",
    "hs.cocycle": "eps(D o E) = E* eps(D) E + eps(E)",
    "hs.inverse-epsilon": "eps(D*) = -epsbar(D)",
    "hs.xi-image": "xi sends derivation series to higher derivations over Delta x {0,1}",
    "hs.filtration": "order(D_alpha) <= |alpha| for integrated series",
    "integration.left-inverse": "integrate(eps(D)) = D",
    "integration.right-inverse": "eps(integrate(delta)) = delta",
    "integration.taylor": "integrate(delta s) has components delta^j / j!",
    "integration.identity": "integrate(0) is the identity series",
    "modules.flatness": "the connections satisfy the curvature equations",
    "modules.group-homomorphism": "Psi(D o E) = Psi(D) Psi(E)",
    "modules.delement": "Psi(D) a = D~(a) Psi(D) on generators and composites",
    "modules.epsilon-compat":
        "eps(Psi(D)) = nabla(eps(D)), also per Euler index",
    "modules.filtration": "order of every entry of Psi(D)_alpha <= |alpha|",
    "modules.conjugation": "Psi(E) nabla(E* delta E) = nabla(delta) Psi(E)",
    "modules.subst-scalar": "Psi(phi.D) = phi.Psi(D) for the scalar action phi(s) = a s",
    "modules.subst-product": "Psi(phi.D) = phi.Psi(D) for phi(s) = s s'",
    "modules.subst-sigma": "Psi(phi.D) = phi.Psi(D) for phi = sigma^1",
    "modules.tautological": "the trivial rank-1 connection gives Psi(D) = D",
    "roundtrip.extract-construct":
        "extracting the connection from its module structure returns it exactly",
    "roundtrip.construct-extract":
        "the structure rebuilt from the extracted connection agrees on random D",
    "roundtrip.nonflat-rejected":
        "a curved connection is rejected with the failing pair of directions",
    "roundtrip.leibniz-rejected": "a series violating Leibniz is rejected with its index",
    "roundtrip.nonlie-defect":
        "bypassing flatness for a curved connection breaks the group homomorphism",
}


@dataclass
class SuiteParams:
    seed: int = 7
    p: int = 2
    n: int = 2
    rank: int = 2
    trunc: int = 4
    degree: int = 2

    def as_dict(self):
        return asdict(self)


@dataclass
class CheckResult:
    check_id: str
    statement: str
    passed: bool
    witness: str | None = None


@dataclass
class SuiteReport:
    suite: str
    parameters: dict
    checks: list = field(default_factory=list)
    wall_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check_id: str, fn):
        """Run one check; a raised CalculusError counts as a failure with the
        exception text as witness."""
        try:
            outcome = fn()
            passed, witness = outcome if isinstance(outcome, tuple) else (outcome, None)
        except CalculusError as exc:
            passed, witness = False, f"{type(exc).__name__}: {exc}"
        self.checks.append(CheckResult(check_id, STATEMENTS[check_id],
                                       bool(passed), witness))

    def to_json(self) -> dict:
        return {"suite": self.suite,
                "parameters": self.parameters,
                "passed": self.passed,
                "checks": [{"id": c.check_id, "statement": c.statement,
                            "passed": c.passed, "witness": c.witness}
                           for c in self.checks],
                "wall_ms": self.wall_ms}


# -- random generators ---------------------------------------------------------


def _coideal(p: int, trunc: int) -> CoIdeal:
    return CoIdeal.box((trunc,)) if p == 1 else CoIdeal.total_degree(trunc, p)


def _free_ring(coideal: CoIdeal) -> FreeRing:
    names = [f"D{a[0] if coideal.p == 1 else a}" for a in coideal if sum(a)]
    return FreeRing(names)


def random_unit(rng: Random, ring, coideal: CoIdeal, degree: int) -> OpSeries:
    coeffs = {coideal.zero(): ring.one()}
    for a in coideal:
        if sum(a) and rng.random() < 0.75:
            v = ring.random_element(rng, degree)
            if not ring.is_zero(v):
                coeffs[a] = v
    return OpSeries(ring, coideal, coeffs)


def _ring_instances(params: SuiteParams, p: int):
    coideal = _coideal(p, params.trunc)
    return coideal, [(_free_ring(coideal), "free"), (WeylRing(params.n), "weyl")]


# -- suites ---------------------------------------------------------------------


def run_series(params: SuiteParams) -> SuiteReport:
    report = SuiteReport("series", params.as_dict())
    rng = Random(params.seed)
    coideal, rings = _ring_instances(params, params.p)

    def unit_inverse():
        for ring, label in rings:
            one = OpSeries.one(ring, coideal)
            for k in range(100):
                r = random_unit(rng, ring, coideal, params.degree)
                s = r.inverse()
                if r * s != one or s * r != one:
                    return False, f"{label} unit #{k}"
        return True

    def antihom():
        for ring, label in rings:
            for k in range(100):
                r = random_unit(rng, ring, coideal, params.degree)
                u = random_unit(rng, ring, coideal, params.degree)
                if (r * u).inverse() != u.inverse() * r.inverse():
                    return False, f"{label} pair #{k}"
        return True

    def trunc_hom():
        sub = _coideal(params.p, max(params.trunc - 1, 1))
        for ring, label in rings:
            for k in range(20):
                r = random_unit(rng, ring, coideal, params.degree)
                u = random_unit(rng, ring, coideal, params.degree)
                if (r * u).truncate(sub) != r.truncate(sub) * u.truncate(sub):
                    return False, f"{label} pair #{k}"
        return True

    report.add("series.unit-inverse", unit_inverse)
    report.add("series.inverse-antihomomorphism", antihom)
    report.add("series.truncation-homomorphism", trunc_hom)
    return report


def run_epsilon(params: SuiteParams) -> SuiteReport:
    report = SuiteReport("epsilon", params.as_dict())
    rng = Random(params.seed)
    # one batch of sampled data per (ring, p), shared by all identity checks
    batches = []
    for p in (1, 2):
        coideal, rings = _ring_instances(params, p)
        for ring, label in rings:
            pairs = []
            for _ in range(50):
                r = random_unit(rng, ring, coideal, params.degree)
                u = random_unit(rng, ring, coideal, params.degree)
                eps_u, bar_u, _ = epsilon_totals(u)
                pairs.append((r, epsilon_family(r), u, eps_u, bar_u))
            batches.append((label, p, coideal, ring, pairs))

    def value_at_one():
        for label, p, coideal, ring, _ in batches:
            fam = epsilon_family(OpSeries.one(ring, coideal))
            if not (fam.total.is_zero() and fam.bar_total.is_zero()):
                return False, f"{label} p={p}"
        return True

    def cocycle():
        for label, p, coideal, ring, pairs in batches:
            for k, (r, fr, u, eps_u, bar_u) in enumerate(pairs):
                prod = u * r  # u plays r', multiplied on the left
                lhs = epsilon_totals(prod)[0]
                if lhs != fr.total + fr.unit_inverse * eps_u * r:
                    return False, f"{label} p={p} pair #{k}"
        return True

    def bar_cocycle():
        for label, p, coideal, ring, pairs in batches:
            for k, (r, fr, u, eps_u, bar_u) in enumerate(pairs):
                prod = r * u
                lhs = epsilon_totals(prod)[1]
                if lhs != fr.bar_total + r * bar_u * fr.unit_inverse:
                    return False, f"{label} p={p} pair #{k}"
        return True

    def inverse_identity():
        for label, p, coideal, ring, pairs in batches:
            for k, (r, fr, *_rest) in enumerate(pairs):
                eps_star = epsilon_totals(fr.unit_inverse, inverse=r)[0]
                if eps_star != -(r * fr.total * fr.unit_inverse):
                    return False, f"{label} p={p} unit #{k} (conjugate form)"
                if eps_star != -fr.bar_total:
                    return False, f"{label} p={p} unit #{k} (bar form)"
        return True

    def support():
        for label, p, coideal, ring, pairs in batches:
            for k, (r, fr, *_rest) in enumerate(pairs):
                for fam_parts in (fr.parts, fr.bar_parts):
                    for i, part in enumerate(fam_parts):
                        if any(a[i] == 0 for a in part.coeffs):
                            return False, f"{label} p={p} unit #{k} index {i + 1}"
                if not (fr.total.is_plus_part() and fr.bar_total.is_plus_part()):
                    return False, f"{label} p={p} unit #{k} constant term"
        return True

    def curl():
        for label, p, coideal, ring, pairs in batches:
            for k, (r, fr, *_rest) in enumerate(pairs):
                if not is_derivation_family(fr.parts):
                    return False, f"{label} p={p} unit #{k}"
        return True

    def definitional():
        for label, p, coideal, ring, pairs in batches:
            for k, (r, fr, *_rest) in enumerate(pairs):
                if fr.total != fr.unit_inverse * r.euler_total():
                    return False, f"{label} p={p} unit #{k} (eps)"
                if fr.bar_total != r.euler_total() * fr.unit_inverse:
                    return False, f"{label} p={p} unit #{k} (epsbar)"
        return True

    report.add("epsilon.value-at-one", value_at_one)
    report.add("epsilon.cocycle", cocycle)
    report.add("epsilon.bar-cocycle", bar_cocycle)
    report.add("epsilon.inverse", inverse_identity)
    report.add("epsilon.support", support)
    report.add("epsilon.curl", curl)
    report.add("epsilon.definitional", definitional)
    return report


def run_substitution(params: SuiteParams) -> SuiteReport:
    report = SuiteReport("substitution", params.as_dict())
    rng = Random(params.seed)
    coideal, rings = _ring_instances(params, params.p)
    p = params.p

    def xi_eps(bar: bool):
        def run():
            for ring, label in rings:
                nvars = params.n if label == "weyl" else 1
                io = make_iota(coideal, nvars)
                sigmas = [make_sigma_i(i, coideal, nvars) for i in range(1, p + 1)]
                sigma = make_sigma(coideal, nvars)
                for k in range(50):
                    r = random_unit(rng, ring, coideal, params.degree)
                    fam = epsilon_family(r)
                    rstar_big = bullet_left(io, fam.unit_inverse)
                    for i, si in enumerate(sigmas):
                        moved = bullet_left(si, r)
                        if bar:
                            if moved * rstar_big != xi(fam.bar_parts[i]):
                                return False, f"{label} unit #{k} sigma^{i + 1}"
                        else:
                            if rstar_big * moved != xi(fam.parts[i]):
                                return False, f"{label} unit #{k} sigma^{i + 1}"
                    moved = bullet_left(sigma, r)
                    if bar:
                        if moved * rstar_big != xi(fam.bar_total):
                            return False, f"{label} unit #{k} sigma"
                    elif rstar_big * moved != xi(fam.total):
                        return False, f"{label} unit #{k} sigma"
            return True
        return run

    def bracket():
        i1, i2, prod_map = pair_embeddings(params.n)
        i1f, i2f, prod_f = pair_embeddings(1)
        src = CoIdeal.box((1,))
        for ring, label in rings:
            e1, e2, pm = (i1, i2, prod_map) if label == "weyl" else (i1f, i2f, prod_f)
            for k in range(50):
                a = ring.random_element(rng, params.degree)
                b = ring.random_element(rng, params.degree)
                u = OpSeries(ring, src, {(0,): ring.one(), (1,): a})
                v = OpSeries(ring, src, {(0,): ring.one(), (1,): b})
                lifted_u = bullet_left(e1, u)
                lifted_v = bullet_left(e2, v)
                lhs = lifted_u * lifted_v * lifted_u.inverse() * lifted_v.inverse()
                comm = ring.sub(ring.mul(a, b), ring.mul(b, a))
                rhs = bullet_left(pm, OpSeries(ring, src,
                                               {(0,): ring.one(), (1,): comm}))
                if lhs != rhs:
                    return False, f"{label} pair #{k}"
        return True

    def functoriality():
        # one-variable chain s -> t^2 -> u^3, and the sigma / inclusion chain
        wide = CoIdeal.box((params.trunc * 2,))
        mid = CoIdeal.box((params.trunc,))
        from .rings import PolyRing
        from .subst import SubstMap
        ring1 = PolyRing(1)
        phi = SubstMap([OpSeries(ring1, mid, {(2,): Poly.one(1)} if (2,) in mid else {})],
                       CoIdeal.box((params.trunc,)), mid)
        psi = SubstMap([OpSeries(ring1, wide, {(3,): Poly.one(1)} if (3,) in wide else {})],
                       mid, wide)
        chained = psi.compose(phi)
        wr = WeylRing(1)
        for k in range(20):
            r = random_unit(rng, wr, CoIdeal.box((params.trunc,)), params.degree)
            if bullet_left(chained, r) != bullet_left(psi, bullet_left(phi, r)):
                return False, f"unit #{k}"
        return True

    def constant_multiplicative():
        sigma = make_sigma(coideal, params.n)
        wr = WeylRing(params.n)
        for k in range(20):
            r = random_unit(rng, wr, coideal, params.degree)
            u = random_unit(rng, wr, coideal, params.degree)
            if bullet_left(sigma, r * u) != bullet_left(sigma, r) * bullet_left(sigma, u):
                return False, f"pair #{k} (multiplicativity)"
            if bullet_left(sigma, r) != bullet_right(r, sigma):
                return False, f"pair #{k} (two-sided agreement)"
        return True

    def unit_preservation():
        wr = WeylRing(params.n)
        one = OpSeries.one(wr, coideal)
        sigma = make_sigma(coideal, params.n)
        target_one = OpSeries.one(wr, sigma.target)
        return (bullet_left(sigma, one) == target_one
                and bullet_right(one, sigma) == target_one)

    def noncommutative_witness():
        # phi(s) = x1 s against r = 1 + d1 s: the two actions differ by [d1, x1]
        wr = WeylRing(params.n)
        box1 = CoIdeal.box((1,))
        phi = make_scalar(Poly.variable(params.n, 1), box1)
        r = OpSeries(wr, box1, {(0,): wr.one(), (1,): WeylOp.partial(params.n, 1)})
        return bullet_left(phi, r) != bullet_right(r, phi)

    report.add("subst.xi-epsilon", xi_eps(bar=False))
    report.add("subst.xi-epsilon-bar", xi_eps(bar=True))
    report.add("subst.bracket", bracket)
    report.add("subst.functoriality", functoriality)
    report.add("subst.constant-multiplicative", constant_multiplicative)
    report.add("subst.unit", unit_preservation)
    report.add("subst.noncommutative-witness", noncommutative_witness)
    return report


def run_hs(params: SuiteParams) -> SuiteReport:
    report = SuiteReport("hs", params.as_dict())
    rng = Random(params.seed)
    coideal = _coideal(params.p, params.trunc)
    n = params.n

    samples = [hs.random_hs(rng, coideal, n, params.degree) for _ in range(20)]

    def leibniz():
        for k, D in enumerate(samples):
            rep = hs.check_leibniz(D)
            if not rep.ok:
                return False, f"sample #{k} fails at {rep.failing_indices()[0]}"
        return True

    def group_closure():
        for k in range(0, 10, 2):
            D, E = samples[k], samples[k + 1]
            if not hs.check_leibniz(D * E).ok:
                return False, f"product of samples #{k}, #{k + 1}"
            if not hs.check_leibniz(D.inverse()).ok:
                return False, f"inverse of sample #{k}"
        return True

    def eps_derivations():
        for k, D in enumerate(samples):
            try:
                hs.hs_epsilon(D, validate=True)
            except CalculusError:
                return False, f"sample #{k}"
        return True

    def family_membership():
        for k, D in enumerate(samples):
            fam = epsilon_family(D)
            if not is_derivation_family(fam.parts):
                return False, f"sample #{k}"
        return True

    def cocycle():
        for k in range(50):
            D = hs.random_hs(rng, coideal, n, params.degree)
            E = hs.random_hs(rng, coideal, n, params.degree)
            lhs = epsilon_totals(D * E)[0]
            epsD = epsilon_totals(D)[0]
            epsE, _, Estar = epsilon_totals(E)
            if lhs != Estar * epsD * E + epsE:
                return False, f"pair #{k}"
        return True

    def inverse_epsilon():
        for k in range(50):
            D = hs.random_hs(rng, coideal, n, params.degree)
            _, barD, Dstar = epsilon_totals(D)
            if epsilon_totals(Dstar, inverse=D)[0] != -barD:
                return False, f"sample #{k}"
        return True

    def xi_image():
        small = _coideal(params.p, max(params.trunc - 2, 1))
        for k in range(20):
            delta = hs.random_derivation_series(rng, small, n, params.degree)
            if not hs.check_leibniz(xi(delta)).ok:
                return False, f"series #{k}"
        return True

    def filtration():
        for k, D in enumerate(samples):
            if not filtration_check(D):
                return False, f"sample #{k}"
        return True

    report.add("hs.leibniz", leibniz)
    report.add("hs.group-closure", group_closure)
    report.add("hs.epsilon-derivations", eps_derivations)
    report.add("hs.family-membership", family_membership)
    report.add("hs.cocycle", cocycle)
    report.add("hs.inverse-epsilon", inverse_epsilon)
    report.add("hs.xi-image", xi_image)
    report.add("hs.filtration", filtration)
    return report


def run_integration(params: SuiteParams) -> SuiteReport:
    report = SuiteReport("integration", params.as_dict())
    rng = Random(params.seed)
    coideal = _coideal(params.p, params.trunc)
    n = params.n

    def left_inverse():
        for k in range(50):
            D = hs.random_hs(rng, coideal, n, params.degree)
            if hs.integrate(epsilon_totals(D)[0], validate=False) != D:
                return False, f"sample #{k}"
        return True

    def right_inverse():
        for k in range(50):
            delta = hs.random_derivation_series(rng, coideal, n, params.degree)
            D = hs.integrate(delta, validate=False)
            if epsilon_totals(D)[0] != delta:
                return False, f"series #{k}"
        return True

    def taylor_case():
        dop = WeylOp.partial(n, 1)
        delta = OpSeries(WeylRing(n), CoIdeal.box((params.trunc,)),
                         {(1,): dop})
        return hs.integrate(delta) == hs.taylor(dop, params.trunc)

    def identity_case():
        zero = OpSeries.zero(WeylRing(n), coideal)
        return hs.integrate(zero) == OpSeries.one(WeylRing(n), coideal)

    report.add("integration.left-inverse", left_inverse)
    report.add("integration.right-inverse", right_inverse)
    report.add("integration.taylor", taylor_case)
    report.add("integration.identity", identity_case)
    return report


def _module_connections(params: SuiteParams, rng: Random):
    sides = ("left", "left", "left", "right", "right")
    return [random_flat_connection(rng, params.n, params.rank, side,
                                   max(params.degree - 1, 1))
            for side in sides]


def run_modules(params: SuiteParams,
                connection: Connection | None = None) -> SuiteReport:
    report = SuiteReport("modules", params.as_dict())
    rng = Random(params.seed)
    n = params.n
    coideal = _coideal(params.p, params.trunc)

    if connection is not None:
        conns = [connection]
        n = connection.n
    else:
        conns = _module_connections(params, rng)

    def flatness():
        for idx, c in enumerate(conns):
            # re-run the curvature validation on the stored matrices
            try:
                connection_make(c.matrices, c.side)
            except NotFlat as exc:
                return False, f"connection #{idx}: NotFlat: {exc}"
        return True

    report.add("modules.flatness", flatness)
    if not report.passed:
        # a curved connection cannot carry a module structure; stop here
        return report

    # degree-1 coefficient polynomials keep the sampled series within the
    # default degree cap while keeping the matrix products desk-sized
    sample_degree = min(params.degree, 1)
    derivations = [hs.random_hs(rng, coideal, n, sample_degree) for _ in range(20)]
    eps_data = [epsilon_parts(D) for D in derivations]  # shared across connections
    psis = {}  # (conn index, D index) -> Psi(D)

    def built(ci, di):
        got = psis.get((ci, di))
        if got is None:
            got = psi_construct(conns[ci], derivations[di])
            psis[(ci, di)] = got
        return got

    def group_hom():
        for ci, c in enumerate(conns):
            for k in range(0, 20, 2):
                lhs = psi_construct(c, derivations[k] * derivations[k + 1])
                if lhs != built(ci, k) * built(ci, k + 1):
                    return False, f"connection #{ci} pair ({k}, {k + 1})"
        return True

    def delement():
        for ci, c in enumerate(conns):
            for di, D in enumerate(derivations):
                if not delement_check(D, built(ci, di)):
                    return False, f"connection #{ci} sample #{di}"
        return True

    def eps_compat():
        for ci, c in enumerate(conns):
            for di, D in enumerate(derivations):
                partsD, totalD, _ = eps_data[di]
                partsP, totalP, _ = epsilon_parts(built(ci, di))
                if totalP != nabla_bar(c, totalD):
                    return False, f"connection #{ci} sample #{di} (total)"
                for i in range(coideal.p):
                    if partsP[i] != nabla_bar(c, partsD[i]):
                        return False, f"connection #{ci} sample #{di} index {i + 1}"
        return True

    def filtration():
        for ci in range(len(conns)):
            for di in range(len(derivations)):
                if not filtration_check(built(ci, di)):
                    return False, f"connection #{ci} sample #{di}"
        return True

    def conjugation():
        wr = WeylRing(n)
        for k in range(20):
            ci = k % len(conns)
            c = conns[ci]
            E = derivations[k % len(derivations)]
            dop = WeylOp(n, {tuple(1 if j == k % n else 0 for j in range(n)):
                             random_poly(rng, n, 0)})
            if dop.is_zero():
                dop = WeylOp.partial(n, 1)
            delta0 = OpSeries.constant(wr, coideal, dop)
            conj = E.inverse() * delta0 * E
            psiE = built(ci, k % len(derivations))
            if psiE * nabla_bar(c, conj) != nabla_bar(c, delta0) * psiE:
                return False, f"connection #{ci} instance #{k}"
        return True

    def subst_scalar():
        box = CoIdeal.box((min(params.trunc, 3),))
        for ci, c in enumerate(conns):
            for k in range(10):
                D = hs.random_hs(rng, box, n, sample_degree)
                phi = make_scalar(random_poly(rng, n, params.degree), box)
                if not psi_substitution_check(c, D, phi):
                    return False, f"connection #{ci} sample #{k}"
        return True

    def subst_product():
        box1 = CoIdeal.box((1,))
        _, _, prod_map = pair_embeddings(n)
        for ci, c in enumerate(conns):
            for k in range(10):
                D = hs.random_hs(rng, box1, n, params.degree)
                if not psi_substitution_check(c, D, prod_map):
                    return False, f"connection #{ci} sample #{k}"
        return True

    def subst_sigma():
        sigma1 = make_sigma_i(1, coideal, n)
        for ci, c in enumerate(conns):
            for di in range(0, 20, 2):
                if not psi_substitution_check(c, derivations[di], sigma1):
                    return False, f"connection #{ci} sample #{di}"
        return True

    def tautological():
        triv = trivial_connection(n, 1)
        for di, D in enumerate(derivations):
            psiD = psi_construct(triv, D)
            for a in coideal:
                if psiD.coeff(a).entries[0][0] != D.coeff(a):
                    return False, f"sample #{di} at {a}"
        return True

    report.add("modules.group-homomorphism", group_hom)
    report.add("modules.delement", delement)
    report.add("modules.epsilon-compat", eps_compat)
    report.add("modules.filtration", filtration)
    report.add("modules.conjugation", conjugation)
    report.add("modules.subst-scalar", subst_scalar)
    report.add("modules.subst-product", subst_product)
    report.add("modules.subst-sigma", subst_sigma)
    report.add("modules.tautological", tautological)
    return report


# the regression witness for the non-Lie control: with Random(99) driving
# random_hs draws over total_degree(2, 2) at polynomial degree 2, the very
# first (D, E) pair already breaks the group homomorphism
NONLIE_SEED = 99
NONLIE_FIRST_FAILING_PAIR = 0


def nonflat_example() -> tuple:
    """n=2, rank 1, M1 = (x2), M2 = (0); curvature is the constant -1."""
    y = Poly.variable(2, 2)
    z = Poly.zero(2)
    return (((y,),), ((z,),))


def nonlie_group_defect(params: SuiteParams, pairs: int = 50):
    """Indices of (D, E) pairs where the curved connection breaks
    Psi(D o E) = Psi(D) Psi(E)."""
    rng = Random(NONLIE_SEED)
    coideal = CoIdeal.total_degree(2, 2)
    bad = Connection(n=2, m=1, side="left", matrices=nonflat_example())
    failing = []
    for k in range(pairs):
        D = hs.random_hs(rng, coideal, 2, params.degree)
        E = hs.random_hs(rng, coideal, 2, params.degree)
        if psi_construct(bad, D * E) != psi_construct(bad, D) * psi_construct(bad, E):
            failing.append(k)
    return failing


def run_roundtrip(params: SuiteParams) -> SuiteReport:
    report = SuiteReport("roundtrip", params.as_dict())
    rng = Random(params.seed)
    n = params.n
    conns = _module_connections(params, rng)
    coideal = _coideal(params.p, params.trunc)

    def extract_construct():
        for idx, c in enumerate(conns):
            provider = lambda D, c=c: psi_construct(c, D)
            back = psi_extract_connection(provider, c.n, c.m, c.side)
            if back.matrices != c.matrices:
                return False, f"connection #{idx} ({c.side})"
        return True

    def construct_extract():
        for idx, c in enumerate(conns[:2]):
            provider = lambda D, c=c: psi_construct(c, D)
            back = psi_extract_connection(provider, c.n, c.m, c.side)
            for k in range(10):
                D = hs.random_hs(rng, coideal, n, params.degree)
                if psi_construct(back, D) != psi_construct(c, D):
                    return False, f"connection #{idx} sample #{k}"
        return True

    def nonflat_rejected():
        try:
            connection_make(nonflat_example(), "left")
        except NotFlat as exc:
            ok = exc.i == 1 and exc.j == 2 and exc.witness is not None
            return ok, None if ok else f"unexpected witness: {exc}"
        return False, "curved connection was accepted"

    def leibniz_rejected():
        wr = WeylRing(1)
        box2 = CoIdeal.box((2,))
        broken = OpSeries(wr, box2, {(0,): WeylOp.one(1),
                                     (1,): WeylOp.partial(1, 1)})
        rep = hs.check_leibniz(broken)
        if rep.ok:
            return False, "broken series was accepted"
        ok = (2,) in rep.failing_indices()
        return ok, None if ok else f"failing indices {rep.failing_indices()}"

    def nonlie_defect():
        failing = nonlie_group_defect(params)
        if not failing:
            return False, "no group-homomorphism defect found in 50 pairs"
        if NONLIE_FIRST_FAILING_PAIR not in failing:
            return False, f"pinned pair missing; failing pairs {failing[:5]}"
        return True, f"defect at pairs {failing[:5]}..." if len(failing) > 5 else None

    report.add("roundtrip.extract-construct", extract_construct)
    report.add("roundtrip.construct-extract", construct_extract)
    report.add("roundtrip.nonflat-rejected", nonflat_rejected)
    report.add("roundtrip.leibniz-rejected", leibniz_rejected)
    report.add("roundtrip.nonlie-defect", nonlie_defect)
    return report


_RUNNERS = {
    "series": run_series,
    "epsilon": run_epsilon,
    "substitution": run_substitution,
    "hs": run_hs,
    "integration": run_integration,
    "modules": run_modules,
    "roundtrip": run_roundtrip,
}


def run_suite(name: str, params: SuiteParams,
              connection: Connection | None = None) -> list[SuiteReport]:
    """Run one named suite, or all of them; returns the reports with wall
    times filled in."""
    if name not in SUITE_NAMES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    names = [s for s in SUITE_NAMES if s != "all"] if name == "all" else [name]
    reports = []
    for s in names:
        t0 = time.monotonic()
        if s == "modules":
            rep = run_modules(params, connection)
        else:
            rep = _RUNNERS[s](params)
        rep.wall_ms = round((time.monotonic() - t0) * 1000.0, 3)
        reports.append(rep)
    return reports
