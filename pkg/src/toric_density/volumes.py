"""The archimedean constants: Sargos, volume, and mixed volume.

The Sargos constant of a positive generalized polynomial P is

    A0(P) = n! Vol(Lambda) * I,

where Lambda is the convex hull of 0, the normalized polar vectors of the
facets (at infinity) meeting the diagonal, and the unit vectors outside the
transverse block, and I integrates P restricted to the diagonal face, raised
to the power -sigma0, ones in the transverse slots, over the positive
orthant in the face directions and over [1, oo) in the recession directions.

The volume constant A0(I; u; b) is the Sargos constant of an auxiliary
polynomial built by repeating each point of I according to its multiplicity
and transposing the resulting exponent matrix; the mixed volume constant
A0(T; P) first pushes the type T through the exponent matrix of P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .hull import polytope_volume, upward_hull
from .model import GeneralizedPolynomial
from .quadrature import ConstantValue, check_tail_convergence, integrate_cube
from .vectors import dot, frac, fracvec, rank, vsub


class MissingVariable(Exception):
    pass


@dataclass(frozen=True)
class MixedTypeT:
    """A finite point family with positive integer multiplicities."""

    points: tuple
    multiplicities: tuple

    @staticmethod
    def of(points, multiplicities=None) -> "MixedTypeT":
        pts = tuple(fracvec(p) for p in points)
        if multiplicities is None:
            mult = tuple(1 for _ in pts)
        else:
            mult = tuple(int(u) for u in multiplicities)
        if len(mult) != len(pts) or any(u < 1 for u in mult):
            raise ValueError("multiplicities must be positive, one per point")
        return MixedTypeT(points=pts, multiplicities=mult)


@dataclass(frozen=True)
class SargosData:
    """Exact geometry of the polyhedron at infinity around the diagonal."""

    n: int
    sigma0: Fraction
    rho0: int
    m: int                     # recession directions occupy slots m+1..n
    permutation: tuple         # permutation[i] = original coordinate in slot i
    face_support: tuple        # monomials (coeff, exponents) on the diagonal face
    lambdas: tuple             # normalized polar vectors of facets meeting the diagonal
    lambda_volume: Fraction    # exact Vol(Lambda)
    compact_face: bool


def newton_at_infinity(p: GeneralizedPolynomial) -> SargosData:
    """Locate the diagonal face of the polyhedron at infinity of P.

    Everything is exact: the hull of the support minus the positive orthant
    is the mirror image of an upward-closed hull, so the same machinery
    applies after negation.
    """
    if not p.depends_on_all_variables():
        raise MissingVariable("polynomial must depend on every variable")
    n = p.nvars
    mirrored = [tuple(-x for x in e) for e in p.support]
    facets, _ = upward_hull(mirrored, n)
    # largest t with t * 1 inside conv(support) - R_+^n; mirrored smallest point
    u0 = None
    for w, m in facets:
        s = sum(w)
        if s > 0:
            t = frac(m) / s
            u0 = t if u0 is None else max(u0, t)
    tmax = -u0
    assert tmax > 0, "positive support must meet the diagonal at positive height"
    sigma0 = 1 / tmax

    diag = tuple(u0 for _ in range(n))
    active = [(w, m) for w, m in facets if dot(w, diag) == m]
    face_exps = [e for e in p.support
                 if all(dot(w, tuple(-x for x in e)) == m for w, m in active)]
    face_support = tuple((c, e) for c, e in p.monomials if e in set(face_exps))
    recession = sorted(i for i in range(n) if all(w[i] == 0 for w, _ in active))

    base = tuple(-x for x in face_exps[0])
    span = [vsub(tuple(-x for x in e), base) for e in face_exps[1:]]
    span += [tuple(Fraction(1 if j == i else 0) for j in range(n)) for i in recession]
    dim_face = rank(span)
    rho0 = n - dim_face
    m_index = n - len(recession)

    # transverse block: greedy coordinates whose axes complement the face directions
    transverse = []
    current = list(span)
    for i in range(n):
        if i in recession:
            continue
        cand = tuple(Fraction(1 if j == i else 0) for j in range(n))
        if rank(current + [cand]) > rank(current):
            current.append(cand)
            transverse.append(i)
        if len(transverse) == rho0:
            break
    assert len(transverse) == rho0, "axes must complement the face directions"
    middle = [i for i in range(n) if i not in transverse and i not in recession]
    permutation = tuple(transverse + middle + recession)

    # normalized polar vectors of facets at infinity meeting the diagonal
    lambdas = []
    for w, m in facets:
        if dot(w, diag) != m:
            continue
        m_inf = -frac(m)   # max of <w, .> over the un-mirrored hull
        if m_inf <= 0:
            continue
        lambdas.append(tuple(frac(x) / m_inf for x in w))
    perm_lambdas = [tuple(lam[permutation[i]] for i in range(n)) for lam in lambdas]
    corners = [tuple(Fraction(0) for _ in range(n))] + perm_lambdas
    for i in range(rho0, n):
        corners.append(tuple(Fraction(1 if j == i else 0) for j in range(n)))
    vol = polytope_volume(corners)

    return SargosData(n=n, sigma0=sigma0, rho0=rho0, m=m_index,
                      permutation=permutation, face_support=face_support,
                      lambdas=tuple(lambdas), lambda_volume=vol,
                      compact_face=not recession)


def sargos_constant(p: GeneralizedPolynomial, tol: float = 1e-9,
                    seed: int = 0) -> ConstantValue:
    """n! Vol(Lambda) times the diagonal-face integral."""
    data = newton_at_infinity(p)
    n = data.n
    sigma0 = float(data.sigma0)
    inner = data.m - data.rho0        # positive-orthant axes
    outer = n - data.m                # [1, oo) axes
    dim = inner + outer
    perm = data.permutation
    terms = [(float(c), tuple(float(x) for x in e)) for c, e in data.face_support]

    def face_poly(v):
        # v holds the n variable values in original coordinate order
        total = 0.0
        for c, e in terms:
            t = c
            for xi, ei in zip(v, e):
                if ei != 0.0:
                    t *= xi ** ei
            total += t
        return total

    def integrand(u):
        v = [1.0] * n
        for j in range(inner):
            if u[j] >= 1.0:
                return 0.0
            v[perm[data.rho0 + j]] = u[j] / (1.0 - u[j])
        for j in range(outer):
            if u[inner + j] <= 0.0:
                return 0.0
            v[perm[data.m + j]] = 1.0 / u[inner + j]
        val = face_poly(v)
        if val <= 0.0 or not math.isfinite(val):
            return 0.0
        w = val ** (-sigma0)
        for j in range(inner):
            w /= (1.0 - u[j]) ** 2
        for j in range(outer):
            w /= u[inner + j] ** 2
        return w if math.isfinite(w) else 0.0

    scale = float(math.factorial(n) * data.lambda_volume)
    if dim == 0:
        const = sum(float(c) for c, _ in data.face_support)
        return ConstantValue(value=scale * const ** (-sigma0), abs_error=1e-15,
                             method="closed-form")
    result = integrate_cube(integrand, dim, tol=tol, seed=seed)
    if result.abs_error > max(100 * tol, 1e-3 * abs(result.value)):
        tails = {j: 1.0 for j in range(inner)}
        tails.update({inner + j: 0.0 for j in range(outer)})
        check_tail_convergence(integrand, dim, tails)
    return ConstantValue(value=scale * result.value,
                         abs_error=scale * result.abs_error,
                         method=result.method)


def build_repetition_polynomial(points, multiplicities, coefficients) -> GeneralizedPolynomial:
    """The auxiliary polynomial behind the volume constant.

    Repeat each point of I according to its multiplicity to form rows
    alpha^1..alpha^q, then transpose: monomial k gets exponent vector
    (alpha^1_k, ..., alpha^q_k) and coefficient b_k.
    """
    pts = [fracvec(x) for x in points]
    mult = [int(u) for u in multiplicities]
    if not pts:
        raise ValueError("empty point family")
    r = len(pts[0])
    coeffs = [frac(b) for b in coefficients]
    if len(coeffs) != r:
        raise ValueError("need one coefficient per ambient coordinate")
    alphas = []
    for beta, u in zip(pts, mult):
        alphas.extend([beta] * u)
    q = len(alphas)
    terms = []
    for k in range(r):
        gamma = tuple(alphas[i][k] for i in range(q))
        terms.append((coeffs[k], gamma))
    return GeneralizedPolynomial.from_terms(terms, q)


def volume_constant(points, multiplicities, coefficients, tol: float = 1e-9,
                    seed: int = 0) -> ConstantValue:
    """A0(I; u; b): the Sargos constant of the repetition polynomial."""
    aux = build_repetition_polynomial(points, multiplicities, coefficients)
    return sargos_constant(aux, tol=tol, seed=seed)


def mixed_type_pushforward(t: MixedTypeT, p: GeneralizedPolynomial):
    """Push the type through the exponent matrix of P, merging collisions."""
    n = p.nvars
    gammas = p.support
    r = len(gammas)
    alphas = [tuple(gammas[j][i] for j in range(r)) for i in range(n)]
    merged: dict = {}
    for beta, u in zip(t.points, t.multiplicities):
        if len(beta) != n:
            raise ValueError("type arity must match the variable count")
        mu = tuple(sum((beta[i] * alphas[i][j] for i in range(n)), Fraction(0))
                   for j in range(r))
        merged[mu] = merged.get(mu, 0) + u
    pts = sorted(merged)
    return pts, [merged[x] for x in pts]


def mixed_volume_constant(t: MixedTypeT, p: GeneralizedPolynomial,
                          tol: float = 1e-9, seed: int = 0) -> ConstantValue:
    """A0(T; P) = A0(I_{T,P}; u_{T,P}; b)."""
    pts, mult = mixed_type_pushforward(t, p)
    return volume_constant(pts, mult, p.coefficients, tol=tol, seed=seed)


def mahler_constant(p: GeneralizedPolynomial, tol: float = 1e-9,
                    seed: int = 0) -> ConstantValue:
    """Classical density: (1/k) integral of P_d^(-k/d) over the positive unit sphere.

    k is the number of variables; spherical coordinates on the positive
    octant keep the quadrature dimension at k - 1.
    """
    k = p.nvars
    if k > 6:
        from .quadrature import DimensionTooHigh
        raise DimensionTooHigh("sphere quadrature capped at six variables")
    top = p.top_part()
    power = -float(k) / float(p.degree)
    terms = [(float(c), tuple(float(x) for x in e)) for c, e in top.monomials]
    half_pi = math.pi / 2

    def integrand(u):
        ang = [x * half_pi for x in u]
        v = []
        s = 1.0
        for i in range(k - 1):
            v.append(s * math.cos(ang[i]))
            s *= math.sin(ang[i])
        v.append(s)
        total = 0.0
        for c, e in terms:
            t_ = c
            for xi, ei in zip(v, e):
                if ei != 0.0:
                    if xi <= 0.0:
                        t_ = 0.0
                        break
                    t_ *= xi ** ei
            total += t_
        if total <= 0.0:
            return 0.0
        w = total ** power
        # surface measure: prod sin^(k-1-i)(theta_i), one half_pi per axis
        for i in range(k - 2):
            w *= math.sin(ang[i]) ** (k - 2 - i)
        return w * half_pi ** (k - 1)

    if k == 1:
        return ConstantValue(value=float(sum(c for c, _ in terms)) ** power,
                             abs_error=1e-15, method="closed-form")
    result = integrate_cube(integrand, k - 1, tol=tol, seed=seed)
    return ConstantValue(value=result.value / k, abs_error=result.abs_error / k,
                         method="sphere-" + result.method)
