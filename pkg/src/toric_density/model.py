"""Input objects: toric relation matrices, positive generalized polynomials,
and the uniform multiplicative weights they induce.

All types are immutable after construction and safe to share across threads.
Exponents are kept as exact rationals throughout; irrational exponents are a
documented limitation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Optional

from .vectors import frac, fracvec, rank


class NonZeroRowSum(ValueError):
    pass


class DependentRows(ValueError):
    pass


class NotElliptic(ValueError):
    pass


EXHAUSTIVE_SIGN_LIMIT = 24  # beyond this many variables, count sign vectors by GF(2) rank


@dataclass(frozen=True)
class ToricProblem:
    """Monomial relations prod_j x_j^(a_ij) = 1 cutting a toric variety out of P^n."""

    rows: tuple
    n: int
    l: int

    @property
    def width(self) -> int:
        return self.n + 1

    @property
    def variety_dim(self) -> int:
        return self.n - self.l


@dataclass(frozen=True)
class SignCount:
    """Half the number of sign vectors compatible with the relations."""

    value: int


@dataclass(frozen=True)
class GeneralizedPolynomial:
    """Finite positive-coefficient sum of monomials with rational exponents >= 0."""

    monomials: tuple  # ((coeff: Fraction, exponents: tuple[Fraction, ...]), ...)
    nvars: int

    @staticmethod
    def from_terms(terms, nvars=None) -> "GeneralizedPolynomial":
        """Build from (coefficient, exponent-vector) pairs, merging collisions."""
        merged: dict = {}
        width = nvars
        for coeff, exps in terms:
            e = fracvec(exps)
            if width is None:
                width = len(e)
            if len(e) != width:
                raise ValueError("inconsistent exponent vector lengths")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            c = frac(coeff)
            if c <= 0:
                raise ValueError("coefficients must be positive")
            merged[e] = merged.get(e, Fraction(0)) + c
        if not merged:
            raise ValueError("empty polynomial")
        mono = tuple(sorted(((c, e) for e, c in merged.items()), key=lambda t: t[1]))
        return GeneralizedPolynomial(monomials=mono, nvars=width)

    @property
    def degree(self) -> Fraction:
        return max(sum(e) for _, e in self.monomials)

    @property
    def is_homogeneous(self) -> bool:
        degs = {sum(e) for _, e in self.monomials}
        return len(degs) == 1

    @property
    def support(self) -> tuple:
        return tuple(e for _, e in self.monomials)

    @property
    def coefficients(self) -> tuple:
        return tuple(c for c, _ in self.monomials)

    @property
    def has_integer_exponents(self) -> bool:
        return all(x.denominator == 1 for _, e in self.monomials for x in e)

    def top_part(self) -> "GeneralizedPolynomial":
        d = self.degree
        return GeneralizedPolynomial.from_terms(
            [(c, e) for c, e in self.monomials if sum(e) == d], self.nvars)

    def depends_on_all_variables(self) -> bool:
        for i in range(self.nvars):
            if all(e[i] == 0 for _, e in self.monomials):
                return False
        return True

    def eval_float(self, x) -> float:
        total = 0.0
        for c, e in self.monomials:
            term = float(c)
            for xi, ei in zip(x, e):
                if ei != 0:
                    term *= float(xi) ** float(ei)
            total += term
        return total

    def eval_exact(self, x) -> Fraction:
        """Exact value at a rational point; requires integer exponents."""
        if not self.has_integer_exponents:
            raise ValueError("exact evaluation needs integer exponents")
        total = Fraction(0)
        for c, e in self.monomials:
            term = c
            for xi, ei in zip(x, e):
                term *= frac(xi) ** int(ei)
            total += term
        return total

    def scaled_integer_terms(self):
        """(scale, [(int coeff, int exponent vector)]) with scale * P integral."""
        if not self.has_integer_exponents:
            raise ValueError("integer exponents required")
        scale = 1
        for c, _ in self.monomials:
            scale = scale * c.denominator // gcd(scale, c.denominator)
        terms = [(int(c * scale), tuple(int(x) for x in e)) for c, e in self.monomials]
        return scale, terms


@dataclass(frozen=True)
class UniformMultiplicativeSpec:
    """Weight on prime exponent vectors: f(p^v1, ..., p^vn) = g(v), any p.

    g is {0,1,...}-valued with polynomial growth g(v) <= C (1+|v|)^M. The
    structured `kind`/`payload` lets downstream code pick fast paths without
    touching the generic evaluator.
    """

    arity: int
    g: Callable[[tuple], int] = field(compare=False)
    growth_c: float = 1.0
    growth_m: float = 0.0
    kind: str = "custom"
    payload: tuple = ()
    default_cap: int = 16

    def weight(self, nu) -> int:
        nu = tuple(int(x) for x in nu)
        if len(nu) != self.arity or any(x < 0 for x in nu):
            raise ValueError(f"expected a vector in N_0^{self.arity}")
        return self.g(nu)


def validate_toric_matrix(rows, width: Optional[int] = None) -> ToricProblem:
    """Check zero row sums and Q-independence; empty matrices need `width`."""
    rows = [tuple(int(x) for x in r) for r in rows]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("rows of unequal length")
    elif width is None:
        raise ValueError("empty matrix needs an explicit number of columns")
    if width < 2:
        raise ValueError("need at least two homogeneous coordinates")
    for r in rows:
        if sum(r) != 0:
            raise NonZeroRowSum(f"row {r} sums to {sum(r)}")
    if rows and rank(rows) < len(rows):
        raise DependentRows("relation rows are linearly dependent over Q")
    return ToricProblem(rows=tuple(rows), n=width - 1, l=len(rows))


def hypersurface_problem(a) -> ToricProblem:
    """The rank-one problem of x_1^a1 ... x_n^an = x_(n+1)^q with q = |a|."""
    a = [int(x) for x in a]
    if len(a) < 2 or any(x < 1 for x in a):
        raise ValueError("need n >= 2 positive exponents")
    return validate_toric_matrix([tuple(a) + (-sum(a),)])


def sign_count(problem: ToricProblem) -> SignCount:
    """Count sign vectors killing all relations, halved.

    Only parities of the entries matter, so for wide matrices the count is
    2^(n - rank of A over GF(2)).
    """
    w = problem.width
    if w <= EXHAUSTIVE_SIGN_LIMIT:
        total = 0
        for eps in itertools.product((1, -1), repeat=w):
            ok = True
            for row in problem.rows:
                s = 1
                for e, aij in zip(eps, row):
                    if aij % 2 and e < 0:
                        s = -s
                if s != 1:
                    ok = False
                    break
            if ok:
                total += 1
        assert total % 2 == 0
        return SignCount(total // 2)
    parity = [[aij % 2 for aij in row] for row in problem.rows]
    r2 = _gf2_rank(parity)
    return SignCount(2 ** (problem.n - r2))


def _gf2_rank(rows) -> int:
    vecs = []
    for row in rows:
        v = 0
        for j, x in enumerate(row):
            if x % 2:
                v |= 1 << j
        if v:
            vecs.append(v)
    r = 0
    for col in range(max((v.bit_length() for v in vecs), default=0)):
        piv = next((i for i in range(r, len(vecs)) if vecs[i] >> col & 1), None)
        if piv is None:
            continue
        vecs[r], vecs[piv] = vecs[piv], vecs[r]
        for i in range(len(vecs)):
            if i != r and vecs[i] >> col & 1:
                vecs[i] ^= vecs[r]
        r += 1
    return r


def restrict_to_hypersurface(p: GeneralizedPolynomial, a) -> GeneralizedPolynomial:
    """Substitute X_(n+1) := prod_j X_j^(a_j/q), q = |a|, merging collisions.

    Preserves the degree and ellipticity on the positive orthant.
    """
    a = [int(x) for x in a]
    if len(a) < 2 or any(x < 1 for x in a):
        raise ValueError("need n >= 2 positive exponents")
    n = len(a)
    if p.nvars != n + 1:
        raise ValueError(f"polynomial must have {n + 1} variables")
    q = sum(a)
    terms = []
    for c, e in p.monomials:
        last = e[n]
        new = tuple(e[j] + last * Fraction(a[j], q) for j in range(n))
        terms.append((c, new))
    return GeneralizedPolynomial.from_terms(terms, n)


ELLIPTICITY_MESH = 64  # simplex grid 1/64, then one bisection refinement


def ellipticity_witness(p: GeneralizedPolynomial) -> float:
    """Certified positive lower bound for min of the top part on the unit simplex.

    Uses monotonicity in each variable: on any grid cell the value at the
    lower corner bounds the cell from below, so the reported kappa is a true
    lower bound (not the minimum itself). P(m) >= kappa * |m|_1^d follows for
    homogeneous P.
    """
    top = p.top_part()
    n = p.nvars
    # a missing pure power makes the top part vanish on that axis: min is 0
    for i in range(n):
        axis = tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
        if top.eval_float(axis) == 0.0:
            raise NotElliptic(f"top part vanishes at coordinate axis {i + 1}")

    from math import ceil, floor

    steps = ELLIPTICITY_MESH
    h = Fraction(1, steps)

    corners = []  # lower corners of mesh cells meeting the simplex slab

    def rec(prefix, total):
        if len(prefix) == n - 1:
            lo = max(0, ceil((1 - n * h - total) * steps))
            hi = floor((1 - total) * steps)
            for k in range(lo, hi + 1):
                corners.append(tuple(prefix + [Fraction(k, steps)]))
            return
        hi = floor((1 - total) * steps)
        for k in range(hi + 1):
            rec(prefix + [Fraction(k, steps)], total + Fraction(k, steps))

    rec([], Fraction(0))
    vals = [(top.eval_float(v), v) for v in corners]
    kappa1 = min(v for v, _ in vals)
    cutoff = kappa1 * 1.5 + 1e-12
    best = min((v for v, _ in vals if v > cutoff), default=float("inf"))
    h2 = h / 2
    for val, corner in vals:
        if val > cutoff:
            continue
        for offs in itertools.product((Fraction(0), h2), repeat=n):
            v = tuple(a + b for a, b in zip(corner, offs))
            if sum(v) > 1:
                continue
            best = min(best, top.eval_float(v))
    kappa = best * (1 - 1e-12)
    if kappa <= 0:
        raise NotElliptic("certified minimum not positive")
    return kappa


def toric_weight(problem: ToricProblem) -> UniformMultiplicativeSpec:
    """Characteristic weight of exponent vectors in ker A with a zero entry.

    This is exactly the prime-by-prime description of primitive lattice
    points on the torus.
    """
    rows = problem.rows
    w = problem.width

    def g(nu):
        if all(x > 0 for x in nu):
            return 0
        for row in rows:
            if sum(r * x for r, x in zip(row, nu)) != 0:
                return 0
        return 1

    norm = max((max(abs(x) for x in row) for row in rows), default=1)
    return UniformMultiplicativeSpec(
        arity=w, g=g, growth_c=1.0, growth_m=0.0,
        kind="toric", payload=tuple(rows),
        default_cap=4 * w * max(1, norm))


def hypersurface_weight(a) -> UniformMultiplicativeSpec:
    """Characteristic weight of {q | <a, v>, v_1 ... v_n = 0}."""
    a = tuple(int(x) for x in a)
    if len(a) < 2 or any(x < 1 for x in a):
        raise ValueError("need n >= 2 positive exponents")
    q = sum(a)

    def g(nu):
        if all(x > 0 for x in nu):
            return 0
        return 1 if sum(ai * x for ai, x in zip(a, nu)) % q == 0 else 0

    return UniformMultiplicativeSpec(
        arity=len(a), g=g, growth_c=1.0, growth_m=0.0,
        kind="hypersurface", payload=a,
        default_cap=4 * (len(a) + 1) * max(1, q))


def free_weight(arity: int) -> UniformMultiplicativeSpec:
    """g identically 1: the weight of the full lattice N_0^n."""
    return UniformMultiplicativeSpec(
        arity=arity, g=lambda nu: 1, growth_c=1.0, growth_m=0.0,
        kind="free", payload=(), default_cap=4 * (arity + 1))
