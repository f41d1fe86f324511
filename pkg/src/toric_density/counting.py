"""Ground truth and assembly: exact point counts, height zeta partial sums,
and the full predicted leading constant.

Counting is exact integer arithmetic end to end: monomial relations are
checked via cross-multiplied products, heights via scaled integer polynomial
comparison, primitivity via running gcds. numpy carries the innermost loops;
overflow risks fall back to Python integers.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .euler import EulerReport, euler_constant
from .generators import generators_with_check
from .model import (GeneralizedPolynomial, ToricProblem, ellipticity_witness,
                    hypersurface_problem, hypersurface_weight,
                    restrict_to_hypersurface, sign_count, toric_weight)
from .polyhedron import build_polyhedron, diagonal_face, face_points
from .quadrature import ConstantValue
from .vectors import frac, rank
from .volumes import MixedTypeT, mixed_volume_constant


class BoxTooLarge(Exception):
    pass


class NonCompactFace(Exception):
    pass


DEFAULT_BUDGET = 10_000_000_000
CHUNK = 2048  # fixed partition size keeps reductions thread-count independent


@dataclass(frozen=True)
class CountResult:
    t: Fraction
    count: int
    box: tuple
    mode: str
    elapsed: float = field(compare=False, default=0.0)


@dataclass(frozen=True)
class ManinReport:
    iota: Fraction
    rho: int
    c: tuple
    sign_factor: int
    degree: Fraction
    volume: ConstantValue
    euler: EulerReport
    leading_constant: float
    zeta_constant: float           # leading_constant * iota * (rho-1)!
    rel_error: float
    compact: bool
    dimension_ok: bool
    stabilized: bool
    face_points: tuple


def _threads(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, threads)
    return max(1, int(os.environ.get("MANIN_TORIC_THREADS", "1")))


def _iroot(x: int, k: int) -> int:
    """Floor integer k-th root, Newton on integers."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0 or k == 1:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    return r


def _perfect_root(x: int, k: int) -> Optional[int]:
    r = _iroot(x, k)
    return r if r ** k == x else None


def _height_data(poly: GeneralizedPolynomial, t: Fraction):
    """(scale, integer terms, scaled rhs) so that height <= t is exact arithmetic."""
    if not poly.has_integer_exponents:
        raise ValueError("exact counting needs integer exponents in the height")
    scale, terms = poly.scaled_integer_terms()
    d = poly.degree
    if d.denominator != 1:
        raise ValueError("homogeneous integer degree required")
    rhs = frac(t) ** int(d) * scale
    return scale, terms, rhs


def _poly_box(poly: GeneralizedPolynomial, t: Fraction) -> int:
    """Per-coordinate enumeration bound: P(m) >= kappa max(m)^d."""
    kappa = ellipticity_witness(poly)
    d = float(poly.degree)
    return int(math.floor(float(t) / kappa ** (1.0 / d) * (1 + 1e-12)))


def _eval_terms_int(terms, point) -> int:
    total = 0
    for coeff, exps in terms:
        v = coeff
        for x, e in zip(point, exps):
            if e:
                v *= x ** e
        total += v
    return total


def _eval_terms_vec(terms, prefix, vec, rhs):
    """Boolean mask of P(prefix, vec) <= rhs, exact; vec is an int64 array."""
    bound = 0
    top = int(vec[-1]) if len(vec) else 0
    for coeff, exps in terms:
        v = abs(coeff)
        for x, e in zip(prefix, exps[:-1]):
            v *= x ** e
        v *= max(top, 1) ** exps[-1]
        bound += v
    if bound < 2 ** 62 and rhs.denominator == 1 and rhs.numerator < 2 ** 62:
        total = np.zeros(len(vec), dtype=np.int64)
        for coeff, exps in terms:
            v = coeff
            for x, e in zip(prefix, exps[:-1]):
                v *= x ** e
            term = np.full(len(vec), v, dtype=np.int64)
            if exps[-1]:
                term = term * vec ** exps[-1]
            total += term
        return total <= int(rhs)
    return np.array([Fraction(_eval_terms_int(terms, tuple(prefix) + (int(m),))) <= rhs
                     for m in vec])


def count_points(problem: ToricProblem, poly: Optional[GeneralizedPolynomial],
                 t, height_mode: str = "polynomial", budget: int = DEFAULT_BUDGET,
                 threads: Optional[int] = None) -> CountResult:
    """Exact count of torus points of height at most t.

    The count is the sign factor times the number of positive primitive
    integer solutions of the monomial relations inside the height ball.
    """
    t = frac(t)
    if t < 1:
        raise ValueError("t must be at least 1")
    w = problem.width
    if height_mode == "sup":
        box = int(t)
        hdata = None
    elif height_mode == "polynomial":
        if poly is None or poly.nvars != w or not poly.is_homogeneous:
            raise ValueError("polynomial mode needs a homogeneous height in all coordinates")
        box = _poly_box(poly, t)
        hdata = _height_data(poly, t)
    else:
        raise ValueError(f"unknown height mode {height_mode!r}")

    rows = problem.rows
    solving = [r for r in rows if r[w - 1] != 0]
    est = box ** (w - 1) if solving or not rows else box ** w
    for r in rows:
        last = max(j for j in range(w) if r[j] != 0)
        if last < w - 1:
            est = max(est // box, 1)
    if est > budget:
        raise BoxTooLarge(f"estimated {est:.3g} operations exceed budget {budget:.3g}")

    csign = sign_count(problem).value
    started = time.monotonic()
    total = _enumerate_relations(rows, w, box, hdata, solving, threads)
    return CountResult(t=t, count=csign * total, box=(box,) * w, mode=height_mode,
                       elapsed=time.monotonic() - started)


def _enumerate_relations(rows, w, box, hdata, solving, threads) -> int:
    """Recursive enumeration; the last coordinate is solved or vectorized."""
    checks = {}
    for r in rows:
        last = max(j for j in range(w) if r[j] != 0)
        checks.setdefault(last, []).append(r)
    terms = hdata[1] if hdata else None
    rhs = hdata[2] if hdata else None

    def prefix_ok(depth, values):
        for r in checks.get(depth - 1, []):
            num = den = 1
            for j in range(depth):
                a = r[j]
                if a > 0:
                    num *= values[j] ** a
                elif a < 0:
                    den *= values[j] ** (-a)
            if num != den:
                return False
        if hdata and depth < w:
            floor_pt = tuple(values) + (1,) * (w - depth)
            if Fraction(_eval_terms_int(terms, floor_pt)) > rhs:
                return False
        return True

    def last_candidates(values, g):
        count = 0
        if solving:
            r = solving[0]
            e = r[w - 1]
            num = den = 1
            for j in range(w - 1):
                a = r[j]
                if a > 0:
                    num *= values[j] ** a
                elif a < 0:
                    den *= values[j] ** (-a)
            if e > 0:
                if den % num:
                    return 0
                m = _perfect_root(den // num, e)
            else:
                if num % den:
                    return 0
                m = _perfect_root(num // den, -e)
            if m is None or m < 1 or m > box:
                return 0
            cand = tuple(values) + (m,)
            for r2 in solving[1:]:
                num = den = 1
                for j in range(w):
                    a = r2[j]
                    if a > 0:
                        num *= cand[j] ** a
                    elif a < 0:
                        den *= cand[j] ** (-a)
                if num != den:
                    return 0
            if gcd(g, m) != 1:
                return 0
            if hdata and Fraction(_eval_terms_int(terms, cand)) > rhs:
                return 0
            return 1
        vec = np.arange(1, box + 1, dtype=np.int64)
        mask = np.gcd(vec, g) == 1
        if hdata:
            mask &= _eval_terms_vec(terms, values, vec, rhs)
        return int(np.count_nonzero(mask))

    def rec(depth, values, g):
        if depth == w - 1:
            return last_candidates(values, g)
        total = 0
        for m in range(1, box + 1):
            vals = values + (m,)
            if prefix_ok(depth + 1, vals):
                total += rec(depth + 1, vals, gcd(g, m))
        return total

    nthreads = _threads(threads)
    chunks = [(lo, min(lo + CHUNK - 1, box)) for lo in range(1, box + 1, CHUNK)]

    def chunk_total(bounds):
        lo, hi = bounds
        total = 0
        for m in range(lo, hi + 1):
            if prefix_ok(1, (m,)):
                total += rec(1, (m,), m)
        return total

    if nthreads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            return sum(pool.map(chunk_total, chunks))
    return sum(chunk_total(ch) for ch in chunks)


def _two_var_powers(a):
    """Exponent data of the coprime parametrization m_i = w_i^(q_i)."""
    q = sum(a)
    g1, g2 = gcd(a[0], q), gcd(a[1], q)
    return q // g1, q // g2, a[0] // g1, a[1] // g2


def count_points_hypersurface(a, poly: Optional[GeneralizedPolynomial], t,
                              height_mode: str = "polynomial",
                              budget: int = DEFAULT_BUDGET,
                              threads: Optional[int] = None) -> CountResult:
    """Fast path for x_1^a1 ... x_n^an = x_(n+1)^q; agrees with count_points.

    For n = 2 the primitive solutions are exactly (w1^q1, w2^q2) with
    coprime w's, so the scan is a small coprimality grid. Larger n walks
    prefixes and solves the final coordinate through prime valuations.
    """
    a = tuple(int(x) for x in a)
    problem = hypersurface_problem(a)
    t = frac(t)
    if t < 1:
        raise ValueError("t must be at least 1")
    n = len(a)
    w = n + 1
    if height_mode == "sup":
        box = int(t)
        hdata = None
    else:
        if poly is None or poly.nvars != w or not poly.is_homogeneous:
            raise ValueError("polynomial mode needs a homogeneous height in all coordinates")
        box = _poly_box(poly, t)
        hdata = _height_data(poly, t)
    csign = sign_count(problem).value
    started = time.monotonic()
    if n == 2:
        total = _count_two_var(a, box, hdata, threads)
    else:
        total = _count_prefix_solve(a, box, hdata, budget)
    return CountResult(t=t, count=csign * total, box=(box,) * w, mode=height_mode,
                       elapsed=time.monotonic() - started)


def _count_two_var(a, box, hdata, threads) -> int:
    q1, q2, e1, e2 = _two_var_powers(a)
    w1max = _iroot(box, q1)
    w2max = _iroot(box, q2)
    if w1max < 1 or w2max < 1:
        return 0
    terms = hdata[1] if hdata else None
    rhs = hdata[2] if hdata else None
    # int64 is safe when the largest coordinate and monomial values fit
    safe = (w1max ** q1 < 2 ** 31 and w2max ** q2 < 2 ** 31
            and w1max ** e1 * w2max ** e2 < 2 ** 31)
    if not safe:
        return _count_two_var_slow(a, box, hdata, (q1, q2, e1, e2),
                                   (w1max, w2max))
    v2 = np.arange(1, w2max + 1, dtype=np.int64)
    m2 = v2 ** q2
    total = 0
    for lo in range(1, w1max + 1, CHUNK):
        hi = min(lo + CHUNK - 1, w1max)
        v1 = np.arange(lo, hi + 1, dtype=np.int64)
        cop = np.gcd(v1[:, None], v2[None, :]) == 1
        if hdata is None:
            total += int(np.count_nonzero(cop))
            continue
        m1 = v1 ** q1
        y = v1[:, None] ** e1 * v2[None, :] ** e2
        hb = _grid_height_mask(terms, rhs, m1[:, None], m2[None, :], y)
        total += int(np.count_nonzero(cop & hb))
    return total


def _count_two_var_slow(a, box, hdata, powers, wmax):
    q1, q2, e1, e2 = powers
    w1max, w2max = wmax
    terms = hdata[1] if hdata else None
    rhs = hdata[2] if hdata else None
    total = 0
    for w1 in range(1, w1max + 1):
        for w2 in range(1, w2max + 1):
            if gcd(w1, w2) != 1:
                continue
            if hdata is None:
                total += 1
                continue
            point = (w1 ** q1, w2 ** q2, w1 ** e1 * w2 ** e2)
            if Fraction(_eval_terms_int(terms, point)) <= rhs:
                total += 1
    return total


def _grid_height_mask(terms, rhs, m1, m2, y):
    """Exact height filter over broadcast integer grids."""
    peak = int(np.max(m1)), int(np.max(m2)), int(np.max(y))
    bound = sum(abs(c) * peak[0] ** e[0] * peak[1] ** e[1] * peak[2] ** e[2]
                for c, e in terms)
    if bound < 2 ** 62 and rhs.denominator == 1 and rhs.numerator < 2 ** 62:
        total = np.zeros(np.broadcast(m1, m2).shape, dtype=np.int64)
        for c, e in terms:
            term = np.full(total.shape, c, dtype=np.int64)
            if e[0]:
                term = term * m1 ** e[0]
            if e[1]:
                term = term * m2 ** e[1]
            if e[2]:
                term = term * y ** e[2]
            total += term
        return total <= int(rhs)
    shape = np.broadcast(m1, m2).shape
    out = np.zeros(shape, dtype=bool)
    m1b = np.broadcast_to(m1, shape)
    m2b = np.broadcast_to(m2, shape)
    yb = np.broadcast_to(y, shape)
    for idx in np.ndindex(shape):
        val = _eval_terms_int(terms, (int(m1b[idx]), int(m2b[idx]), int(yb[idx])))
        out[idx] = Fraction(val) <= rhs
    return out


def _factorize(m: int) -> dict:
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _count_prefix_solve(a, box, hdata, budget) -> int:
    """General n: enumerate m_1..m_(n-1), solve valuations for m_n."""
    n = len(a)
    q = sum(a)
    g_last = gcd(a[-1], q)
    step = q // g_last
    inv = pow(a[-1] // g_last, -1, step) if step > 1 else 0
    terms = hdata[1] if hdata else None
    rhs = hdata[2] if hdata else None
    if box ** (n - 1) > budget:
        raise BoxTooLarge(f"prefix box {box}^{n - 1} exceeds budget")
    total = 0

    def rec(idx, values, g, rval, rfac):
        nonlocal total
        if idx == n - 1:
            base = 1
            for p, v in rfac.items():
                r = (-v) % q
                if r % g_last:
                    return
                base *= p ** ((r // g_last * inv) % step)
                if base > box:
                    return
            j = 1
            while True:
                mn = base * j ** step
                if mn > box:
                    break
                if gcd(g, mn) == 1:
                    y = _perfect_root(rval * mn ** a[-1], q)
                    assert y is not None
                    point = values + (mn, y)
                    if hdata is None or Fraction(_eval_terms_int(terms, point)) <= rhs:
                        total += 1
                j += 1
            return
        for m in range(1, box + 1):
            if hdata is not None:
                floor_pt = values + (m,) + (1,) * (n + 1 - idx - 1)
                if Fraction(_eval_terms_int(terms, floor_pt)) > rhs:
                    break
            fac = _factorize(m)
            nf = dict(rfac)
            for p, v in fac.items():
                nf[p] = nf.get(p, 0) + a[idx] * v
            rec(idx + 1, values + (m,), gcd(g, m), rval * m ** a[idx], nf)

    rec(0, (), 0, 1, {})
    return total


@dataclass(frozen=True)
class ZetaSample:
    s: float
    partial: float
    tail_estimate: float
    covered_height: float
    covered_count: int

    @property
    def value(self) -> float:
        return self.partial + self.tail_estimate

    def probe(self, iota: float, rho: int) -> float:
        """(s - iota)^rho times the estimated zeta value."""
        return (self.s - iota) ** rho * self.value


def _pipeline_inputs(problem_or_a, poly):
    """Normalize the entry points to (spec, weight polynomial, sign factor).

    Accepts a toric problem, a hypersurface exponent vector, or a raw weight
    spec (sign factor 1, no counting support for the latter).
    """
    from .model import UniformMultiplicativeSpec
    if isinstance(problem_or_a, UniformMultiplicativeSpec):
        spec = problem_or_a
        if poly is not None and poly.nvars != spec.arity:
            raise ValueError("height polynomial arity must match the weight")
        return spec, poly, 1, None
    if isinstance(problem_or_a, ToricProblem):
        problem = problem_or_a
        if poly is not None and poly.nvars != problem.width:
            raise ValueError("height polynomial must use every homogeneous coordinate")
        return toric_weight(problem), poly, sign_count(problem).value, problem
    a = tuple(int(x) for x in problem_or_a)
    problem = hypersurface_problem(a)
    weight_poly = restrict_to_hypersurface(poly, a) if poly is not None else None
    return hypersurface_weight(a), weight_poly, sign_count(problem).value, problem


def manin_constant(problem_or_a, poly: GeneralizedPolynomial,
                   cap: Optional[int] = None, cutoff: int = 100_000,
                   quad_tol: float = 1e-9, euler_tol: float = 1e-10,
                   precision: int = 160, threads: Optional[int] = None,
                   seed: int = 0) -> ManinReport:
    """Assemble the predicted leading constant for the height density.

    sign * d^rho * A0 * Euler / (iota * (rho-1)!), with A0 the mixed volume
    constant of the face type against the (restricted) height polynomial and
    Euler the regularized product at the normalized polar vector.
    """
    spec, weight_poly, csign, _ = _pipeline_inputs(problem_or_a, poly)
    if weight_poly is None or not weight_poly.is_homogeneous:
        raise ValueError("a homogeneous height polynomial is required")
    gens = generators_with_check(spec, cap)
    e = build_polyhedron(gens.points)
    df = diagonal_face(e, spec)
    if not df.compact:
        raise NonCompactFace("the diagonal face is not compact; no predicted constant")
    dim_ok = df.face.dim == rank(list(gens.points)) - 1

    pts = face_points(spec, df.c)
    t_type = MixedTypeT.of(pts, [spec.g(b) for b in pts])
    k_reg = sum(t_type.multiplicities)
    assert k_reg == df.face_point_count
    volume = mixed_volume_constant(t_type, weight_poly, tol=quad_tol, seed=seed)
    euler = euler_constant(spec, df.c, k_reg, cutoff=cutoff, tol=euler_tol,
                           precision=precision, generators=gens, threads=threads)
    rho = df.rho
    iota = df.iota
    d = weight_poly.degree
    euler_f = float(euler.value)
    lead = csign * float(d) ** rho * volume.value * euler_f \
        / (float(iota) * math.factorial(rho - 1))
    rel = 0.0
    if volume.value:
        rel += abs(volume.abs_error / volume.value)
    if euler_f:
        rel += abs(euler.error_bound / euler_f)
    return ManinReport(iota=iota, rho=rho, c=df.c, sign_factor=csign, degree=d,
                       volume=volume, euler=euler, leading_constant=lead,
                       zeta_constant=lead * float(iota) * math.factorial(rho - 1),
                       rel_error=rel, compact=df.compact, dimension_ok=dim_ok,
                       stabilized=gens.stabilized, face_points=tuple(pts))


def predicted_density(report: ManinReport, t: float) -> float:
    """C * t^iota * (log t)^(rho - 1)."""
    return report.leading_constant * t ** float(report.iota) \
        * math.log(t) ** (report.rho - 1)


def sup_norm_prediction(problem_or_a):
    """(C, iota, rho) for the max-coordinate height, where a closed form exists.

    Covers the full torus of projective space (Schanuel-style box count) and
    two-variable hypersurfaces via the coprime power parametrization. The
    constant includes the sign factor, i.e. it predicts the full point count.
    """
    import mpmath as mp
    if isinstance(problem_or_a, ToricProblem):
        if problem_or_a.l != 0:
            raise ValueError("sup-norm prediction implemented for the full torus only")
        n = problem_or_a.n
        return 2 ** n / float(mp.zeta(n + 1)), Fraction(n + 1), 1
    a = tuple(int(x) for x in problem_or_a)
    if len(a) != 2:
        raise ValueError("sup-norm prediction implemented for two-variable hypersurfaces")
    q1, q2, _, _ = _two_var_powers(a)
    csign = sign_count(hypersurface_problem(a)).value
    iota = Fraction(1, q1) + Fraction(1, q2)
    return csign / float(mp.zeta(2)), iota, 1


def zeta_partial(problem_or_a, poly: GeneralizedPolynomial, s_values,
                 iota: Fraction, rho: int = 1, term_budget: int = 100_000_000,
                 height_mode: str = "polynomial",
                 threads: Optional[int] = None):
    """Partial sums of the height zeta function at real s > iota.

    One enumeration pass covers every requested s. Points are truncated at
    the largest height whose ball is provably inside the scanned box; the
    tail is extrapolated from the measured count at the boundary (reported
    separately, an estimate rather than a certified bound).
    """
    single = isinstance(s_values, (int, float))
    s_list = [float(s_values)] if single else [float(s) for s in s_values]
    iota_f = float(iota)
    for s in s_list:
        if s <= iota_f:
            raise ValueError(f"s = {s} is not beyond the abscissa {iota_f}")
    spec, weight_poly, csign, problem = _pipeline_inputs(problem_or_a, poly)

    nthreads = _threads(threads)
    if spec.kind == "hypersurface" and spec.arity == 2:
        sums, h_cov, n_cov = _zeta_two_var(problem.rows[0][:2], poly, s_list,
                                           term_budget, height_mode, nthreads)
    elif problem is not None and problem.l == 0 and problem.width == 2:
        sums, h_cov, n_cov = _zeta_full_torus_2d(poly, s_list, term_budget,
                                                 height_mode, nthreads)
    elif problem is not None:
        sums, h_cov, n_cov = _zeta_generic(problem, poly, s_list, term_budget,
                                           height_mode)
    else:
        raise ValueError("zeta sums need a toric problem or exponent vector")
    out = []
    for s, partial in zip(s_list, sums):
        n_b = csign * n_cov
        from scipy import integrate as _si
        if rho == 1:
            tail = n_b * h_cov ** (-s) * iota_f / (s - iota_f)
        else:
            delta = n_b / (h_cov ** iota_f * math.log(h_cov) ** (rho - 1))
            val, _ = _si.quad(lambda h: h ** (iota_f - s - 1)
                              * math.log(h) ** (rho - 1), h_cov, np.inf)
            tail = delta * s * val - n_b * h_cov ** (-s)
        out.append(ZetaSample(s=s, partial=csign * partial, tail_estimate=tail,
                              covered_height=h_cov, covered_count=n_b))
    return out[0] if single else out


def _zeta_two_var(a, poly, s_list, term_budget, height_mode, nthreads=1):
    q1, q2, e1, e2 = _two_var_powers(tuple(int(x) for x in a))
    wmax = int(math.sqrt(term_budget))
    w1max = w2max = wmax
    if height_mode == "polynomial":
        kappa = ellipticity_witness(poly)
        d = float(poly.degree)
        h_cov = kappa ** (1 / d) * min((w1max + 1) ** q1, (w2max + 1) ** q2) * (1 - 1e-9)
    else:
        h_cov = float(min((w1max + 1) ** q1, (w2max + 1) ** q2)) * (1 - 1e-9)
    v2 = np.arange(1, w2max + 1, dtype=np.float64)
    m2 = v2 ** q2
    iv2 = np.arange(1, w2max + 1, dtype=np.int64)

    def chunk(lo):
        hi = min(lo + 255, w1max)
        iv1 = np.arange(lo, hi + 1, dtype=np.int64)
        cop = np.gcd(iv1[:, None], iv2[None, :]) == 1
        v1 = iv1.astype(np.float64)
        m1 = v1 ** q1
        y = np.outer(v1 ** e1, v2 ** e2)
        if height_mode == "polynomial":
            hval = _eval_float_grid(poly, m1[:, None], m2[None, :], y) \
                ** (1.0 / float(poly.degree))
        else:
            hval = np.maximum(m1[:, None], m2[None, :])
        mask = cop & (hval <= h_cov)
        hsel = hval[mask]
        return ([float(np.sum(hsel ** (-s))) for s in s_list],
                int(np.count_nonzero(mask)))

    return _reduce_zeta_chunks(chunk, range(1, w1max + 1, 256), s_list,
                               h_cov, nthreads)


def _reduce_zeta_chunks(chunk, starts, s_list, h_cov, nthreads):
    """Fixed chunk partition with in-order reduction: thread-count invariant."""
    starts = list(starts)
    if nthreads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(chunk, starts))
    else:
        results = [chunk(lo) for lo in starts]
    sums = [0.0 for _ in s_list]
    n_cov = 0
    for part, cnt in results:
        for i, v in enumerate(part):
            sums[i] += v
        n_cov += cnt
    return sums, h_cov, n_cov


def _eval_float_grid(poly, m1, m2, y):
    total = np.zeros(np.broadcast(m1, m2, y).shape, dtype=np.float64)
    for c, e in poly.monomials:
        term = np.full(total.shape, float(c))
        if e[0]:
            term = term * m1 ** float(e[0])
        if e[1]:
            term = term * m2 ** float(e[1])
        if e[2]:
            term = term * y ** float(e[2])
        total += term
    return total


def _zeta_full_torus_2d(poly, s_list, term_budget, height_mode, nthreads=1):
    box = int(math.sqrt(term_budget))
    if height_mode == "polynomial":
        kappa = ellipticity_witness(poly)
        d = float(poly.degree)
        h_cov = kappa ** (1 / d) * (box + 1) * (1 - 1e-9)
    else:
        h_cov = float(box)
    iv2 = np.arange(1, box + 1, dtype=np.int64)
    v2 = iv2.astype(np.float64)

    def chunk(lo):
        hi = min(lo + 255, box)
        iv1 = np.arange(lo, hi + 1, dtype=np.int64)
        cop = np.gcd(iv1[:, None], iv2[None, :]) == 1
        v1 = iv1.astype(np.float64)
        if height_mode == "polynomial":
            total = np.zeros((len(iv1), box), dtype=np.float64)
            for c, e in poly.monomials:
                term = np.full(total.shape, float(c))
                if e[0]:
                    term = term * (v1[:, None] ** float(e[0]))
                if e[1]:
                    term = term * (v2[None, :] ** float(e[1]))
                total += term
            hval = total ** (1.0 / float(poly.degree))
        else:
            hval = np.maximum(v1[:, None], v2[None, :])
        mask = cop & (hval <= h_cov)
        hsel = hval[mask]
        return ([float(np.sum(hsel ** (-s))) for s in s_list],
                int(np.count_nonzero(mask)))

    return _reduce_zeta_chunks(chunk, range(1, box + 1, 256), s_list,
                               h_cov, nthreads)


def _zeta_generic(problem, poly, s_list, term_budget, height_mode):
    """Small boxes only: reuse the exact counter's enumeration point by point."""
    w = problem.width
    box = max(2, int(term_budget ** (1.0 / w)))
    pts = list(_primitive_points(problem, box))
    if height_mode == "polynomial":
        kappa = ellipticity_witness(poly)
        d = float(poly.degree)
        h_cov = kappa ** (1 / d) * (box + 1) * (1 - 1e-9)
        heights = [poly.eval_float(p) ** (1 / d) for p in pts]
    else:
        h_cov = float(box)
        heights = [float(max(p)) for p in pts]
    kept = [h for h in heights if h <= h_cov]
    sums = [sum(h ** (-s) for h in sorted(kept)) for s in s_list]
    return sums, h_cov, len(kept)


def _primitive_points(problem, box):
    """All positive primitive relation solutions inside the coordinate box."""
    w = problem.width
    rows = problem.rows

    def rec(values, g):
        depth = len(values)
        if depth == w:
            for r in rows:
                num = den = 1
                for j in range(w):
                    a = r[j]
                    if a > 0:
                        num *= values[j] ** a
                    elif a < 0:
                        den *= values[j] ** (-a)
                if num != den:
                    return
            if g == 1:
                yield values
            return
        for m in range(1, box + 1):
            yield from rec(values + (m,), gcd(g, m))

    yield from rec((), 0)


@dataclass(frozen=True)
class AsymptoticRow:
    t: float
    count: int
    predicted: float
    ratio: float


@dataclass(frozen=True)
class AsymptoticReport:
    rows: tuple
    monotone_approach: bool
    final_deviation: float


def asymptotic_report(counts: Sequence[CountResult], leading_constant: float,
                      iota, rho: int) -> AsymptoticReport:
    """Measured over predicted density, with simple trend diagnostics."""
    if len(counts) < 3:
        raise ValueError("need at least three count samples")
    ordered = sorted(counts, key=lambda c: c.t)
    rows = []
    for c in ordered:
        t = float(c.t)
        pred = leading_constant * t ** float(iota) * math.log(t) ** (rho - 1)
        rows.append(AsymptoticRow(t=t, count=c.count, predicted=pred,
                                  ratio=c.count / pred if pred else math.inf))
    devs = [abs(r.ratio - 1) for r in rows]
    monotone = devs[-1] <= devs[0] + 1e-12
    return AsymptoticReport(rows=tuple(rows), monotone_approach=monotone,
                            final_deviation=devs[-1])
