"""Euler products of uniform multiplicative weights at the normalized polar vector.

Per prime the local series sum_v g(v) p^(-<v,c>) is truncated with a
certified geometric-polynomial tail bound; the regularized factors
(1 - 1/p)^K * L_p tend to 1 like p^(-(1+eps)), and the product over primes
beyond the cutoff is corrected through the prime zeta function applied to
the exponent expansion of log[(1 - x)^K W(x)].
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .generators import LatticePointSet
from .model import UniformMultiplicativeSpec
from .vectors import fracvec


class NonPositivePolar(Exception):
    pass


DEFAULT_CUTOFF = 100_000
DEFAULT_PRECISION = 160
EXPANSION_DEPTH = Fraction(6)   # exponents kept in the log-factor expansion


def primes_up_to(n: int):
    """Plain sieve, ascending."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [i for i, v in enumerate(sieve) if v]


@dataclass(frozen=True)
class LocalFactor:
    p: int
    value: object          # mpf
    tail_bound: float


@dataclass(frozen=True)
class EulerReport:
    value: object          # mpf
    cutoff: int
    K: int
    epsilon_gap: Fraction
    error_bound: float
    precision: int
    factors: Optional[tuple] = None

    def __float__(self):
        return float(self.value)


class WeightProfile:
    """Support points grouped by polar exponent, with the |v| level retained.

    The level drives the certified truncation: per prime only levels up to
    N(p) are summed and the remainder is bounded by
    C sum_(k>N) (1+k)^(M+n-1) p^(-k min c).
    """

    def __init__(self, spec: UniformMultiplicativeSpec, c, max_level: int):
        c = fracvec(c)
        if any(x <= 0 for x in c):
            raise NonPositivePolar("polar vector must be strictly positive")
        self.spec = spec
        self.c = c
        self.min_c = min(c)
        self.max_level = max_level
        self.degree_bound = spec.growth_m + spec.arity - 1
        self.growth_c = spec.growth_c
        entries: dict = {}

        n = spec.arity

        def rec(prefix, level, expo):
            i = len(prefix)
            if i == n:
                w = spec.g(prefix)
                if w:
                    key = (level, expo)
                    entries[key] = entries.get(key, 0) + w
                return
            for k in range(max_level - level + 1):
                rec(prefix + (k,), level + k, expo + k * c[i])

        rec((), 0, Fraction(0))
        self.entries = sorted(entries.items())  # ((level, exponent), weight)

    def tail_bound(self, p: int, level: int) -> float:
        """Upper bound for the weight series beyond |v| = level at prime p."""
        x = float(p) ** (-float(self.min_c))
        d = self.degree_bound
        r = x * math.exp(d / (level + 2))
        if r >= 1:
            return math.inf
        return self.growth_c * (level + 2) ** d * x ** (level + 1) / (1 - r)

    def level_for(self, p: int, tol: float) -> int:
        for level in range(1, self.max_level + 1):
            if self.tail_bound(p, level) < tol:
                return level
        return self.max_level

    def local_sum(self, p: int, level: int):
        """sum g(v) p^(-<v,c>) over |v| <= level, exact exponents, mpf value."""
        total = mp.mpf(0)
        pm = mp.mpf(p)
        for (lvl, expo), w in self.entries:
            if lvl > level:
                continue
            total += w * mp.power(pm, mp.mpf(-expo.numerator) / expo.denominator) \
                if expo != 0 else mp.mpf(w)
        return total

    def exponent_weights(self, depth: Fraction) -> dict:
        """Total weight per polar exponent, up to the expansion depth."""
        out: dict = {}
        for (lvl, expo), w in self.entries:
            if 0 < expo <= depth:
                out[expo] = out.get(expo, 0) + w
        return out


def required_level(spec: UniformMultiplicativeSpec, c, tol: float) -> int:
    """Smallest truncation level certified below tol at p = 2."""
    c = fracvec(c)
    if any(x <= 0 for x in c):
        raise NonPositivePolar("polar vector must be strictly positive")
    min_c = float(min(c))
    d = spec.growth_m + spec.arity - 1
    x = 2.0 ** (-min_c)
    level = 1
    while True:
        r = x * math.exp(d / (level + 2))
        if r < 1 and spec.growth_c * (level + 2) ** d * x ** (level + 1) / (1 - r) < tol:
            return level
        level += 1
        if level > 100_000:
            raise ValueError("cannot certify truncation; polar vector too small")


def local_factor(spec: UniformMultiplicativeSpec, c, p: int, tol: float = 1e-12,
                 precision: int = DEFAULT_PRECISION,
                 profile: Optional[WeightProfile] = None) -> LocalFactor:
    """The local series at prime p with a certified truncation bound."""
    with mp.workprec(precision):
        if profile is None:
            profile = WeightProfile(spec, c, required_level(spec, c, tol))
        level = profile.level_for(p, tol)
        value = profile.local_sum(p, level)
        return LocalFactor(p=p, value=value, tail_bound=profile.tail_bound(p, level))


def epsilon_gap(generators: LatticePointSet, c) -> Fraction:
    """min(1, smallest excess <c,v> - 1 over off-face support points).

    Points with <c,v> >= 2 cannot realize a smaller excess than 1, so the
    scan is confined to the box <c,v> < 2; this catches non-minimal support
    points sitting closer to the face than any generator.
    """
    spec = generators.spec
    c = fracvec(c)
    if any(x <= 0 for x in c):
        raise NonPositivePolar("polar vector must be strictly positive")
    n = spec.arity
    best = Fraction(1)

    def rec(prefix, expo):
        nonlocal best
        i = len(prefix)
        if i == n:
            if spec.g(prefix) and expo > 1:
                ex = expo - 1
                if ex < best:
                    best = ex
            return
        k = 0
        while expo + k * c[i] < 2:
            rec(prefix + (k,), expo + k * c[i])
            k += 1

    rec((), Fraction(0))
    return best


def _log_factor_expansion(weights: dict, k_reg: int, depth: Fraction) -> dict:
    """Exponent expansion of log[(1 - x)^K (1 + sum w_e x^e)], exponents <= depth.

    Exact rational coefficients; the x^1 terms must cancel (the face weight
    equals K), otherwise the product has no finite regularized limit.
    """
    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                if e <= depth:
                    out[e] = out.get(e, Fraction(0)) + ca * cb
        return out

    u = {e: Fraction(w) for e, w in weights.items()}
    series: dict = {}
    power = dict(u)
    sign = 1
    k = 1
    while power and k <= depth:
        for e, coef in power.items():
            series[e] = series.get(e, Fraction(0)) + sign * coef / k
        power = mul(power, u)
        sign = -sign
        k += 1
    j = 1
    while j <= depth:
        series[Fraction(j)] = series.get(Fraction(j), Fraction(0)) - Fraction(k_reg, j)
        j += 1
    series = {e: c for e, c in series.items() if c != 0}
    bad = [e for e in series if e <= 1]
    if bad:
        raise ValueError(
            f"face weight inconsistent with K={k_reg}: surviving exponents {bad}")
    return series


def euler_constant(spec: UniformMultiplicativeSpec, c, k_reg: int,
                   cutoff: int = DEFAULT_CUTOFF, tol: float = 1e-10,
                   precision: int = DEFAULT_PRECISION,
                   generators: Optional[LatticePointSet] = None,
                   threads: Optional[int] = None,
                   keep_factors: bool = False) -> EulerReport:
    """Regularized product over primes with a prime-zeta tail correction.

    The reported error combines the per-prime truncation budget, the
    correction remainder beyond the expansion depth, and a rounding envelope.
    """
    c = fracvec(c)
    if any(x <= 0 for x in c):
        raise NonPositivePolar("polar vector must be strictly positive")
    if threads is None:
        threads = int(os.environ.get("MANIN_TORIC_THREADS", "1"))
    plist = primes_up_to(cutoff)
    nprimes = len(plist)
    tol_pp = tol / (4 * max(nprimes, 1))

    with mp.workprec(precision):
        profile = WeightProfile(spec, c, required_level(spec, c, tol_pp))
        gap = epsilon_gap(generators, c) if generators is not None else None

        def block_log(block):
            s = mp.mpf(0)
            tails = 0.0
            for p in block:
                level = profile.level_for(p, tol_pp)
                local = profile.local_sum(p, level)
                reg = (1 - mp.mpf(1) / p) ** k_reg * local
                s += mp.log(reg)
                tails += profile.tail_bound(p, level) / float(local)
            return s, tails

        blocks = [plist[i:i + 1024] for i in range(0, len(plist), 1024)]
        if threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(block_log, blocks))
        else:
            results = [block_log(b) for b in blocks]
        log_total = mp.mpf(0)
        tail_sum = 0.0
        for s, tails in results:
            log_total += s
            tail_sum += tails

        weights = profile.exponent_weights(EXPANSION_DEPTH)
        series = _log_factor_expansion(weights, k_reg, EXPANSION_DEPTH)
        correction = mp.mpf(0)
        for e, coef in sorted(series.items()):
            x = mp.mpf(e.numerator) / e.denominator
            tail_pz = mp.primezeta(x)
            for p in plist:
                tail_pz -= mp.power(p, -x)
            correction += (mp.mpf(coef.numerator) / coef.denominator) * tail_pz
        log_total += correction

        value = mp.exp(log_total)
        # everything past the expansion depth is bounded by a crude integral
        depth_f = float(EXPANSION_DEPTH)
        mass = 1.0 + float(sum(abs(w) for w in weights.values())) + k_reg
        remainder = (mass ** 2) * cutoff ** (1.0 - depth_f) / (depth_f - 1.0)
        rounding = nprimes * (k_reg + 4) * math.ldexp(1.0, -precision + 4)
        err = float(value) * (tail_sum + remainder + rounding) + remainder

        factors = None
        if keep_factors:
            factors = []
            for p in plist:
                level = profile.level_for(p, tol_pp)
                local = profile.local_sum(p, level)
                factors.append(LocalFactor(
                    p=p, value=(1 - mp.mpf(1) / p) ** k_reg * local,
                    tail_bound=profile.tail_bound(p, level)))
            factors = tuple(factors)

        return EulerReport(value=value, cutoff=cutoff, K=k_reg,
                           epsilon_gap=gap if gap is not None else Fraction(1),
                           error_bound=err, precision=precision, factors=factors)
