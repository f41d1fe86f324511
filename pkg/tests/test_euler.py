import math
from fractions import Fraction

import mpmath as mp
import pytest

from toric_density.euler import (NonPositivePolar, epsilon_gap, euler_constant,
                                 local_factor, primes_up_to)
from toric_density.generators import generators_with_check
from toric_density.model import (UniformMultiplicativeSpec, free_weight,
                                 hypersurface_weight, toric_weight,
                                 validate_toric_matrix)
from toric_density.polyhedron import build_polyhedron, diagonal_face, polar_vectors

HALF = Fraction(1, 2)


class TestPrimes:
    def test_small(self):
        assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_count_to_1e5(self):
        assert len(primes_up_to(100_000)) == 9592


class TestLocalFactor:
    def test_free_weight_geometric(self):
        spec = free_weight(2)
        for p in (2, 3, 7):
            lf = local_factor(spec, (1, 1), p, tol=1e-25)
            with mp.workprec(200):
                expect = (1 - 1 / mp.mpf(p)) ** -2
                assert abs(lf.value - expect) < 1e-20

    def test_hypersurface_11_at_2(self):
        lf = local_factor(hypersurface_weight((1, 1)), (HALF, HALF), 2, tol=1e-25)
        assert abs(lf.value - 3) < 1e-20

    def test_unrestricted_cyclic_sum(self):
        # weight: n divides |v|, no vanishing-coordinate condition; the local
        # factor is sum binom((k+1)n - 1, n - 1) p^(-k) at c = 1/n * ones
        n = 3
        spec = UniformMultiplicativeSpec(
            arity=n, g=lambda nu: 1 if sum(nu) % n == 0 else 0,
            kind="custom", default_cap=4 * n)
        c = tuple(Fraction(1, n) for _ in range(n))
        for p in (2, 5):
            lf = local_factor(spec, c, p, tol=1e-22)
            oracle = sum(math.comb((k + 1) * n - 1, n - 1) * mp.mpf(p) ** -k
                         for k in range(200))
            assert abs(lf.value - oracle) < 1e-15

    def test_nonpositive_polar_rejected(self):
        with pytest.raises(NonPositivePolar):
            local_factor(free_weight(2), (1, 0), 2)

    def test_tail_bound_honest(self):
        spec = hypersurface_weight((1, 2))
        lf_loose = local_factor(spec, (Fraction(1, 3), Fraction(1, 3)), 2, tol=1e-6)
        lf_tight = local_factor(spec, (Fraction(1, 3), Fraction(1, 3)), 2, tol=1e-20)
        assert abs(lf_loose.value - lf_tight.value) <= lf_loose.tail_bound


class TestEpsilonGap:
    def test_free_weight(self):
        gens = generators_with_check(free_weight(2))
        assert epsilon_gap(gens, (1, 1)) == 1

    def test_hypersurface_11(self):
        gens = generators_with_check(hypersurface_weight((1, 1)))
        assert epsilon_gap(gens, (HALF, HALF)) == 1

    def test_near_face_point(self):
        spec = hypersurface_weight((1, 1, 1))
        gens = generators_with_check(spec)
        e = build_polyhedron(gens.points)
        df = diagonal_face(e, spec)
        gap = epsilon_gap(gens, df.c)
        # off-face points with |v| = 6 sit at <c, v> = 2; gap capped at 1
        assert gap == 1

    def test_fractional_gap(self):
        spec = hypersurface_weight((3, 5))
        gens = generators_with_check(spec)
        e = build_polyhedron(gens.points)
        df = diagonal_face(e, spec)
        gap = epsilon_gap(gens, df.c)
        assert 0 < gap <= 1
        # the gap must bound every support point's excess below 2
        import itertools
        for nu in itertools.product(range(17), repeat=2):
            if any(nu) and spec.g(nu):
                ex = sum(ci * x for ci, x in zip(df.c, nu)) - 1
                if 0 < ex < 1:
                    assert gap <= ex


class TestEulerConstant:
    def test_full_torus_closed_forms(self):
        for n in (1, 2, 3):
            prob = validate_toric_matrix([], width=n + 1)
            spec = toric_weight(prob)
            c = tuple(Fraction(1) for _ in range(n + 1))
            rep = euler_constant(spec, c, n + 1, cutoff=100_000)
            target = 1 / mp.zeta(n + 1)
            assert abs(rep.value - target) < 1e-8
            assert abs(rep.value - target) < rep.error_bound + 1e-12

    def test_hypersurface_11(self):
        spec = hypersurface_weight((1, 1))
        rep = euler_constant(spec, (HALF, HALF), 2, cutoff=100_000)
        assert abs(rep.value - 6 / mp.pi ** 2) < 1e-8

    def test_free_weight_unit_factors(self):
        spec = free_weight(2)
        rep = euler_constant(spec, (1, 1), 2, cutoff=10_000, keep_factors=True)
        assert abs(rep.value - 1) < 1e-9
        for f in rep.factors[:50]:
            assert abs(f.value - 1) < 1e-12

    def test_positivity(self):
        for spec, c, k in ((hypersurface_weight((1, 2)), (Fraction(1, 3),) * 2, 2),
                           (hypersurface_weight((2, 2)), (Fraction(1, 2),) * 2, 2)):
            gens = generators_with_check(spec)
            e = build_polyhedron(gens.points)
            df = diagonal_face(e, spec)
            rep = euler_constant(spec, df.c, df.face_point_count, cutoff=5000)
            assert float(rep.value) > 0

    def test_monotone_error(self):
        spec = hypersurface_weight((1, 1))
        errs = [euler_constant(spec, (HALF, HALF), 2, cutoff=q).error_bound
                for q in (5_000, 10_000, 20_000)]
        assert errs[0] >= errs[1] >= errs[2]

    def test_choice_independence(self):
        spec = toric_weight(validate_toric_matrix([(1, 1, -2)]))
        gens = generators_with_check(spec)
        e = build_polyhedron(gens.points)
        df = diagonal_face(e, spec)
        choices = polar_vectors(e, df.face)
        assert len(choices) >= 2
        values = [euler_constant(spec, c, df.face_point_count, cutoff=20_000)
                  for c in choices]
        for rep in values[1:]:
            assert abs(rep.value - values[0].value) <= \
                rep.error_bound + values[0].error_bound + 1e-12

    def test_inconsistent_k_rejected(self):
        spec = free_weight(2)
        with pytest.raises(ValueError):
            euler_constant(spec, (1, 1), 5, cutoff=1000)
