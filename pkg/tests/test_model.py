import itertools

import pytest

from toric_density.model import (DependentRows, GeneralizedPolynomial,
                                 NonZeroRowSum, NotElliptic,
                                 ellipticity_witness, free_weight,
                                 hypersurface_problem, hypersurface_weight,
                                 restrict_to_hypersurface, sign_count,
                                 toric_weight, validate_toric_matrix)


def brute_sign_count(rows, width):
    """Independent oracle: scan all sign vectors; (-1)^(-a) = (-1)^a."""
    total = 0
    for eps in itertools.product((1, -1), repeat=width):
        if all(_sign_prod(eps, row) == 1 for row in rows):
            total += 1
    return total // 2


def _sign_prod(eps, row):
    s = 1
    for e, a in zip(eps, row):
        if e == -1 and a % 2:
            s = -s
    return s


class TestValidateMatrix:
    def test_empty_matrix(self):
        prob = validate_toric_matrix([], width=3)
        assert prob.n == 2 and prob.l == 0

    def test_hypersurface_row(self):
        prob = validate_toric_matrix([(1, 1, -2)])
        assert prob.n == 2 and prob.l == 1 and prob.variety_dim == 1

    def test_dependent_rows(self):
        with pytest.raises(DependentRows):
            validate_toric_matrix([(1, 0, -1), (2, 0, -2)])

    def test_nonzero_row_sum(self):
        with pytest.raises(NonZeroRowSum):
            validate_toric_matrix([(1, 1, -1)])


class TestSignCount:
    def test_empty(self):
        prob = validate_toric_matrix([], width=3)
        assert sign_count(prob).value == 4

    @pytest.mark.parametrize("row,expected", [((1, 1, -2), 2), ((1, 2, -3), 2)])
    def test_single_rows(self, row, expected):
        prob = validate_toric_matrix([row])
        assert sign_count(prob).value == expected
        assert sign_count(prob).value == brute_sign_count([row], 3)

    def test_even_columns_full(self):
        # every entry even: all sign vectors pass
        prob = validate_toric_matrix([(2, 2, -4)])
        assert sign_count(prob).value == 4

    def test_random_against_oracle(self):
        import random
        rng = random.Random(7)
        for _ in range(25):
            w = rng.randint(2, 4)
            row = [rng.randint(-3, 3) for _ in range(w - 1)]
            row.append(-sum(row))
            try:
                prob = validate_toric_matrix([row])
            except Exception:
                continue
            assert sign_count(prob).value == brute_sign_count([tuple(row)], w)

    def test_divides_power_of_two(self):
        prob = validate_toric_matrix([(1, 1, -2), (1, -1, 0)])
        v = sign_count(prob).value
        assert 2 ** prob.n % v == 0 and v & (v - 1) == 0


class TestRestrict:
    def test_cubes(self):
        p = GeneralizedPolynomial.from_terms([(1, (4, 0, 0)), (1, (0, 4, 0)),
                                              (1, (0, 0, 4))])
        r = restrict_to_hypersurface(p, (1, 1))
        assert set(r.support) == {(4, 0), (0, 4), (2, 2)}
        assert r.degree == 4 and r.is_homogeneous

    def test_degenerate_rejected(self):
        p = GeneralizedPolynomial.from_terms([(1, (1, 0)), (1, (0, 1))])
        with pytest.raises(ValueError):
            restrict_to_hypersurface(p, (2,))

    def test_quadric_a22(self):
        p = GeneralizedPolynomial.from_terms([(1, (2, 0, 0)), (1, (0, 2, 0)),
                                              (1, (0, 0, 2))])
        r = restrict_to_hypersurface(p, (2, 2))
        assert set(r.support) == {(2, 0), (0, 2), (1, 1)}

    def test_degree_preserved_on_random_supports(self):
        import random
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(2, 3)
            d = rng.randint(1, 5)
            terms = [(1, tuple(d if j == i else 0 for j in range(n + 1)))
                     for i in range(n + 1)]
            p = GeneralizedPolynomial.from_terms(terms)
            a = tuple(rng.randint(1, 3) for _ in range(n))
            r = restrict_to_hypersurface(p, a)
            assert all(sum(e) == d for e in r.support)


class TestEllipticityWitness:
    def test_sum_of_squares(self):
        p = GeneralizedPolynomial.from_terms([(1, (2, 0)), (1, (0, 2))])
        kappa = ellipticity_witness(p)
        # true minimum is 1/2 at the simplex midpoint; kappa certifies below it
        assert 0.44 <= kappa <= 0.5

    def test_product_not_elliptic(self):
        p = GeneralizedPolynomial.from_terms([(1, (1, 1))])
        with pytest.raises(NotElliptic):
            ellipticity_witness(p)

    def test_linear(self):
        p = GeneralizedPolynomial.from_terms([(1, (1, 0)), (1, (0, 1))])
        kappa = ellipticity_witness(p)
        assert 0.95 <= kappa <= 1.0

    def test_lower_bound_on_dense_samples(self):
        import random
        rng = random.Random(11)
        p = GeneralizedPolynomial.from_terms(
            [(2, (3, 0, 0)), (1, (0, 3, 0)), (3, (0, 0, 3)), (1, (1, 1, 1))])
        kappa = ellipticity_witness(p)
        for _ in range(500):
            cuts = sorted(rng.random() for _ in range(2))
            x = (cuts[0], cuts[1] - cuts[0], 1 - cuts[1])
            assert p.eval_float(x) >= kappa - 1e-12


class TestWeights:
    def test_toric_weight_values(self):
        spec = toric_weight(validate_toric_matrix([(1, 1, -2)]))
        assert spec.weight((2, 0, 1)) == 1
        assert spec.weight((1, 1, 1)) == 0
        assert spec.weight((0, 0, 0)) == 1

    def test_empty_matrix_weight(self):
        spec = toric_weight(validate_toric_matrix([], width=2))
        assert spec.weight((0, 3)) == 1
        assert spec.weight((1, 3)) == 0

    def test_hypersurface_weight_values(self):
        spec = hypersurface_weight((1, 1))
        assert spec.weight((2, 0)) == 1
        assert spec.weight((1, 0)) == 0
        spec3 = hypersurface_weight((1, 1, 1))
        assert spec3.weight((3, 0, 0)) == 1
        assert spec3.weight((2, 1, 0)) == 1
        assert spec3.weight((1, 1, 1)) == 0

    def test_characteristic(self):
        for spec in (hypersurface_weight((2, 3)),
                     toric_weight(validate_toric_matrix([(1, 2, -3)])),
                     free_weight(3)):
            zero = tuple(0 for _ in range(spec.arity))
            assert spec.weight(zero) == 1
            import itertools as it
            for nu in it.product(range(4), repeat=spec.arity):
                assert spec.weight(nu) in (0, 1)

    def test_hypersurface_problem_matches_weight(self):
        prob = hypersurface_problem((1, 1))
        assert prob.rows == ((1, 1, -2),)
        assert sign_count(prob).value == 2
