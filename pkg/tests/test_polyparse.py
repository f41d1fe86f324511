from fractions import Fraction

import pytest

from toric_density.polyparse import (PolynomialSyntaxError, format_polynomial,
                                     parse_polynomial)


class TestParse:
    def test_sum_of_squares(self):
        p = parse_polynomial("X1^2+X2^2+X3^2")
        assert p.nvars == 3 and p.degree == 2
        assert set(p.support) == {(2, 0, 0), (0, 2, 0), (0, 0, 2)}

    def test_coefficients_and_rationals(self):
        p = parse_polynomial("3*X1^2 + 1/2*X2^4/3")
        assert p.monomials[0] == (Fraction(1, 2), (Fraction(0), Fraction(4, 3)))
        assert p.monomials[1] == (Fraction(3), (Fraction(2), Fraction(0)))

    def test_juxtaposed_variables(self):
        p = parse_polynomial("X1X2 + X1^2 + X2^2")
        assert (Fraction(1), (Fraction(1), Fraction(1))) in p.monomials

    def test_repeated_variable_in_monomial(self):
        p = parse_polynomial("X1X1")
        assert p.support == ((2,),)

    def test_merging_collisions(self):
        p = parse_polynomial("X1 + X1")
        assert p.monomials == ((Fraction(2), (Fraction(1),)),)

    def test_whitespace(self):
        p = parse_polynomial("  X1 ^ 2  +  2 * X2  ")
        assert p.nvars == 2

    def test_explicit_width(self):
        p = parse_polynomial("X1^3", nvars=3)
        assert p.nvars == 3

    @pytest.mark.parametrize("bad", ["", "X0", "X1^", "X1 +", "X1 - X2",
                                     "Y1", "X1^1/0", "(X1)"])
    def test_rejects(self, bad):
        with pytest.raises((PolynomialSyntaxError, ValueError)):
            parse_polynomial(bad)

    def test_error_position(self):
        with pytest.raises(PolynomialSyntaxError) as exc:
            parse_polynomial("X1^2 ? X2")
        assert "position" in str(exc.value)


class TestRoundTrip:
    def test_format_parse(self):
        texts = ["X1^2 + X2^2", "2*X1^3 + 1/2*X1X2^2 + X3^3",
                 "X1^1/2*X2^1/2 + X1 + X2"]
        for text in texts:
            p = parse_polynomial(text)
            again = parse_polynomial(format_polynomial(p))
            assert again == p
