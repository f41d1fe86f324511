"""Strict recursive-descent parser for positive polynomial expressions.

Grammar (whitespace free between tokens is allowed):

    poly     := term ('+' term)*
    term     := coefficient | coefficient '*' monomial | monomial
    monomial := factor+            (optionally '*'-separated)
    factor   := 'X' index ('^' rational)?
    rational := integer ('/' integer)?

Coefficients are positive integers or rationals. Errors carry the offset of
the offending character.
"""

from __future__ import annotations

from fractions import Fraction

from .model import GeneralizedPolynomial


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolynomialSyntaxError("expected an integer", start)
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.take("/"):
            den = self.integer()
            if den == 0:
                raise PolynomialSyntaxError("zero denominator", self.pos - 1)
            return Fraction(num, den)
        return Fraction(num)


def parse_polynomial(text: str, nvars: int | None = None) -> GeneralizedPolynomial:
    """Parse expressions like '2*X1^2 + X2^3/2 + 3/2*X1X2'."""
    sc = _Scanner(text)
    terms = []
    max_var = 0
    while True:
        coeff = Fraction(1)
        exps: dict = {}
        if sc.peek().isdigit():
            coeff = sc.rational()
            sc.take("*")
        saw_var = False
        while sc.peek() == "X":
            sc.pos += 1
            idx = sc.integer()
            if idx < 1:
                raise PolynomialSyntaxError("variable indices start at 1", sc.pos - 1)
            power = Fraction(1)
            if sc.take("^"):
                power = sc.rational()
            exps[idx - 1] = exps.get(idx - 1, Fraction(0)) + power
            max_var = max(max_var, idx)
            saw_var = True
            sc.take("*")
        if not saw_var and coeff == 1 and not exps:
            raise PolynomialSyntaxError("expected a coefficient or a variable", sc.pos)
        terms.append((coeff, dict(exps)))
        if not sc.take("+"):
            break
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise PolynomialSyntaxError(f"unexpected character {sc.text[sc.pos]!r}", sc.pos)
    width = nvars if nvars is not None else max_var
    if width < 1:
        raise PolynomialSyntaxError("no variables found", 0)
    built = []
    for coeff, exps in terms:
        if any(i >= width for i in exps):
            raise PolynomialSyntaxError("variable index beyond declared width", 0)
        vec = tuple(exps.get(i, Fraction(0)) for i in range(width))
        built.append((coeff, vec))
    return GeneralizedPolynomial.from_terms(built, width)


def format_polynomial(p: GeneralizedPolynomial) -> str:
    parts = []
    for c, e in p.monomials:
        bits = []
        if c != 1 or all(x == 0 for x in e):
            bits.append(str(c))
        for i, x in enumerate(e):
            if x == 0:
                continue
            v = f"X{i + 1}"
            if x != 1:
                v += f"^{x}"
            bits.append(v)
        parts.append("*".join(bits))
    return " + ".join(parts)
