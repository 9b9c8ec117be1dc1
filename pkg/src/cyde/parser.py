"""Text grammar for theta-form differential operators.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | atom ('^' INT)?
    atom   := INT | 'T' | 'x' | '(' expr ')'

'T' is the Euler operator x d/dx and 'x' the independent variable.  Because
every display is written with the x-powers on the left (sum of x^j * P_j(T)),
expressions are expanded as commutative polynomials in (x, T) and then read as
operators with that normal ordering.  '/' is allowed only between constants
(rational literals such as 9/16); dividing by anything involving x or T is a
syntax error.  Exponents are nonnegative integers.

Errors carry the character position of the offending token.
"""

from __future__ import annotations

from fractions import Fraction

from .series import Polynomial

Q = Fraction


class OperatorSyntaxError(ValueError):
    """Raised on malformed operator text; `pos` is a 0-based character index."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class XTPoly:
    """Commutative polynomial in x and T: map x-power -> Polynomial in T."""

    __slots__ = ("by_x",)

    def __init__(self, by_x: dict[int, Polynomial] | None = None):
        cleaned = {}
        if by_x:
            for j, p in by_x.items():
                if not p.is_zero():
                    cleaned[j] = p
        self.by_x = cleaned

    @classmethod
    def const(cls, c: Fraction) -> XTPoly:
        return cls({0: Polynomial.constant(c)})

    @classmethod
    def var_x(cls) -> XTPoly:
        return cls({1: Polynomial.one()})

    @classmethod
    def var_t(cls) -> XTPoly:
        return cls({0: Polynomial.variable()})

    def __add__(self, other: XTPoly) -> XTPoly:
        out = dict(self.by_x)
        for j, p in other.by_x.items():
            out[j] = out.get(j, Polynomial.zero()) + p
        return XTPoly(out)

    def __neg__(self) -> XTPoly:
        return XTPoly({j: -p for j, p in self.by_x.items()})

    def __sub__(self, other: XTPoly) -> XTPoly:
        return self + (-other)

    def __mul__(self, other: XTPoly) -> XTPoly:
        out: dict[int, Polynomial] = {}
        for j1, p1 in self.by_x.items():
            for j2, p2 in other.by_x.items():
                j = j1 + j2
                out[j] = out.get(j, Polynomial.zero()) + p1 * p2
        return XTPoly(out)

    def __pow__(self, n: int) -> XTPoly:
        result = XTPoly.const(Q(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def as_constant(self) -> Fraction | None:
        if not self.by_x:
            return Q(0)
        if set(self.by_x) == {0} and self.by_x[0].degree <= 0:
            return self.by_x[0].coeff(0)
        return None


_TOKEN_CHARS = {"+", "-", "*", "^", "/", "(", ")"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, pos) triples; kinds: int, name, op, end."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch in ("T", "x"):
            tokens.append(("name", ch, i))
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise OperatorSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, value: str) -> None:
        kind, val, pos = self.peek()
        if kind != "op" or val != value:
            raise OperatorSyntaxError(f"expected {value!r}", pos)
        self.advance()

    def parse(self) -> XTPoly:
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise OperatorSyntaxError(f"unexpected {val!r}", pos)
        return value

    def expr(self) -> XTPoly:
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.advance()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> XTPoly:
        value = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.advance()
                value = value * self.factor()
            elif kind == "op" and val == "/":
                self.advance()
                dpos = self.peek()[2]
                divisor = self.factor()
                c = divisor.as_constant()
                if c is None:
                    raise OperatorSyntaxError("division only by rational constants", dpos)
                if c == 0:
                    raise OperatorSyntaxError("division by zero", dpos)
                value = value * XTPoly.const(1 / c)
            else:
                return value

    def factor(self) -> XTPoly:
        kind, val, pos = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.advance()
            inner = self.factor()
            return inner if val == "+" else -inner
        value = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            kind, val, pos = self.peek()
            if kind != "int":
                raise OperatorSyntaxError("exponent must be a nonnegative integer", pos)
            self.advance()
            value = value ** int(val)
        return value

    def atom(self) -> XTPoly:
        kind, val, pos = self.advance()
        if kind == "int":
            return XTPoly.const(Q(int(val)))
        if kind == "name":
            return XTPoly.var_x() if val == "x" else XTPoly.var_t()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise OperatorSyntaxError(f"expected a value, got {val or 'end of input'!r}", pos)


def parse_xt(text: str) -> XTPoly:
    """Parse operator text into the commutative (x, T) normal form."""
    return _Parser(text).parse()


def format_theta_poly(p: Polynomial) -> str:
    """Render a polynomial in T, lowest degree last (matching the displays)."""
    if p.is_zero():
        return "0"
    bits = []
    for m in range(p.degree, -1, -1):
        c = p.coeff(m)
        if not c:
            continue
        mag = abs(c)
        if m == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + ("T" if m == 1 else f"T^{m}")
        if not bits:
            bits.append(body if c > 0 else f"-{body}")
        else:
            bits.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(bits)


def format_operator_text(coeffs_by_x: dict[int, Polynomial]) -> str:
    """Expanded grammar text: sum over j of (P_j) * x^j, parseable round trip."""
    if not coeffs_by_x:
        return "0"
    bits = []
    for j in sorted(coeffs_by_x):
        p = coeffs_by_x[j]
        if p.is_zero():
            continue
        body = format_theta_poly(p)
        wrapped = body if (p.degree <= 0 and "-" not in body[1:]) or j == 0 else f"({body})"
        if j == 0:
            term = wrapped
        else:
            xs = "x" if j == 1 else f"x^{j}"
            if p.degree <= 0 and p.coeff(0) == 1:
                term = xs
            elif p.degree <= 0 and p.coeff(0) == -1:
                term = f"-{xs}"
            else:
                term = f"{wrapped}*{xs}"
        if not bits:
            bits.append(term)
        elif term.startswith("-"):
            bits.append(f" - {term[1:]}")
        else:
            bits.append(f" + {term}")
    return "".join(bits)
