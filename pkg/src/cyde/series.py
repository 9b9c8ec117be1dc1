"""Exact dense univariate algebra.

Everything downstream (operator conversions, C-Y2 checks, pullbacks, mirror
maps) is built on four value types:

* ``Polynomial``      -- dense, rational coefficients, lowest degree first
* ``RationalFunction`` -- reduced quotient of polynomials, monic denominator
* ``PowerSeries``     -- truncated series with an explicit truncation order
* ``LogSeries``       -- polynomial in L = log x with PowerSeries coefficients

All scalars are ``fractions.Fraction`` (exact, auto-canonicalized: reduced,
positive denominator).  Every value is immutable after construction and every
operation is a pure function, so values can be shared freely across threads.

Truncation convention: a ``PowerSeries`` with order N represents a series
known modulo x^(N+1); binary operations carry the minimum of the operand
orders.  ``LogSeries`` stores plain L^m coefficients (no 1/m! built in).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Q = Fraction

Scalar = Union[int, Fraction]


def _q(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class Polynomial:
    """Dense univariate polynomial over Q, canonical (no trailing zeros)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> Polynomial:
        return cls(())

    @classmethod
    def one(cls) -> Polynomial:
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> Polynomial:
        return cls((c,))

    @classmethod
    def variable(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def monomial(cls, c: Scalar, n: int) -> Polynomial:
        return cls([0] * n + [c])

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Q(0)

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Q(0)
        return self.coeffs[-1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: Polynomial | Scalar) -> Polynomial:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            self.coeff(i) + other.coeff(i) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Polynomial | Scalar) -> Polynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other: Scalar) -> Polynomial:
        return _as_poly(other) - self

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return Polynomial(c * other for c in self.coeffs)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Polynomial.zero()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(), self
        quot = [Q(0)] * (dq + 1)
        inv_lead = 1 / other.leading
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[: max(other.degree, 0)])

    def __mod__(self, other: Polynomial) -> Polynomial:
        return self.divmod(other)[1]

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return self.divmod(other)[0]

    def divides(self, other: Polynomial) -> bool:
        return (other % self).is_zero()

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self * (1 / self.leading)

    def gcd(self, other: Polynomial) -> Polynomial:
        """Monic gcd via the Euclidean algorithm (remainders kept monic)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b).monic()
        return a.monic()

    def lcm(self, other: Polynomial) -> Polynomial:
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        g = self.gcd(other)
        return ((self * other).divmod(g)[0]).monic()

    # -- calculus and evaluation --------------------------------------

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, point):
        """Evaluate by Horner; `point` may be a scalar, Polynomial, or Jet-like.

        Anything supporting * and + with Fractions works, so this doubles as
        composition (Polynomial argument) and jet evaluation.
        """
        if not self.coeffs:
            return _q(0) if isinstance(point, (int, Fraction)) else point * 0
        acc = self.coeffs[-1] if isinstance(point, (int, Fraction)) else point * 0 + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * point + c
        return acc

    def compose(self, inner: Polynomial) -> Polynomial:
        acc = Polynomial.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.constant(c)
        return acc

    # -- integral normal form ------------------------------------------

    def denominator_lcm(self) -> int:
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return lcm

    def integer_content(self) -> int:
        """gcd of numerators for an integral polynomial (0 for the zero poly)."""
        g = 0
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("integer_content on non-integral polynomial")
            g = math.gcd(g, abs(c.numerator))
        return g

    def shift_arg(self, s: Scalar) -> Polynomial:
        """p(x + s), exact."""
        return self.compose(Polynomial((s, 1)))

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_poly(self, "x")


def _as_poly(value: Polynomial | Scalar) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def format_poly(p: Polynomial, var: str) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for n in range(p.degree, -1, -1):
        c = p.coeff(n)
        if not c:
            continue
        if n == 0:
            body = str(abs(c))
        else:
            mag = abs(c)
            head = "" if mag == 1 else f"{mag}*"
            body = f"{head}{var}" + (f"^{n}" if n > 1 else "")
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(terms)


class RationalFunction:
    """Reduced ratio of polynomials; denominator monic and nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial | Scalar, den: Polynomial | Scalar = 1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = Polynomial.zero()
            self.den = Polynomial.one()
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lead = den.leading
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    @classmethod
    def from_poly(cls, p: Polynomial) -> RationalFunction:
        return cls(p, Polynomial.one())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == Polynomial.one()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Polynomial)):
            return self == RationalFunction(_as_poly(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other) -> RationalFunction:
        other = _as_rf(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        return self + (-_as_rf(other))

    def __rsub__(self, other) -> RationalFunction:
        return _as_rf(other) - self

    def __mul__(self, other) -> RationalFunction:
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = _as_rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> RationalFunction:
        return _as_rf(other) / self

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def derivative(self) -> RationalFunction:
        """d/dx by the quotient rule, reduced."""
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, (Polynomial, int, Fraction)):
        return RationalFunction(_as_poly(value))
    raise TypeError(f"cannot coerce {type(value)!r} to RationalFunction")


class PowerSeries:
    """Truncated power series: coefficients c_0..c_N, known modulo x^(N+1)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[Scalar], order: int | None = None):
        cs = [_q(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if len(cs) < order + 1:
            cs.extend([Q(0)] * (order + 1 - len(cs)))
        self.coeffs: tuple[Fraction, ...] = tuple(cs[: order + 1])
        self.order = order

    @classmethod
    def zero(cls, order: int) -> PowerSeries:
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> PowerSeries:
        return cls((1,), order)

    @classmethod
    def identity(cls, order: int) -> PowerSeries:
        """The series x."""
        return cls((0, 1), order)

    @classmethod
    def from_poly(cls, p: Polynomial, order: int) -> PowerSeries:
        return cls(p.coeffs, order)

    def coeff(self, n: int) -> Fraction:
        if 0 <= n <= self.order:
            return self.coeffs[n]
        raise IndexError(f"coefficient {n} beyond truncation order {self.order}")

    def constant(self) -> Fraction:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def valuation(self) -> int | None:
        """Index of first nonzero stored coefficient, or None if all zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> PowerSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1], order)

    def __eq__(self, other: object) -> bool:
        """Equality of all coefficients up to the shared truncation order."""
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            return PowerSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.order)
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self) -> PowerSeries:
        return PowerSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other) -> PowerSeries:
        return (-self) + other

    def __mul__(self, other) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            return PowerSeries([c * other for c in self.coeffs], self.order)
        n = min(self.order, other.order)
        out = [Q(0)] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a:
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return PowerSeries(out, n)

    __rmul__ = __mul__

    def shift(self, j: int) -> PowerSeries:
        """Multiply by x^j (truncation order grows to N + j)."""
        if j < 0:
            raise ValueError("negative shift")
        return PowerSeries((Q(0),) * j + self.coeffs, self.order + j)

    def derivative(self) -> PowerSeries:
        if self.order == 0:
            return PowerSeries.zero(0)
        return PowerSeries([i * self.coeffs[i] for i in range(1, self.order + 1)], self.order - 1)

    def theta(self) -> PowerSeries:
        """x d/dx; truncation order preserved."""
        return PowerSeries([i * c for i, c in enumerate(self.coeffs)], self.order)

    def inverse(self) -> PowerSeries:
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series inverse needs nonzero constant term")
        inv0 = 1 / self.coeffs[0]
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = Q(0)
            for i in range(1, n + 1):
                if self.coeffs[i]:
                    acc += self.coeffs[i] * out[n - i]
            out.append(-inv0 * acc)
        return PowerSeries(out, self.order)

    def __truediv__(self, other) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return self * other.inverse()

    def __pow__(self, n: int) -> PowerSeries:
        if n < 0:
            return self.inverse() ** (-n)
        result = PowerSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def compose(self, inner: PowerSeries) -> PowerSeries:
        """self(inner); inner must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("series composition needs inner constant term 0")
        n = min(self.order, inner.order)
        acc = PowerSeries.zero(n)
        inner = inner.truncate(n)
        for c in reversed(self.coeffs[: n + 1]):
            acc = acc * inner + c
        return acc

    def __repr__(self) -> str:
        return f"PowerSeries({list(self.coeffs)!r}, order={self.order})"

    def __str__(self) -> str:
        return str(Polynomial(self.coeffs)) + f" + O(x^{self.order + 1})"


def series_exp(s: PowerSeries) -> PowerSeries:
    """exp of a series with zero constant term.

    Solved from f' = s' f, which keeps everything rational.
    """
    if s.coeffs[0] != 0:
        raise ValueError("series_exp needs zero constant term")
    n = s.order
    out = [Q(1)]
    # n * f_n = sum_{k=1..n} k * s_k * f_{n-k}
    for m in range(1, n + 1):
        acc = Q(0)
        for k in range(1, m + 1):
            if s.coeffs[k]:
                acc += k * s.coeffs[k] * out[m - k]
        out.append(acc / m)
    return PowerSeries(out, n)


def series_log(u: PowerSeries) -> PowerSeries:
    """log of a series with constant term 1 (inverse of series_exp)."""
    if u.coeffs[0] != 1:
        raise ValueError("series_log needs constant term 1")
    # l' = u'/u integrated termwise
    n = u.order
    lu = u.derivative() * u.truncate(max(n - 1, 0)).inverse() if n > 0 else PowerSeries.zero(0)
    out = [Q(0)]
    for m in range(1, n + 1):
        out.append(lu.coeffs[m - 1] / m)
    return PowerSeries(out, n)


def series_reversion(s: PowerSeries) -> PowerSeries:
    """Compositional inverse t with s(t(q)) = q, by Lagrange inversion.

    Requires s(0) = 0 and s'(0) != 0.  [q^n] t = (1/n) [x^(n-1)] (x/s)^n.
    """
    if s.coeffs[0] != 0 or s.order < 1 or s.coeffs[1] == 0:
        raise ValueError("series_reversion needs s(0) = 0 and s'(0) != 0")
    n = s.order
    # x/s as a series of order n-1
    base = PowerSeries(s.coeffs[1:], n - 1).inverse()
    out = [Q(0), base.coeffs[0]]
    power = base
    for m in range(2, n + 1):
        power = power * base
        out.append(power.coeffs[m - 1] / m)
    return PowerSeries(out, n)


class LogSeries:
    """sum_m s_m(x) * L^m with L = log x, s_m truncated power series.

    The theta action is theta(x^n L^m) = n x^n L^m + m x^n L^(m-1); no
    factorial normalization is built into the storage.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[PowerSeries]):
        ps = list(parts)
        while len(ps) > 1 and ps[-1].is_zero():
            ps.pop()
        if not ps:
            ps = [PowerSeries.zero(0)]
        self.parts: tuple[PowerSeries, ...] = tuple(ps)

    @classmethod
    def from_series(cls, s: PowerSeries) -> LogSeries:
        return cls([s])

    @property
    def log_degree(self) -> int:
        return len(self.parts) - 1

    @property
    def order(self) -> int:
        return min(p.order for p in self.parts)

    def part(self, m: int) -> PowerSeries:
        if 0 <= m < len(self.parts):
            return self.parts[m]
        return PowerSeries.zero(self.order)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogSeries):
            return NotImplemented
        n = max(len(self.parts), len(other.parts))
        order = min(self.order, other.order)
        for m in range(n):
            if self.part(m).truncate(order) != other.part(m).truncate(order):
                return False
        return True

    def __hash__(self) -> int:
        return hash(self.parts)

    def _coerce(self, other) -> LogSeries:
        if isinstance(other, LogSeries):
            return other
        if isinstance(other, PowerSeries):
            return LogSeries.from_series(other)
        return LogSeries.from_series(PowerSeries([other], self.order))

    def __add__(self, other) -> LogSeries:
        other = self._coerce(other)
        n = max(len(self.parts), len(other.parts))
        return LogSeries([self.part(m) + other.part(m) for m in range(n)])

    __radd__ = __add__

    def __neg__(self) -> LogSeries:
        return LogSeries([-p for p in self.parts])

    def __sub__(self, other) -> LogSeries:
        return self + (-self._coerce(other))

    def __mul__(self, other) -> LogSeries:
        if isinstance(other, (int, Fraction)):
            return LogSeries([p * other for p in self.parts])
        if isinstance(other, PowerSeries):
            return LogSeries([p * other for p in self.parts])
        out = [PowerSeries.zero(min(self.order, other.order))
               for _ in range(len(self.parts) + len(other.parts) - 1)]
        for i, p in enumerate(self.parts):
            for j, q in enumerate(other.parts):
                out[i + j] = out[i + j] + p * q
        return LogSeries(out)

    __rmul__ = __mul__

    def shift(self, j: int) -> LogSeries:
        """Multiply by x^j."""
        return LogSeries([p.shift(j) for p in self.parts])

    def theta(self) -> LogSeries:
        """Apply theta = x d/dx using theta(L^m) = m L^(m-1)."""
        out = [p.theta() for p in self.parts]
        for m in range(1, len(self.parts)):
            out[m - 1] = out[m - 1] + m * self.parts[m]
        return LogSeries(out)

    def __repr__(self) -> str:
        return f"LogSeries({list(self.parts)!r})"

    def __str__(self) -> str:
        bits = []
        for m, p in enumerate(self.parts):
            if p.is_zero() and m > 0:
                continue
            suffix = "" if m == 0 else (" * L" if m == 1 else f" * L^{m}")
            bits.append(f"({p}){suffix}")
        return " + ".join(bits)


def logseries_theta(u: LogSeries) -> LogSeries:
    """theta = x d/dx acting on a log-series (module-level spelling)."""
    return u.theta()
