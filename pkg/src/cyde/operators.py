"""Differential operators in theta form and D form, and their calculus.

A ``ThetaOperator`` is sum_j x^j P_j(theta) with polynomial P_j and the x
powers normally ordered to the left (theta = x d/dx).  A ``DOperator`` is the
monic analytic form y^(k) + a_{k-1} y^(k-1) + ... + a_0 y with rational
function coefficients.  The two are interconvertible; all the Calabi-Yau
condition and pullback formulas act on the D form, while everything the
displays show is theta form.

Conventions fixed here and used by every other module:

* canonical integral form: multiply through by the least common denominator,
  divide by integer content and by any common polynomial factor in x, and fix
  the sign so the lowest nonzero P_j has a positive leading coefficient;
* recurrence indexing: applying sum_j x^j P_j(theta) to sum_n A_n x^n and
  reading off the coefficient of x^(n+1) gives
  sum_j Q_j(n) A_{n+1-j} = 0 with Q_j(n) = P_j(n+1-j), valid for n >= 0 with
  A_m = 0 for m < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import parser
from .series import LogSeries, Polynomial, PowerSeries, RationalFunction

Q = Fraction


class OperatorError(ValueError):
    pass


class ThetaOperator:
    """sum_j x^j P_j(theta); immutable."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict[int, Polynomial]):
        cleaned = {}
        for j, p in coeffs.items():
            if j < 0:
                raise OperatorError("negative x power in theta operator")
            if not p.is_zero():
                cleaned[j] = p
        if not cleaned:
            raise OperatorError("zero operator")
        self._coeffs = cleaned

    # -- structure -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Largest x power with a nonzero theta polynomial."""
        return max(self._coeffs)

    @property
    def order(self) -> int:
        """Largest theta degree over all coefficients."""
        return max(p.degree for p in self._coeffs.values())

    def coeff(self, j: int) -> Polynomial:
        return self._coeffs.get(j, Polynomial.zero())

    def x_powers(self) -> list[int]:
        return sorted(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThetaOperator):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted((j, p) for j, p in self._coeffs.items())))

    def __repr__(self) -> str:
        return f"ThetaOperator({self._coeffs!r})"

    def __str__(self) -> str:
        return parser.format_operator_text(self._coeffs)

    # -- algebra ---------------------------------------------------------

    def scale(self, c: Fraction | int) -> ThetaOperator:
        if c == 0:
            raise OperatorError("scaling operator by zero")
        return ThetaOperator({j: p * c for j, p in self._coeffs.items()})

    def canonical(self) -> ThetaOperator:
        """Canonical integral form (projective representative).

        Divides out the common polynomial-in-x content, clears denominators,
        divides by the integer content, and normalizes the sign of the lowest
        nonzero P_j's leading coefficient to be positive.
        """
        # polynomial content: gcd over Q[x] of the x-polynomials attached to
        # each theta monomial
        by_theta: dict[int, Polynomial] = {}
        for j, p in self._coeffs.items():
            for m, c in enumerate(p.coeffs):
                if c:
                    g = by_theta.setdefault(m, Polynomial.zero())
                    by_theta[m] = g + Polynomial.monomial(c, j)
        content = Polynomial.zero()
        for g in by_theta.values():
            content = content.gcd(g)
            if content.degree == 0:
                break
        coeffs = self._coeffs
        if content.degree > 0:
            new_by_theta = {m: g // content for m, g in by_theta.items()}
            coeffs = {}
            for m, g in new_by_theta.items():
                for j, c in enumerate(g.coeffs):
                    if c:
                        p = coeffs.setdefault(j, Polynomial.zero())
                        coeffs[j] = p + Polynomial.monomial(c, m)
        # integer normalization
        lcm = 1
        for p in coeffs.values():
            d = p.denominator_lcm()
            lcm = lcm * d // math.gcd(lcm, d)
        scaled = {j: p * lcm for j, p in coeffs.items()}
        content_int = 0
        for p in scaled.values():
            content_int = math.gcd(content_int, p.integer_content())
        if content_int > 1:
            scaled = {j: p * Q(1, content_int) for j, p in scaled.items()}
        low = min(scaled)
        if scaled[low].leading < 0:
            scaled = {j: -p for j, p in scaled.items()}
        return ThetaOperator(scaled)

    def mum_normalized(self) -> ThetaOperator:
        """Divide by the scalar making P_0 exactly theta^order."""
        c = self._mum_scalar()
        if c is None:
            raise OperatorError("operator is not MUM (P_0 != c * theta^k)")
        return self.scale(1 / c)

    def _mum_scalar(self) -> Fraction | None:
        p0 = self.coeff(0)
        if p0.is_zero() or p0.degree != self.order:
            return None
        k = p0.degree
        if any(p0.coeff(m) for m in range(k)):
            return None
        return p0.leading

    def proportional_to(self, other: ThetaOperator) -> bool:
        """Equality up to a nonzero rational scalar."""
        return self.canonical() == other.canonical()

    def shift(self, s: Fraction | int) -> ThetaOperator:
        """Substitute theta -> theta + s in every coefficient."""
        sp = Polynomial((s, 1))
        return ThetaOperator({j: p.compose(sp) for j, p in self._coeffs.items()})

    def apply(self, u: LogSeries) -> LogSeries:
        """Apply the operator to a log-series, exactly, term by term."""
        # cache theta^m u up to the operator order
        powers = [u]
        for _ in range(self.order):
            powers.append(powers[-1].theta())
        zero = LogSeries.from_series(PowerSeries.zero(u.order))
        result = zero
        for j, p in sorted(self._coeffs.items()):
            acc = zero
            for m, c in enumerate(p.coeffs):
                if c:
                    acc = acc + powers[m] * c
            result = result + acc.shift(j)
        return result

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [
                [j, [str(c) for c in self._coeffs[j].coeffs]] for j in sorted(self._coeffs)
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> ThetaOperator:
        coeffs = {int(j): Polynomial(Q(c) for c in cs) for j, cs in doc["coeffs"]}
        op = cls(coeffs)
        if op.order != doc["order"]:
            raise OperatorError("json order field does not match coefficients")
        return op


@dataclass(frozen=True)
class DOperator:
    """Monic operator y^(k) + a_{k-1} y^(k-1) + ... + a_0 y; a has length k."""

    order: int
    a: tuple[RationalFunction, ...]

    def __post_init__(self):
        if len(self.a) != self.order:
            raise OperatorError("DOperator needs exactly `order` lower coefficients")

    def coeff(self, i: int) -> RationalFunction:
        """Coefficient of y^(i); 1 for i = order."""
        if i == self.order:
            return RationalFunction(Polynomial.one())
        return self.a[i]

    def __str__(self) -> str:
        bits = [f"D^{self.order}"]
        for i in range(self.order - 1, -1, -1):
            if not self.a[i].is_zero():
                bits.append(f"({self.a[i]})*D^{i}")
        return " + ".join(bits)


@dataclass(frozen=True)
class PRecurrence:
    """sum_{j=0..span} Q_j(n) * A_{n+1-j} = 0 for n >= 0 (A_m = 0 for m < 0)."""

    span: int
    q: tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.q) != self.span + 1:
            raise OperatorError("PRecurrence needs span+1 coefficient polynomials")
        if self.q[0].is_zero():
            raise OperatorError("leading recurrence coefficient must be nonzero")


def parse_operator(text: str) -> ThetaOperator:
    """Parse grammar text (see `parser`) into an expanded ThetaOperator."""
    xt = parser.parse_xt(text)
    if not xt.by_x:
        raise OperatorError("zero operator")
    return ThetaOperator(dict(xt.by_x))


@lru_cache(maxsize=None)
def _stirling2(m: int, k: int) -> int:
    """Stirling numbers of the second kind: theta^m = sum_k S(m,k) x^k D^k."""
    if m == k == 0:
        return 1
    if m == 0 or k == 0:
        return 0
    return k * _stirling2(m - 1, k) + _stirling2(m - 1, k - 1)


def _falling_factorial(i: int) -> Polynomial:
    """theta (theta-1) ... (theta-i+1), equal to x^i D^i."""
    p = Polynomial.one()
    for t in range(i):
        p = p * Polynomial((-t, 1))
    return p


def theta_to_d(op: ThetaOperator) -> DOperator:
    """Monic D form annihilating the same solutions."""
    k = op.order
    # q_i(x) = x^i * sum_j (sum_m p_{j,m} S(m,i)) x^j  multiplies D^i
    q: list[Polynomial] = []
    for i in range(k + 1):
        g = Polynomial.zero()
        for j in sorted(op.x_powers()):
            p = op.coeff(j)
            acc = Q(0)
            for m in range(i, p.degree + 1):
                c = p.coeff(m)
                if c:
                    acc += c * _stirling2(m, i)
            if acc:
                g = g + Polynomial.monomial(acc, j)
        q.append(Polynomial((0,) * i + tuple(g.coeffs)) if not g.is_zero() else Polynomial.zero())
    lead = q[k]
    if lead.is_zero():
        raise OperatorError("degenerate theta operator (no D^k term)")
    return DOperator(k, tuple(RationalFunction(q[i], lead) for i in range(k)))


def d_to_theta(op: DOperator) -> ThetaOperator:
    """Theta form: multiply by x^k and the least common denominator, expand."""
    k = op.order
    # x^k * L = sum_i (a_i(x) * x^(k-i)) * (x^i D^i), with x^i D^i = ff_i(theta)
    scalars = [op.coeff(i) * RationalFunction(Polynomial.monomial(1, k - i)) for i in range(k + 1)]
    lcd = Polynomial.one()
    for s in scalars:
        lcd = lcd.lcm(s.den)
    coeffs: dict[int, Polynomial] = {}
    for i, s in enumerate(scalars):
        e = (s.num * (lcd // s.den))
        ff = _falling_factorial(i)
        for j, c in enumerate(e.coeffs):
            if c:
                p = coeffs.setdefault(j, Polynomial.zero())
                coeffs[j] = p + ff * c
    return ThetaOperator(coeffs).canonical()


def convert_operator(op: ThetaOperator | DOperator, target: str):
    """Convert between the two forms; `target` is 'D' or 'theta'."""
    if target in ("D", "d"):
        if isinstance(op, DOperator):
            return op
        return theta_to_d(op)
    if target == "theta":
        if isinstance(op, ThetaOperator):
            return op
        return d_to_theta(op)
    raise ValueError(f"unknown target form {target!r}")


def shift_theta(op: ThetaOperator, s: Fraction | int) -> ThetaOperator:
    """Substitute theta -> theta + s (pass s = -5/2 for the pullback pipeline)."""
    return op.shift(s)


def indicial_is_mum(op: ThetaOperator) -> bool:
    """True iff P_0(theta) = c * theta^k for a nonzero scalar c."""
    return op._mum_scalar() is not None


def recurrence_from_theta(op: ThetaOperator) -> PRecurrence:
    """Coefficient recurrence of the analytic solution of a MUM operator.

    Q_j(n) = P_j(n+1-j); Q_0(n) = (n+1)^k for the MUM-normalized operator.
    """
    op = op.mum_normalized()
    span = op.degree
    qs = []
    shift_var = Polynomial((1, 1))  # n + 1
    for j in range(span + 1):
        # substitute theta -> (n + 1 - j)
        qs.append(op.coeff(j).compose(shift_var - j))
    return PRecurrence(span, tuple(qs))


def apply_operator(op: ThetaOperator, u: LogSeries) -> LogSeries:
    return op.apply(u)
