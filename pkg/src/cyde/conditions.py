"""The Calabi-Yau condition in its order-4 (a-form) and order-5 (b-form)
versions, plus the printed a3(b4) relation.

Both checks are decided exactly: the defining identity is brought to a single
rational function whose numerator must vanish identically.  On failure the
nonzero residual is available for diagnosis.
"""

from __future__ import annotations

from fractions import Fraction

from .operators import DOperator, OperatorError
from .series import Polynomial, RationalFunction

Q = Fraction


def cy2_residual_order4(op: DOperator) -> RationalFunction:
    """a1 - (a2 a3 / 2 - a3^3 / 8 + a2' - 3 a3 a3' / 4 - a3'' / 2)."""
    if op.order != 4:
        raise OperatorError("a-form condition needs a monic order-4 operator")
    a1, a2, a3 = op.a[1], op.a[2], op.a[3]
    a3p = a3.derivative()
    rhs = (
        a2 * a3 * Q(1, 2)
        - a3 * a3 * a3 * Q(1, 8)
        + a2.derivative()
        - a3 * a3p * Q(3, 4)
        - a3p.derivative() * Q(1, 2)
    )
    return a1 - rhs


def cy2_order4(op: DOperator) -> bool:
    """True iff the order-4 Calabi-Yau condition holds as an exact identity."""
    return cy2_residual_order4(op).is_zero()


def cy2_residual_order5(op: DOperator) -> RationalFunction:
    """b2 - (3 b3 b4 / 5 - 4 b4^3 / 25 + 3 b3' / 2 - 6 b4 b4' / 5 - b4'')."""
    if op.order != 5:
        raise OperatorError("b-form condition needs a monic order-5 operator")
    b2, b3, b4 = op.a[2], op.a[3], op.a[4]
    b4p = b4.derivative()
    rhs = (
        b3 * b4 * Q(3, 5)
        - b4 * b4 * b4 * Q(4, 25)
        + b3.derivative() * Q(3, 2)
        - b4 * b4p * Q(6, 5)
        - b4p.derivative()
    )
    return b2 - rhs


def cy2_order5(op: DOperator) -> bool:
    """True iff the order-5 Calabi-Yau condition holds as an exact identity."""
    return cy2_residual_order5(op).is_zero()


def a3_of_b4(b4: RationalFunction) -> RationalFunction:
    """a3 = 2/x + (2/5) b4."""
    two_over_x = RationalFunction(Polynomial.constant(2), Polynomial.variable())
    return two_over_x + b4 * Q(2, 5)
