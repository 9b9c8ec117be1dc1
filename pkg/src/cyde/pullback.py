"""The Yifan Yang pullback of an order-5 Calabi-Yau operator.

`yy_pullback` maps the monic b-coefficients to the monic quartic
c-coefficients; `yy_pullback_normalized` runs the whole display pipeline:

    theta quintic -> monic D form -> c formulas -> theta form
    -> substitute theta -> theta - 5/2 -> canonical integral form

The -5/2 substitution is applied unconditionally; it is what restores maximal
unipotent monodromy at x = 0 and is consistent with every display the
catalog verifies against.
"""

from __future__ import annotations

from fractions import Fraction

from .conditions import cy2_residual_order5
from .operators import (
    DOperator,
    OperatorError,
    ThetaOperator,
    d_to_theta,
    shift_theta,
    theta_to_d,
)
from .series import RationalFunction

Q = Fraction


class NotCY2Error(OperatorError):
    """Input operator is off the C-Y2 locus; carries the nonzero residual."""

    def __init__(self, residual: RationalFunction):
        super().__init__(f"operator does not satisfy the order-5 C-Y condition; residual {residual}")
        self.residual = residual


def yy_pullback(op: DOperator) -> DOperator:
    """Monic order-4 pullback with the explicit c-coefficient formulas.

    The formulas presuppose the C-Y2 locus, so the condition is enforced.
    """
    if op.order != 5:
        raise OperatorError("pullback needs a monic order-5 operator")
    residual = cy2_residual_order5(op)
    if not residual.is_zero():
        raise NotCY2Error(residual)
    b1, b2, b3, b4 = op.a[1], op.a[2], op.a[3], op.a[4]
    b3p = b3.derivative()
    b4p = b4.derivative()
    c3 = b4 * Q(8, 5)
    c2 = b3 * Q(1, 2) + b4p * Q(7, 5) + b4 * b4 * Q(19, 25)
    # the b2 coefficient is -3/5: the displayed pullbacks of ten operators and
    # all four parameterized families pin it; -3/2 breaks every one of them
    c1 = b2 * Q(-3, 5) + b3p * Q(7, 5) + b3 * b4 * Q(19, 25)
    c0 = (
        b1 * Q(-1, 4)
        + b2.derivative() * Q(1, 10)
        + b2 * b4 * Q(1, 25)
        + b3p.derivative() * Q(9, 40)
        + b3 * b3 * Q(1, 16)
        + b3 * b4p * Q(1, 25)
        + b3p * b4 * Q(23, 100)
        + b3 * b4 * b4 * Q(9, 250)
    )
    return DOperator(4, (c0, c1, c2, c3))


def yy_pullback_normalized(op: ThetaOperator) -> ThetaOperator:
    """Theta-form quartic exactly matching the displayed pullbacks."""
    if op.order != 5:
        raise OperatorError("pullback needs an order-5 theta operator")
    quartic = yy_pullback(theta_to_d(op))
    return shift_theta(d_to_theta(quartic), Q(-5, 2)).canonical()
