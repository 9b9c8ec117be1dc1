"""Frobenius bases at a MUM point, the mirror map, the Yukawa coupling, and
instanton numbers.

For a MUM operator of order k the solutions are generated by k universal
series u_0, u_1, ..., u_{k-1} (u_0(0) = 1, u_j(0) = 0 for j >= 1):

    y_m = sum_{j<=m} u_j * L^(m-j) / (m-j)!       (L = log x)

The u_j come from running the coefficient recurrence over the jet ring
Q[rho]/(rho^k): the analytic solution deformed to x^rho has coefficients
A_n(rho), and u_j collects the rho^j parts.  That keeps the whole mirror-map
pipeline on plain power series; log x is never manipulated numerically.

q d/dq on an x-series f is computed as theta(f) / theta(log q), with
theta(log q) = 1 + theta(u_1/u_0); series reversion is used only once, for
x(q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .operators import OperatorError, ThetaOperator, apply_operator, indicial_is_mum
from .series import (
    LogSeries,
    PowerSeries,
    series_exp,
    series_reversion,
)

Q = Fraction

# A q-expansion (PowerSeries in the mirror coordinate); kept as a named alias
# so signatures say which coordinate a series lives in.
QSeries = PowerSeries


# -- jet arithmetic over Q[rho]/(rho^k) --------------------------------------

def _jet_mul(a: tuple[Fraction, ...], b: tuple[Fraction, ...], k: int) -> tuple[Fraction, ...]:
    out = [Q(0)] * k
    for i, ai in enumerate(a):
        if ai:
            for j in range(k - i):
                if b[j]:
                    out[i + j] += ai * b[j]
    return tuple(out)


def _jet_inv_linear(c: Fraction, k: int) -> tuple[Fraction, ...]:
    """Inverse of (c + rho) in Q[rho]/(rho^k); needs c != 0."""
    inv = 1 / c
    out = [inv]
    for _ in range(k - 1):
        out.append(-out[-1] * inv)
    return tuple(out)


@dataclass(frozen=True)
class FrobeniusBasis:
    """Frobenius solutions of a MUM operator, truncated at order N."""

    order: int
    trunc: int
    tilde: tuple[PowerSeries, ...]  # u_0 ... u_{k-1}

    @property
    def u0(self) -> PowerSeries:
        return self.tilde[0]

    def solution(self, m: int) -> LogSeries:
        """y_m as a log-series (plain L^i coefficients)."""
        if not 0 <= m < self.order:
            raise IndexError(f"basis has solutions y_0..y_{self.order - 1}")
        parts = [PowerSeries.zero(self.trunc) for _ in range(m + 1)]
        for j in range(m + 1):
            i = m - j  # log power
            parts[i] = self.tilde[j] * Q(1, math.factorial(i))
        return LogSeries(parts)

    def solutions(self) -> list[LogSeries]:
        return [self.solution(m) for m in range(self.order)]


def frobenius_basis(op: ThetaOperator, trunc: int) -> FrobeniusBasis:
    """Compute the basis by the deformed recurrence over jets.

    The operator must be MUM; it is normalized so P_0 = theta^k internally.
    """
    if not indicial_is_mum(op):
        raise OperatorError("frobenius basis needs a MUM operator")
    op = op.mum_normalized()
    k = op.order
    span = op.degree
    ps = [op.coeff(j) for j in range(span + 1)]

    # A_n(rho) as jets; A_0 = 1
    jets: list[tuple[Fraction, ...]] = [(Q(1),) + (Q(0),) * (k - 1)]
    for n in range(trunc):
        acc = [Q(0)] * k
        for j in range(1, min(span, n + 1) + 1):
            # P_j evaluated at (n + 1 - j + rho): Taylor coefficients via shift
            pj = ps[j].shift_arg(n + 1 - j)
            pj_jet = tuple(pj.coeff(m) for m in range(k))
            term = _jet_mul(pj_jet, jets[n + 1 - j], k)
            for m in range(k):
                acc[m] += term[m]
        inv = _jet_inv_linear(Q(n + 1), k)
        invk = inv
        for _ in range(k - 1):
            invk = _jet_mul(invk, inv, k)
        jets.append(tuple(f for f in _jet_mul(tuple(-a for a in acc), invk, k)))
    tilde = tuple(
        PowerSeries([jets[n][j] for n in range(trunc + 1)], trunc) for j in range(k)
    )
    return FrobeniusBasis(k, trunc, tilde)


def mirror_map(basis: FrobeniusBasis, trunc: int | None = None) -> tuple[PowerSeries, PowerSeries]:
    """(q(x), x(q)): q = x exp(u_1/u_0), x(q) its compositional inverse."""
    if basis.order < 2:
        raise OperatorError("mirror map needs order >= 2")
    n = basis.trunc if trunc is None else min(trunc, basis.trunc)
    s = (basis.tilde[1].truncate(n) / basis.u0.truncate(n))
    q_of_x = series_exp(s).shift(1).truncate(n + 1)
    x_of_q = series_reversion(q_of_x)
    return q_of_x, x_of_q


def _theta_log_q(basis: FrobeniusBasis, n: int) -> PowerSeries:
    s = basis.tilde[1].truncate(n) / basis.u0.truncate(n)
    return s.theta() + 1


def yukawa(basis: FrobeniusBasis, trunc: int | None = None) -> QSeries:
    """K(q) = (q d/dq)^2 (y_2/y_0) re-expanded in q; constant term exactly 1."""
    if basis.order < 3:
        raise OperatorError("yukawa needs order >= 3")
    n = basis.trunc if trunc is None else min(trunc, basis.trunc)
    u0 = basis.u0.truncate(n)
    s = basis.tilde[1].truncate(n) / u0
    u = basis.tilde[2].truncate(n) / u0
    # y_2/y_0 = L^2/2 + s L + u = (log q)^2 / 2 + v with v = u - s^2/2
    v = u - s * s * Q(1, 2)
    tlq = s.theta() + 1  # theta(log q)
    ddv = ((v.theta() / tlq).theta()) / tlq
    k_x = ddv + 1
    _, x_of_q = mirror_map(basis, n)
    k_q = k_x.compose(x_of_q.truncate(n))
    if k_q.constant() != 1:
        raise OperatorError("yukawa normalization violated: constant term != 1")
    return k_q


def _moebius(n: int) -> int:
    mu, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


@dataclass(frozen=True)
class InstantonVector:
    """N_1 ... N_kmax extracted from a Yukawa q-expansion."""

    values: tuple[Fraction, ...]

    def n(self, k: int) -> Fraction:
        return self.values[k - 1]

    @property
    def kmax(self) -> int:
        return len(self.values)


def instantons(k_series: QSeries, kmax: int) -> InstantonVector:
    """Moebius-invert K(q) - 1 = sum_m (sum_{k|m} k^3 N_k) q^m."""
    if k_series.constant() != 1:
        raise OperatorError("instanton extraction needs constant term 1")
    if kmax > k_series.order:
        raise OperatorError("q-series too short for requested k range")
    c = k_series.coeffs
    values = []
    for k in range(1, kmax + 1):
        acc = Q(0)
        for d in range(1, k + 1):
            if k % d == 0:
                acc += _moebius(k // d) * c[d]
        values.append(acc / k**3)
    return InstantonVector(tuple(values))


def lambert_series(nk: InstantonVector, trunc: int) -> QSeries:
    """1 + sum_k k^3 N_k q^k/(1-q^k), the exact Moebius round trip."""
    coeffs = [Q(1)] + [Q(0)] * trunc
    for k in range(1, nk.kmax + 1):
        w = k**3 * nk.n(k)
        if w:
            for m in range(k, trunc + 1, k):
                coeffs[m] += w
    return PowerSeries(coeffs, trunc)


def change_coordinates(basis: FrobeniusBasis, phi: PowerSeries, f: PowerSeries) -> FrobeniusBasis:
    """Transform y(x) -> f(x) y(phi(x)) and renormalize to Frobenius form.

    phi = x + O(x^2) (phi'(0) = 1) and f(0) = 1.  The new universal parts are
    u_t -> f * sum_{j<=t} (u_j o phi) g^(t-j)/(t-j)!  with g = log(phi/x);
    the zero-constant-term normalization is automatic.
    """
    n = min(basis.trunc, phi.order, f.order)
    if phi.constant() != 0 or phi.coeff(1) != 1:
        raise OperatorError("coordinate change needs phi = x + O(x^2)")
    if f.constant() != 1:
        raise OperatorError("coordinate change needs f(0) = 1")
    phi = phi.truncate(n)
    f = f.truncate(n)
    from .series import series_log

    # phi/x is only known one order lower than phi; everything downstream
    # carries that truncation
    n = n - 1
    g = series_log(PowerSeries(phi.coeffs[1:], n))
    phi = phi.truncate(n)
    f = f.truncate(n)
    gpow = [PowerSeries.one(n)]
    for _ in range(basis.order - 1):
        gpow.append(gpow[-1] * g)
    new_tilde = []
    for t in range(basis.order):
        acc = PowerSeries.zero(n)
        for j in range(t + 1):
            comp = basis.tilde[j].truncate(n).compose(phi)
            acc = acc + comp * gpow[t - j] * Q(1, math.factorial(t - j))
        new_tilde.append(acc * f)
    if new_tilde[0].constant() != 1 or any(u.constant() != 0 for u in new_tilde[1:]):
        raise OperatorError("coordinate change failed to preserve Frobenius normalization")
    return FrobeniusBasis(basis.order, n, tuple(new_tilde))


def equivalence_check(op_a: ThetaOperator, op_b: ThetaOperator, kmax: int = 8) -> bool:
    """True iff the two operators have identical N_1..N_kmax, exactly."""
    n = 3 * kmax + 5
    nk = []
    for op in (op_a, op_b):
        basis = frobenius_basis(op, n)
        nk.append(instantons(yukawa(basis), kmax))
    return nk[0] == nk[1]


def verify_annihilation(op: ThetaOperator, basis: FrobeniusBasis) -> bool:
    """apply_operator(op, y_m) = 0 to the shared truncation, for every m."""
    for m in range(basis.order):
        if not apply_operator(op, basis.solution(m)).is_zero():
            return False
    return True
