"""Exterior square of a monic quartic: the operator annihilating all 2x2
Wronskians y_i y_j' - y_j y_i' of its solutions.

The quartic's companion system is lifted to the 6-dimensional induced system
on wedge pairs; the Wronskian coordinate w_(0,1) is used as cyclic vector and
its derivatives are reduced until they become linearly dependent over the
rational function field.  The minimal monic annihilator has order 5 exactly
when the order-4 Calabi-Yau condition holds, order 6 otherwise.  A dependency
before order 5 is reported as `DegenerateWronskianError`, never silently
accepted (no catalog operator triggers it).
"""

from __future__ import annotations

from .operators import DOperator, OperatorError
from .series import Polynomial, RationalFunction

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_PAIR_INDEX = {p: i for i, p in enumerate(_PAIRS)}


class DegenerateWronskianError(OperatorError):
    """The cyclic vector w_(0,1) satisfies an equation of order < 5."""

    def __init__(self, order: int):
        super().__init__(f"wronskian cyclic vector already dependent at order {order}")
        self.order = order


def _zero() -> RationalFunction:
    return RationalFunction(Polynomial.zero())


def _companion_rows(op: DOperator) -> list[list[RationalFunction]]:
    k = op.order
    rows = [[_zero() for _ in range(k)] for _ in range(k)]
    one = RationalFunction(Polynomial.one())
    for i in range(k - 1):
        rows[i][i + 1] = one
    for i in range(k):
        rows[k - 1][i] = -op.a[i]
    return rows


def _wedge_matrix(a: list[list[RationalFunction]]) -> list[list[RationalFunction]]:
    """Induced matrix on wedge coordinates: w_ij' = sum_k a_ik w_kj + a_jk w_ik."""
    n = len(_PAIRS)
    b = [[_zero() for _ in range(n)] for _ in range(n)]
    for (i, j), row in zip(_PAIRS, b):
        for k in range(4):
            for (src, coeff) in (((k, j), a[i][k]), ((i, k), a[j][k])):
                p, q = src
                if p == q or coeff.is_zero():
                    continue
                sign = 1
                if p > q:
                    p, q, sign = q, p, -1
                col = _PAIR_INDEX[(p, q)]
                term = coeff if sign > 0 else -coeff
                row[col] = row[col] + term
    return b


def _reduce_against(echelon: list[tuple[int, list[RationalFunction]]],
                    v: list[RationalFunction]) -> list[RationalFunction]:
    v = list(v)
    for pivot, row in echelon:
        if not v[pivot].is_zero():
            f = v[pivot]
            v = [vi - f * ri for vi, ri in zip(v, row)]
    return v


def exterior_square(op: DOperator) -> DOperator:
    """Minimal monic operator annihilating the 2x2 solution Wronskians."""
    if op.order != 4:
        raise OperatorError("exterior_square expects a monic order-4 operator")
    b = _wedge_matrix(_companion_rows(op))
    dim = len(_PAIRS)

    # derivative rows of the functional w -> w_(0,1)
    c: list[RationalFunction] = [_zero() for _ in range(dim)]
    c[_PAIR_INDEX[(0, 1)]] = RationalFunction(Polynomial.one())
    rows = [c]
    echelon: list[tuple[int, list[RationalFunction]]] = []

    def insert(vec: list[RationalFunction]) -> bool:
        """Reduce vec against the echelon; extend it, or report dependency."""
        red = _reduce_against(echelon, vec)
        for pivot in range(dim):
            if not red[pivot].is_zero():
                inv = red[pivot]
                echelon.append((pivot, [ri / inv for ri in red]))
                return True
        return False

    if not insert(rows[0]):  # pragma: no cover - c0 is a unit vector
        raise DegenerateWronskianError(0)
    order = None
    while True:
        prev = rows[-1]
        nxt = [prev[t].derivative() for t in range(dim)]
        for t in range(dim):
            acc = nxt[t]
            for s in range(dim):
                if not prev[s].is_zero() and not b[s][t].is_zero():
                    acc = acc + prev[s] * b[s][t]
            nxt[t] = acc
        rows.append(nxt)
        if not insert(nxt):
            order = len(rows) - 1
            break
    if order < 5:
        raise DegenerateWronskianError(order)

    # solve sum_{m<order} lam_m c_m = c_order by elimination over Q(x)
    m = order
    aug = [[rows[r][t] for r in range(m)] + [rows[m][t]] for t in range(dim)]
    lam = _solve(aug, m)
    return DOperator(m, tuple(-l for l in lam))


def _solve(aug: list[list[RationalFunction]], ncols: int) -> list[RationalFunction]:
    """Solve the consistent overdetermined system aug[:, :ncols] x = aug[:, -1]."""
    rows = [list(r) for r in aug]
    nrows = len(rows)
    piv_rows = []
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, nrows):
            if not rows[i][col].is_zero():
                sel = i
                break
        if sel is None:
            raise OperatorError("singular wronskian system")
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = rows[r][col]
        rows[r] = [e / inv for e in rows[r]]
        for i in range(nrows):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [e - f * p for e, p in zip(rows[i], rows[r])]
        piv_rows.append(r)
        r += 1
    return [rows[i][-1] for i in piv_rows]
