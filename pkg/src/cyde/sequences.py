"""Exact evaluators for the closed-form coefficient sequences, harmonic
numbers, the five-variable Laurent constant-term sequence, recurrence
running, Hadamard products, and the zeta(4) approximation report.

Evaluation conventions (fixed once, used everywhere):

* closed_form(id, 0) = 1 for every id: the analytic solution is normalized
  to 1, and the only indeterminate summands (0/0 prefactors at n = k = 0 in
  the "245" and "281" sums) occur there.
* binomial(a, b) = 0 for b < 0 or b > a; inverse binomials are exact
  rationals, and a zero binomial in a denominator is a hard error unless
  its cofactor vanishes, in which case the whole term is 0.
* floor brackets in summation bounds are floors.

Three printed formulas do not match their operators; the literal readings
stay available behind `as_printed=True`, and the default substitutes the
reconciled closed form when one exists (the operator recurrences are always
the oracle):

* "32-Zudilin": the printed sum evaluates to (-1)^n A_n exactly -- an
  x -> -x convention slip; as printed it gives -12 at n = 1 instead of 12.
  Default: (-1)^n times the printed sum.
* "253": the printed harmonic bracket ends with -2 H_{2n-2k} where the
  operator forces -4 H_{2n-2k} (which also restores the antisymmetric
  coefficient pairing (-7,7), (1,-1), (4,-4)); as printed it gives 2052 at
  n = 2 instead of 324.  Default: the corrected bracket.
* "255": the printed sum gives -132 at n = 1 instead of -68; no choice of
  the six harmonic coefficients in the printed binomial weight reproduces
  the operator's sequence (the weight itself is off), so there is no
  reconciled closed form.  Default: the operator-recurrence values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .operators import PRecurrence

Q = Fraction


class SequenceEvalError(ValueError):
    pass


@lru_cache(maxsize=None)
def harmonic(k: int) -> Fraction:
    """H_k = 1 + 1/2 + ... + 1/k, with H_0 = 0."""
    if k < 0:
        raise SequenceEvalError("harmonic number needs k >= 0")
    if k == 0:
        return Q(0)
    return harmonic(k - 1) + Q(1, k)


def _binom(a: int, b: int) -> int:
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def _inv_binom(a: int, b: int, cofactor: Fraction, label: str) -> Fraction:
    """cofactor / binomial(a, b) with the zero-denominator convention."""
    denom = _binom(a, b)
    if denom == 0:
        if cofactor == 0:
            return Q(0)
        raise SequenceEvalError(f"zero binomial C({a},{b}) in denominator of {label}")
    return cofactor / denom


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _multinomial_square_sum(n: int, parts: int) -> int:
    nf = math.factorial(n)
    total = 0
    for comp in _compositions(n, parts):
        m = nf
        for c in comp:
            m //= math.factorial(c)
        total += m * m
    return total


# -- the printed sums ---------------------------------------------------------

def _f32_kr(n: int) -> Fraction:
    total = Q(0)
    for i in range(n + 1):
        for j in range(n + 1):
            total += (
                _binom(n, i) ** 2
                * _binom(n, j) ** 2
                * _binom(n + i, n)
                * _binom(n + j, n)
                * _binom(i + j, n)
            )
    return total


def _f32_zudilin(n: int) -> Fraction:
    total = Q(0)
    for k in range(n + 1):
        w = _binom(n, k) ** 4 * _binom(n + k, n) ** 2 * _binom(2 * n - k, n) ** 2
        brace = 1 + k * (
            -6 * harmonic(k) + 6 * harmonic(n - k) + 2 * harmonic(n + k) - 2 * harmonic(2 * n - k)
        )
        total += w * brace
    return total


def _f60(n: int) -> Fraction:
    total = Q(0)
    for k in range(n + 1):
        total += (
            _binom(n, k) ** 2
            * _binom(n + k, n)
            * _binom(2 * n - k, n)
            * _binom(2 * k, k)
            * _binom(2 * n - 2 * k, n - k)
        )
    return total


def _f189(n: int) -> Fraction:
    total = Q(0)
    for i in range(n + 1):
        for j in range(n + 1):
            total += _binom(n, i) ** 2 * _binom(n, j) ** 2 * _binom(i + j, n) ** 2
    return _binom(2 * n, n) * total


def _f244(n: int) -> Fraction:
    total = Q(0)
    for k in range(n + 1):
        w = _binom(n, k) ** 6 * _binom(2 * k, k) * _binom(2 * n - 2 * k, n - k)
        brace = 1 + k * (
            -8 * harmonic(k)
            + 8 * harmonic(n - k)
            + 2 * harmonic(2 * k)
            - 2 * harmonic(2 * n - 2 * k)
        )
        total += w * brace
    return total


def _f245(n: int) -> Fraction:
    total = Q(0)
    for k in range(n // 3 + 1):
        if 2 * n - 3 * k == 0:
            raise SequenceEvalError(f"(n-2k)/(2n-3k) undefined at n={n}, k={k}")
        pref = Q((-1) ** k) * Q(n - 2 * k, 2 * n - 3 * k)
        w = pref * _binom(n, k) ** 4 * _binom(3 * n - 3 * k, 2 * n)
        total += _inv_binom(2 * n, 3 * k, w, f"term k={k} of 245")
    return 3 * _binom(2 * n, n) ** 2 * total


def _f253(n: int) -> Fraction:
    total = Q(0)
    for k in range(n + 1):
        w = (
            _binom(n, k) ** 2
            * _binom(n + k, n)
            * _binom(2 * n - k, n)
            * _binom(2 * k, k) ** 2
            * _binom(2 * n - 2 * k, n - k) ** 2
        )
        brace = 1 + k * (
            -7 * harmonic(k)
            + 7 * harmonic(n - k)
            + harmonic(n + k)
            - harmonic(2 * n - k)
            + 4 * harmonic(2 * k)
            - 2 * harmonic(2 * n - 2 * k)
        )
        total += w * brace
    return total


def _f255(n: int) -> Fraction:
    total = Q(0)
    for k in range(n + 1):
        w = (
            _binom(n, k) ** 2
            * _binom(n + k, n)
            * _binom(2 * n - k, n)
            * _binom(2 * k, k)
            * _binom(2 * n - 2 * k, n - k)
            * _binom(4 * k, 2 * k)
            * _binom(4 * n - 4 * k, 2 * n - 2 * k)
        )
        brace = 1 + k * (
            -5 * harmonic(k)
            + 5 * harmonic(n - k)
            + harmonic(n + k)
            - harmonic(2 * n - k)
            - 2 * harmonic(2 * k)
            + 2 * harmonic(2 * n - 2 * k)
        )
        total += w * brace
    return total


def _f281(n: int) -> Fraction:
    total = Q(0)
    lo = (2 * (n + 1)) // 3
    for k in range(lo, n + 1):
        if n - 3 * k == 0:
            raise SequenceEvalError(f"(n-2k)/(n-3k) undefined at n={n}, k={k}")
        pref = Q((-1) ** k) * Q(n - 2 * k, n - 3 * k)
        w = (
            pref
            * _binom(n + k, n)
            * _binom(2 * n - k, n)
            * _binom(n, 3 * n - 3 * k)
            * Q(math.factorial(3 * k), math.factorial(k) ** 3)
            * Q(math.factorial(3 * n - 3 * k), math.factorial(n - k) ** 3)
        )
        total += _inv_binom(3 * k, n, w, f"term k={k} of 281")
    return 3 * total


def _f130(n: int) -> Fraction:
    return Q(_multinomial_square_sum(n, 6))


def _f188(n: int) -> Fraction:
    return Q(_binom(2 * n, n) * _multinomial_square_sum(n, 5))


@dataclass(frozen=True)
class SequenceFormula:
    evaluate: callable
    operator_id: str  # catalog entry whose recurrence is the oracle
    printed_matches_operator: bool


FORMULAS: dict[str, SequenceFormula] = {
    "32-KR": SequenceFormula(_f32_kr, "32", True),
    "32-Zudilin": SequenceFormula(_f32_zudilin, "32", False),
    "60": SequenceFormula(_f60, "60", True),
    "189": SequenceFormula(_f189, "189", True),
    "244": SequenceFormula(_f244, "244", True),
    "245": SequenceFormula(_f245, "245", True),
    "253": SequenceFormula(_f253, "253", True),
    "255": SequenceFormula(_f255, "255", False),
    "281": SequenceFormula(_f281, "281", True),
    "130": SequenceFormula(_f130, "130", True),
    "188": SequenceFormula(_f188, "188", True),
}

_ALIASES = {"32": "32-KR", "32-kr": "32-KR", "32-zudilin": "32-Zudilin"}


def resolve_sequence_id(seq_id: str) -> str:
    key = _ALIASES.get(seq_id, _ALIASES.get(seq_id.lower(), seq_id))
    if key not in FORMULAS:
        raise SequenceEvalError(f"unknown sequence id {seq_id!r}")
    return key


def closed_form(seq_id: str, n: int, as_printed: bool = False) -> Fraction:
    """Exact value of the sequence.

    For the two flagged ids the default is the operator-validated value; pass
    as_printed=True for the literal printed sum.  closed_form(id, 0) = 1.
    """
    if n < 0:
        raise SequenceEvalError("sequence index must be >= 0")
    key = resolve_sequence_id(seq_id)
    formula = FORMULAS[key]
    if n == 0:
        return Q(1)
    if formula.printed_matches_operator or as_printed:
        return formula.evaluate(n)
    return operator_sequence(formula.operator_id, n)[n]


def operator_sequence(entry_id: str, n: int) -> list[Fraction]:
    """A_0..A_n from the catalog operator's recurrence (the oracle route)."""
    from . import catalog  # deferred: catalog depends on this module

    rec = catalog.get_entry(entry_id).recurrence()
    return run_recurrence(rec, [Q(1)], n)


def run_recurrence(rec: PRecurrence, initials: list[Fraction], n_max: int) -> list[Fraction]:
    """Exact forward solution A_0..A_{n_max}.

    The relation sum_j Q_j(n) A_{n+1-j} = 0 is applied from
    n = len(initials) - 1 on; the homogeneous solution needs only A_0, while
    secondary solutions (the zeta(4) B-sequence) seed more values and satisfy
    the relation only from there.
    """
    if not initials:
        raise SequenceEvalError("need at least one initial value")
    values = [Q(v) for v in initials]
    for n in range(len(values) - 1, n_max):
        lead = rec.q[0](Q(n))
        if lead == 0:
            raise SequenceEvalError(f"leading recurrence coefficient vanishes at n={n}")
        acc = Q(0)
        for j in range(1, rec.span + 1):
            idx = n + 1 - j
            if idx >= 0:
                qj = rec.q[j](Q(n))
                if qj:
                    acc += qj * values[idx]
        values.append(-acc / lead)
    return values[: n_max + 1]


def hadamard(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Termwise product of two coefficient sequences."""
    if len(a) != len(b):
        raise SequenceEvalError("hadamard product needs equal-length sequences")
    return [x * y for x, y in zip(a, b)]


# -- Laurent constant term ----------------------------------------------------

NUM_CT_VARIABLES = 5


def constant_term_power(n: int) -> int:
    """Constant term of (x+y+z+t+u + 1/x+1/y+1/z+1/t+1/u)^(2n).

    Computed by iterated exact convolution on the five-dimensional exponent
    lattice (each variable's exponent stays within +-2n).  int64 is exact up
    to n = 9 because every entry is bounded by the total count 10^(2n); the
    slower object dtype takes over beyond that.
    """
    if n < 0:
        raise SequenceEvalError("constant_term_power needs n >= 0")
    if n == 0:
        return 1
    import numpy as np

    steps = 2 * n
    dtype = np.int64 if 10**steps < 2**62 else object
    arr = np.ones((1,) * NUM_CT_VARIABLES, dtype=dtype)
    for _ in range(steps):
        grown = tuple(s + 2 for s in arr.shape)
        out = np.zeros(grown, dtype=dtype)
        for axis in range(NUM_CT_VARIABLES):
            up = [slice(1, -1)] * NUM_CT_VARIABLES
            down = [slice(1, -1)] * NUM_CT_VARIABLES
            up[axis] = slice(2, None)
            down[axis] = slice(0, -2)
            out[tuple(up)] += arr
            out[tuple(down)] += arr
        arr = out
    center = (steps,) * NUM_CT_VARIABLES
    return int(arr[center])


# -- zeta(4) ------------------------------------------------------------------

_PI_SCALE = 70  # digits carried for pi; error < 10^-68 after the 4th power


def _arctan_inv_scaled(x: int, prec: int) -> int:
    """floor-accurate sum of 10^prec * arctan(1/x) (Gregory series)."""
    scale = 10**prec
    total = 0
    k = 0
    xx = x * x
    power = x  # x^(2k+1)
    while True:
        term = scale // ((2 * k + 1) * power)
        if term == 0:
            break
        total += term if k % 2 == 0 else -term
        power *= xx
        k += 1
    return total


@lru_cache(maxsize=None)
def pi_reference(prec: int = _PI_SCALE) -> Fraction:
    """pi via Machin's formula pi = 16 arctan(1/5) - 4 arctan(1/239).

    Returned as an exact rational within 10^-(prec-2) of pi (the scaled
    integer sums are floor-accurate to a few units in the last place).
    """
    guard = prec + 10
    val = 16 * _arctan_inv_scaled(5, guard) - 4 * _arctan_inv_scaled(239, guard)
    return Q(val, 10**guard)


@lru_cache(maxsize=None)
def zeta4_reference() -> Fraction:
    """pi^4/90 as an exact rational accurate to well below 10^-60."""
    return pi_reference() ** 4 / 90


def fraction_to_decimal(x: Fraction, sig: int = 10) -> str:
    """Scientific-notation string with `sig` significant digits, exact input."""
    if sig < 1:
        raise ValueError("need at least one significant digit")
    if x == 0:
        return "0e+00"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = len(str(x.numerator)) - len(str(x.denominator))
    while x >= Q(10) ** (e + 1):
        e += 1
    while x < Q(10) ** e:
        e -= 1
    mant = x / Q(10) ** e
    scaled = mant * 10 ** (sig - 1)
    digits = scaled.numerator // scaled.denominator
    if 2 * (scaled - digits) >= 1:
        digits += 1
    if digits >= 10**sig:
        digits //= 10
        e += 1
    s = str(digits)
    body = s[0] if sig == 1 else f"{s[0]}.{s[1:]}"
    return f"{sign}{body}e{e:+03d}"


@dataclass(frozen=True)
class Zeta4Report:
    n: int
    a_n: Fraction
    b_n: Fraction
    ratio: Fraction
    reference: Fraction
    error: Fraction
    error_decimal: str


def apery_pair(n_max: int) -> tuple[list[Fraction], list[Fraction]]:
    """The two recurrence solutions: A (1, 12, ...) and B (0, 13, ...)."""
    from . import catalog

    rec = catalog.get_entry("32").recurrence()
    a = run_recurrence(rec, [Q(1)], n_max)
    b = run_recurrence(rec, [Q(0), Q(13)], n_max)
    return a, b


def zeta4_error(n: int, digits: int = 10) -> Zeta4Report:
    """|B_n/A_n - pi^4/90| with everything except pi handled exactly."""
    if n < 1:
        raise SequenceEvalError("zeta4_error needs n >= 1")
    a, b = apery_pair(n)
    ratio = b[n] / a[n]
    ref = zeta4_reference()
    err = abs(ratio - ref)
    return Zeta4Report(n, a[n], b[n], ratio, ref, err, fraction_to_decimal(err, digits))
