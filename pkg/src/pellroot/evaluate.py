"""Certified decimal evaluation of a :class:`~pellroot.builder.SeriesSpec`.

Terms are summed as scaled integers at ``digits + guard`` decimal places.
The first terms come straight from the exact rational recurrence; past
``EXACT_TERMS`` the term itself is carried in fixed point, because exact
numerators grow without bound.  Omitted terms are covered by the geometric
bound |t_K| <= |z|^K, valid since every term ratio lies in (0, 1).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._intstr import decimal_to_int, int_to_decimal
from .builder import SeriesSpec
from .hyper import iter_terms, term_ratio
from .pell import InvalidInstance, integer_sqrt, is_nonsquare

__all__ = [
    "BigFixed",
    "EXACT_TERMS",
    "EvalReport",
    "PrecisionOverflow",
    "convergence_table",
    "correct_digits",
    "digits_per_term",
    "evaluate",
    "format_decimal",
    "guard_digits",
    "max_digits",
    "sqrt_floor_scaled",
    "sqrt_oracle",
    "terms_needed",
]

EXACT_TERMS = 64
DEFAULT_MAX_DIGITS = 10**6


class PrecisionOverflow(ValueError):
    """Requested more digits than the configured ceiling."""


def max_digits() -> int:
    raw = os.environ.get("PELLROOT_MAX_DIGITS")
    return int(raw) if raw else DEFAULT_MAX_DIGITS


def round_div(a: int, b: int) -> int:
    """a / b rounded to nearest, ties away from zero (b > 0)."""
    q, r = divmod(abs(a), b)
    if 2 * r >= b:
        q += 1
    return q if a >= 0 else -q


@dataclass(frozen=True)
class BigFixed:
    """mantissa / 10**scale."""

    mantissa: int
    scale: int

    def __post_init__(self) -> None:
        if self.scale < 0:
            raise ValueError(f"scale must be nonnegative, got {self.scale}")

    @classmethod
    def from_fraction(cls, q: Fraction, scale: int) -> BigFixed:
        q = Fraction(q)
        return cls(round_div(q.numerator * 10**scale, q.denominator), scale)

    def __add__(self, other: BigFixed) -> BigFixed:
        if other.scale != self.scale:
            raise ValueError(f"scale mismatch: {self.scale} vs {other.scale}")
        return BigFixed(self.mantissa + other.mantissa, self.scale)

    def __sub__(self, other: BigFixed) -> BigFixed:
        return self + BigFixed(-other.mantissa, other.scale)

    def mul_fraction(self, q: Fraction) -> BigFixed:
        q = Fraction(q)
        return BigFixed(round_div(self.mantissa * q.numerator, q.denominator), self.scale)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10**self.scale)

    def truncate(self, digits: int) -> int:
        """floor(value * 10**digits) for digits <= scale."""
        if digits > self.scale:
            raise ValueError(f"cannot truncate scale {self.scale} to {digits} digits")
        return self.mantissa // 10 ** (self.scale - digits)


def format_decimal(n: int, digits: int) -> str:
    """Render n / 10**digits with exactly ``digits`` fractional digits."""
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), 10**digits)
    if digits == 0:
        return f"{sign}{int_to_decimal(whole)}"
    return f"{sign}{int_to_decimal(whole)}.{int_to_decimal(frac).zfill(digits)}"


def sqrt_floor_scaled(p: int, digits: int) -> int:
    """floor(sqrt(p) * 10**digits) by integer Newton."""
    if digits < 0:
        raise ValueError(f"digits must be nonnegative, got {digits}")
    return integer_sqrt(p * 10 ** (2 * digits))


def sqrt_oracle(p: int, digits: int) -> str:
    """sqrt(p) truncated to ``digits`` fractional digits, independent of any series."""
    if p < 2 or not is_nonsquare(p):
        raise InvalidInstance(f"p={p} must be a nonsquare integer >= 2")
    return format_decimal(sqrt_floor_scaled(p, digits), digits)


def _log10(q: Fraction) -> float:
    return math.log10(q.numerator) - math.log10(q.denominator)


def digits_per_term(spec: SeriesSpec) -> float:
    """-log10|z|: decimal digits gained per summed term, asymptotically."""
    return -_log10(abs(spec.argument))


def terms_needed(spec: SeriesSpec, digits: int) -> int:
    """Smallest K >= 1 with |z|^K/(1 - |z|) <= 10^-(digits+2) * |c|/(1 + |c|)."""
    z = abs(spec.argument)
    c = abs(spec.prefactor)
    if z >= 1:
        raise ValueError(f"|z| = {z} >= 1")
    if z == 0:
        return 1
    zn, zd = z.numerator, z.denominator
    # zn^K * zd * 10^(d+2) * (cd + cn) <= zd^K * (zd - zn) * cn
    lhs_const = 10 ** (digits + 2) * (c.denominator + c.numerator) * zd
    rhs_const = (zd - zn) * c.numerator

    def ok(k: int) -> bool:
        return zn**k * lhs_const <= zd**k * rhs_const

    need = digits + 2 + _log10((1 + c) / c) - _log10(1 - z)
    k = max(1, math.ceil(need / -_log10(z)))
    while not ok(k):
        k += 1
    while k > 1 and ok(k - 1):
        k -= 1
    return k


def guard_digits(terms: int) -> int:
    return 10 + math.ceil(math.log10(terms + 1))


def _tail_bound(spec: SeriesSpec, terms: int) -> Fraction:
    """Bound on |c| * |sum of t_k for k >= terms|."""
    z = abs(spec.argument)
    return abs(spec.prefactor) * z**terms / (1 - z)


def _tail_ok(tail: Fraction, digits: int, guard: int) -> bool:
    # tail < 10^-(digits + guard/2), squared to stay in integers for odd guard
    return tail * tail * 10 ** (2 * digits + guard) < 1


@dataclass(frozen=True)
class EvalReport:
    spec: SeriesSpec
    digits_requested: int
    guard_digits: int
    terms_used: int
    tail_bound: Fraction
    decimal: str
    oracle_agrees: bool

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "digits": self.digits_requested,
            "guard_digits": self.guard_digits,
            "terms_used": self.terms_used,
            "tail_bound": {
                "num": int_to_decimal(self.tail_bound.numerator),
                "den": int_to_decimal(self.tail_bound.denominator),
            },
            "decimal": self.decimal,
            "oracle_agrees": self.oracle_agrees,
        }

    @classmethod
    def from_dict(cls, data: dict) -> EvalReport:
        return cls(
            spec=SeriesSpec.from_dict(data["spec"]),
            digits_requested=int(data["digits"]),
            guard_digits=int(data["guard_digits"]),
            terms_used=int(data["terms_used"]),
            tail_bound=Fraction(
                decimal_to_int(data["tail_bound"]["num"]), decimal_to_int(data["tail_bound"]["den"])
            ),
            decimal=data["decimal"],
            oracle_agrees=bool(data["oracle_agrees"]),
        )


def fixed_partial_sum(spec: SeriesSpec, terms: int, scale: int) -> BigFixed:
    """Sum t_0 .. t_{terms-1} at the given scale."""
    family, z = spec.family, spec.argument
    total = BigFixed(0, scale)
    term: Optional[BigFixed] = None
    for state in iter_terms(family, z):
        k = state.k
        if k == terms:
            return total
        if k < EXACT_TERMS:
            term = BigFixed.from_fraction(state.value, scale)
        else:
            break
        total += term
    # fixed-point recurrence from t_{EXACT_TERMS - 1} onwards
    assert term is not None
    for k in range(EXACT_TERMS - 1, terms - 1):
        term = term.mul_fraction(z * term_ratio(family, k))
        total += term
    return total


def evaluate(spec: SeriesSpec, digits: int) -> EvalReport:
    if digits < 0:
        raise ValueError(f"digits must be nonnegative, got {digits}")
    ceiling = max_digits()
    if digits > ceiling:
        raise PrecisionOverflow(f"{digits} digits exceeds the ceiling of {ceiling}")

    terms = terms_needed(spec, digits)
    while True:
        guard = guard_digits(terms)
        tail = _tail_bound(spec, terms)
        if _tail_ok(tail, digits, guard):
            break
        terms += 1

    scale = digits + guard
    series = fixed_partial_sum(spec, terms, scale)
    value = series.mul_fraction(spec.prefactor)
    truncated = value.truncate(digits)
    oracle = sqrt_floor_scaled(spec.p, digits)
    return EvalReport(
        spec=spec,
        digits_requested=digits,
        guard_digits=guard,
        terms_used=terms,
        tail_bound=tail,
        decimal=format_decimal(truncated, digits),
        oracle_agrees=abs(truncated - oracle) <= 1,
    )


def correct_digits(approx: Fraction, p: int, precision: int) -> int:
    """Largest d <= precision with |approx - sqrt(p)| < 10^-d, conservatively.

    Uses the oracle at ``precision`` places, so the count can fall short of
    the true value by one digit but never exceeds it.
    """
    scaled = approx.numerator * 10**precision // approx.denominator
    err = abs(scaled - sqrt_floor_scaled(p, precision)) + 1
    d = precision - (len(int_to_decimal(err - 1)) if err > 1 else 0)
    return max(0, d)


def convergence_table(
    spec: SeriesSpec, max_terms: int, precision: Optional[int] = None
) -> list[tuple[int, int]]:
    """(k, correct fractional digits of c * (t_0 + ... + t_{k-1})) for k = 1..max_terms.

    ``precision`` defaults to a few digits beyond what ``max_terms`` terms
    can deliver, so the table saturates only when the series has converged.
    """
    if max_terms < 1:
        raise ValueError(f"max_terms must be positive, got {max_terms}")
    if precision is None:
        precision = math.ceil((max_terms + 1) * (digits_per_term(spec) + 1)) + 20
    rows = []
    total = Fraction(0)
    for state in iter_terms(spec.family, spec.argument):
        if state.k == max_terms:
            break
        total += state.value
        rows.append((state.k + 1, correct_digits(spec.prefactor * total, spec.p, precision)))
    return rows
