"""Exact term recurrences for the three hypergeometric kernels.

A kernel with numerator parameters a_i and denominator parameters b_j has
terms t_0 = 1 and

    t_{k+1} = t_k * z * prod(a_i + k) / ((1 + k) * prod(b_j + k)).

The same recurrence, with parameters depending on a rational exponent ``a``,
drives :func:`verify_identity`, which checks the closed forms
(1 - x)^(-a) and (1 + x)^a to a requested number of digits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator, Sequence

from .pell import integer_root

__all__ = [
    "DivergentArgument",
    "Identity",
    "PreconditionViolation",
    "SeriesFamily",
    "TermState",
    "identity_argument",
    "identity_parameters",
    "iter_terms",
    "next_term",
    "partial_sum",
    "ratio_sup_bound",
    "term_ratio",
    "verify_identity",
]

F = Fraction


class DivergentArgument(ValueError):
    """Raised for |z| >= 1."""


class PreconditionViolation(ValueError):
    """Raised when an identity is requested outside its stated domain."""


class SeriesFamily(enum.Enum):
    """The kernels obtained at exponent 1/2: 1F0, 2F1 and 3F2."""

    F10_HALF = ((F(1, 2),), ())
    F21_QUARTER = ((F(1, 4), F(3, 4)), (F(3, 2),))
    F32_SIXTH = ((F(1, 2), F(1, 6), F(5, 6)), (F(3, 4), F(5, 4)))

    @property
    def numerator_params(self) -> tuple[Fraction, ...]:
        return self.value[0]

    @property
    def denominator_params(self) -> tuple[Fraction, ...]:
        return self.value[1]


def _params(family: SeriesFamily | tuple) -> tuple[Sequence[Fraction], Sequence[Fraction]]:
    if isinstance(family, SeriesFamily):
        return family.value
    return family


def _check_denominators(den: Sequence[Fraction]) -> None:
    for b in den:
        if b <= 0 and b.denominator == 1:
            raise ValueError(f"denominator parameter {b} is zero or a negative integer")


def term_ratio(family: SeriesFamily | tuple, k: int) -> Fraction:
    """prod(a_i + k) / ((1 + k) * prod(b_j + k)) as an exact rational."""
    num, den = _params(family)
    return prod((a + k for a in num), start=F(1)) / ((1 + k) * prod((b + k for b in den), start=F(1)))


@dataclass(frozen=True)
class TermState:
    k: int
    value: Fraction


def next_term(state: TermState, family: SeriesFamily | tuple, z: Fraction) -> TermState:
    if state.k < 0:
        raise ValueError(f"term index must be nonnegative, got {state.k}")
    return TermState(state.k + 1, state.value * F(z) * term_ratio(family, state.k))


def iter_terms(family: SeriesFamily | tuple, z: Fraction) -> Iterator[TermState]:
    """Yield t_0, t_1, ... exactly."""
    state = TermState(0, F(1))
    while True:
        yield state
        state = next_term(state, family, z)


def partial_sum(family: SeriesFamily | tuple, z: Fraction, K: int) -> Fraction:
    """Exact sum of the first K terms t_0 .. t_{K-1}."""
    z = F(z)
    if abs(z) >= 1:
        raise DivergentArgument(f"|z| = {abs(z)} >= 1")
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    total = F(0)
    for state in iter_terms(family, z):
        if state.k == K:
            return total
        total += state.value
    raise AssertionError("unreachable")


def ratio_sup_bound(family: SeriesFamily | tuple, k0: int) -> Fraction:
    """Upper bound on |term_ratio(family, k)| over all k >= k0.

    Numerator parameters are paired with sorted denominator parameters
    (including the factorial's 1).  Each pair (a + k)/(b + k) is at most 1
    when a <= b and is decreasing in k when a > b, provided both sides are
    positive from k0 on.
    """
    num, den = _params(family)
    num = sorted(num)
    den = sorted([F(1), *den])
    if len(num) != len(den):
        raise ValueError("bound needs as many numerator as denominator parameters")
    bound = F(1)
    for a, b in zip(num, den):
        if a + k0 <= 0 or b + k0 <= 0:
            raise ValueError(f"k0={k0} too small for parameters {a}, {b}")
        if a > b:
            bound *= (a + k0) / (b + k0)
    return bound


class Identity(enum.Enum):
    """Closed-form hypergeometric identities parameterized by an exponent a.

    BINOMIAL:  1F0(a; -; x)                                        = (1 - x)^(-a)
    QUADRATIC: 2F1(a/2, 1/2 + a/2; 1 + a; 4x/(1 + x)^2)            = (1 + x)^a
    CUBIC:     3F2(a/3, 1/3 + a/3, 2/3 + a/3; 1/2 + a/2, 1 + a/2;
                   27x/(4(1 + x)^3))                               = (1 + x)^a
    """

    BINOMIAL = "binomial"
    QUADRATIC = "quadratic"
    CUBIC = "cubic"


def identity_parameters(which: Identity, a: Fraction) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    a = F(a)
    if which is Identity.BINOMIAL:
        return (a,), ()
    if which is Identity.QUADRATIC:
        return (a / 2, F(1, 2) + a / 2), (1 + a,)
    return (a / 3, F(1, 3) + a / 3, F(2, 3) + a / 3), (F(1, 2) + a / 2, 1 + a / 2)


def identity_argument(which: Identity, x: Fraction) -> Fraction:
    x = F(x)
    if which is Identity.BINOMIAL:
        return x
    if which is Identity.QUADRATIC:
        return 4 * x / (1 + x) ** 2
    return 27 * x / (4 * (1 + x) ** 3)


_ALLOWED_EXPONENT_DENOMINATORS = {1, 2, 3, 4, 6}


def _rational_power_floor(base: Fraction, a: Fraction, scale: int) -> int:
    """floor(base**a * 10**scale) for base > 0 and a with small denominator."""
    u, v = a.numerator, a.denominator
    q = base**u
    return integer_root(q.numerator * 10 ** (v * scale) // q.denominator, v)


def _fixed_series_sum(num, den, z: Fraction, scale: int) -> int:
    """Sum the series to within a few units of 10**-scale, returning the mantissa.

    Terms are exact rationals rounded individually; summation stops once the
    geometric tail bound drops below one unit.
    """
    unit = 10**scale
    total = 0
    state = TermState(0, F(1))
    params = (num, den)
    absz = abs(z)
    while True:
        total += round(state.value * unit)
        if state.value == 0:
            return total
        k = state.k
        # ratios beyond index k+1 are bounded only once every shifted parameter is positive
        if all(c + k + 1 > 0 for c in (*num, *den)):
            q = absz * ratio_sup_bound(params, k + 1)
            if q < 1:
                nxt = abs(state.value) * absz * abs(term_ratio(params, k))
                if nxt / (1 - q) * unit < 1:
                    return total
        state = next_term(state, params, z)


def verify_identity(which: Identity, a: Fraction, x: Fraction, digits: int) -> bool:
    """Check that both sides of an identity agree to ``digits`` decimal places.

    The left side is summed in fixed point; the right side is a rational
    raised to ``a`` and rooted with integer Newton, so ``a`` must have
    denominator 1, 2, 3, 4 or 6.
    """
    a, x = F(a), F(x)
    if a.denominator not in _ALLOWED_EXPONENT_DENOMINATORS:
        raise PreconditionViolation(f"exponent {a} has unsupported denominator")
    if digits < 1:
        raise PreconditionViolation(f"digits must be positive, got {digits}")
    if x <= -1:
        raise PreconditionViolation(f"x = {x} must exceed -1")
    z = identity_argument(which, x)
    if abs(z) >= 1:
        raise PreconditionViolation(f"series argument {z} for x = {x} is outside |z| < 1")
    num, den = identity_parameters(which, a)
    _check_denominators(den)

    guard = 10
    scale = digits + guard
    lhs = _fixed_series_sum(num, den, z, scale)
    base = 1 - x if which is Identity.BINOMIAL else 1 + x
    exponent = -a if which is Identity.BINOMIAL else a
    if exponent < 0:
        base, exponent = 1 / base, -exponent
    rhs = _rational_power_floor(base, exponent, scale)
    return abs(lhs - rhs) * 10**digits < 10**scale
