"""Integer solutions of x^2 - p*y^2 = 1.

Everything here is exact integer arithmetic. The fundamental solution comes
from the continued fraction of sqrt(p); :func:`brute_force_solution` is a
plain scan over y kept as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

__all__ = [
    "InvalidInstance",
    "InvalidSolution",
    "PellInstance",
    "PellSolution",
    "amplify_binomial",
    "amplify_power",
    "brute_force_solution",
    "fundamental_solution",
    "integer_root",
    "integer_sqrt",
    "is_nonsquare",
    "pair_multiply",
]


class InvalidInstance(ValueError):
    """Raised when p is not a nonsquare integer >= 2."""


class InvalidSolution(ValueError):
    """Raised when (x, y) does not satisfy x^2 - p*y^2 = 1 with x >= 2, y >= 1."""


def integer_sqrt(n: int) -> int:
    """Return floor(sqrt(n)) by Newton iteration on integers."""
    if n < 0:
        raise ValueError(f"integer_sqrt of negative number {n}")
    if n < 2:
        return n
    # seed from a float estimate of the top bits, then round up so Newton
    # descends monotonically from above
    shift = max(0, (n.bit_length() - 100) // 2)
    x = (int(math.sqrt(n >> (2 * shift))) + 1) << shift
    while True:
        y = (x + n // x) >> 1
        if y >= x:
            return x
        x = y


def integer_root(n: int, k: int) -> int:
    """Return floor(n ** (1/k)) for n >= 0 and k >= 1 using integer Newton."""
    if k < 1:
        raise ValueError(f"root degree must be positive, got {k}")
    if n < 0:
        raise ValueError(f"integer_root of negative number {n}")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return integer_sqrt(n)
    # 2**ceil(bits/k) is always an overestimate
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def is_nonsquare(p: int) -> bool:
    if p < 1:
        raise ValueError(f"expected a positive integer, got {p}")
    r = integer_sqrt(p)
    return r * r != p


@dataclass(frozen=True)
class PellInstance:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p < 2:
            raise InvalidInstance(f"p must be an integer >= 2, got {self.p!r}")
        if not is_nonsquare(self.p):
            raise InvalidInstance(f"p={self.p} is a perfect square")


@dataclass(frozen=True)
class PellSolution:
    p: int
    x: int
    y: int

    def __post_init__(self) -> None:
        if self.x < 2 or self.y < 1:
            raise InvalidSolution(f"need x >= 2 and y >= 1, got ({self.x}, {self.y})")
        if self.x * self.x - self.p * self.y * self.y != 1:
            raise InvalidSolution(
                f"({self.x}, {self.y}) does not solve x^2 - {self.p}y^2 = 1"
            )

    def __mul__(self, other: PellSolution) -> PellSolution:
        if other.p != self.p:
            raise ValueError(f"cannot multiply solutions for p={self.p} and p={other.p}")
        x, y = pair_multiply(self.p, (self.x, self.y), (other.x, other.y))
        return PellSolution(self.p, x, y)


def pair_multiply(p: int, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    """(x, y) * (u, v) = (xu + p*yv, xv + yu), i.e. (x + y*sqrt(p))(u + v*sqrt(p))."""
    x, y = a
    u, v = b
    return x * u + p * y * v, x * v + y * u


def _as_instance(inst: PellInstance | int) -> PellInstance:
    return inst if isinstance(inst, PellInstance) else PellInstance(inst)


def fundamental_solution(inst: PellInstance | int) -> PellSolution:
    """Minimal positive solution via the periodic continued fraction of sqrt(p).

    The convergent preceding the end of the first period solves the equation
    when the period is even; for odd periods it solves x^2 - p*y^2 = -1 and
    is squared in the pair algebra.
    """
    p = _as_instance(inst).p
    a0 = integer_sqrt(p)
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    period = 0
    while True:
        m = d * a - m
        d = (p - m * m) // d
        a = (a0 + m) // d
        period += 1
        if a == 2 * a0:
            break
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    if period % 2:
        h, k = pair_multiply(p, (h, k), (h, k))
    return PellSolution(p, h, k)


# y mod _WHEEL fixes p*y^2 + 1 mod each of these; only y whose residues are
# squares everywhere need an exact test
_WHEEL_MODULI = (64, 9, 5, 7, 11)
_WHEEL = 64 * 9 * 5 * 7 * 11
_FILTER_MODULI = (13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_SQUARES = {
    q: np.isin(np.arange(q), np.arange(q) ** 2 % q)
    for q in (*_WHEEL_MODULI, *_FILTER_MODULI)
}
_SMALL_SCAN = 1 << 14
_BLOCKS = 256


def _passes(p: int, ys: np.ndarray, moduli: tuple[int, ...]) -> np.ndarray:
    keep = np.ones(ys.shape, dtype=bool)
    for q in moduli:
        r = ys % q
        keep &= _SQUARES[q][(p % q * r * r + 1) % q]
    return keep


def brute_force_solution(inst: PellInstance | int, y_max: int) -> PellSolution | None:
    """Scan y = 1..y_max and return the first y with p*y^2 + 1 a perfect square.

    Large ranges skip y for which p*y^2 + 1 is a non-square modulo some small
    number; every remaining y is tested exactly, in increasing order.
    """
    p = _as_instance(inst).p
    if y_max < 1:
        raise ValueError(f"y_max must be positive, got {y_max}")
    if y_max <= _SMALL_SCAN or p * y_max * y_max + 1 >= 1 << 62:
        return _scan_python(p, 1, y_max)
    wheel = np.arange(_WHEEL, dtype=np.int64)
    wheel = wheel[_passes(p, wheel, _WHEEL_MODULI)]
    step = _WHEEL * _BLOCKS
    for lo in range(0, y_max + 1, step):
        bases = np.arange(lo, min(lo + step, y_max + 1), _WHEEL, dtype=np.int64)
        ys = (bases[:, None] + wheel[None, :]).ravel()
        ys = ys[(ys >= 1) & (ys <= y_max)]
        ys = ys[_passes(p, ys, _FILTER_MODULI)]
        for y in ys.tolist():
            n = p * y * y + 1
            x = integer_sqrt(n)
            if x * x == n:
                return PellSolution(p, x, y)
    return None


def _scan_python(p: int, lo: int, hi: int) -> PellSolution | None:
    for y in range(lo, hi + 1):
        n = p * y * y + 1
        x = integer_sqrt(n)
        if x * x == n:
            return PellSolution(p, x, y)
    return None


def amplify_binomial(base: PellSolution, s: int) -> PellSolution:
    """s-th solution from the two binomial sums of (x1 + y1*sqrt(p))^s."""
    if s < 1:
        raise ValueError(f"power s must be a positive integer, got {s}")
    p, x1, y1 = base.p, base.x, base.y
    xs = sum(comb(s, 2 * k) * p**k * y1 ** (2 * k) * x1 ** (s - 2 * k) for k in range(s // 2 + 1))
    ys = sum(
        comb(s, 1 + 2 * k) * p**k * y1 ** (1 + 2 * k) * x1 ** (s - 1 - 2 * k)
        for k in range((s - 1) // 2 + 1)
    )
    return PellSolution(p, xs, ys)


def amplify_power(base: PellSolution, s: int) -> PellSolution:
    """s-th solution by square-and-multiply in the pair algebra."""
    if s < 1:
        raise ValueError(f"power s must be a positive integer, got {s}")
    p = base.p
    result = (1, 0)
    sq = (base.x, base.y)
    while s:
        if s & 1:
            result = pair_multiply(p, result, sq)
        s >>= 1
        if s:
            sq = pair_multiply(p, sq, sq)
    return PellSolution(p, *result)
