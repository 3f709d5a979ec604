"""Series for sqrt(p) built from a Pell solution (n, m) with n^2 - p*m^2 = 1.

Six constructions, labelled A-F.  A, C and E expand (n/m)/sqrt(p) and use the
prefactor mp/n; B, D and F expand (m/n)*sqrt(p) and use the prefactor n/m.

    A  1F0  z = 1/(pm^2 + 1)
    B  1F0  z = -1/(pm^2)
    C  2F1  z = 4pm^2/(pm^2 + 1)^2
    D  2F1  z = -4(pm^2 + 1)/(p^2 m^4)           needs p^2 m^4 > 4pm^2 + 4
    E  3F2  z = 27p^2 m^4/(4(pm^2 + 1)^3)        needs 4(pm^2 + 1)^3 > 27p^2 m^4
    F  3F2  z = -27(pm^2 + 1)^2/(4p^3 m^6)       needs 4p^3 m^6 > 27(pm^2 + 1)^2
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from ._intstr import decimal_to_int, int_to_decimal
from .hyper import SeriesFamily
from .pell import InvalidSolution, PellSolution, amplify_power, fundamental_solution

__all__ = [
    "NotApplicable",
    "NotApplicableError",
    "SeriesSpec",
    "Theorem",
    "applicable",
    "build",
    "build_all",
    "iter_outcomes",
]

log = logging.getLogger(__name__)


class Theorem(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"

    @property
    def family(self) -> SeriesFamily:
        return _FAMILY[self]

    @property
    def inverted(self) -> bool:
        """True when the series sums to (n/m)/sqrt(p), so the prefactor is mp/n."""
        return self in (Theorem.A, Theorem.C, Theorem.E)


_FAMILY = {
    Theorem.A: SeriesFamily.F10_HALF,
    Theorem.B: SeriesFamily.F10_HALF,
    Theorem.C: SeriesFamily.F21_QUARTER,
    Theorem.D: SeriesFamily.F21_QUARTER,
    Theorem.E: SeriesFamily.F32_SIXTH,
    Theorem.F: SeriesFamily.F32_SIXTH,
}


class NotApplicableError(ValueError):
    """The side condition of a construction fails for this (p, m)."""


@dataclass(frozen=True)
class NotApplicable:
    """Outcome recorded in batch construction instead of raising."""

    theorem: Theorem
    p: int
    m: int
    n: int
    reason: str


def applicable(theorem: Theorem | str, p: int, m: int) -> bool:
    theorem = Theorem(theorem)
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    pm2 = p * m * m
    if theorem is Theorem.D:
        return pm2 * pm2 > 4 * pm2 + 4
    if theorem is Theorem.E:
        return 4 * (pm2 + 1) ** 3 > 27 * pm2 * pm2
    if theorem is Theorem.F:
        return 4 * pm2**3 > 27 * (pm2 + 1) ** 2
    return True


def _argument(theorem: Theorem, p: int, m: int) -> Fraction:
    pm2 = p * m * m
    if theorem is Theorem.A:
        return Fraction(1, pm2 + 1)
    if theorem is Theorem.B:
        return Fraction(-1, pm2)
    if theorem is Theorem.C:
        return Fraction(4 * pm2, (pm2 + 1) ** 2)
    if theorem is Theorem.D:
        return Fraction(-4 * (pm2 + 1), pm2 * pm2)
    if theorem is Theorem.E:
        return Fraction(27 * pm2 * pm2, 4 * (pm2 + 1) ** 3)
    return Fraction(-27 * (pm2 + 1) ** 2, 4 * pm2**3)


@dataclass(frozen=True)
class SeriesSpec:
    """sqrt(p) = prefactor * (family series at argument)."""

    p: int
    m: int
    n: int
    theorem: Theorem
    prefactor: Fraction
    argument: Fraction

    @property
    def family(self) -> SeriesFamily:
        return self.theorem.family

    def to_dict(self) -> dict:
        return {
            "p": int_to_decimal(self.p),
            "m": int_to_decimal(self.m),
            "n": int_to_decimal(self.n),
            "theorem": self.theorem.value,
            "prefactor": _frac_to_dict(self.prefactor),
            "argument": _frac_to_dict(self.argument),
        }

    @classmethod
    def from_dict(cls, data: dict) -> SeriesSpec:
        """Parse and rebuild; raises if the stored constants disagree with the construction."""
        spec = cls(
            p=decimal_to_int(data["p"]),
            m=decimal_to_int(data["m"]),
            n=decimal_to_int(data["n"]),
            theorem=Theorem(data["theorem"]),
            prefactor=_frac_from_dict(data["prefactor"]),
            argument=_frac_from_dict(data["argument"]),
        )
        rebuilt = build(spec.theorem, PellSolution(spec.p, spec.n, spec.m))
        if rebuilt != spec:
            raise ValueError(f"stored series does not match construction {spec.theorem.value}")
        return spec


def _frac_to_dict(q: Fraction) -> dict:
    return {"num": int_to_decimal(q.numerator), "den": int_to_decimal(q.denominator)}


def _frac_from_dict(d: dict) -> Fraction:
    return Fraction(decimal_to_int(d["num"]), decimal_to_int(d["den"]))


def build(theorem: Theorem | str, sol: PellSolution) -> SeriesSpec:
    theorem = Theorem(theorem)
    p, n, m = sol.p, sol.x, sol.y
    if n * n - p * m * m != 1:
        # PellSolution validates on construction, but guard against object.__setattr__ games
        raise InvalidSolution(f"({n}, {m}) does not solve x^2 - {p}y^2 = 1")
    if not applicable(theorem, p, m):
        raise NotApplicableError(f"construction {theorem.value} not applicable for p={p}, m={m}")
    prefactor = Fraction(m * p, n) if theorem.inverted else Fraction(n, m)
    z = _argument(theorem, p, m)
    assert abs(z) < 1, (theorem, p, m, z)
    return SeriesSpec(p, m, n, theorem, prefactor, z)


def iter_outcomes(p: int, powers: Iterable[int]) -> Iterator[SeriesSpec | NotApplicable]:
    """One outcome per (power, construction), in power order then A-F."""
    powers = list(powers)
    if not powers:
        raise ValueError("powers must be nonempty")
    base = fundamental_solution(p)
    for s in powers:
        sol = amplify_power(base, s)
        for theorem in Theorem:
            if applicable(theorem, p, sol.y):
                yield build(theorem, sol)
            else:
                yield NotApplicable(theorem, p, sol.y, sol.x, "side condition fails")


def build_all(p: int, powers: Iterable[int]) -> list[SeriesSpec]:
    specs = []
    for outcome in iter_outcomes(p, powers):
        if isinstance(outcome, NotApplicable):
            log.warning(
                "skipping %s for p=%d, (n, m)=(%d, %d): %s",
                outcome.theorem.value, outcome.p, outcome.n, outcome.m, outcome.reason,
            )
        else:
            specs.append(outcome)
    return specs
