"""The 72 reference expansions for p in {2, 3, 5, 7, 11, 13} and their replay.

``data/golden.json`` is a hand-checked transcription of the published
constants.  Replaying rebuilds each entry from (p, s, theorem) alone and
compares the results exactly, so a mismatch is either a construction bug or
a transcription error to be adjudicated by a human.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .builder import NotApplicableError, SeriesSpec, Theorem, build
from .evaluate import evaluate
from .pell import amplify_binomial, fundamental_solution

__all__ = ["EntryResult", "GoldenEntry", "check_entry", "load_corpus", "replay"]


@dataclass(frozen=True)
class GoldenEntry:
    locator: str
    p: int
    theorem: Theorem
    s: int
    n: int
    m: int
    prefactor: Fraction
    argument: Fraction

    @classmethod
    def from_dict(cls, d: dict) -> GoldenEntry:
        return cls(
            locator=d["locator"],
            p=int(d["p"]),
            theorem=Theorem(d["theorem"]),
            s=int(d["s"]),
            n=int(d["n"]),
            m=int(d["m"]),
            prefactor=Fraction(int(d["prefactor"]["num"]), int(d["prefactor"]["den"])),
            argument=Fraction(int(d["argument"]["num"]), int(d["argument"]["den"])),
        )

    def to_dict(self) -> dict:
        return {
            "locator": self.locator,
            "p": str(self.p),
            "theorem": self.theorem.value,
            "s": str(self.s),
            "n": str(self.n),
            "m": str(self.m),
            "prefactor": {"num": str(self.prefactor.numerator), "den": str(self.prefactor.denominator)},
            "argument": {"num": str(self.argument.numerator), "den": str(self.argument.denominator)},
        }


def load_corpus(path: Optional[Union[str, Path]] = None) -> list[GoldenEntry]:
    if path is None:
        raw = resources.files("pellroot").joinpath("data/golden.json").read_text()
    else:
        raw = Path(path).read_text()
    return [GoldenEntry.from_dict(d) for d in json.loads(raw)]


@dataclass(frozen=True)
class EntryResult:
    entry: GoldenEntry
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def line(self) -> str:
        e = self.entry
        head = f"{'PASS' if self.ok else 'FAIL'} {e.locator:<14} p={e.p:<3} s={e.s} {e.theorem.value}"
        return head if self.ok else f"{head}  {'; '.join(self.problems)}"


def check_entry(entry: GoldenEntry, digits: int = 30) -> EntryResult:
    problems = []
    if entry.n * entry.n - entry.p * entry.m * entry.m != 1:
        problems.append(f"stored ({entry.n}, {entry.m}) does not solve x^2 - {entry.p}y^2 = 1")
    sol = amplify_binomial(fundamental_solution(entry.p), entry.s)
    if (sol.x, sol.y) != (entry.n, entry.m):
        problems.append(f"solution ({sol.x}, {sol.y}) != stored ({entry.n}, {entry.m})")
    try:
        spec: Optional[SeriesSpec] = build(entry.theorem, sol)
    except NotApplicableError as exc:
        spec = None
        problems.append(str(exc))
    if spec is not None:
        if spec.prefactor != entry.prefactor:
            problems.append(f"prefactor {spec.prefactor} != stored {entry.prefactor}")
        if spec.argument != entry.argument:
            problems.append(f"argument {spec.argument} != stored {entry.argument}")
        if not evaluate(spec, digits).oracle_agrees:
            problems.append(f"evaluation disagrees with oracle at {digits} digits")
    return EntryResult(entry, tuple(problems))


def replay(entries: Iterable[GoldenEntry], digits: int = 30, jobs: int = 1) -> list[EntryResult]:
    """Check every entry, preserving corpus order."""
    entries = list(entries)
    if jobs <= 1:
        return [check_entry(e, digits) for e in entries]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(check_entry, entries, [digits] * len(entries)))
