"""Exact atomic probability measures on vertex ids, and sampling from them.

All weights are `fractions.Fraction`; nothing in this module (or anywhere
downstream) touches floating point, because mean-set membership is an exact
argmin and float ties would corrupt it.  Measure files therefore carry
positive integer masses (or exact decimal fractions) that are normalized by
their total.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .errors import MeasureFormatError, RankMismatchError


class AtomicMeasure:
    """Finitely supported probability measure with exact rational weights."""

    __slots__ = ("_atoms", "_inversion")

    def __init__(self, atoms: Mapping):
        cleaned: dict = {}
        total = Fraction(0)
        for v, w in atoms.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} at {v!r}")
            if w == 0:
                continue
            cleaned[v] = w
            total += w
        if not cleaned:
            raise ValueError("measure must have nonempty support")
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        self._atoms = dict(sorted(cleaned.items()))
        self._inversion = None

    @classmethod
    def from_masses(cls, masses: Mapping) -> "AtomicMeasure":
        """Normalize arbitrary positive masses by their total."""
        total = sum(Fraction(m) for m in masses.values())
        if total <= 0:
            raise ValueError("total mass must be positive")
        return cls({v: Fraction(m) / total for v, m in masses.items()})

    @classmethod
    def point_mass(cls, v) -> "AtomicMeasure":
        return cls({v: Fraction(1)})

    @classmethod
    def uniform(cls, vertices: Iterable) -> "AtomicMeasure":
        vs = list(vertices)
        if not vs:
            raise ValueError("uniform measure needs at least one vertex")
        w = Fraction(1, len(vs))
        return cls({v: w for v in vs})

    def __getitem__(self, v) -> Fraction:
        return self._atoms.get(v, Fraction(0))

    def __contains__(self, v) -> bool:
        return v in self._atoms

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomicMeasure) and self._atoms == other._atoms

    def __repr__(self) -> str:
        inner = ", ".join(f"{v!r}: {w}" for v, w in self._atoms.items())
        return f"AtomicMeasure({{{inner}}})"

    def items(self):
        return self._atoms.items()

    def support(self) -> tuple:
        return tuple(self._atoms)

    def numerators(self) -> tuple[int, dict]:
        """Common denominator D and integer numerators summing to D.

        Weight computations run on these integers and divide once at the end.
        """
        denom = lcm(*(w.denominator for w in self._atoms.values()))
        return denom, {v: int(w * denom) for v, w in self._atoms.items()}

    def _cumulative(self):
        if self._inversion is None:
            denom, nums = self.numerators()
            atoms = list(nums)
            cum = []
            acc = 0
            for v in atoms:
                acc += nums[v]
                cum.append(acc)
            self._inversion = (denom, atoms, cum)
        return self._inversion

    def total_variation(self, other: "AtomicMeasure") -> Fraction:
        keys = set(self._atoms) | set(other._atoms)
        return sum((abs(self[v] - other[v]) for v in keys), Fraction(0)) / 2


class Sample:
    """Multiset of observed vertices with exact integer counts."""

    __slots__ = ("counts", "n")

    def __init__(self, counts: Mapping):
        cleaned = {v: int(c) for v, c in counts.items() if c}
        if any(c < 0 for c in cleaned.values()):
            raise ValueError("counts must be positive")
        n = sum(cleaned.values())
        if n == 0:
            raise ValueError("sample must be nonempty")
        self.counts = dict(sorted(cleaned.items()))
        self.n = n

    @classmethod
    def from_draws(cls, draws: Iterable) -> "Sample":
        counts: dict = {}
        for v in draws:
            counts[v] = counts.get(v, 0) + 1
        return cls(counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Sample) and self.counts == other.counts

    def __repr__(self) -> str:
        return f"Sample({self.counts})"


def draw(mu: AtomicMeasure, n: int, rng: random.Random) -> Sample:
    """n i.i.d. draws from mu, aggregated into counts.

    Uses exact cumulative-weight inversion: a uniform integer below the
    common denominator selects an atom, so the draw distribution is exactly
    mu, not a float approximation of it.
    """
    if n < 1:
        raise ValueError("need n >= 1 draws")
    denom, atoms, cum = mu._cumulative()
    counts = [0] * len(atoms)
    for _ in range(n):
        counts[bisect_right(cum, rng.randrange(denom))] += 1
    return Sample({v: c for v, c in zip(atoms, counts) if c})


def empirical(s: Sample) -> AtomicMeasure:
    """The relative-frequency measure count/n of a sample."""
    n = s.n
    return AtomicMeasure({v: Fraction(c, n) for v, c in s.counts.items()})


def shift(mu: AtomicMeasure, g) -> AtomicMeasure:
    """Left-translate every atom by the word g; weights are unchanged.

    Atoms must be serialized words (or ReducedWord values) of g's rank.
    """
    from . import freegroup

    translated: dict = {}
    for v, w in mu.items():
        if isinstance(v, freegroup.ReducedWord):
            word = v
        elif isinstance(v, str):
            try:
                word = freegroup.word_from_str(v, g.rank)
            except ValueError as exc:
                raise RankMismatchError(f"atom {v!r} is not a rank-{g.rank} word") from exc
        else:
            raise RankMismatchError(f"atom {v!r} is not a free-group vertex")
        moved = freegroup.multiply(g, word)
        key = moved if isinstance(v, freegroup.ReducedWord) else freegroup.word_to_str(moved)
        translated[key] = w
    return AtomicMeasure(translated)


def parse_mass(token: str) -> Fraction:
    """Parse an exact positive mass: integer, fraction p/q, or decimal string."""
    try:
        mass = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise MeasureFormatError(f"bad mass {token!r}") from None
    if mass <= 0:
        raise MeasureFormatError(f"mass must be positive, got {token!r}")
    return mass


def parse_measure(text: str, vertex_parser=None) -> AtomicMeasure:
    """Parse 'vertex mass' lines into a normalized measure.

    vertex_parser maps the vertex token to a vertex id (default: int when the
    token looks like an integer, else the raw string).
    """
    masses: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MeasureFormatError(f"line {lineno}: expected 'vertex mass', got {raw!r}")
        token, mass_tok = parts
        if vertex_parser is not None:
            try:
                v = vertex_parser(token)
            except ValueError as exc:
                raise MeasureFormatError(f"line {lineno}: bad vertex {token!r}: {exc}") from None
        else:
            v = int(token) if token.lstrip("-").isdigit() else token
        mass = parse_mass(mass_tok)
        masses[v] = masses.get(v, 0) + mass
    if not masses:
        raise MeasureFormatError("measure file has no atoms")
    return AtomicMeasure.from_masses(masses)


def load_measure(path, vertex_parser=None) -> AtomicMeasure:
    with open(path, encoding="utf-8") as fh:
        return parse_measure(fh.read(), vertex_parser=vertex_parser)
