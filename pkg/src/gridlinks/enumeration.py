"""Exhaustive generation of every grid diagram at small n.

Diagrams come out as (lexicographic permutation, lexicographic derangement)
pairs via :func:`gridlinks.grid.from_derangement`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable

from gridlinks import _kernels
from gridlinks.errors import SizeLimitExceeded
from gridlinks.grid import LinkGrid, from_derangement

MAX_N = 7
HARD_MAX_N = 8


def _check_size(n: int, allow_large: bool) -> None:
    if n < 2:
        raise ValueError("n must be at least 2")
    limit = HARD_MAX_N if allow_large else MAX_N
    if n > limit:
        hint = "" if allow_large or n > HARD_MAX_N else " (pass allow_large=True for n=8)"
        raise SizeLimitExceeded(f"exhaustive enumeration is capped at n={limit}, got n={n}{hint}")


def derangements(n: int) -> list[tuple[int, ...]]:
    """All derangements of 1..n in lexicographic order."""
    return [p for p in permutations(range(1, n + 1)) if all(v != i for i, v in enumerate(p, 1))]


def enumerate_links(n: int, visitor: Callable[[LinkGrid], None], allow_large: bool = False) -> None:
    """Call ``visitor`` once on every valid n x n diagram."""
    _check_size(n, allow_large)
    ders = derangements(n)
    for black in permutations(range(1, n + 1)):
        for delta in ders:
            visitor(from_derangement(black, delta))


@dataclass(frozen=True)
class TableRow:
    """One row of component counts: ``counts[k]`` diagrams with k components."""

    n: int
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def mean_components(self) -> Fraction:
        return Fraction(sum(k * c for k, c in self.counts.items()), self.total)


def exact_table_by_enumeration(n: int, allow_large: bool = False) -> TableRow:
    """Tally component counts over every diagram, in compiled code."""
    _check_size(n, allow_large)
    tally = _kernels.tally_components(n, _kernels.all_derangements(n))
    return TableRow(n, {k: int(c) for k, c in enumerate(tally) if c})


def enumerate_knot_diagrams(n: int, allow_large: bool = False) -> int:
    """Number of diagrams whose transition permutation is one n-cycle."""
    return exact_table_by_enumeration(n, allow_large).counts.get(1, 0)


def writhe_histogram(n: int, knots_only: bool = False) -> dict[int, int]:
    """Writhe of every n x n diagram (or every knot diagram), tallied."""
    from gridlinks.invariants import component_count, writhe

    hist: dict[int, int] = {}

    def visit(d: LinkGrid) -> None:
        if knots_only and component_count(d) != 1:
            return
        w = writhe(d)
        hist[w] = hist.get(w, 0) + 1

    enumerate_links(n, visit)
    return dict(sorted(hist.items()))


def histogram_moment(hist: dict[int, int], k: int) -> Fraction:
    total = sum(hist.values())
    return Fraction(sum(c * w**k for w, c in hist.items()), total)

