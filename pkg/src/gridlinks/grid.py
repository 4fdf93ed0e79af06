"""Grid diagrams and knot encodings.

Conventions: rows are numbered 1..n from bottom to top, columns 1..n from left
to right, and every permutation is stored 1-based. A column arc runs from the
black dot to the white dot; a row arc runs from the white dot to the black dot.
Arcs are straight planar segments (no wraparound on the torus).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from gridlinks import _kernels
from gridlinks.errors import Collision, NotADerangement, NotAPermutation


def _as_perm(values: Iterable[int], name: str) -> np.ndarray:
    arr = np.array(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.int64)
    if arr.ndim != 1:
        raise NotAPermutation(f"{name} must be one-dimensional")
    n = arr.shape[0]
    if n and (arr.min() < 1 or arr.max() > n):
        raise NotAPermutation(f"{name} has an entry outside 1..{n}")
    if np.bincount(arr, minlength=n + 1)[1:].max(initial=0) > 1:
        raise NotAPermutation(f"{name} has a duplicate entry")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LinkGrid:
    """An n x n grid diagram given by the column of each row's black and white dot."""

    n: int
    black_col: np.ndarray
    white_col: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, LinkGrid):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.black_col, other.black_col)
            and np.array_equal(self.white_col, other.white_col)
        )

    def __hash__(self):
        return hash((self.n, self.black_col.tobytes(), self.white_col.tobytes()))

    def __repr__(self):
        return f"LinkGrid(n={self.n}, black_col={self.black_col.tolist()}, white_col={self.white_col.tolist()})"

    def zero_based(self) -> tuple[np.ndarray, np.ndarray]:
        return self.black_col - 1, self.white_col - 1

    def to_dict(self) -> dict:
        return {"n": self.n, "black_col": self.black_col.tolist(), "white_col": self.white_col.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        b = ",".join(map(str, self.black_col.tolist()))
        w = ",".join(map(str, self.white_col.tolist()))
        return f"{self.n};{b};{w}"

    @classmethod
    def from_dict(cls, data: dict) -> LinkGrid:
        d = validate_link(data["black_col"], data["white_col"])
        if d.n != int(data["n"]):
            raise ValueError(f"n={data['n']} does not match permutation length {d.n}")
        return d

    @classmethod
    def from_json(cls, text: str) -> LinkGrid:
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_text(cls, line: str) -> LinkGrid:
        n, b, w = line.strip().split(";")
        return cls.from_dict(
            {"n": int(n), "black_col": [int(x) for x in b.split(",")], "white_col": [int(x) for x in w.split(",")]}
        )


@dataclass(frozen=True, eq=False)
class KnotLoop:
    """A knot as the order in which it visits rows (rho) and columns (kappa).

    Step i puts a black dot at (rho[i], kappa[i]) and a white dot at
    (rho[i+1], kappa[i]), indices taken cyclically.
    """

    s: int
    rho: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        if self.s < 2:
            raise ValueError("a knot needs at least 2 rows")
        if self.rho.shape[0] != self.s or self.kappa.shape[0] != self.s:
            raise ValueError("rho and kappa must both have length s")

    @classmethod
    def from_orders(cls, rho: Sequence[int], kappa: Sequence[int]) -> KnotLoop:
        r = _as_perm(rho, "rho")
        k = _as_perm(kappa, "kappa")
        return cls(int(r.shape[0]), r, k)

    def __eq__(self, other):
        if not isinstance(other, KnotLoop):
            return NotImplemented
        return np.array_equal(self.rho, other.rho) and np.array_equal(self.kappa, other.kappa)

    def __hash__(self):
        return hash((self.rho.tobytes(), self.kappa.tobytes()))

    def __repr__(self):
        return f"KnotLoop(s={self.s}, rho={self.rho.tolist()}, kappa={self.kappa.tolist()})"

    def canonical(self) -> KnotLoop:
        """Rotate the visit order so the walk starts in row 1."""
        shift = int(np.flatnonzero(self.rho == 1)[0])
        rho = np.roll(self.rho, -shift)
        kappa = np.roll(self.kappa, -shift)
        rho.setflags(write=False)
        kappa.setflags(write=False)
        return KnotLoop(self.s, rho, kappa)

    def to_dict(self) -> dict:
        return {"s": self.s, "rho": self.rho.tolist(), "kappa": self.kappa.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> KnotLoop:
        k = cls.from_orders(data["rho"], data["kappa"])
        if k.s != int(data["s"]):
            raise ValueError(f"s={data['s']} does not match permutation length {k.s}")
        return k

    @classmethod
    def from_json(cls, text: str) -> KnotLoop:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Arc:
    """A directed straight segment; ``start``/``end`` run along the varying axis."""

    orientation: Literal["vertical", "horizontal"]
    fixed_coord: int
    start: int
    end: int

    @property
    def length(self) -> int:
        return abs(self.end - self.start)

    @property
    def direction(self) -> int:
        return 1 if self.end > self.start else -1


@dataclass(frozen=True)
class Crossing:
    row: int
    col: int
    sign: int


def validate_link(black_col: Sequence[int], white_col: Sequence[int]) -> LinkGrid:
    """Build a LinkGrid, raising NotAPermutation or Collision on bad input."""
    b = _as_perm(black_col, "black_col")
    w = _as_perm(white_col, "white_col")
    if b.shape[0] != w.shape[0]:
        raise ValueError("black_col and white_col differ in length")
    n = int(b.shape[0])
    if n < 2:
        raise ValueError("grid size must be at least 2")
    clash = np.flatnonzero(b == w)
    if clash.size:
        raise Collision(f"row {int(clash[0]) + 1} has both dots in column {int(b[clash[0]])}")
    return LinkGrid(n, b, w)


def from_derangement(black_col: Sequence[int], delta: Sequence[int]) -> LinkGrid:
    """White dot column of row r is ``delta[black_col[r]]``."""
    b = _as_perm(black_col, "black_col")
    d = _as_perm(delta, "delta")
    if d.shape[0] != b.shape[0]:
        raise ValueError("black_col and delta differ in length")
    fixed = np.flatnonzero(d == np.arange(1, d.shape[0] + 1))
    if fixed.size:
        raise NotADerangement(f"delta fixes {int(fixed[0]) + 1}")
    return validate_link(b, d[b - 1])


def knot_to_link(k: KnotLoop) -> LinkGrid:
    black = np.empty(k.s, dtype=np.int64)
    white = np.empty(k.s, dtype=np.int64)
    black[k.rho - 1] = k.kappa
    white[np.roll(k.rho, -1) - 1] = k.kappa
    return validate_link(black, white)


def mirror(d: LinkGrid) -> LinkGrid:
    """Reflect columns left to right; every crossing changes sign."""
    return validate_link(d.n + 1 - d.black_col, d.n + 1 - d.white_col)


def arcs(d: LinkGrid) -> list[Arc]:
    """The n column arcs (black to white) followed by the n row arcs (white to black)."""
    black_row = np.empty(d.n, dtype=np.int64)
    white_row = np.empty(d.n, dtype=np.int64)
    rows = np.arange(1, d.n + 1)
    black_row[d.black_col - 1] = rows
    white_row[d.white_col - 1] = rows
    out = [Arc("vertical", c, int(black_row[c - 1]), int(white_row[c - 1])) for c in range(1, d.n + 1)]
    out += [Arc("horizontal", r, int(d.white_col[r - 1]), int(d.black_col[r - 1])) for r in range(1, d.n + 1)]
    return out


def transition_permutation(d: LinkGrid) -> np.ndarray:
    """Row map r -> row of the white dot in black_col[r]'s column (1-based)."""
    b, w = d.zero_based()
    return _kernels.transition(b, w) + 1
