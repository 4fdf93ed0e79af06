"""Seeded random diagrams and knots.

Each ``RandomStream`` owns a PCG64 generator keyed by ``(seed, stream_index)``
through numpy's ``SeedSequence`` spawn keys, so parallel workers get
independent, reproducible lanes without any clock seeding.
"""

from __future__ import annotations

import numpy as np

from gridlinks import _kernels
from gridlinks.grid import KnotLoop, LinkGrid


class RandomStream:
    """A single-consumer random lane identified by ``(seed, stream_index)``."""

    def __init__(self, seed: int = 0, stream_index: int = 0):
        if seed < 0 or stream_index < 0:
            raise ValueError("seed and stream_index must be non-negative")
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.stream_index = int(stream_index)
        self._rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,)))
        )
        # rejected link proposals since construction
        self.rejections = 0

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_index={self.stream_index})"

    def integers(self, low: int, high: int) -> int:
        """Uniform integer on the closed range [low, high]."""
        return int(self._rng.integers(low, high, endpoint=True))

    def shuffle_picks(self, n: int) -> np.ndarray:
        # picks[t] uniform on [0, n-1-t]
        if n < 2:
            return np.empty(0, dtype=np.int64)
        return self._rng.integers(0, np.arange(n, 1, -1), dtype=np.int64)


def random_permutation(n: int, rs: RandomStream) -> np.ndarray:
    """Uniform permutation of 1..n by an in-place Fisher-Yates shuffle."""
    if n < 1:
        raise ValueError("n must be at least 1")
    perm = np.arange(1, n + 1, dtype=np.int64)
    _kernels.shuffle_inplace(perm, rs.shuffle_picks(n))
    return perm


def _link_attempt(n: int, rs: RandomStream) -> tuple[np.ndarray, np.ndarray] | None:
    black = random_permutation(n, rs)
    white = random_permutation(n, rs)
    if np.any(black == white):
        return None
    return black, white


def sample_link(n: int, rs: RandomStream) -> LinkGrid:
    """Uniform valid n x n diagram: two independent permutations, rejected on collision.

    ``rs.rejections`` counts the discarded proposals.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    while True:
        pair = _link_attempt(n, rs)
        if pair is not None:
            break
        rs.rejections += 1
    black, white = pair
    black.setflags(write=False)
    white.setflags(write=False)
    return LinkGrid(n, black, white)


def sample_full_knot(n: int, rs: RandomStream) -> KnotLoop:
    """Uniform over the n!(n-1)! knot diagrams filling the whole grid."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rho = np.empty(n, dtype=np.int64)
    rho[0] = 1
    rho[1:] = random_permutation(n - 1, rs) + 1
    kappa = random_permutation(n, rs)
    rho.setflags(write=False)
    kappa.setflags(write=False)
    return KnotLoop(n, rho, kappa)


def _compact(labels: np.ndarray) -> np.ndarray:
    # relabel distinct values to 1..len by rank, keeping their order
    ranks = np.empty(labels.shape[0], dtype=np.int64)
    ranks[np.argsort(labels, kind="stable")] = np.arange(1, labels.shape[0] + 1)
    return ranks


def sample_closing_knot(n: int, rs: RandomStream) -> KnotLoop:
    """Grow a knot from row 1 until it returns there.

    A uniform permutation ``tau`` of 1..n supplies the rows visited after the
    start; the knot closes at size s, the position of 1 in ``tau``. Draws with
    s = 1 (an empty knot) are redrawn, so s is uniform on 2..n. Unused rows and
    columns are dropped and the survivors relabelled 1..s in order.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    while True:
        tau = random_permutation(n, rs)
        s = int(np.flatnonzero(tau == 1)[0]) + 1
        if s > 1:
            break
    kappa = random_permutation(n, rs)[:s]
    rho = np.empty(s, dtype=np.int64)
    rho[0] = 1
    rho[1:] = tau[: s - 1]
    rho = _compact(rho)
    kappa = _compact(kappa)
    rho.setflags(write=False)
    kappa.setflags(write=False)
    return KnotLoop(s, rho, kappa)
