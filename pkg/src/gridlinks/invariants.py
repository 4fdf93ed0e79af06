"""Component count, crossings and writhe, knot size and length."""

from __future__ import annotations

import numpy as np

from gridlinks import _kernels
from gridlinks.grid import Crossing, KnotLoop, LinkGrid


def component_count(d: LinkGrid) -> int:
    """Number of cycles of the row transition permutation."""
    b, w = d.zero_based()
    return int(_kernels.count_cycles(_kernels.transition(b, w)))


def component_count_geometric(d: LinkGrid) -> int:
    """Count closed curves by walking the arcs from dot to dot.

    Independent of the transition permutation; kept as an oracle for
    :func:`component_count`.
    """
    b, w = d.zero_based()
    return int(_kernels.count_closed_walks(b, w))


def _arc_table(d: LinkGrid):
    rows = np.arange(1, d.n + 1)
    black_row = np.empty(d.n, dtype=np.int64)
    white_row = np.empty(d.n, dtype=np.int64)
    black_row[d.black_col - 1] = rows
    white_row[d.white_col - 1] = rows
    cols = np.arange(1, d.n + 1)
    vertical = (cols, np.minimum(black_row, white_row), np.maximum(black_row, white_row), np.sign(white_row - black_row))
    horizontal = (
        rows,
        np.minimum(d.black_col, d.white_col),
        np.maximum(d.black_col, d.white_col),
        np.sign(d.black_col - d.white_col),
    )
    return vertical, horizontal


def crossings(d: LinkGrid) -> list[Crossing]:
    """All crossings, found by testing every column arc against every row arc.

    The column arc passes over. With ``o`` the direction of the over strand and
    ``u`` that of the under strand, the sign is ``u_x*o_y - u_y*o_x``: a
    rightward row arc under an upward column arc is +1.
    """
    (vc, vlo, vhi, vdir), (hr, hlo, hhi, hdir) = _arc_table(d)
    # mask[i, j]: column arc i meets row arc j
    mask = (
        (vlo[:, None] < hr[None, :])
        & (hr[None, :] < vhi[:, None])
        & (hlo[None, :] < vc[:, None])
        & (vc[:, None] < hhi[None, :])
    )
    vi, hj = np.nonzero(mask)
    signs = hdir[hj] * vdir[vi]
    return [Crossing(int(hr[j]), int(vc[i]), int(s)) for i, j, s in zip(vi, hj, signs)]


def writhe_pairwise(d: LinkGrid) -> int:
    return sum(c.sign for c in crossings(d))


def writhe(d: LinkGrid) -> int:
    """Positive minus negative crossings, via an O(n log n) row sweep.

    Agrees with ``writhe_pairwise`` (the sum over :func:`crossings`).
    """
    b, w = d.zero_based()
    return int(_kernels.writhe_sweep(b, w))


def knot_length(k: KnotLoop) -> int:
    """Total grid length of all arcs of the loop."""
    return int(_kernels.knot_length(k.rho, k.kappa))


def knot_size(k: KnotLoop) -> int:
    """Rows (equivalently columns) used by the knot; it has 2s arcs."""
    return k.s
