"""Compiled inner loops.

Every kernel works on 0-based int64 arrays indexed by row: ``black[r]`` and
``white[r]`` are the columns of the black and white dot in row ``r``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def shuffle_inplace(arr, picks):
    # picks[t] is uniform on [0, n-1-t]; swap position n-1-t with it
    n = arr.shape[0]
    for t in range(n - 1):
        i = n - 1 - t
        j = picks[t]
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


@njit(cache=True)
def inverse(perm):
    inv = np.empty_like(perm)
    for i in range(perm.shape[0]):
        inv[perm[i]] = i
    return inv


@njit(cache=True)
def transition(black, white):
    n = black.shape[0]
    white_row = np.empty(n, dtype=np.int64)
    for r in range(n):
        white_row[white[r]] = r
    sigma = np.empty(n, dtype=np.int64)
    for r in range(n):
        sigma[r] = white_row[black[r]]
    return sigma


@njit(cache=True)
def count_cycles(perm):
    n = perm.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
    return cycles


@njit(cache=True)
def count_closed_walks(black, white):
    """Walk dot to dot along columns (black to white) and rows (white to black).

    Dots 0..n-1 are black (dot r sits in row r), dots n..2n-1 are white.
    """
    n = black.shape[0]
    col_white = np.empty(n, dtype=np.int64)
    for r in range(n):
        col_white[white[r]] = n + r
    visited = np.zeros(2 * n, dtype=np.bool_)
    walks = 0
    for start in range(n):
        if visited[start]:
            continue
        walks += 1
        dot = start
        while not visited[dot]:
            visited[dot] = True
            if dot < n:
                # black dot: go along its column to the white dot there
                dot = col_white[black[dot]]
            else:
                # white dot: go along its row to the black dot there
                dot = dot - n
    return walks


@njit(cache=True)
def _fenwick_add(tree, i, v):
    i += 1
    while i < tree.shape[0]:
        tree[i] += v
        i += i & (-i)


@njit(cache=True)
def _fenwick_prefix(tree, i):
    # sum over columns 0..i inclusive; i may be -1
    s = 0
    i += 1
    while i > 0:
        s += tree[i]
        i -= i & (-i)
    return s


@njit(cache=True)
def writhe_sweep(black, white):
    """Signed crossing count by a row sweep over a Fenwick tree of columns.

    A column arc is "active" at row r when r lies strictly between its end
    rows; it carries weight +1 if it points up (black row < white row), -1
    otherwise. Each row arc picks up the weights of active columns strictly
    between its end columns, times its own horizontal direction.
    """
    n = black.shape[0]
    black_row = np.empty(n, dtype=np.int64)
    white_row = np.empty(n, dtype=np.int64)
    for r in range(n):
        black_row[black[r]] = r
        white_row[white[r]] = r
    tree = np.zeros(n + 1, dtype=np.int64)
    total = 0
    for r in range(n):
        for c in (black[r], white[r]):
            lo = min(black_row[c], white_row[c])
            hi = max(black_row[c], white_row[c])
            if hi == r and hi - lo > 1:
                _fenwick_add(tree, c, -1 if white_row[c] > black_row[c] else 1)
        p = white[r]
        q = black[r]
        lo_c = min(p, q)
        hi_c = max(p, q)
        if hi_c - lo_c > 1:
            s = _fenwick_prefix(tree, hi_c - 1) - _fenwick_prefix(tree, lo_c)
            total += s if q > p else -s
        for c in (black[r], white[r]):
            lo = min(black_row[c], white_row[c])
            hi = max(black_row[c], white_row[c])
            if lo == r and hi - lo > 1:
                _fenwick_add(tree, c, 1 if white_row[c] > black_row[c] else -1)
    return total


@njit(cache=True)
def knot_length(rho, kappa):
    s = rho.shape[0]
    total = 0
    for i in range(s):
        j = (i + 1) % s
        total += abs(rho[j] - rho[i]) + abs(kappa[j] - kappa[i])
    return total


@njit(cache=True)
def _next_permutation(a):
    n = a.shape[0]
    i = n - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = a[i + 1:][::-1].copy()
    return True


@njit(cache=True)
def all_derangements(n):
    a = np.arange(n)
    count = 0
    rows = []
    while True:
        ok = True
        for i in range(n):
            if a[i] == i:
                ok = False
                break
        if ok:
            rows.append(a.copy())
            count += 1
        if not _next_permutation(a):
            break
    out = np.empty((count, n), dtype=np.int64)
    for t in range(count):
        out[t] = rows[t]
    return out


@njit(cache=True)
def tally_components(n, derangements):
    """Cycle-count tally over every (lexicographic permutation, derangement) pair."""
    tally = np.zeros(n + 1, dtype=np.int64)
    black = np.arange(n)
    white = np.empty(n, dtype=np.int64)
    while True:
        for t in range(derangements.shape[0]):
            d = derangements[t]
            for r in range(n):
                white[r] = d[black[r]]
            tally[count_cycles(transition(black, white))] += 1
        if not _next_permutation(black):
            break
    return tally
