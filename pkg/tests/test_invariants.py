import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from gridlinks import (
    KnotLoop,
    RandomStream,
    component_count,
    component_count_geometric,
    crossings,
    knot_length,
    knot_size,
    knot_to_link,
    mirror,
    sample_closing_knot,
    sample_full_knot,
    sample_link,
    validate_link,
    writhe,
    writhe_pairwise,
)
from gridlinks.enumeration import enumerate_links, histogram_moment, writhe_histogram
from gridlinks.stats import SampleSummary, mean_ci95

from conftest import knot_loops, link_grids
from segment_oracle import brute_force_writhe

# (3, 2) ... diagonal black dots, white dots shifted two columns: a trefoil
TREFOIL = validate_link([1, 2, 3, 4, 5], [3, 4, 5, 1, 2])
# frozen from segment_oracle.brute_force_writhe(TREFOIL): writhe 3 over 3 crossings
TREFOIL_WRITHE = 3


def test_two_by_two_invariants():
    d = validate_link([1, 2], [2, 1])
    assert component_count(d) == 1
    assert component_count_geometric(d) == 1
    assert crossings(d) == []
    assert writhe(d) == 0


def test_two_disjoint_components():
    assert component_count(validate_link([1, 2, 3, 4], [2, 1, 4, 3])) == 2


def test_geometric_count_agrees_exhaustively_n4():
    seen = []
    enumerate_links(4, lambda d: seen.append(component_count(d) == component_count_geometric(d)))
    assert len(seen) == 216 and all(seen)


@given(link_grids(n_max=60))
def test_component_count_range(d):
    k = component_count(d)
    assert 1 <= k <= d.n // 2
    assert k == component_count_geometric(d)


def test_trefoil_matches_segment_oracle():
    w, count = brute_force_writhe(TREFOIL.black_col.tolist(), TREFOIL.white_col.tolist())
    assert component_count(TREFOIL) == 1
    assert len(crossings(TREFOIL)) == count == 3
    assert writhe(TREFOIL) == w == TREFOIL_WRITHE


def test_sign_convention_up_over_right():
    # column 2 arc runs up from row 1 to row 3; row 2 arc runs right from column 1 to 3
    d = validate_link([2, 3, 1], [3, 1, 2])
    (c,) = [x for x in crossings(d) if (x.row, x.col) == (2, 2)]
    assert c.sign == +1


@settings(max_examples=200)
@given(link_grids(n_max=12))
def test_crossings_match_segment_oracle(d):
    w, count = brute_force_writhe(d.black_col.tolist(), d.white_col.tolist())
    assert len(crossings(d)) == count
    assert writhe(d) == writhe_pairwise(d) == w


@given(link_grids(n_max=40))
def test_crossings_strictly_inside_spans(d):
    black_row = {int(c): r for r, c in enumerate(d.black_col, 1)}
    white_row = {int(c): r for r, c in enumerate(d.white_col, 1)}
    for x in crossings(d):
        lo, hi = sorted((black_row[x.col], white_row[x.col]))
        assert lo < x.row < hi
        lo, hi = sorted((int(d.black_col[x.row - 1]), int(d.white_col[x.row - 1])))
        assert lo < x.col < hi
        assert x.sign in (1, -1)


@given(link_grids(n_max=80))
def test_mirror_negates_writhe(d):
    m = mirror(d)
    assert writhe(m) == -writhe(d)
    assert len(crossings(m)) == len(crossings(d))


def test_mirror_negates_writhe_on_random_knots():
    rs = RandomStream(3, 0)
    for _ in range(1000):
        d = knot_to_link(sample_full_knot(int(rs.integers(2, 40)), rs))
        assert writhe(mirror(d)) == -writhe(d)


def test_sweep_matches_pairwise_at_large_n():
    rs = RandomStream(5, 0)
    for n in (200, 500):
        for _ in range(5):
            d = sample_link(n, rs)
            assert writhe(d) == writhe_pairwise(d)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_exhaustive_writhe_symmetry(n):
    for knots_only in (False, True):
        hist = writhe_histogram(n, knots_only=knots_only)
        assert all(hist.get(-w) == c for w, c in hist.items())
        for k in (1, 3, 5):
            assert histogram_moment(hist, k) == 0


def test_writhe_mean_near_zero_n100():
    rs = RandomStream(0, 100)
    s = SampleSummary.from_values([writhe(knot_to_link(sample_full_knot(100, rs))) for _ in range(10_000)])
    lo, hi = mean_ci95(s)
    assert lo <= 0 <= hi


def test_knot_length_small():
    assert knot_length(KnotLoop.from_orders([1, 2], [1, 2])) == 4


@given(knot_loops(n_max=40))
def test_knot_length_even_and_bounded(k):
    length = knot_length(k)
    assert length % 2 == 0
    assert 2 * k.s <= length <= k.s * k.s


def test_knot_size():
    assert knot_size(KnotLoop.from_orders([1, 2], [2, 1])) == 2
    rs = RandomStream(1, 1)
    sizes = [knot_size(sample_closing_knot(6, rs)) for _ in range(2000)]
    assert min(sizes) == 2 and max(sizes) == 6


def test_knot_size_uniform_n50():
    from scipy.stats import chi2

    rs = RandomStream(0, 50)
    sizes = np.array([knot_size(sample_closing_knot(50, rs)) for _ in range(100_000)])
    assert sizes.min() >= 2
    counts = np.bincount(sizes, minlength=51)[2:]
    expected = 100_000 / 49
    stat = float(((counts - expected) ** 2 / expected).sum())
    assert stat < chi2.ppf(0.999, 48)


def test_enumerated_knot_lengths_even():
    for rest in itertools.permutations(range(2, 5)):
        for kappa in itertools.permutations(range(1, 5)):
            assert knot_length(KnotLoop.from_orders((1,) + rest, kappa)) % 2 == 0
