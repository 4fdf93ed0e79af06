import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings

from gridlinks import (
    Collision,
    KnotLoop,
    LinkGrid,
    NotADerangement,
    NotAPermutation,
    arcs,
    component_count,
    from_derangement,
    knot_length,
    knot_to_link,
    mirror,
    transition_permutation,
    validate_link,
)
from gridlinks.enumeration import derangements

from conftest import knot_loops, link_grids


def test_smallest_diagram():
    d = validate_link([1, 2], [2, 1])
    assert d.n == 2
    assert d.black_col.tolist() == [1, 2]


def test_full_collision_rejected():
    with pytest.raises(Collision):
        validate_link([1, 2], [1, 2])


@pytest.mark.parametrize(
    "black, white",
    [([1, 2, 2], [2, 3, 1]), ([1, 2, 4], [2, 3, 1]), ([0, 1, 2], [1, 2, 3])],
)
def test_not_a_permutation(black, white):
    with pytest.raises(NotAPermutation):
        validate_link(black, white)


def test_collision_is_a_value_error():
    # callers that only know ValueError still catch rejections
    with pytest.raises(ValueError):
        validate_link([1, 2, 3], [2, 1, 3])


def test_from_derangement_small():
    d = from_derangement([1, 2], [2, 1])
    assert d.white_col.tolist() == [2, 1]


def test_from_derangement_rejects_fixed_points():
    with pytest.raises(NotADerangement):
        from_derangement([1, 2, 3], [1, 2, 3])


def test_from_derangement_hits_every_diagram_once_n4():
    seen = {
        from_derangement(b, d)
        for b in itertools.permutations(range(1, 5))
        for d in derangements(4)
    }
    assert len(seen) == 24 * 9 == 216


def test_knot_to_link_small():
    k = KnotLoop.from_orders([1, 2], [1, 2])
    d = knot_to_link(k)
    assert d == validate_link([1, 2], [2, 1])
    assert component_count(d) == 1


def test_knot_encodings_reach_every_5x5_knot():
    diagrams = set()
    for rest in itertools.permutations(range(2, 6)):
        for kappa in itertools.permutations(range(1, 6)):
            diagrams.add(knot_to_link(KnotLoop.from_orders((1,) + rest, kappa)))
    assert len(diagrams) == 2880


def test_rotating_visit_order_gives_same_diagram():
    k = KnotLoop.from_orders([3, 1, 4, 2], [2, 4, 1, 3])
    c = k.canonical()
    assert c.rho[0] == 1
    assert knot_to_link(c) == knot_to_link(k)


@given(link_grids())
def test_mirror_involution_and_invariants(d):
    m = mirror(d)
    assert mirror(m) == d
    assert m.n == d.n
    assert component_count(m) == component_count(d)
    assert sorted(a.length for a in arcs(m)) == sorted(a.length for a in arcs(d))


def test_arcs_two_by_two():
    a = arcs(validate_link([1, 2], [2, 1]))
    assert [x.orientation for x in a].count("vertical") == 2
    assert sum(x.length for x in a) == 4


@given(link_grids())
def test_arcs_structure(d):
    a = arcs(d)
    assert len(a) == 2 * d.n
    vert = [x for x in a if x.orientation == "vertical"]
    horiz = [x for x in a if x.orientation == "horizontal"]
    assert sorted(x.fixed_coord for x in vert) == list(range(1, d.n + 1))
    assert sorted(x.fixed_coord for x in horiz) == list(range(1, d.n + 1))
    for x in vert:
        # column arc runs from the black dot's row to the white dot's row
        assert d.black_col[x.start - 1] == x.fixed_coord
        assert d.white_col[x.end - 1] == x.fixed_coord
    for x in horiz:
        assert x.start == d.white_col[x.fixed_coord - 1]
        assert x.end == d.black_col[x.fixed_coord - 1]
    assert all(x.start != x.end for x in a)


@given(knot_loops())
def test_arc_lengths_sum_to_knot_length(k):
    assert sum(a.length for a in arcs(knot_to_link(k))) == knot_length(k)


def test_transition_two_by_two():
    assert transition_permutation(validate_link([1, 2], [2, 1])).tolist() == [2, 1]


@given(link_grids())
def test_transition_is_derangement(d):
    sigma = transition_permutation(d)
    assert sorted(sigma.tolist()) == list(range(1, d.n + 1))
    assert not np.any(sigma == np.arange(1, d.n + 1))


@given(knot_loops())
def test_knot_transition_is_single_cycle(k):
    sigma = transition_permutation(knot_to_link(k))
    r, steps = 1, 0
    while True:
        r = int(sigma[r - 1])
        steps += 1
        if r == 1:
            break
    assert steps == k.s


def test_link_grid_is_immutable():
    d = validate_link([1, 2, 3], [2, 3, 1])
    with pytest.raises(ValueError):
        d.black_col[0] = 3
    with pytest.raises(AttributeError):
        d.n = 4


@settings(max_examples=50)
@given(link_grids())
def test_serialization_round_trips(d):
    assert LinkGrid.from_json(d.to_json()) == d
    assert LinkGrid.from_text(d.to_text()) == d
    assert json.loads(d.to_json()) == {"n": d.n, "black_col": d.black_col.tolist(), "white_col": d.white_col.tolist()}


def test_text_format():
    d = validate_link([1, 2, 3], [2, 3, 1])
    assert d.to_text() == "3;1,2,3;2,3,1"
    with pytest.raises(Collision):
        LinkGrid.from_text("3;1,2,3;1,3,2")


def test_knot_loop_json():
    k = KnotLoop.from_orders([1, 3, 2], [2, 1, 3])
    assert json.loads(k.to_json()) == {"s": 3, "rho": [1, 3, 2], "kappa": [2, 1, 3]}
    assert KnotLoop.from_json(k.to_json()) == k
    with pytest.raises(ValueError):
        KnotLoop.from_dict({"s": 4, "rho": [1, 3, 2], "kappa": [2, 1, 3]})
