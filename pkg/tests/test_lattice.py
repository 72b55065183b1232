import pytest

from bootperc.lattice import (
    LatticeSpec,
    cell_to_index,
    index_to_cell,
    iter_level_cells,
    level_of,
    neighbor_lists,
    neighbor_masks,
    neighbors,
)


def test_spec_defaults_threshold_to_d():
    assert LatticeSpec(3, 5).r == 3
    assert LatticeSpec(3, 5, "grid", 5).r == 5


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(d=0, n=3),
        dict(d=2, n=0),
        dict(d=2, n=3, topology="moebius"),
        dict(d=2, n=2, topology="torus"),
        dict(d=2, n=3, r=0),
        dict(d=2, n=3, r=5),  # r > 2d
        dict(d=9, n=100),  # 100^9 cells is over the limit
    ],
)
def test_spec_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        LatticeSpec(**kwargs)


def test_row_major_rule():
    spec = LatticeSpec(2, 3)
    assert [cell_to_index((v1, v2), spec) for v1 in (1, 2, 3) for v2 in (1, 2, 3)] == list(range(9))
    assert index_to_cell(5, spec) == (2, 3)


@pytest.mark.parametrize("d,n", [(1, 7), (2, 9), (3, 4), (4, 3), (6, 2), (3, 50)])
def test_index_round_trip(d, n):
    spec = LatticeSpec(d, n)
    for i in range(spec.size):
        assert cell_to_index(index_to_cell(i, spec), spec) == i


def test_neighbors_corner_interior_wraparound():
    grid = LatticeSpec(2, 3)
    assert set(neighbors((1, 1), grid)) == {(2, 1), (1, 2)}
    assert set(neighbors((2, 2), grid)) == {(1, 2), (3, 2), (2, 1), (2, 3)}
    torus = LatticeSpec(2, 3, "torus")
    assert set(neighbors((1, 1), torus)) == {(2, 1), (3, 1), (1, 2), (1, 3)}


def test_neighbors_fixed_iteration_order():
    spec = LatticeSpec(2, 3)
    # dimension 1..d, minus before plus
    assert neighbors((2, 2), spec) == [(1, 2), (3, 2), (2, 1), (2, 3)]
    assert neighbors((1, 1), spec) == [(2, 1), (1, 2)]


def test_neighbors_rejects_bad_cells():
    spec = LatticeSpec(2, 3)
    with pytest.raises(ValueError):
        neighbors((0, 1), spec)
    with pytest.raises(ValueError):
        neighbors((1, 1, 1), spec)


@pytest.mark.parametrize("spec", [LatticeSpec(2, 4), LatticeSpec(3, 3), LatticeSpec(2, 5, "torus")])
def test_adjacency_is_symmetric(spec):
    for i in range(spec.size):
        u = index_to_cell(i, spec)
        for v in neighbors(u, spec):
            assert u in neighbors(v, spec)


def test_grid_degree_formula():
    spec = LatticeSpec(3, 4)
    for i in range(spec.size):
        cell = index_to_cell(i, spec)
        at_wall = sum(1 for v in cell if v in (1, spec.n))
        assert len(neighbors(cell, spec)) == 2 * spec.d - at_wall


def test_torus_degree_always_2d():
    spec = LatticeSpec(3, 3, "torus")
    for i in range(spec.size):
        nbrs = neighbors(index_to_cell(i, spec), spec)
        assert len(nbrs) == len(set(nbrs)) == 6


def test_degenerate_side_one():
    spec = LatticeSpec(3, 1)
    assert neighbors((1, 1, 1), spec) == []


def test_level_of():
    assert level_of((1, 1, 1)) == 3
    assert level_of((4, 2, 2)) == 8
    assert level_of((5, 5, 5)) == 15


@pytest.mark.parametrize("d,n", [(1, 6), (2, 5), (3, 4), (4, 3)])
def test_level_sets_partition_the_lattice(d, n):
    total = 0
    for k in range(0, d * n + 2):
        cells = list(iter_level_cells(d, n, k))
        assert len(set(cells)) == len(cells)
        if d <= k <= d * n:
            assert cells, f"level {k} should be nonempty"
        else:
            assert not cells
        for cell in cells:
            assert level_of(cell) == k
        total += len(cells)
    assert total == n**d


def test_level_enumeration_matches_filter_oracle():
    d, n, k = 3, 5, 5
    by_enum = sorted(iter_level_cells(d, n, k))
    by_filter = sorted(
        (a, b, c)
        for a in range(1, 6)
        for b in range(1, 6)
        for c in range(1, 6)
        if a + b + c == k
    )
    assert by_enum == by_filter
    assert len(by_enum) == 6  # permutations of (3,1,1) and (2,2,1)


def test_neighbor_lists_match_neighbors():
    for spec in (LatticeSpec(2, 4), LatticeSpec(3, 3, "torus")):
        lists = neighbor_lists(spec)
        for i in range(spec.size):
            expected = [cell_to_index(v, spec) for v in neighbors(index_to_cell(i, spec), spec)]
            assert lists[i] == expected


def test_neighbor_masks_match_lists():
    spec = LatticeSpec(2, 4)
    lists = neighbor_lists(spec)
    masks = neighbor_masks(spec)
    for i in range(spec.size):
        m = 0
        for j in lists[i]:
            m |= 1 << j
        assert masks[i] == m
