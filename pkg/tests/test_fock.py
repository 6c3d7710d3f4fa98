from itertools import product

import pytest

from su2ladders.fock import (dimension, enumerate_sector,
                             total_occupation, weight_of)


def brute_states(spin, n_max, n=None, weight=None):
    """Independent oracle: exhaustive product enumeration plus filtering."""
    modes = 2 * spin + 1
    out = []
    for occ in product(range(n_max + 1), repeat=modes):
        if sum(occ) > n_max:
            continue
        if n is not None and sum(occ) != n:
            continue
        if weight is not None and weight_of(occ, spin) != weight:
            continue
        out.append(occ)
    return sorted(out)


def test_sector_s1_n2_weight0():
    basis = enumerate_sector(1, 2, n=2, weight=0)
    assert set(basis.states) == {(1, 0, 1), (0, 2, 0)}
    assert len(basis) == 2


def test_sector_s1_vacuum_only():
    basis = enumerate_sector(1, 3, n=0)
    assert basis.states == ((0, 0, 0),)


def test_sector_s2_n2_weight0_bruteforce():
    basis = enumerate_sector(2, 2, n=2, weight=0)
    expected = brute_states(2, 2, n=2, weight=0)
    assert list(basis.states) == expected
    assert set(basis.states) == {(1, 0, 0, 0, 1), (0, 1, 0, 1, 0),
                                 (0, 0, 2, 0, 0)}


@pytest.mark.parametrize("spin,n_max,expected", [
    (1, 3, 20),   # stars and bars C(6, 3)
    (0, 5, 6),    # single mode, occupations 0..5
    (2, 0, 1),    # vacuum only
])
def test_dimension_values(spin, n_max, expected):
    assert dimension(spin, n_max) == expected


@pytest.mark.parametrize("spin", [0, 1, 2, 3])
@pytest.mark.parametrize("n_max", [0, 1, 2, 3, 4, 5, 6])
def test_counting_matches_enumeration(spin, n_max):
    basis = enumerate_sector(spin, n_max)
    assert len(basis) == dimension(spin, n_max)


def test_enumeration_matches_bruteforce_order():
    for spin, n_max in [(1, 4), (2, 3)]:
        basis = enumerate_sector(spin, n_max)
        assert list(basis.states) == brute_states(spin, n_max)


def test_lexicographic_and_stable():
    basis = enumerate_sector(2, 3)
    assert list(basis.states) == sorted(basis.states)
    again = enumerate_sector(2, 3)
    assert basis.states == again.states


def test_index_roundtrip():
    basis = enumerate_sector(1, 2)
    for i, state in enumerate(basis.states):
        assert basis.state_index(state) == i
    i = basis.state_index((0, 2, 0))
    assert basis.states[i] == (0, 2, 0)


def test_absent_state_is_none_not_error():
    basis = enumerate_sector(1, 2)
    assert basis.state_index((3, 0, 0)) is None


def test_wrong_length_state_raises():
    basis = enumerate_sector(1, 2)
    with pytest.raises(ValueError):
        basis.state_index((1, 0))


def test_vacuum_present():
    for spin in (1, 2):
        basis = enumerate_sector(spin, 3)
        assert basis.states[basis.vacuum_index()] == (0,) * basis.modes


def test_partition_by_total():
    basis = enumerate_sector(1, 4)
    parts = [enumerate_sector(1, 4, n=n).states for n in range(5)]
    merged = sorted(s for p in parts for s in p)
    assert merged == sorted(basis.states)
    assert sum(len(p) for p in parts) == len(basis)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        enumerate_sector(-1, 2)
    with pytest.raises(ValueError):
        enumerate_sector(1, -1)
    with pytest.raises(ValueError):
        enumerate_sector(1, 2, n=3)
    with pytest.raises(ValueError):
        dimension(1, -2)


def test_totals_and_weights():
    basis = enumerate_sector(1, 3)
    for i, state in enumerate(basis.states):
        assert basis.totals[i] == total_occupation(state)
        assert basis.weights[i] == weight_of(state, 1)
    assert weight_of((1, 0, 1), 1) == 0
    assert weight_of((0, 0, 2), 1) == 2


def test_json_dump_order_is_internal_order():
    basis = enumerate_sector(1, 2)
    dump = basis.to_json_list()
    assert dump == [list(s) for s in basis.states]
