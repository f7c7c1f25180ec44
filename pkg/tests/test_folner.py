import itertools
from fractions import Fraction

import pytest

from ffrigidity.dualgroup import GroupElt
from ffrigidity.folner import (
    FiniteSubset,
    box,
    box_tile_shifts,
    greedy_tiling_cover,
    invariance_defect,
    self_tiling_cover,
    tile_density_check,
    verify_tiling,
    window_density,
    z_interval,
    z_invariance_defect,
    z_self_tiling,
)


def e(n, primes=(2,), j=0, v=1):
    return GroupElt({(j, n): v}, primes)


def test_set_algebra():
    A = FiniteSubset([e(1), e(2)])
    B = FiniteSubset([e(2), e(3)])
    assert len(A | B) == 3 and len(A & B) == 1 and len(A ^ B) == 2
    assert e(1) in A and e(3) not in A
    assert len(A + B) == 4  # {e1+e2, e1+e3, 0, e2+e3}
    assert GroupElt.zero((2,)) in A + B


def test_box_sizes():
    assert len(box(3, (3,))) == 27
    assert len(box(2, (2, 3))) == 36
    assert len(box(0)) == 1


def test_invariance_examples():
    F = box(2)
    assert invariance_defect(FiniteSubset([e(3)]), F) == 2
    assert invariance_defect(FiniteSubset([GroupElt.zero((2,))]), F) == 0
    assert invariance_defect(box(2), box(2)) == 0
    with pytest.raises(ValueError):
        invariance_defect(F, FiniteSubset([], (2,)))


@pytest.mark.parametrize("p", (2, 3))
def test_folner_defect_zero_iff_inside(p):
    for N in range(1, 4):
        F = box(N, (p,))
        for n in range(1, 6):
            g = e(n, (p,))
            d = invariance_defect(FiniteSubset([g]), F)
            assert (d == 0) == (n <= N)
            assert d <= 2


def test_box_tile_shifts_small():
    shifts = box_tile_shifts(1, 3)
    assert len(shifts) == 4
    assert len(box_tile_shifts(3, 3)) == 1
    disjoint, covered, leftover = verify_tiling(box(1), shifts, box(3))
    assert disjoint and covered and leftover == 0


@pytest.mark.parametrize("p", (2, 3))
def test_box_tilings_partition(p):
    for M in range(3, 9):
        for N in range(2, M):
            shifts = box_tile_shifts(N, M, (p,))
            assert len(shifts) == p ** (M - N)
            assert len(box(N, (p,)) + shifts) == p ** M


def test_brute_force_partition():
    # elementwise check without the vectorized path
    tile, shifts = box(1, (3,)), box_tile_shifts(1, 3, (3,))
    seen = {}
    for s in shifts:
        for t in tile:
            seen[t + s] = seen.get(t + s, 0) + 1
    assert len(seen) == 27 and set(seen.values()) == {1}


def test_tile_density_examples():
    rep = tile_density_check(2, 5)
    assert rep.density == Fraction(1, 4) and rep.max_tile_hits == 1 and rep.passed
    assert tile_density_check(0, 3).density == 1


@pytest.mark.parametrize("p", (2, 3))
def test_tile_density_exact(p):
    for M in range(3, 7):
        for N in range(2, M):
            rep = tile_density_check(N, M, (p,))
            assert rep.passed and rep.density == Fraction(1, p ** N)


def test_mixed_primes_tiling():
    primes = (2, 3)
    shifts = box_tile_shifts(1, 3, primes)
    assert len(shifts) == 36
    assert tile_density_check(1, 2, primes).density == Fraction(1, 6)


def test_self_tiling():
    shifts, leftover = self_tiling_cover(1, 3, (3,))
    assert len(shifts) == 9 and leftover == 0
    shifts, leftover = self_tiling_cover(2, 2)
    assert list(shifts) == [GroupElt.zero((2,))]


def test_greedy_monotone():
    # tile {0, e1, e2} does not tile Phi_3 exactly
    tile = FiniteSubset([GroupElt.zero((2,)), e(1), e(2)])
    shifts, leftover, history = greedy_tiling_cover(tile, box(3))
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert 0 < leftover < 1
    _, covered, left = verify_tiling(tile, shifts, box(3))
    assert left == leftover


def test_window_density():
    F = [box(3)]
    shifts = list(box(3))
    assert window_density(lambda g: True, F, shifts) == 1
    assert window_density(lambda g: False, F, shifts) == 0
    even = lambda g: sum(v for _, v in g.items) % 2 == 0
    assert window_density(even, F, shifts) >= Fraction(1, 2)
    sub = FiniteSubset([g for g in box(3) if even(g)])
    assert window_density(sub, F, shifts) == Fraction(1, 2)


def test_integer_intervals():
    shifts, leftover = z_self_tiling(2, 5)
    assert shifts[:3] == [0, 4, 8] and leftover == 0
    assert z_invariance_defect({0}, z_interval(4)) == 0
    assert z_invariance_defect({1}, z_interval(3)) == Fraction(1, 4)
    defects = [z_invariance_defect({1}, z_interval(N)) for N in range(1, 8)]
    assert all(b < a for a, b in zip(defects, defects[1:]))
