import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ffrigidity.dualgroup import (
    Character,
    GroupElt,
    RootOfUnity,
    WindowError,
    c0_sample_geometric,
    c0_sample_indexset,
    char_eval,
    character_from_series,
    element_from_poly,
    example_sequence_geometric,
    example_sequence_indexset,
    poly_pair,
    random_c0_geometric,
)
from ffrigidity.ffield import Poly
from ffrigidity.laurent import Laurent, PrecisionError

from conftest import PRIMES, polys


def elts(primes, width=5):
    coords = [(j, n) for j in range(len(primes)) for n in range(1, width + 1)]
    return st.dictionaries(st.sampled_from(coords), st.integers(0, 10), max_size=6).map(
        lambda d: GroupElt(d, primes))


def chars(primes, width=5):
    coords = [(j, n) for j in range(len(primes)) for n in range(1, width + 1)]
    return st.dictionaries(st.sampled_from(coords), st.integers(0, 10), max_size=6).map(
        lambda d: Character(d, primes, width))


MIXED = (2, 3)


@settings(max_examples=100, deadline=None)
@given(chi=chars(MIXED), g=elts(MIXED), h=elts(MIXED))
def test_character_is_a_homomorphism(chi, g, h):
    assert chi(g + h) == chi(g) * chi(h)
    assert chi(-g) == chi(g).conjugate()
    assert chi(GroupElt.zero(MIXED)).is_one()


@settings(max_examples=100, deadline=None)
@given(chi=chars(MIXED), psi=chars(MIXED), g=elts(MIXED))
def test_dual_group_law(chi, psi, g):
    assert (chi * psi)(g) == chi(g) * psi(g)
    assert (chi * chi.conjugate()).is_trivial()


def test_order_of_values():
    chi = Character({(0, 1): 1, (1, 1): 1}, MIXED, 2)
    g = GroupElt({(0, 1): 1, (1, 1): 1}, MIXED)
    z = chi(g)
    assert z.m == 6 and z == RootOfUnity(5, 6)
    assert abs(complex(z) - complex(RootOfUnity(5, 6))) < 1e-15
    assert z.chord_exact() == 1


def test_exhaustive_small_group():
    # every character of (Z/2)^2 x Z/3 takes values in the 6th roots of unity
    G = [GroupElt({(0, 1): a, (0, 2): b, (1, 1): c}, MIXED)
         for a, b, c in itertools.product(range(2), range(2), range(3))]
    for x in itertools.product(range(2), range(2), range(3)):
        chi = Character({(0, 1): x[0], (0, 2): x[1], (1, 1): x[2]}, MIXED, (2, 1))
        vals = [chi(g) for g in G]
        assert all(v.m in (1, 2, 3, 6) for v in vals)
        # orthogonality: nontrivial characters sum to zero over the group
        total = sum(complex(v) for v in vals)
        assert abs(total - (12 if not any(x) else 0)) < 1e-9


def test_window_violation():
    chi = Character({(0, 2): 1}, (2,), 3)
    with pytest.raises(WindowError):
        chi(GroupElt.basis(4, (2,)))
    with pytest.raises(WindowError):
        Character({(0, 5): 1}, (2,), 3)


def test_chords():
    assert RootOfUnity(1, 2).chord() == pytest.approx(2.0)
    assert RootOfUnity(0).chord() == 0.0
    assert RootOfUnity(1, 3).chord_exact() is None
    assert RootOfUnity(1, 3).chord() == pytest.approx(3 ** 0.5)


def test_json_round_trip():
    chi = Character({(0, 3): 1}, (2,), 8)
    assert chi.to_json() == {"blocks": [{"p": 2, "entries": {"3": 1}}], "window": [8]}
    assert Character.from_json(chi.to_json()) == chi
    g = GroupElt({(0, 2): 1, (1, 4): 2}, MIXED)
    assert GroupElt.from_json(g.to_json()) == g


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_series_pairing_matches_character(p, data):
    a = data.draw(polys(p, 6))
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=8, max_size=8))
    x = Laurent({-(n + 1): c for n, c in enumerate(coeffs)}, p, prec=8)
    chi = character_from_series(x)
    assert poly_pair(x, a) == chi(element_from_poly(a))


def test_pairing_precision_guard():
    x = Laurent({-1: 1}, 2, prec=2)
    with pytest.raises(PrecisionError):
        poly_pair(x, Poly.monomial(2, 2))


@pytest.mark.parametrize("p", PRIMES)
def test_geometric_annihilation(p, rng):
    for _ in range(50):
        x = random_c0_geometric(rng, p, 21)
        for n in range(1, 21):
            assert poly_pair(x, example_sequence_geometric(n, p)).is_one()


@pytest.mark.parametrize("p", PRIMES)
def test_indexset_annihilation(p, rng):
    I = {0, 2, 3, 7, 11, 12, 19}
    for _ in range(50):
        x = c0_sample_indexset(I, 20, p, rng=rng)
        for i in I:
            assert poly_pair(x, example_sequence_indexset([i], [1], p, I)).is_one()
        a = example_sequence_indexset([2, 7, 19], [1, p - 1, 1], p, I)
        assert poly_pair(x, a).is_one()


def test_example_validation():
    with pytest.raises(ValueError):
        example_sequence_indexset([1, 2], [0, 0], 3)
    with pytest.raises(ValueError):
        example_sequence_indexset([5], [1], 3, index_set={1, 2})
    with pytest.raises(ValueError):
        c0_sample_geometric([(1, 0)], 2)
    assert example_sequence_geometric(1, 3) == Poly([1, 1, 1], 3)


def test_non_c0_element_fails_somewhere():
    # a character outside C_0 is detected by some a_n
    x = Laurent({-1: 1}, 2, prec=10)
    vals = [poly_pair(x, example_sequence_geometric(n, 2)) for n in range(1, 5)]
    assert not all(v.is_one() for v in vals)


def test_char_eval_mixed_groups_rejected():
    with pytest.raises(ValueError):
        char_eval(Character({}, (2,), 3), GroupElt({}, (3,)))
