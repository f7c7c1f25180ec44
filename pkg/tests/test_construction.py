from fractions import Fraction

import pytest

from ffrigidity.construction import (
    C0Geometric,
    C0IndexSet,
    ConstructionState,
    FinitelySupported,
    HorizonError,
    PickError,
    cell_mass_check,
    construct_wm_measure,
    geometric_sequence,
    indexset_sequence,
    monomial_sequence,
    reverify,
    sigma_at,
)
from ffrigidity.measures import AtomicMeasure, rigidity_defect


def run_monomial(p=2, depth=3, horizon=200, schedule=(1, 1)):
    fam, seq = FinitelySupported(p, horizon + 1), monomial_sequence(p)
    return (*construct_wm_measure(fam, seq, depth, horizon, schedule), seq)


def test_depth_zero():
    sigma, state, cert = construct_wm_measure(FinitelySupported(2, 11), monomial_sequence(2), 0, 10)
    assert len(cert) == 0 and len(sigma) == 1
    assert sigma.characters()[0].is_trivial()


def test_depth_three_monomials():
    sigma, state, cert, seq = run_monomial()
    assert cert.passed and len(sigma) == 8
    assert all(isinstance(r.left, (int, Fraction)) for r in cert)
    assert cell_mass_check(state, sigma).passed
    agrees, mismatches, _ = reverify(state, seq, cert)
    assert agrees, mismatches


def test_weights_and_cutoffs():
    sigma, state, cert, _ = run_monomial(depth=4, horizon=300)
    assert sum(w for _, w in sigma) == 1
    assert all(w == Fraction(1, 16) for _, w in sigma)
    assert state.cutoffs == sorted(set(state.cutoffs)) and state.cutoffs[0] == 0
    assert len(set(state.chars)) == 16


def test_prefix_defect_bound():
    # defect of sigma_P is below 2^-(j-1) on [N_j, N_{j+1}) and below 2^-(P+1) past N_P
    sigma, state, cert, seq = run_monomial(depth=4, horizon=150)
    N = state.cutoffs
    for n in range(151):
        d = rigidity_defect(sigma, seq(n))
        j = max(i for i in range(len(N)) if N[i] <= n)
        bound = 2.0 ** -(state.depth + 1) if j == state.depth else 2.0 ** -(j - 1)
        assert d < bound


def test_intermediate_measures_move_exact_mass():
    _, state, _, _ = run_monomial(depth=3, horizon=100)
    for p in range(3):
        for s in range(1, 2 ** p + 1):
            m = sigma_at(state, p, s)
            assert sum(w for _, w in m) == 1
            assert m.weight(state.chars[2 ** p + s - 1]) == Fraction(1, 2 ** (p + 1))


@pytest.mark.parametrize("p", (2, 3, 5))
def test_c0_geometric_defects_vanish(p):
    H = 60
    sigma, state, cert = construct_wm_measure(C0Geometric(p, H), geometric_sequence(p), 3, H)
    tails = [r for r in cert if r.ineq.endswith(("tail", "window"))]
    assert cert.passed and all(r.left == 0 for r in tails)
    assert reverify(state, geometric_sequence(p), cert)[0]


def test_indexset_family():
    I = lambda n: n % 3 == 0
    fam, seq = C0IndexSet(I, 3, 61), indexset_sequence(I, 3)
    sigma, state, cert = construct_wm_measure(fam, seq, 3, 20)
    assert cert.passed and all(fam.contains(chi) for chi in sigma.characters())


def test_odd_prime_uses_float_rows_and_reverifies():
    sigma, state, cert, seq = run_monomial(p=3, depth=3, horizon=80)
    assert cert.passed
    assert any(isinstance(r.left, float) for r in cert)
    assert reverify(state, seq, cert)[0]


def test_cell_mass_negative_control():
    sigma, state, _, _ = run_monomial(depth=3, horizon=60)
    # put the last atom on top of its neighbour: one level-3 cell empties
    chars = state.chars[:7] + [state.chars[6]]
    moved = AtomicMeasure.uniform(chars)
    assert cell_mass_check(state, sigma).passed
    assert not cell_mass_check(state, moved).passed


def test_reverify_detects_tampering():
    sigma, state, cert, seq = run_monomial(depth=3, horizon=60)
    row = cert.rows[3]
    cert.rows[3] = type(row)(row.ineq, row.params, Fraction(1, 64), row.bound, row.passed)
    agrees, mismatches, _ = reverify(state, seq, cert)
    assert not agrees and mismatches


def test_state_json_round_trip():
    _, state, cert, seq = run_monomial(depth=2, horizon=40)
    again = ConstructionState.from_json(state.to_json())
    assert again.to_json() == state.to_json()
    assert reverify(again, seq, cert)[0]


def test_small_window_exhausts_family():
    with pytest.raises((PickError, HorizonError)):
        construct_wm_measure(FinitelySupported(2, 4), monomial_sequence(2), 3, 3)


def test_schedule_parameter():
    sigma, state, cert, _ = run_monomial(depth=3, horizon=120, schedule=(5, 3))
    assert cert.passed
    assert all(m >= 5 and (m - 5) % 3 == 0 for m in state.agreement.values())
