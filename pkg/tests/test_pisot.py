import mpmath
import pytest

from ffrigidity.ffield import Poly
from ffrigidity.laurent import Laurent
from ffrigidity.pisot import (
    GOLDEN,
    PLASTIC,
    CrossCheckError,
    MonicIntPoly,
    NotPVError,
    RealPVSpec,
    fit_decay_constant,
    is_pv,
    newton_polygon,
    pv_floor_powers,
    pv_norm_decay,
    pv_norm_exponents,
    pv_root,
    real_pv_table,
    required_precision,
    trace_sequence,
)

from conftest import PRIMES, random_poly


def quadratic(p):
    return MonicIntPoly([Poly.one(p), Poly.t(p)])


def random_pv(rng, p):
    while True:
        d = int(rng.integers(2, 4))
        c = [random_poly(rng, p, int(rng.integers(0, 3))) for _ in range(d)]
        c[-1] = random_poly(rng, p, int(rng.integers(1, 4)))
        f = MonicIntPoly(c)
        if is_pv(f):
            return f


def test_quadratic_newton_polygon():
    f = quadratic(2)
    assert [(float(s), m) for s, m in newton_polygon(f)] == [(1.0, 1), (-1.0, 1)]
    assert is_pv(f)


def test_not_pv():
    f = MonicIntPoly.parse("t; 0", 3)  # x^2 - t
    assert not is_pv(f)
    with pytest.raises(NotPVError):
        pv_root(f)


def test_degree_one_is_exact():
    e = pv_root(MonicIntPoly([Poly.t(5)]))
    assert e.root == Laurent.from_poly(Poly.t(5))


def test_quadratic_root_digits():
    e = pv_root(quadratic(2), 16)
    assert e.root.terms()[:4] == [(1, 1), (-1, 1), (-3, 1), (-7, 1)]


def test_floor_powers_small():
    e = pv_root(quadratic(2), required_precision(quadratic(2), 3))
    assert pv_floor_powers(e, 3) == [Poly.parse(s) for s in ("t mod 2", "t^2 mod 2", "t^3+t mod 2")]


def test_trace_recurrence_by_hand():
    s = trace_sequence(quadratic(2), 4)
    # s_n = t s_{n-1} + s_{n-2}, s_0 = 2 = 0, s_1 = t
    assert s == [Poly.zero(2), Poly.t(2), Poly.parse("t^2 mod 2"), Poly.parse("t^3+t mod 2"),
                 Poly.parse("t^4 mod 2")]


def test_cross_check_detects_truncation():
    e = pv_root(quadratic(3), 4)
    with pytest.raises((CrossCheckError, ArithmeticError)):
        pv_floor_powers(e, 30)


@pytest.mark.parametrize("p", PRIMES)
def test_quadratic_norms(p):
    f = quadratic(p)
    e = pv_root(f, required_precision(f, 30))
    assert pv_norm_exponents(e, 30) == [-n for n in range(1, 31)]
    assert pv_norm_decay(e, 30).passed


@pytest.mark.parametrize("p", PRIMES)
def test_random_pv_dual_path(p, rng):
    for _ in range(10):
        f = random_pv(rng, p)
        slopes = newton_polygon(f)
        # slopes times multiplicities add up to deg c_0 (product of the roots)
        if not f.c[0].is_zero():
            assert sum(s * m for s, m in slopes) == f.c[0].degree
        e = pv_root(f, required_precision(f, 12))
        residual = f(e.root)
        assert residual.is_visible_zero() or residual.abs().exponent < -e.root.prec + 1
        pv_floor_powers(e, 12)
        cert = pv_norm_decay(e, 12)
        assert cert.passed, cert.failures()


def test_golden_lucas_against_mpmath():
    mpmath.mp.dps = 50
    phi = (1 + mpmath.sqrt(5)) / 2
    table = real_pv_table(GOLDEN, 40)
    lucas = [2, 1]
    for _ in range(40):
        lucas.append(lucas[-1] + lucas[-2])
    for row in table.rows:
        power = phi ** row.n
        assert row.nearest == int(mpmath.nint(power))
        if row.n >= 2:
            assert row.nearest == lucas[row.n]
        assert abs(row.norm - float(abs(power - mpmath.nint(power)))) < 1e-9
        assert abs(row.norm_times_alpha - float(abs(row.nearest * phi - mpmath.nint(row.nearest * phi)))) < 1e-9


def test_golden_decay_fit():
    rows = real_pv_table(GOLDEN, 40).rows
    ns = [r.n for r in rows]
    vals = [r.norm_times_alpha for r in rows]
    C = fit_decay_constant(vals[:10], ns[:10], 0.62)
    assert all(v <= C * 0.62 ** n + 1e-9 for v, n in zip(vals, ns))


def test_plastic_envelope():
    table = real_pv_table(PLASTIC, 40)
    assert abs(table.alpha - 1.324717957244746) < 1e-12
    assert all(r.norm <= r.envelope + 1e-12 for r in table.rows)
    env = [r.envelope for r in table.rows]
    assert all(b < a for a, b in zip(env, env[1:]))


def test_real_non_pv_rejected():
    with pytest.raises(ArithmeticError):
        real_pv_table(RealPVSpec((2, 0), "sqrt 2"), 5)
