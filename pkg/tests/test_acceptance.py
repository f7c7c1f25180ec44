"""Acceptance criteria, one test each.

Every test prints a single ``[acceptance] <id> PASS|FAIL`` line through the
terminal reporter, so the lines show up under plain ``pytest -v``.  Time
limits are asserted, not just reported.  Run this file directly to print the
lines without pytest.
"""

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from ffrigidity.cfrac import cf_expand, convergents, fibonacci_alpha, verify_approx
from ffrigidity.construction import (
    FinitelySupported,
    cell_mass_check,
    construct_wm_measure,
    monomial_sequence,
    reverify,
)
from ffrigidity.dualgroup import (
    Character,
    GroupElt,
    c0_sample_indexset,
    example_sequence_geometric,
    example_sequence_indexset,
    poly_pair,
    random_c0_geometric,
)
from ffrigidity.ffield import Poly
from ffrigidity.folner import box, box_tile_shifts, tile_density_check, verify_tiling
from ffrigidity.laurent import l_floor
from ffrigidity.measures import AtomicMeasure, convolve, fourier
from ffrigidity.pisot import (
    GOLDEN,
    MonicIntPoly,
    fit_decay_constant,
    is_pv,
    pv_floor_powers,
    pv_norm_exponents,
    pv_root,
    real_pv_table,
    required_precision,
    trace_sequence,
)
from ffrigidity.recurrence import (
    CubeInstance,
    FiniteModel,
    blowup_lower_bound,
    blowup_ratio,
    cube_lemma_check,
    delta_recurrence_bruteforce,
    mcdiarmid_bound,
)

SEED = 20261019

# integer Fibonacci polynomials F_0..F_8, coefficients from t^0 up
FIBONACCI_Z = [
    [1], [0, 1], [1, 0, 1], [0, 2, 0, 1], [1, 0, 3, 0, 1], [0, 3, 0, 4, 0, 1],
    [1, 0, 6, 0, 5, 0, 1], [0, 4, 0, 10, 0, 6, 0, 1], [1, 0, 10, 0, 15, 0, 7, 0, 1],
]

_report = print


@pytest.fixture(autouse=True)
def _reporter(request):
    global _report
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    _report = (lambda s: tr.write_line(s)) if tr else print
    yield


def check(cid, limit, fn):
    """Run ``fn``; report one line; fail on a False result or on overtime."""
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # the failure is reported, then re-raised
        _report(f"[acceptance] {cid} FAIL ({type(exc).__name__}: {exc})")
        raise
    took = time.perf_counter() - start
    ok = bool(ok) and took < limit
    _report(f"[acceptance] {cid} {'PASS' if ok else 'FAIL'} {took:.2f}s/{limit}s {detail}")
    assert ok, f"{cid}: {detail}, {took:.2f}s"


def _rand_poly(rng, p, deg, monic=False):
    c = [int(v) for v in rng.integers(0, p, deg + 1)]
    c[-1] = 1 if monic else int(rng.integers(1, p))
    return Poly(c, p)


def test_01_fibonacci_table():
    def run():
        bad = []
        for p in (2, 3, 5, 7):
            q = convergents(cf_expand(fibonacci_alpha(p), 8)).q
            want = [Poly(c, p) for c in FIBONACCI_Z]
            bad += [(p, n) for n in range(9) if q[n] != want[n]]
        mod2 = convergents(cf_expand(fibonacci_alpha(2), 8)).q[8]
        ok = not bad and mod2 == Poly.parse("t^8+t^6+t^4+1 mod 2")
        return ok, f"mismatches={bad} F_8 mod 2 = {mod2}"
    check("1 fibonacci-table", 1.0, run)


def test_02_convergent_inequalities():
    def run():
        rng = np.random.default_rng(SEED)
        alpha = fibonacci_alpha(2, 80)
        certs = [verify_approx(alpha, convergents(cf_expand(alpha, 30)))]
        for p in (2, 3, 5):
            for _ in range(20):
                den = _rand_poly(rng, p, int(rng.integers(2, 8)))
                num = _rand_poly(rng, p, int(rng.integers(0, 10)))
                certs.append(verify_approx((num, den), convergents(cf_expand((num, den), 60))))
        rows = sum(len(c) for c in certs)
        return all(c.passed for c in certs), f"{len(certs)} expansions, {rows} rows"
    check("2 convergent-inequalities", 5.0, run)


def _random_pv(rng, p):
    while True:
        d = int(rng.integers(2, 4))
        c = [_rand_poly(rng, p, int(rng.integers(0, 3))) for _ in range(d)]
        c[-1] = _rand_poly(rng, p, int(rng.integers(1, 4)))
        f = MonicIntPoly(c)
        if is_pv(f):
            return f


def test_03_pv_dual_path():
    def run():
        rng = np.random.default_rng(SEED)
        n_max, checked = 30, 0
        quad_ok = True
        for p in (2, 3, 5):
            quad = MonicIntPoly([Poly.one(p), Poly.t(p)])
            polys = [quad] + [_random_pv(rng, p) for _ in range(10)]
            for f in polys:
                e = pv_root(f, required_precision(f, n_max))
                trace = trace_sequence(f, n_max)
                power = e.root
                for n in range(1, n_max + 1):
                    # the conjugates are small, so floor(alpha^n) is the power sum s_n
                    if l_floor(power) != trace[n]:
                        return False, f"{f}: n={n} floor {l_floor(power)} vs trace {trace[n]}"
                    power = power * e.root
                pv_floor_powers(e, n_max)
                checked += 1
            quad_ok &= pv_norm_exponents(pv_root(quad, required_precision(quad, n_max)), n_max) == \
                [-n for n in range(1, n_max + 1)]
        return quad_ok, f"{checked} polynomials, n <= {n_max}, quadratic exponents -n: {quad_ok}"
    check("3 pv-dual-path", 10.0, run)


def test_04_golden_ratio():
    def run():
        rows = real_pv_table(GOLDEN, 40).rows
        lucas = [2, 1]
        while len(lucas) <= 40:
            lucas.append(lucas[-1] + lucas[-2])
        lucas_ok = all(r.nearest == lucas[r.n] for r in rows if 2 <= r.n <= 40)
        ns = [r.n for r in rows]
        vals = [r.norm_times_alpha for r in rows]
        C = fit_decay_constant(vals[:10], ns[:10], 0.62)
        decay_ok = all(v <= C * 0.62 ** n + 1e-9 for v, n in zip(vals, ns))
        return lucas_ok and decay_ok, f"lucas={lucas_ok} C={C:.4f} decay={decay_ok}"
    check("4 golden-ratio", 1.0, run)


def test_05_annihilation():
    def run():
        rng = np.random.default_rng(SEED)
        I = {0, 2, 3, 7, 11, 12, 19}
        pairs = 0
        for p in (2, 3, 5):
            geo = [example_sequence_geometric(n, p) for n in range(1, 21)]
            idx = [example_sequence_indexset([i], [1], p, I) for i in sorted(I)]
            idx.append(example_sequence_indexset([2, 7, 19], [1, p - 1, 1], p, I))
            for _ in range(50):
                x = random_c0_geometric(rng, p, 21)
                y = c0_sample_indexset(I, 20, p, rng=rng)
                for a in geo:
                    if not poly_pair(x, a).is_one():
                        return False, f"geometric p={p} a={a}"
                for a in idx:
                    if not poly_pair(y, a).is_one():
                        return False, f"index set p={p} a={a}"
                pairs += len(geo) + len(idx)
        return True, f"{pairs} pairings equal 1"
    check("5 annihilation", 2.0, run)


def test_06_construction_certificate():
    def run():
        seq = monomial_sequence(2)
        sigma, state, cert = construct_wm_measure(FinitelySupported(2, 301), seq, 4, 300)
        kinds = {r.ineq for r in cert}
        needed = {"level_early_window", "level_tail", "step_early_window", "step_mid_tail",
                  "step_late_tail"}
        exact = all(isinstance(r.left, (int, Fraction)) for r in cert)
        masses = cell_mass_check(state, sigma)
        agrees, mismatches, _ = reverify(state, seq, cert)
        ok = cert.passed and needed <= kinds and exact and masses.passed and agrees
        return ok, (f"rows={len(cert)} passed={cert.passed} dyadic={exact} "
                    f"masses={masses.passed} reverify={agrees} missing={sorted(needed - kinds)}")
    check("6 construction-certificate", 30.0, run)


def _random_measure(rng, primes, window, atoms=4):
    chis = [Character({(j, n): int(rng.integers(0, p)) for j, p in enumerate(primes)
                       for n in range(1, window + 1)}, primes, window) for _ in range(atoms)]
    w = [int(v) for v in rng.integers(1, 5, atoms)]
    return AtomicMeasure([(c, Fraction(x, sum(w))) for c, x in zip(chis, w)])


def test_07_convolution_theorem():
    def run():
        rng = np.random.default_rng(SEED)
        primes, window, worst = (2, 3, 5), 4, 0.0
        for _ in range(20):
            a, c = _random_measure(rng, primes, window), _random_measure(rng, primes, window)
            ac = convolve(a, c)
            for _ in range(100):
                g = GroupElt({(j, n): int(rng.integers(0, p)) for j, p in enumerate(primes)
                              for n in range(1, window + 1)}, primes)
                worst = max(worst, abs(fourier(ac, g) - fourier(a, g) * fourier(c, g)))
        return worst < 1e-12, f"max error {worst:.2e}"
    check("7 convolution-theorem", 2.0, run)


def test_08_tilings():
    def run():
        cases = 0
        for p in (2, 3):
            for M in range(3, 9):
                for N in range(2, M):
                    shifts = box_tile_shifts(N, M, (p,))
                    disjoint, covered, leftover = verify_tiling(box(N, (p,)), shifts, box(M, (p,)))
                    rep = tile_density_check(N, M, (p,))
                    if not (disjoint and covered and leftover == 0 and rep.passed
                            and rep.density == Fraction(1, p ** N)):
                        return False, f"p={p} N={N} M={M}"
                    cases += 1
        return True, f"{cases} (p, N, M) cases exact"
    check("8 tilings", 5.0, run)


def test_09_recurrence_bruteforce():
    def run():
        weight_one = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        v = delta_recurrence_bruteforce(FiniteModel((2, 2, 2), weight_one, Fraction(1, 2)))
        even = [g for g in itertools.product(range(2), repeat=3) if sum(g) % 2 == 0]
        nonzero = [g for g in itertools.product(range(2), repeat=3) if any(g)]
        w = delta_recurrence_bruteforce(FiniteModel((2, 2, 2), nonzero, Fraction(1, 2)))
        ok = not v.passed and sorted(v.counterexample) == even and w.passed
        return ok, f"counterexample={v.counterexample} all-nonzero passes={w.passed}"
    check("9 recurrence-bruteforce", 5.0, run)


def test_10_cube_lemma_and_bounds():
    def run():
        cube = cube_lemma_check(CubeInstance((2,), 2, Fraction(3, 4), 0.5))
        mc = mcdiarmid_bound(0.5, 0.5)
        rng = np.random.default_rng(SEED)
        violations = 0
        for _ in range(200):
            d = int(rng.integers(1, 7))
            inst = CubeInstance((2, 3), d, Fraction(1, 2), 0.5)
            n = inst.size
            A = rng.choice(n, int(rng.integers(1, min(n, 64) + 1)), replace=False)
            t = float(rng.uniform(0.05, 2.0))
            if blowup_ratio(inst, A, t) < blowup_lower_bound(len(A) / n, d, t).value:
                violations += 1
        ok = cube.passed and cube.label == "proved" and mc == 45 and violations == 0
        return ok, f"cube={cube.label} mcdiarmid={mc} blowup violations={violations}/200"
    check("10 cube-lemma-and-bounds", 60.0, run)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
