"""
Pisot-Vijayaraghavan elements: powers that approach polynomials
=================================================================

A PV element is a root of a monic polynomial over F_p[t] that is large
while its conjugates are small.  The Newton polygon reads off the sizes
of the roots.  Then ``alpha^n`` lies within ``|conjugate|^n`` of a
polynomial, namely the power sum ``s_n``.
"""

from ffrigidity.ffield import Poly
from ffrigidity.pisot import (
    GOLDEN,
    MonicIntPoly,
    fit_decay_constant,
    is_pv,
    newton_polygon,
    pv_floor_powers,
    pv_norm_exponents,
    pv_root,
    real_pv_table,
    required_precision,
)

p = 3
f = MonicIntPoly([Poly.one(p), Poly.t(p)])  # x^2 - t x - 1
print("f =", f)
print("Newton polygon slopes (slope, multiplicity):", newton_polygon(f))
print("PV:", is_pv(f))

n_max = 12
e = pv_root(f, required_precision(f, n_max))
print("root:", e.root)

# The series floor and the trace recurrence are two separate computations;
# pv_floor_powers raises if they ever disagree.
for n, fl in enumerate(pv_floor_powers(e, n_max), start=1):
    print(f"floor(alpha^{n}) = {fl}")
print("exponents of ||alpha^n||:", pv_norm_exponents(e, n_max))

# Over the reals the golden ratio does the same thing, more slowly.
rows = real_pv_table(GOLDEN, 20).rows
for r in rows[:6]:
    print(f"n={r.n:2d} nearest={r.nearest:5d} ||phi^n||={r.norm:.3e}")
C = fit_decay_constant([r.norm_times_alpha for r in rows], [r.n for r in rows], 0.62)
print(f"||nearest(phi^n) phi|| <= {C:.3f} * 0.62^n on n <= 20")
