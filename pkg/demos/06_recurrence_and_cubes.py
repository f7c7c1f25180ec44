"""
Sets of recurrence and the cube lemma
=====================================

In a finite group, ``R`` is delta-recurrent when every set of density at
least ``delta`` has a difference in ``R``.  Exhaustive search settles
small cases and returns the lexicographically least counterexample.  The
cube lemma's concentration bounds are tested on products of roots of
unity.
"""

from fractions import Fraction

import numpy as np

from ffrigidity.recurrence import (
    CubeInstance,
    FiniteModel,
    blowup_lower_bound,
    blowup_ratio,
    cube_lemma_check,
    delta_recurrence_bruteforce,
    mcdiarmid_bound,
)

weight_one = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
v = delta_recurrence_bruteforce(FiniteModel((2, 2, 2), weight_one, Fraction(1, 2)))
print("weight-one vectors:", v.label, "counterexample", v.counterexample)

cube = cube_lemma_check(CubeInstance((2,), 2, Fraction(3, 4), 0.5))
print("cube lemma at k=(2), d=2, delta=3/4:", cube.label)
print("dimension that makes the lemma apply at delta = eps = 1/2:", mcdiarmid_bound(0.5, 0.5))

inst = CubeInstance((2, 3), 4, Fraction(1, 2), 0.5)
rng = np.random.default_rng(1)
A = rng.choice(inst.size, 400, replace=False)
for t in (0.05, 0.2, 1.0, 2.0):
    bound = blowup_lower_bound(400 / inst.size, 4, t).value
    print(f"t={t}: |A_t| share {float(blowup_ratio(inst, A, t)):.3f} >= bound {bound:.3f}")
