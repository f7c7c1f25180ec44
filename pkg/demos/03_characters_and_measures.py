"""
Characters, the pairing, and atomic measures
=============================================

The group is a direct sum of copies of F_p, one per power of t.  A
Laurent series gives a character of it; the pairing with a polynomial
``a`` is a p-th root of unity.  A finite average of characters is an
atomic probability measure, and its Fourier transform is a finite sum.
"""

from fractions import Fraction

import numpy as np

from ffrigidity.dualgroup import (
    Character,
    GroupElt,
    character_from_series,
    element_from_poly,
    example_sequence_geometric,
    poly_pair,
    random_c0_geometric,
)
from ffrigidity.ffield import Poly
from ffrigidity.laurent import Laurent
from ffrigidity.measures import AtomicMeasure, convolve, fourier, rigidity_defect

p = 3
x = Laurent.from_rational(Poly.one(p), Poly.parse("t^2+1 mod 3"), 10)
a = Poly.parse("t^3+2 mod 3")
chi = character_from_series(x)
print("pairing <x, a> =", poly_pair(x, a), " character value:", chi(element_from_poly(a)))

# Elements of the sample family pair to 1 with every a_n of the geometric example.
rng = np.random.default_rng(0)
y = random_c0_geometric(rng, p, 8)
print("all pairings 1:", all(poly_pair(y, example_sequence_geometric(n, p)).is_one() for n in range(1, 8)))

# A measure with two atoms, and the convolution theorem on one probe.
P = (2, 3)
one = Character({}, P, 3)
psi = Character({(0, 1): 1, (1, 2): 2}, P, 3)
nu = AtomicMeasure([(one, Fraction(1, 3)), (psi, Fraction(2, 3))])
g = GroupElt({(0, 1): 1, (1, 2): 1}, P)
print("nu^(g) =", fourier(nu, g))
print("(nu * nu)^(g) =", fourier(convolve(nu, nu), g), " nu^(g)^2 =", fourier(nu, g) ** 2)
print("rigidity defect at g:", rigidity_defect(nu, g))
