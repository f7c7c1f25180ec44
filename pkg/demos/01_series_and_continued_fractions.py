"""
Polynomials, Laurent series and continued fractions over F_p
=============================================================

Polynomials over F_p play the role of the integers, and Laurent series
in 1/t play the role of the reals.  The absolute value is
``|x| = p^deg x``, so a series is "small" when its leading exponent is
negative.
"""

from ffrigidity.cfrac import cf_expand, convergents, fibonacci_alpha, norm_exponents, verify_approx
from ffrigidity.ffield import Poly
from ffrigidity.laurent import Laurent, l_floor, l_frac

# Exact polynomial arithmetic, with the modulus carried along.
a = Poly.parse("t^3+2*t+1 mod 3")
b = Poly.parse("t^2+1 mod 3")
q, r = divmod(a, b)
print("a =", a, " b =", b)
print("a = q b + r with q =", q, " r =", r)

# A rational function becomes a series with a chosen absolute precision.
x = Laurent.from_rational(a, b, 8)
print("a / b as a series:", x)
print("floor:", l_floor(x), "  fractional part:", l_frac(x))

# The golden-ratio analogue [t; t, t, ...] has every partial quotient t,
# and its convergent denominators are the Fibonacci polynomials.
alpha = fibonacci_alpha(2, 64)
conv = convergents(cf_expand(alpha, 8))
for n, qn in enumerate(conv.q):
    print(f"q_{n} = {qn}")

# ||q_n alpha|| has exponent -(n+1) = -deg q_{n+1}: the best possible.
print("norm exponents:", norm_exponents(alpha, conv))

# Both approximation inequalities hold row by row, with exact exponent comparisons.
cert = verify_approx(alpha, conv)
print(f"{len(cert)} rows, all passed: {cert.passed}")
