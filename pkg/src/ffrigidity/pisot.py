"""Pisot-Vijayaraghavan elements of F_p((1/t)), and real PV numbers.

A candidate is given by its monic minimal polynomial over F_p[t],

    f(x) = x^d - c_{d-1} x^{d-1} - ... - c_1 x - c_0,

so that the power sums ``s_n`` of its roots obey ``s_n = c_{d-1} s_{n-1}
+ ... + c_0 s_{n-d}``.  Root absolute values come from the Newton polygon
of f (no field extensions needed); the large root itself is found by
Newton iteration in the truncated series field.

``slopes`` below are the exponents of root absolute values: a slope of
``s`` with multiplicity ``m`` means ``m`` roots with ``|root| = p^s``.
Roots equal to zero carry the slope ``-inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .certificate import Certificate
from .ffield import ModulusError, Poly
from .laurent import Laurent, PrecisionError, l_floor, l_frac, l_inv

__all__ = [
    "CrossCheckError",
    "GOLDEN",
    "PLASTIC",
    "RealPVRow",
    "RealPVTable",
    "fit_decay_constant",
    "MonicIntPoly",
    "NotPVError",
    "PVElement",
    "RealPVSpec",
    "is_pv",
    "newton_polygon",
    "pv_floor_powers",
    "pv_norm_decay",
    "pv_norm_exponents",
    "pv_root",
    "real_pv_table",
    "required_precision",
    "trace_sequence",
]

ZERO_ROOT = -math.inf


class NotPVError(ValueError):
    pass


class CrossCheckError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class MonicIntPoly:
    """``x^d - c_{d-1} x^{d-1} - ... - c_0`` with ``c_i`` in F_p[t]."""

    __slots__ = ("c", "p")

    def __init__(self, c):
        c = list(c)
        if not c:
            raise ValueError("need at least one coefficient")
        p = c[0].p
        if any(ci.p != p for ci in c):
            raise ModulusError("coefficients over different prime fields")
        self.c = tuple(c)
        self.p = p

    @property
    def degree(self):
        return len(self.c)

    def coefficients(self):
        """Full coefficient list ``b_0..b_d`` with ``f = sum b_i x^i``."""
        return [-ci for ci in self.c] + [Poly.one(self.p)]

    def __call__(self, x):
        acc = Laurent.from_poly(Poly.one(self.p))
        for ci in reversed(self.c):
            acc = acc * x - Laurent.from_poly(ci)
        return acc

    def derivative_at(self, x):
        b = self.coefficients()
        acc = Laurent.zero(self.p)
        for i in range(len(b) - 1, 0, -1):
            acc = acc * x + Laurent.from_poly(b[i] * i)
        return acc

    def __eq__(self, other):
        return isinstance(other, MonicIntPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __str__(self):
        d = self.degree
        parts = [f"x^{d}" if d > 1 else "x"]
        for i in range(d - 1, -1, -1):
            ci = self.c[i]
            if ci.is_zero():
                continue
            body = str(ci).rsplit(" mod ", 1)[0]
            mono = "" if i == 0 else ("*x" if i == 1 else f"*x^{i}")
            parts.append(f"- ({body}){mono}")
        return " ".join(parts) + f" mod {self.p}"

    def __repr__(self):
        return f"MonicIntPoly({str(self)!r})"

    @classmethod
    def parse(cls, text, p):
        """From ``"c_0; c_1; ...; c_{d-1}"`` with each ``c_i`` a polynomial in t."""
        return cls(Poly.parse(f"{part.strip()} mod {p}") for part in text.split(";"))


def newton_polygon(f):
    """Root-size slopes ``[(slope, multiplicity), ...]``, largest first.

    Points are ``(i, deg b_i)`` for the nonzero coefficients ``b_i`` of f;
    each edge of their upper convex hull with hull slope ``h`` and width
    ``w`` contributes ``w`` roots of absolute value ``p^(-h)``.
    """
    b = f.coefficients()
    pts = [(i, bi.degree) for i, bi in enumerate(b) if not bi.is_zero()]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly above the chord
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    i0 = pts[0][0]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((-Fraction(y2 - y1, x2 - x1), x2 - x1))
    if i0 > 0:
        out.append((ZERO_ROOT, i0))
    out.sort(key=lambda sm: sm[0], reverse=True)
    return out


def is_pv(f):
    """Exactly one root outside the closed unit disc (simple), all others inside."""
    slopes = newton_polygon(f)
    big = [(s, m) for s, m in slopes if s > 0]
    if len(big) != 1 or big[0][1] != 1:
        return False
    return all(s < 0 for s, _ in slopes if s <= 0)


@dataclass(frozen=True)
class PVElement:
    minpoly: MonicIntPoly
    root: Laurent
    slopes: tuple

    @property
    def size(self):
        """Exponent of ``|alpha|``."""
        return int(self.slopes[0][0])

    @property
    def second_slope(self):
        """Largest conjugate exponent (``None`` in degree 1)."""
        rest = self.slopes[1:]
        return rest[0][0] if rest else None

    @property
    def second_multiplicity(self):
        rest = self.slopes[1:]
        return rest[0][1] if rest else 0


def required_precision(f, n_max):
    """Root precision that lets the series route reach ``floor(alpha^n_max)``
    and see ``||alpha^n||`` for every ``n <= n_max``."""
    slopes = newton_polygon(f)
    s = int(slopes[0][0]) if slopes and slopes[0][0] > 0 else 0
    conj = [x for x, _ in slopes[1:] if x != ZERO_ROOT]
    tail = math.ceil(-min(conj) * n_max) if conj else 0
    return max(n_max - 1, 0) * s + tail + 2


def _exact(x):
    # drop the precision tag: Newton iterates are finite sums treated as exact
    return Laurent._dense(x.p, x.low, x.coeffs, None)


def pv_root(f, precision=64, max_iter=64):
    """The unique root of f with ``|alpha| > 1``, by Newton iteration.

    The result is certified by an exact residual ``|f(x)| < p^-precision``;
    since the other roots are strictly smaller, ``|x - alpha| = |f(x)| /
    |alpha|^(d-1)`` and the returned series carries exactly the digits
    that bound guarantees.
    """
    slopes = tuple(newton_polygon(f))
    if not is_pv(f):
        pos = [(s, m) for s, m in slopes if s > 0]
        raise NotPVError(f"{f} is not PV: root slopes {[(str(s), m) for s, m in slopes]}"
                         + (f" (positive slope {pos[0][0]} of multiplicity {pos[0][1]})" if pos else ""))
    p, d = f.p, f.degree
    if d == 1:
        return PVElement(f, Laurent.from_poly(f.c[0]), slopes)
    s = int(slopes[0][0])
    work = precision + (d - 1) * s + 2
    x = Laurent.from_poly(f.c[-1])
    if f.derivative_at(x).is_visible_zero():
        raise NotPVError(f"derivative of {f} vanishes at the seed; inseparable case not handled")
    for _ in range(max_iter):
        fx = f(x)
        if fx.is_known_zero() or fx.abs().exponent < -precision:
            break
        dfx = f.derivative_at(x)
        if dfx.is_visible_zero():
            raise NotPVError(f"derivative of {f} vanished during Newton iteration")
        step = fx * l_inv(dfx, work + fx.top + 1)
        x = _exact((x - step).truncate(work))
    else:
        raise PrecisionError(f"Newton iteration for {f} did not reach precision {precision}")
    if fx.is_known_zero():
        return PVElement(f, x, slopes)
    root_prec = -(fx.abs().exponent - (d - 1) * s) - 1
    return PVElement(f, x.truncate(root_prec), slopes)


def trace_sequence(f, n_max):
    """Power sums ``s_0..s_{n_max}`` of the roots of f (Newton's identities)."""
    c, d, p = f.c, f.degree, f.p
    s = [Poly([d], p)]
    for k in range(1, n_max + 1):
        acc = Poly.zero(p)
        for i in range(1, min(k, d + 1)):
            acc = acc + c[d - i] * s[k - i]
        if k <= d:
            acc = acc + c[d - k] * k
        s.append(acc)
    return s


def _series_powers(e, n_max):
    x = e.root
    out = [x]
    for _ in range(n_max - 1):
        out.append(out[-1] * x)
    return out


def pv_floor_powers(e, n_max):
    """``floor(alpha^n)`` for ``1 <= n <= n_max``.

    The power-sum recurrence gives the value (``floor(alpha^n) = s_n``
    because the conjugate powers sum to something of size < 1); the
    series powers of the root are floored independently and must match.
    """
    traces = trace_sequence(e.minpoly, n_max)[1:]
    powers = _series_powers(e, n_max)
    for n, (sn, xn) in enumerate(zip(traces, powers), start=1):
        fl = l_floor(xn)
        if fl != sn:
            raise CrossCheckError(f"floor(alpha^{n}): series gives {fl}, recurrence gives {sn}")
    return traces


def pv_norm_decay(e, n_max):
    """Certificate for ``||alpha^n|| <= p^(n * s2)``, s2 the largest conjugate slope.

    When that conjugate is alone on its slope the bound is attained
    exactly, so equality (hence strict decrease) is certified as well.
    """
    cert = Certificate(meta={"kind": "pv_norm_decay", "minpoly": str(e.minpoly), "n_max": n_max})
    s2 = e.second_slope
    unique = e.second_multiplicity == 1 and s2 is not None and s2 != ZERO_ROOT
    prev = None
    for n, xn in enumerate(_series_powers(e, n_max), start=1):
        v, exact = l_frac(xn).abs_bound()
        left = None if v.is_zero else v.exponent
        if s2 is None or s2 == ZERO_ROOT:
            cert.add("pv_decay", {"n": n}, _show(left, exact), "zero", v.is_zero and exact)
            continue
        bound = n * s2
        if not exact and left > bound:
            raise PrecisionError(f"||alpha^{n}|| is hidden below the known digits")
        cert.add("pv_decay", {"n": n}, _show(left, exact), bound, v.is_zero or left <= bound)
        if unique:
            cert.add("pv_decay_exact", {"n": n}, _show(left, exact), bound,
                     exact and left is not None and left == bound)
            if prev is not None:
                cert.add("pv_decay_strict", {"n": n}, _show(left, exact), prev,
                         exact and left is not None and left < prev)
            prev = left
    return cert


def pv_norm_exponents(e, n_max):
    out = []
    for xn in _series_powers(e, n_max):
        out.append(l_frac(xn).abs().exponent)
    return out


def _show(left, exact):
    if left is None:
        return "zero"
    return left if exact else f"<={left}"


# real PV numbers


@dataclass(frozen=True)
class RealPVSpec:
    """Real PV number as the dominant root of ``x^d - c_{d-1} x^{d-1} - ... - c_0``."""

    c: tuple
    name: str = ""

    @property
    def degree(self):
        return len(self.c)

    def roots(self):
        d = self.degree
        comp = np.zeros((d, d))
        comp[0, :] = self.c[::-1]
        if d > 1:
            comp[1:, :-1] = np.eye(d - 1)
        r = np.linalg.eigvals(comp)
        return r[np.argsort(-np.abs(r))]

    def alpha(self):
        return float(self.roots()[0].real)

    def traces(self, n_max):
        c, d = self.c, self.degree
        s = [d]
        for k in range(1, n_max + 2):
            acc = sum(c[d - i] * s[k - i] for i in range(1, min(k, d + 1)))
            if k <= d:
                acc += c[d - k] * k
            s.append(acc)
        return s


GOLDEN = RealPVSpec((1, 1), "golden ratio")
PLASTIC = RealPVSpec((1, 1, 0), "plastic number")


class RealPVRow(NamedTuple):
    n: int
    nearest: int          # round(alpha^n), exact integer
    norm: float           # ||alpha^n||
    norm_times_alpha: float  # || round(alpha^n) * alpha ||
    envelope: float       # sum |beta|^n over conjugates


@dataclass(frozen=True)
class RealPVTable:
    spec: RealPVSpec
    alpha: float
    second_modulus: float
    rows: tuple


def _dist_to_int(x):
    return abs(x - round(x))


def real_pv_table(spec, n_max, tie_tol=1e-12):
    """``round(alpha^n)`` exactly and the two decaying norms, ``1 <= n <= n_max``.

    ``round(alpha^n) = s_n - round(sum beta^n)`` with ``s_n`` the exact
    integer power sums; the conjugate sum is small and is the only thing
    evaluated in floating point.  Likewise ``round(alpha^n) alpha`` is
    ``s_{n+1} + sum beta^n (alpha - beta) - k_n alpha``.
    """
    roots = spec.roots()
    alpha = roots[0]
    if abs(alpha.imag) > 1e-12 or alpha.real <= 1:
        raise ArithmeticError(f"{spec.name or spec.c}: dominant root {alpha} is not real > 1")
    conj = roots[1:]
    second = float(np.max(np.abs(conj))) if len(conj) else 0.0
    if second >= 1 - 1e-12:
        raise ArithmeticError(f"{spec.name or spec.c}: conjugate of modulus {second} not inside the unit disc")
    a = float(alpha.real)
    s = spec.traces(n_max)
    rows = []
    for n in range(1, n_max + 1):
        tail = complex(np.sum(conj ** n)).real if len(conj) else 0.0
        k = round(tail)
        if abs(abs(tail - k) - 0.5) < tie_tol:
            raise ArithmeticError(f"alpha^{n} is at a nearest-integer tie")
        nearest = s[n] - k
        norm = _dist_to_int(tail)
        shifted = complex(np.sum(conj ** n * (alpha - conj))).real if len(conj) else 0.0
        nta = _dist_to_int(shifted - k * a)
        env = float(np.sum(np.abs(conj) ** n))
        rows.append(RealPVRow(n, int(nearest), norm, nta, env))
    return RealPVTable(spec, a, second, tuple(rows))


def fit_decay_constant(values, ns, rate):
    """Smallest C with ``values[i] <= C * rate**ns[i]`` on the given points."""
    return max(v / rate ** n for v, n in zip(values, ns))
