"""Truncated Laurent series in 1/t over F_p, with explicit precision.

An element is ``sum(c_n t^n for n <= top)`` known only for exponents
``n >= -prec``; everything below ``t^(-prec)`` is unknown.  ``prec=None``
marks an exact element (a polynomial, or a finite sum of monomials).

Every operation propagates precision so that each reported coefficient
is correct for *any* completion of the unknown tails.  When a question
cannot be answered from the known coefficients (a leading term, a floor,
an inverse to the requested depth) a :class:`PrecisionError` is raised
instead of guessing.
"""

from __future__ import annotations

import re

import numpy as np

from .ffield import AbsValue, ModulusError, Poly, _format_terms, _parse_terms, _split_modulus

__all__ = [
    "DEFAULT_PRECISION",
    "Laurent",
    "PrecisionError",
    "dist_to_Z",
    "l_add",
    "l_floor",
    "l_frac",
    "l_inv",
    "l_mul",
]

DEFAULT_PRECISION = 64


class PrecisionError(ArithmeticError):
    """The known coefficients do not determine the requested quantity."""


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Laurent:
    """Element of F_p((1/t)) truncated below ``t^(-prec)``.

    ``low`` is the exponent of ``coeffs[0]``; coefficients are stored in
    ascending exponent order with no zeros at either end.
    """

    __slots__ = ("p", "low", "coeffs", "prec")

    def __init__(self, terms, p, prec=None):
        """Build from a mapping ``{exponent: coefficient}``."""
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        acc = {}
        for n, c in items:
            if prec is not None and n < -prec:
                continue
            acc[n] = (acc.get(n, 0) + c) % p
        self._set(p, acc, prec)

    def _set(self, p, acc, prec):
        self.p = p
        self.prec = prec
        nz = [n for n, c in acc.items() if c]
        if not nz:
            self.low, self.coeffs = 0, ()
            return
        lo, hi = min(nz), max(nz)
        self.low = lo
        self.coeffs = tuple(acc.get(n, 0) for n in range(lo, hi + 1))

    @classmethod
    def _dense(cls, p, low, coeffs, prec):
        # coeffs: ascending ints already reduced; trims and truncates
        if prec is not None and low < -prec:
            cut = -prec - low
            coeffs = coeffs[cut:]
            low = -prec
        i, j = 0, len(coeffs)
        while i < j and coeffs[i] == 0:
            i += 1
        while j > i and coeffs[j - 1] == 0:
            j -= 1
        obj = object.__new__(cls)
        obj.p = p
        obj.prec = prec
        if i == j:
            obj.low, obj.coeffs = 0, ()
        else:
            obj.low, obj.coeffs = low + i, tuple(coeffs[i:j])
        return obj

    # constructors

    @classmethod
    def zero(cls, p, prec=None):
        return cls._dense(p, 0, (), prec)

    @classmethod
    def monomial(cls, n, p, c=1, prec=None):
        return cls({n: c}, p, prec)

    @classmethod
    def from_poly(cls, a, prec=None):
        return cls._dense(a.p, 0, a.coeffs, prec)

    @classmethod
    def from_rational(cls, num, den, prec=DEFAULT_PRECISION):
        """Expansion of ``num/den`` known down to ``t^(-prec)``."""
        if num.p != den.p:
            raise ModulusError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("rational with zero denominator")
        q, r = divmod(num, den)
        if r.is_zero():
            return cls.from_poly(q)
        frac = l_mul(cls.from_poly(r), l_inv(cls.from_poly(den), prec + r.degree))
        return cls.from_poly(q) + frac.truncate(prec)

    # basic queries

    @property
    def exact(self):
        return self.prec is None

    @property
    def top(self):
        """Exponent of the leading known nonzero term, ``None`` if none visible."""
        return self.low + len(self.coeffs) - 1 if self.coeffs else None

    def is_known_zero(self):
        return self.exact and not self.coeffs

    def is_visible_zero(self):
        """No nonzero coefficient among the known ones."""
        return not self.coeffs

    def coefficient(self, n):
        if self.prec is not None and n < -self.prec:
            raise PrecisionError(f"coefficient of t^{n} is below precision t^{-self.prec}")
        k = n - self.low
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def leading(self):
        """(exponent, coefficient) of the leading term."""
        if not self.coeffs:
            if self.exact:
                raise ZeroDivisionError("the zero element has no leading term")
            raise PrecisionError(f"no nonzero coefficient down to t^{-self.prec}")
        return self.top, self.coeffs[-1]

    def _top_bound(self):
        # exponent bound on the true value: visible top, or just below precision
        if self.coeffs:
            return self.top
        return -self.prec - 1

    def abs(self):
        if self.is_known_zero():
            return AbsValue.zero()
        return AbsValue(self.leading()[0])

    def abs_bound(self):
        """``(value, exact)``: exact abs, or a strict upper bound ``p^(-prec)``.

        When no nonzero coefficient is known the true absolute value is
        at most ``p^(-prec-1)``; that value is returned with ``exact=False``.
        """
        if self.coeffs or self.exact:
            return self.abs(), True
        return AbsValue(-self.prec - 1), False

    def truncate(self, prec):
        """Forget coefficients below ``t^(-prec)``."""
        new = prec if self.prec is None else min(prec, self.prec)
        return Laurent._dense(self.p, self.low, self.coeffs, new)

    def terms(self):
        return [(self.low + i, c) for i, c in reversed(list(enumerate(self.coeffs))) if c]

    # arithmetic

    def _check(self, other):
        if isinstance(other, Poly):
            other = Laurent.from_poly(other)
        elif isinstance(other, int):
            other = Laurent({0: other}, self.p)
        if not isinstance(other, Laurent):
            return None
        if other.p != self.p:
            raise ModulusError(f"series over F_{self.p} and F_{other.p} mixed")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return l_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Laurent._dense(p, self.low, tuple((-c) % p for c in self.coeffs), self.prec)

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return l_add(self, -other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return l_add(other, -self)

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return l_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("use l_inv for negative powers")
        result = Laurent({0: 1}, self.p)
        base = self
        while n:
            if n & 1:
                result = l_mul(result, base)
            n >>= 1
            if n:
                base = l_mul(base, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        return (self.p, self.low, self.coeffs, self.prec) == (other.p, other.low, other.coeffs, other.prec)

    def __hash__(self):
        return hash((self.p, self.low, self.coeffs, self.prec))

    def agrees_with(self, other):
        """True if the two elements coincide on their common known range."""
        prec = _min_prec(self.prec, other.prec)
        a, b = (self, other) if prec is None else (self.truncate(prec), other.truncate(prec))
        return (a.low, a.coeffs) == (b.low, b.coeffs)

    # text format: "t^2+t^-1+t^-3 mod 2 ; prec 32"

    def __str__(self):
        s = f"{_format_terms(self.terms())} mod {self.p}"
        if self.prec is not None:
            s += f" ; prec {self.prec}"
        return s

    def __repr__(self):
        return f"Laurent({str(self)!r})"

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r"(.*?)(?:;\s*prec\s+(-?\d+))?\s*", text.strip())
        body, p = _split_modulus(m.group(1))
        prec = int(m.group(2)) if m.group(2) is not None else None
        terms = _parse_terms(body)
        if prec is not None and any(n < -prec and c % p for n, c in terms):
            raise ValueError(f"term below stated precision in {text!r}")
        return cls(terms, p, prec)


def l_add(a, b):
    if a.p != b.p:
        raise ModulusError(f"series over F_{a.p} and F_{b.p} mixed")
    prec = _min_prec(a.prec, b.prec)
    if not a.coeffs:
        return b.truncate(prec) if prec is not None else b
    if not b.coeffs:
        return a.truncate(prec) if prec is not None else a
    lo = min(a.low, b.low)
    hi = max(a.top, b.top)
    out = [0] * (hi - lo + 1)
    for x in (a, b):
        off = x.low - lo
        for i, c in enumerate(x.coeffs):
            out[off + i] += c
    p = a.p
    return Laurent._dense(p, lo, tuple(c % p for c in out), prec)


def l_mul(a, b):
    """Product; precision drops to what both input tails allow."""
    if a.p != b.p:
        raise ModulusError(f"series over F_{a.p} and F_{b.p} mixed")
    p = a.p
    if a.is_known_zero() or b.is_known_zero():
        return Laurent.zero(p)
    prec = None
    if b.prec is not None:
        prec = b.prec - a._top_bound()
    if a.prec is not None:
        cand = a.prec - b._top_bound()
        prec = cand if prec is None else min(prec, cand)
    if not a.coeffs or not b.coeffs:
        return Laurent.zero(p, prec)
    if prec is not None:
        if a.top + b.top < -prec:
            return Laurent.zero(p, prec)
        # drop input digits that cannot reach the certified window
        a = a.truncate(prec + b.top)
        b = b.truncate(prec + a.top)
    prod = np.convolve(np.asarray(a.coeffs, dtype=np.int64), np.asarray(b.coeffs, dtype=np.int64)) % p
    return Laurent._dense(p, a.low + b.low, tuple(int(c) for c in prod), prec)


def l_inv(a, target_precision=None):
    """Inverse of ``a`` known down to ``t^(-target_precision)``.

    An inexact input ``c t^N (1 + u)`` known to ``t^(-M)`` determines its
    inverse down to ``t^(-(2N + M))``; asking for more raises
    :class:`PrecisionError`.  With no target, inexact inputs give the
    most that is certified and exact inputs use ``DEFAULT_PRECISION``.
    Exact monomials invert exactly.
    """
    p = a.p
    if a.is_known_zero():
        raise ZeroDivisionError("inversion of zero")
    N, lead = a.leading()
    if a.exact and len(a.coeffs) == 1:
        return Laurent({-N: pow(lead, -1, p)}, p)
    limit = None if a.exact else 2 * N + a.prec
    if target_precision is None:
        target_precision = DEFAULT_PRECISION if limit is None else limit
    if limit is not None and target_precision > limit:
        raise PrecisionError(
            f"inverse known only down to t^{-limit}, t^{-target_precision} requested")
    K = target_precision - N
    if K < 0:
        return Laurent.zero(p, target_precision)
    A = a.coeffs[::-1]  # A[j] = coefficient of t^(N-j)
    inv0 = pow(lead, -1, p)
    b = [0] * (K + 1)
    b[0] = inv0
    for k in range(1, K + 1):
        s = 0
        for j in range(1, min(k, len(A) - 1) + 1):
            s += A[j] * b[k - j]
        b[k] = (-s * inv0) % p
    # b[k] is the coefficient of t^(-N-k)
    return Laurent._dense(p, -N - K, tuple(b[::-1]), target_precision)


def l_floor(x):
    """Polynomial part (exponents >= 0)."""
    if x.prec is not None and x.prec < 0:
        raise PrecisionError(f"floor needs coefficients down to t^0, known only to t^{-x.prec}")
    if not x.coeffs or x.top < 0:
        return Poly.zero(x.p)
    coeffs = [x.coefficient(n) for n in range(0, x.top + 1)]
    return Poly(coeffs, x.p)


def l_frac(x):
    """Fractional part (exponents <= -1)."""
    if not x.coeffs or x.low > -1:
        return Laurent.zero(x.p, x.prec)
    keep = x.coeffs[: -1 - x.low + 1]
    return Laurent._dense(x.p, x.low, keep, x.prec)


def dist_to_Z(x):
    """``|{x}|`` as an :class:`AbsValue`."""
    return l_frac(x).abs()
