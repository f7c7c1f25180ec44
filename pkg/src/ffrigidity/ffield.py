"""Arithmetic in a prime field F_p and in the polynomial ring F_p[t].

Polynomials are dense tuples of residues, ``coeffs[n]`` holding the
coefficient of ``t**n``.  The zero polynomial is the empty tuple, and a
nonzero polynomial never carries a zero leading coefficient.

The absolute value on F_p[t] is ``|a| = p**deg(a)``.  It is stored as an
integer exponent (:class:`AbsValue`), never as the power itself.
"""

from __future__ import annotations

import functools
import re

__all__ = [
    "AbsValue",
    "Fp",
    "ModulusError",
    "Poly",
    "check_prime",
    "poly_abs",
    "poly_add",
    "poly_divmod",
    "poly_mul",
]


class ModulusError(ValueError):
    """Operands live over different prime fields, or p is not prime."""


@functools.lru_cache(maxsize=None)
def check_prime(p):
    """Return ``p`` if it is a prime integer, else raise ModulusError."""
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        raise ModulusError(f"modulus must be a prime integer >= 2, got {p!r}")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ModulusError(f"modulus {p} is not prime")
        d += 1
    return p


@functools.total_ordering
class AbsValue:
    """Non-archimedean absolute value ``p**exponent``; ``exponent=None`` is |0|.

    Only the exponent is kept.  The zero value compares below every
    finite exponent, so ``max`` and ``<`` behave like the real numbers
    they stand for.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent=None):
        self.exponent = exponent

    @classmethod
    def zero(cls):
        return cls(None)

    @property
    def is_zero(self):
        return self.exponent is None

    def __mul__(self, other):
        if self.is_zero or other.is_zero:
            return AbsValue.zero()
        return AbsValue(self.exponent + other.exponent)

    def __eq__(self, other):
        if not isinstance(other, AbsValue):
            return NotImplemented
        return self.exponent == other.exponent

    def __lt__(self, other):
        if not isinstance(other, AbsValue):
            return NotImplemented
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.exponent < other.exponent

    def __hash__(self):
        return hash(("AbsValue", self.exponent))

    def __repr__(self):
        return "AbsValue(0)" if self.is_zero else f"AbsValue(p^{self.exponent})"


class Fp:
    """An element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        self.p = check_prime(p)
        self.value = value % p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ModulusError(f"F_{self.p} and F_{other.p} mixed")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fp(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fp(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fp(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fp(self.value * v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * Fp(v, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"


def _trim(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Polynomial over F_p, immutable.

    >>> a = Poly([1, 1], 2)          # 1 + t
    >>> str(a * a)
    't^2+1 mod 2'
    >>> Poly.parse("t^3+2*t+1 mod 5").degree
    3
    """

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p):
        self.p = check_prime(p)
        self.coeffs = _trim([int(c) % p for c in coeffs])

    @classmethod
    def _raw(cls, coeffs, p):
        # coeffs already reduced and trimmed
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.p = p
        return obj

    @classmethod
    def zero(cls, p):
        return cls((), p)

    @classmethod
    def one(cls, p):
        return cls((1,), p)

    @classmethod
    def monomial(cls, n, p, c=1):
        return cls([0] * n + [c], p)

    @classmethod
    def t(cls, p):
        return cls.monomial(1, p)

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, n):
        if n < 0 or n >= len(self.coeffs):
            return 0
        return self.coeffs[n]

    def _check(self, other):
        if isinstance(other, int):
            return Poly((other,), self.p)
        if not isinstance(other, Poly):
            return None
        if other.p != self.p:
            raise ModulusError(f"polynomials over F_{self.p} and F_{other.p} mixed")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Poly._raw(_trim(out), p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Poly._raw(tuple((-c) % p for c in self.coeffs), p)

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.p)
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(_trim([c % p for c in out]), p)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(self.p), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        r = list(self.coeffs)
        db = other.degree
        inv = pow(other.lead(), -1, p)
        q = [0] * max(len(r) - db, 0)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] * inv % p
            if c:
                q[k - db] = c
                for j in range(db + 1):
                    r[k - db + j] = (r[k - db + j] - c * b[j]) % p
        return Poly._raw(_trim(q), p), Poly._raw(_trim(r[:db]), p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.p])
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x):
        """Horner evaluation at ``x`` (anything supporting + and * with ints).

        Integer arguments give the value in F_p as an int in ``range(p)``.
        """
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc % self.p if isinstance(acc, int) else acc

    def abs(self):
        return AbsValue(self.degree) if self.coeffs else AbsValue.zero()

    def derivative(self):
        p = self.p
        return Poly([n * c for n, c in enumerate(self.coeffs)][1:], p)

    # text format: "t^3+2*t+1 mod 5"

    def terms(self):
        """Nonzero (exponent, coefficient) pairs, descending."""
        return [(n, c) for n, c in reversed(list(enumerate(self.coeffs))) if c]

    def __str__(self):
        return f"{_format_terms(self.terms())} mod {self.p}"

    def __repr__(self):
        return f"Poly({list(self.coeffs)}, {self.p})"

    @classmethod
    def parse(cls, text):
        body, p = _split_modulus(text)
        terms = _parse_terms(body)
        if any(n < 0 for n, _ in terms):
            raise ValueError(f"negative exponent in polynomial {text!r}")
        width = max((n for n, _ in terms), default=-1) + 1
        coeffs = [0] * width
        for n, c in terms:
            coeffs[n] += c
        return cls(coeffs, p)


def _format_terms(terms):
    if not terms:
        return "0"
    parts = []
    for n, c in terms:
        if n == 0:
            parts.append(str(c))
            continue
        mono = "t" if n == 1 else f"t^{n}"
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts)


def _split_modulus(text):
    m = re.fullmatch(r"\s*(.*?)\s+mod\s+(\d+)\s*", text)
    if not m:
        raise ValueError(f"missing 'mod p' in {text!r}")
    return m.group(1), check_prime(int(m.group(2)))


_TERM = r"(?:\d+\*?)?t(?:\^-?\d+)?|\d+"
_TERMS = re.compile(rf"[+-]?(?:{_TERM})(?:[+-](?:{_TERM}))*")


def _parse_terms(body):
    """Parse ``"t^2+2*t^-1-3"`` into (exponent, signed coefficient) pairs."""
    s = body.replace(" ", "")
    if not _TERMS.fullmatch(s):
        raise ValueError(f"cannot parse polynomial text {body!r}")
    out = []
    # split on + and - that are not part of an exponent
    for sign, term in re.findall(rf"([+-]?)({_TERM})", s):
        m = re.fullmatch(r"(?:(\d+)\*?)?t(?:\^(-?\d+))?", term)
        if m:
            c = int(m.group(1)) if m.group(1) else 1
            n = int(m.group(2)) if m.group(2) else 1
        else:
            c, n = int(term), 0
        out.append((n, -c if sign == "-" else c))
    return out


def poly_add(a, b):
    return a + b


def poly_mul(a, b):
    return a * b


def poly_divmod(a, b):
    """Return ``(q, r)`` with ``a = q*b + r`` and ``deg r < deg b``."""
    return divmod(a, b)


def poly_abs(a):
    return a.abs()
