"""The torsion group ``G = (+)_j (+)_n Z/p_j`` and its dual.

Elements of G are finitely supported; coordinates are indexed by
``(block j, position n)`` with positions starting at 1.  A character is
an exponent vector ``x`` and acts by

    chi_x(g) = exp(2 pi i * sum_j (sum_n x_{j,n} g_{j,n}) / p_j).

The dual is a profinite product, so a :class:`Character` only ever
stores a finite window of coordinates per block and refuses (with
:class:`WindowError`) to evaluate on anything reaching past it.

Under ``t^k <-> e_{k+1}`` the group F_p[t] is one block of G, and a
fractional series ``x = sum c_n t^-n`` is the character with exponent
``c_n`` at position ``n``; :func:`poly_pair` computes the same pairing
directly from the series product.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .ffield import Poly, check_prime
from .laurent import Laurent, PrecisionError

__all__ = [
    "Character",
    "GroupElt",
    "RootOfUnity",
    "WindowError",
    "c0_sample_geometric",
    "c0_sample_indexset",
    "char_eval",
    "character_from_series",
    "element_from_poly",
    "example_sequence_geometric",
    "example_sequence_indexset",
    "poly_pair",
    "random_c0_geometric",
]


class WindowError(ValueError):
    """Evaluation outside the coordinates a character actually stores."""


class RootOfUnity:
    """``exp(2 pi i r/m)`` held exactly as the fraction ``r/m`` mod 1."""

    __slots__ = ("angle",)

    def __init__(self, r, m=1):
        self.angle = Fraction(r, m) % 1

    @property
    def r(self):
        return self.angle.numerator

    @property
    def m(self):
        return self.angle.denominator

    @classmethod
    def one(cls):
        return cls(0)

    def is_one(self):
        return self.angle == 0

    def __mul__(self, other):
        return RootOfUnity(self.angle + other.angle)

    def conjugate(self):
        return RootOfUnity(-self.angle)

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return self.angle == other.angle
        if other == 1:
            return self.is_one()
        if other == -1:
            return self.angle == Fraction(1, 2)
        return NotImplemented

    def __hash__(self):
        return hash(self.angle)

    def __complex__(self):
        return cmath.exp(2j * math.pi * float(self.angle))

    def chord(self):
        """``|z - 1| = 2 |sin(pi r/m)|``."""
        return 2.0 * abs(math.sin(math.pi * float(self.angle)))

    def chord_exact(self):
        """``|z - 1|`` as a Fraction when it is rational, else None."""
        a = self.angle
        if a == 0:
            return Fraction(0)
        if a == Fraction(1, 2):
            return Fraction(2)
        if a in (Fraction(1, 6), Fraction(5, 6)):
            return Fraction(1)
        return None

    def __repr__(self):
        return f"RootOfUnity({self.r}/{self.m})"


def _clean(entries, primes):
    out = {}
    for (j, n), v in entries.items():
        if n < 1:
            raise ValueError(f"positions start at 1, got {n}")
        v %= primes[j]
        if v:
            out[(j, n)] = v
    return tuple(sorted(out.items()))


class GroupElt:
    """Finitely supported element of ``(+)_j (+)_n Z/p_j``."""

    __slots__ = ("primes", "items")

    def __init__(self, entries, primes):
        self.primes = tuple(check_prime(p) for p in primes)
        self.items = _clean(dict(entries), self.primes)

    @classmethod
    def _raw(cls, items, primes):
        obj = object.__new__(cls)
        obj.primes, obj.items = primes, items
        return obj

    @classmethod
    def zero(cls, primes):
        return cls({}, primes)

    @classmethod
    def basis(cls, n, primes, block=0, value=1):
        return cls({(block, n): value}, primes)

    @property
    def entries(self):
        return dict(self.items)

    def support(self):
        return [k for k, _ in self.items]

    def max_position(self, block=0):
        return max((n for (j, n), _ in self.items if j == block), default=0)

    def _check(self, other):
        if not isinstance(other, GroupElt):
            return False
        if other.primes != self.primes:
            raise ValueError(f"group elements over {self.primes} and {other.primes} mixed")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        acc = dict(self.items)
        for k, v in other.items:
            acc[k] = acc.get(k, 0) + v
        return GroupElt._raw(_clean(acc, self.primes), self.primes)

    def __neg__(self):
        return GroupElt._raw(_clean({k: -v for k, v in self.items}, self.primes), self.primes)

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def scale(self, k):
        return GroupElt._raw(_clean({key: k * v for key, v in self.items}, self.primes), self.primes)

    def __eq__(self, other):
        return isinstance(other, GroupElt) and (self.primes, self.items) == (other.primes, other.items)

    def __hash__(self):
        return hash((self.primes, self.items))

    def __lt__(self, other):
        return self.items < other.items

    def __bool__(self):
        return bool(self.items)

    def __repr__(self):
        return f"GroupElt({dict(self.items)}, {list(self.primes)})"

    def to_json(self):
        return {"blocks": [
            {"p": p, "entries": {str(n): v for (j, n), v in self.items if j == b}}
            for b, p in enumerate(self.primes)
        ]}

    @classmethod
    def from_json(cls, obj):
        primes = [blk["p"] for blk in obj["blocks"]]
        entries = {(j, int(n)): v for j, blk in enumerate(obj["blocks"]) for n, v in blk["entries"].items()}
        return cls(entries, primes)


class Character:
    """Character of G known on positions ``1..window[j]`` of each block.

    Positions inside the window that are absent from ``entries`` have
    exponent 0; positions beyond it are unknown.
    """

    __slots__ = ("primes", "items", "window", "_hash")

    def __init__(self, entries, primes, window):
        self.primes = tuple(check_prime(p) for p in primes)
        if isinstance(window, int):
            window = (window,) * len(self.primes)
        self.window = tuple(window)
        if len(self.window) != len(self.primes):
            raise ValueError("one window bound per block")
        items = _clean(dict(entries), self.primes)
        for (j, n), _ in items:
            if n > self.window[j]:
                raise WindowError(f"exponent at position {n} of block {j} lies past window {self.window[j]}")
        self.items = items
        self._hash = None

    @classmethod
    def trivial(cls, primes, window):
        return cls({}, primes, window)

    @property
    def entries(self):
        return dict(self.items)

    def exponent(self, j, n):
        if n > self.window[j]:
            raise WindowError(f"position {n} of block {j} is past window {self.window[j]}")
        return self.entries.get((j, n), 0)

    def is_trivial(self):
        return not self.items

    def __call__(self, g):
        return char_eval(self, g)

    def _check(self, other):
        if not isinstance(other, Character):
            return False
        if other.primes != self.primes or other.window != self.window:
            raise WindowError(f"characters with windows {self.window} and {other.window} mixed")
        return True

    def __mul__(self, other):
        if not self._check(other):
            return NotImplemented
        acc = dict(self.items)
        for k, v in other.items:
            acc[k] = acc.get(k, 0) + v
        return Character(acc, self.primes, self.window)

    def conjugate(self):
        return Character({k: -v for k, v in self.items}, self.primes, self.window)

    def __eq__(self, other):
        return isinstance(other, Character) and (self.primes, self.window, self.items) == (
            other.primes, other.window, other.items)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.primes, self.window, self.items))
        return self._hash

    def __lt__(self, other):
        return self.items < other.items

    def __repr__(self):
        return f"Character({dict(self.items)}, {list(self.primes)}, window={list(self.window)})"

    def to_json(self):
        return {
            "blocks": [
                {"p": p, "entries": {str(n): v for (j, n), v in self.items if j == b}}
                for b, p in enumerate(self.primes)
            ],
            "window": list(self.window),
        }

    @classmethod
    def from_json(cls, obj):
        primes = [blk["p"] for blk in obj["blocks"]]
        entries = {(j, int(n)): v for j, blk in enumerate(obj["blocks"]) for n, v in blk["entries"].items()}
        return cls(entries, primes, obj["window"])


def char_eval(chi, g):
    """``chi(g)`` as an exact root of unity."""
    if chi.primes != g.primes:
        raise ValueError(f"character over {chi.primes} applied to element over {g.primes}")
    x = chi.entries
    sums = [0] * len(chi.primes)
    for (j, n), v in g.items:
        if n > chi.window[j]:
            raise WindowError(f"element reaches position {n} of block {j}, window is {chi.window[j]}")
        sums[j] += x.get((j, n), 0) * v
    angle = sum((Fraction(s % p, p) for s, p in zip(sums, chi.primes)), Fraction(0))
    return RootOfUnity(angle)


def element_from_poly(a, primes=None, block=0):
    """``sum a_k t^k`` as the element with ``a_k`` at position ``k+1``."""
    primes = primes or (a.p,)
    return GroupElt({(block, k + 1): c for k, c in enumerate(a.coeffs)}, primes)


def character_from_series(x, window=None, primes=None, block=0):
    """The character ``a -> <x, a>`` of F_p[t] for ``x`` in t^-1 F_p[[t^-1]]."""
    if x.coeffs and x.top > -1:
        raise ValueError(f"series {x} has a polynomial part")
    if window is None:
        if x.prec is None:
            window = -x.low if x.coeffs else 0
        else:
            window = x.prec
    if x.prec is not None and window > x.prec:
        raise PrecisionError(f"window {window} needs coefficients past t^-{x.prec}")
    primes = primes or (x.p,)
    win = [0] * len(primes)
    win[block] = window
    return Character({(block, n): x.coefficient(-n) for n in range(1, window + 1)}, primes, win)


def poly_pair(x, a):
    """``<x, a> = e(a x)`` with ``e(sum c_n t^n) = exp(2 pi i c_{-1}/p)``."""
    if x.p != a.p:
        raise ValueError("pairing across different prime fields")
    if x.coeffs and x.top > -1:
        raise ValueError(f"{x} is not in t^-1 F_p[[t^-1]]")
    if x.prec is not None and x.prec < a.degree + 1:
        raise PrecisionError(f"pairing with degree {a.degree} needs precision {a.degree + 1}, have {x.prec}")
    c = (Laurent.from_poly(a) * x).coefficient(-1) if not a.is_zero() else 0
    return RootOfUnity(c, x.p)


# the two example families


def example_sequence_geometric(n, p):
    """``1 + t + ... + t^(np-1)``."""
    if n < 1:
        raise ValueError("n starts at 1")
    return Poly([1] * (n * p), p)


def c0_sample_geometric(blocks, p):
    """``sum c_n t^-n`` whose coefficients are constant on each run ``jp+1..(j+1)p``.

    ``blocks`` gives one value per run (a run given as a tuple must be
    constant); the result is known down to ``t^-(len(blocks) p)``.
    """
    terms = {}
    for j, b in enumerate(blocks):
        if isinstance(b, (tuple, list)):
            if len(b) != p or len(set(v % p for v in b)) != 1:
                raise ValueError(f"run {b} is not constant of length {p}")
            b = b[0]
        for i in range(1, p + 1):
            terms[-(j * p + i)] = b
    return Laurent(terms, p, prec=len(blocks) * p)


def random_c0_geometric(rng, p, nblocks):
    return c0_sample_geometric([int(v) for v in rng.integers(0, p, nblocks)], p)


def _member(index_set, n):
    return index_set(n) if callable(index_set) else n in index_set


def example_sequence_indexset(F, c, p, index_set=None):
    """``sum_{i in F} c_i t^i`` for finite nonempty ``F`` (inside ``index_set`` if given)."""
    F = list(F)
    if not F:
        raise ValueError("F must be nonempty")
    c = list(c)
    if len(c) != len(F):
        raise ValueError("one coefficient per element of F")
    if all(ci % p == 0 for ci in c):
        raise ValueError("coefficients must not all be zero")
    if index_set is not None:
        outside = [i for i in F if not _member(index_set, i)]
        if outside:
            raise ValueError(f"F is not inside the index set: {outside}")
    coeffs = [0] * (max(F) + 1)
    for i, ci in zip(F, c):
        coeffs[i] = ci
    return Poly(coeffs, p)


def c0_sample_indexset(index_set, depth, p, rng=None, values=None):
    """``sum c_n t^-n`` (``n <= depth``) with ``c_{n+1} = 0`` whenever ``n`` is in the index set."""
    if values is None:
        if rng is None:
            raise ValueError("give either values or rng")
        values = [int(v) for v in rng.integers(0, p, depth)]
    values = list(values)
    if len(values) < depth:
        raise ValueError("not enough coefficient values for the requested depth")
    terms = {-n: values[n - 1] for n in range(1, depth + 1) if not _member(index_set, n - 1)}
    return Laurent(terms, p, prec=depth)
