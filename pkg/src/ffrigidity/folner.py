"""Finite subsets of ``G = (+)_j (+)_n Z/p_j``: invariance, tilings, densities.

A :class:`FiniteSubset` lives on a *frame*, a finite sorted tuple of
coordinates ``(block, position)``.  Each element is stored as one
mixed-radix integer code, so set algebra reduces to sorted numpy arrays.
Operands on different frames are lifted to the union frame first.

Boxes ``Phi_N`` contain every element supported on positions ``1..N`` of
each block, so all blocks grow together when several primes are mixed.
They are subgroups, which makes box tilings exact.  A second backend
tiles the integer intervals ``{1, ..., 2^N}``.
"""

from __future__ import annotations

from collections import namedtuple
from fractions import Fraction

import numpy as np

from .dualgroup import GroupElt
from .ffield import check_prime

__all__ = [
    "DensityReport",
    "FiniteSubset",
    "TilingError",
    "box",
    "box_tile_shifts",
    "greedy_tiling_cover",
    "invariance_defect",
    "self_tiling_cover",
    "tile_density_check",
    "verify_tiling",
    "window_density",
    "z_interval",
    "z_invariance_defect",
    "z_self_tiling",
]

_CODE_LIMIT = 2 ** 62


class TilingError(AssertionError):
    """A claimed exact tiling is not a partition."""


class FiniteSubset:
    """A finite set of group elements, duplicates merged."""

    def __init__(self, elements=(), primes=None, frame=None):
        elements = list(elements)
        if primes is None:
            if not elements:
                raise ValueError("an empty subset needs explicit primes")
            primes = elements[0].primes
        self.primes = tuple(primes)
        if frame is None:
            frame = sorted({k for g in elements for k in g.support()})
        self._set_frame(frame)
        digits = np.zeros((len(elements), len(self.frame)), dtype=np.int64)
        col = {c: i for i, c in enumerate(self.frame)}
        for r, g in enumerate(elements):
            if g.primes != self.primes:
                raise ValueError(f"element over {g.primes} in a subset over {self.primes}")
            for k, v in g.items:
                if k not in col:
                    raise ValueError(f"element {g} leaves the frame")
                digits[r, col[k]] = v
        self.codes = np.unique(self._encode(digits))

    def _set_frame(self, frame):
        self.frame = tuple(sorted(frame))
        self.moduli = np.array([self.primes[j] for j, _ in self.frame], dtype=np.int64)
        place = np.ones(len(self.frame), dtype=np.int64)
        acc = 1
        for i, m in enumerate(self.moduli):
            place[i] = acc
            acc *= int(m)
            if acc > _CODE_LIMIT:
                raise OverflowError(f"frame of {len(self.frame)} coordinates is too large to encode")
        self.place = place
        self.size_of_frame = acc

    @classmethod
    def from_codes(cls, primes, frame, codes):
        obj = object.__new__(cls)
        obj.primes = tuple(primes)
        obj._set_frame(frame)
        obj.codes = np.unique(np.asarray(codes, dtype=np.int64))
        return obj

    def _encode(self, digits):
        if digits.size == 0:
            return np.zeros(digits.shape[0], dtype=np.int64)
        return (digits % self.moduli) @ self.place

    def digits(self):
        if not self.frame:
            return np.zeros((len(self.codes), 0), dtype=np.int64)
        return (self.codes[:, None] // self.place) % self.moduli

    def lift(self, frame):
        """The same set written on a larger frame."""
        frame = tuple(sorted(frame))
        if frame == self.frame:
            return self
        missing = set(self.frame) - set(frame)
        if missing:
            raise ValueError(f"frame drops coordinates {sorted(missing)}")
        out = FiniteSubset.from_codes(self.primes, frame, [])
        col = [frame.index(c) for c in self.frame]
        d = np.zeros((len(self.codes), len(frame)), dtype=np.int64)
        d[:, col] = self.digits()
        out.codes = np.unique(out._encode(d))
        return out

    def _align(self, other):
        if not isinstance(other, FiniteSubset):
            other = FiniteSubset([other], self.primes)
        if other.primes != self.primes:
            raise ValueError("subsets over different groups")
        frame = tuple(sorted(set(self.frame) | set(other.frame)))
        return self.lift(frame), other.lift(frame)

    def __len__(self):
        return len(self.codes)

    def __bool__(self):
        return len(self.codes) > 0

    def __iter__(self):
        for row in self.digits():
            yield GroupElt({c: int(v) for c, v in zip(self.frame, row) if v}, self.primes)

    def elements(self):
        return list(self)

    def __contains__(self, g):
        if any(k not in self.frame for k in g.support()):
            return False
        a, b = self._align(g)
        return bool(np.isin(b.codes, a.codes).all())

    def __eq__(self, other):
        if not isinstance(other, FiniteSubset):
            return NotImplemented
        a, b = self._align(other)
        return np.array_equal(a.codes, b.codes)

    def __hash__(self):
        return hash((self.primes, tuple(sorted(frozenset(self)))))

    def _combine(self, other, op):
        a, b = self._align(other)
        return FiniteSubset.from_codes(self.primes, a.frame, op(a.codes, b.codes))

    def __or__(self, other):
        return self._combine(other, np.union1d)

    def __and__(self, other):
        return self._combine(other, np.intersect1d)

    def __xor__(self, other):
        return self._combine(other, np.setxor1d)

    def difference(self, other):
        return self._combine(other, np.setdiff1d)

    def __add__(self, other):
        """Minkowski sum with a subset or a single element."""
        a, b = self._align(other)
        da, db = a.digits(), b.digits()
        if len(da) == 0 or len(db) == 0:
            return FiniteSubset.from_codes(self.primes, a.frame, [])
        total = (da[:, None, :] + db[None, :, :]).reshape(-1, len(a.frame))
        return FiniteSubset.from_codes(self.primes, a.frame, a._encode(total))

    __radd__ = __add__

    def __neg__(self):
        return FiniteSubset.from_codes(self.primes, self.frame, self._encode(-self.digits()))

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"FiniteSubset({len(self)} elements on {len(self.frame)} coordinates)"


def _frame(N, primes):
    return [(j, n) for j in range(len(primes)) for n in range(1, N + 1)]


def box(N, primes=(2,)):
    """``Phi_N``: every element supported on positions ``1..N`` of each block."""
    primes = tuple(check_prime(p) for p in primes)
    if N < 0:
        raise ValueError("box depth must be nonnegative")
    sub = FiniteSubset.from_codes(primes, _frame(N, primes), [])
    sub.codes = np.arange(sub.size_of_frame, dtype=np.int64)
    return sub


def invariance_defect(K, F):
    """``|(K + F) symdiff F| / |F|`` exactly."""
    if not F:
        raise ValueError("F must be nonempty")
    return Fraction(len((K + F) ^ F), len(F))


def verify_tiling(tile, shifts, target):
    """``(disjoint, covered, leftover)`` for the translates ``tile + s`` inside ``target``."""
    total = 0
    union = FiniteSubset.from_codes(tile.primes, (), [])
    for s in shifts:
        piece = tile + s
        total += len(piece)
        union = union | piece
    disjoint = total == len(union)
    inside = len(union & target) == len(union)
    leftover = Fraction(len(target.difference(union)), len(target)) if target else Fraction(0)
    return disjoint and inside, leftover == 0, leftover


def box_tile_shifts(N, M, primes=(2,)):
    """Coset representatives of ``Phi_N`` in ``Phi_M``: elements on positions ``N+1..M``.

    The partition ``Phi_M = union of Phi_N + s`` is checked exhaustively.
    """
    if M < N:
        raise ValueError(f"window depth {M} below tile depth {N}")
    primes = tuple(check_prime(p) for p in primes)
    frame = [(j, n) for j in range(len(primes)) for n in range(N + 1, M + 1)]
    shifts = FiniteSubset.from_codes(primes, frame, [])
    shifts.codes = np.arange(shifts.size_of_frame, dtype=np.int64)
    tile, target = box(N, primes), box(M, primes)
    ok, exact, _ = _partition_check(tile, shifts, target)
    if not (ok and exact):
        raise TilingError(f"shifts do not partition Phi_{M} into translates of Phi_{N}")
    return shifts


def _partition_check(tile, shifts, target):
    # vectorized form of verify_tiling for large shift sets
    covered = tile + shifts
    disjoint = len(covered) == len(tile) * len(shifts)
    return disjoint, covered == target, None


DensityReport = namedtuple("DensityReport", "density expected max_tile_hits probes passed")


def tile_density_check(N, M, primes=(2,), probes=None, seed=0, n_probes=32):
    """Window density of the shift set of ``Phi_N`` against ``p^-N`` (per block).

    The shift set is every element vanishing on positions ``1..N``; it is
    materialized on ``Phi_(M+1)`` so that probes ``x`` in that box move
    it around.  For each probe the ratio ``|(S - x) & Phi_M| / |Phi_M|``
    must equal ``1/|Phi_N|`` and ``|(S - x) & Phi_N|`` must be at most 1.
    """
    if M < N:
        raise ValueError(f"window depth {M} below tile depth {N}")
    primes = tuple(check_prime(p) for p in primes)
    big = M + 1
    S = box_tile_shifts(N, big, primes)
    window, tile = box(M, primes), box(N, primes)
    if probes is None:
        rng = np.random.default_rng(seed)
        pool = box(big, primes)
        pick = rng.choice(len(pool), size=min(n_probes, len(pool)), replace=False)
        probes = [FiniteSubset.from_codes(primes, pool.frame, [pool.codes[i]]) for i in sorted(pick)]
        probes = [next(iter(x)) for x in probes]
        probes.insert(0, GroupElt.zero(primes))
    expected = Fraction(1, len(tile))
    best, hits = Fraction(0), 0
    ok = True
    for x in probes:
        moved = S - x
        ratio = Fraction(len(moved & window), len(window))
        h = len(moved & tile)
        best, hits = max(best, ratio), max(hits, h)
        ok = ok and ratio == expected and h <= 1
    return DensityReport(best, expected, hits, len(probes), ok and best == expected)


def self_tiling_cover(j, N, primes=(2,)):
    """Exact tiling of ``Phi_N`` by translates of ``Phi_j``: ``(shifts, leftover)``."""
    if j > N:
        raise ValueError(f"tile depth {j} exceeds box depth {N}")
    shifts = box_tile_shifts(j, N, primes)
    return shifts, Fraction(0)


def greedy_tiling_cover(tile, target, candidates=None):
    """Greedy disjoint packing of translates of ``tile`` inside ``target``.

    Candidates default to the elements of ``target``, in code order.
    Returns ``(shifts, leftover_ratio, history)``; ``history`` lists the
    leftover ratio after each accepted translate and never increases.
    """
    if not target:
        raise ValueError("empty target")
    tile, target = tile._align(target)
    candidates = list(target) if candidates is None else list(candidates)
    covered = np.array([], dtype=np.int64)
    shifts, history = [], []
    for x in candidates:
        piece = (tile + x).lift(target.frame) if all(
            k in target.frame for k in x.support()) else None
        if piece is None:
            continue
        if not np.isin(piece.codes, target.codes).all():
            continue
        if np.isin(piece.codes, covered).any():
            continue
        covered = np.union1d(covered, piece.codes)
        shifts.append(x)
        history.append(Fraction(len(target) - len(covered), len(target)))
    leftover = history[-1] if history else Fraction(1)
    return shifts, leftover, history


def window_density(E, F_family, shifts):
    """``max |(E - x) & F| / |F|`` over supplied shifts ``x`` and windows ``F``.

    ``E`` is a predicate on group elements or a :class:`FiniteSubset`.
    The result is a certified lower bound for the upper Banach density.
    """
    member = E.__contains__ if isinstance(E, FiniteSubset) else E
    best = Fraction(0)
    for F in F_family:
        if not F:
            raise ValueError("empty window")
        for x in shifts:
            count = sum(1 for f in F if member(f + x))
            best = max(best, Fraction(count, len(F)))
    return best


# integer intervals {1, ..., 2^N}


def z_interval(N):
    return set(range(1, 2 ** N + 1))


def z_invariance_defect(K, F):
    if not F:
        raise ValueError("F must be nonempty")
    KF = {k + f for k in K for f in F}
    return Fraction(len(KF ^ set(F)), len(F))


def z_self_tiling(j, N):
    """``{1..2^N}`` as the disjoint union of ``{1..2^j} + k 2^j``: ``(shifts, leftover)``."""
    if j > N:
        raise ValueError(f"tile depth {j} exceeds box depth {N}")
    tile, target = z_interval(j), z_interval(N)
    shifts = [k * 2 ** j for k in range(2 ** (N - j))]
    union, total = set(), 0
    for s in shifts:
        piece = {x + s for x in tile}
        total += len(piece)
        union |= piece
    if total != len(union) or union != target:
        raise TilingError("interval tiling is not a partition")
    return shifts, Fraction(0)
