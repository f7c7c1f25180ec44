"""Finite models of recurrence and the cube lemma.

* :func:`delta_recurrence_bruteforce` searches a finite abelian group for
  a set ``E`` of size at least ``delta |G|`` whose difference set misses
  ``R``.
* :func:`r_epsilon_set` picks out the probes with small rigidity defect.
* :func:`cube_lemma_check` tests whether ``A A^-1`` comes within
  ``eps`` of every point of ``Lambda^d``, where ``Lambda`` is a product
  of cyclic groups of roots of unity and ``rho`` is the normalized sum of
  chord lengths.
* :func:`mcdiarmid_bound` and :func:`blowup_lower_bound` evaluate the
  concentration estimates used to size ``d``.

Sampling can find violations, but passing samples prove nothing.  Every
verdict says which kind of check produced it.
"""

from __future__ import annotations

import itertools
import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from .folner import FiniteSubset
from .measures import rigidity_defect

__all__ = [
    "BudgetError",
    "BlowupBound",
    "CubeInstance",
    "CubeVerdict",
    "FiniteModel",
    "RecurrenceVerdict",
    "blowup_lower_bound",
    "blowup_ratio",
    "cube_distance_field",
    "cube_lemma_check",
    "delta_recurrence_bruteforce",
    "mcdiarmid_bound",
    "r_epsilon_set",
]

BUDGET = 2 ** 24
GUARD = 1e-9


class BudgetError(RuntimeError):
    """Exhaustive search would exceed the enumeration budget."""


class FiniteModel:
    """``G = prod Z/m_i``, a subset ``R`` and a density threshold ``delta``."""

    def __init__(self, moduli, R, delta):
        self.moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in self.moduli):
            raise ValueError(f"bad moduli {moduli}")
        self.delta = Fraction(delta)
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta = {delta} outside (0, 1]")
        self.R = frozenset(self._reduce(r) for r in R)

    def _reduce(self, g):
        g = tuple(g)
        if len(g) != len(self.moduli):
            raise ValueError(f"{g} has the wrong length for moduli {self.moduli}")
        return tuple(x % m for x, m in zip(g, self.moduli))

    @property
    def order(self):
        return math.prod(self.moduli)

    def elements(self):
        return list(itertools.product(*(range(m) for m in self.moduli)))

    def min_size(self):
        return math.ceil(self.delta * self.order)

    def __repr__(self):
        return f"FiniteModel({self.moduli}, |R|={len(self.R)}, delta={self.delta})"


RecurrenceVerdict = namedtuple("RecurrenceVerdict", "passed counterexample explored label")


def delta_recurrence_bruteforce(model, budget=BUDGET):
    """Is ``(E - E) & R`` nonempty for every ``E`` with ``|E| >= delta |G|``?

    Removing points from a failing ``E`` keeps it failing, so only sets of
    the minimum size need checking.  The depth-first search over increasing
    element lists visits those sets in lexicographic order and prunes any
    prefix whose differences already meet ``R``; the first complete set it
    reaches is the lexicographically least counterexample.
    """
    elems = model.elements()
    n, k = len(elems), model.min_size()
    total = math.comb(n, k)
    if total > budget:
        raise BudgetError(f"{total} subsets of size {k} exceed the budget {budget}")
    index = {g: i for i, g in enumerate(elems)}
    diff = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            diff[i, j] = index[model._reduce(x - y for x, y in zip(a, b))]
    inR = np.zeros(n, dtype=bool)
    for r in model.R:
        inR[index[r]] = True
    if inR[index[model._reduce([0] * len(model.moduli))]]:
        return RecurrenceVerdict(True, None, 0, "exhaustive")

    explored = 0
    chosen = []

    def extend(start):
        nonlocal explored
        if len(chosen) == k:
            return True
        for i in range(start, n - (k - len(chosen)) + 1):
            explored += 1
            if explored > budget:
                raise BudgetError(f"search exceeded {budget} nodes")
            if any(inR[diff[i, j]] or inR[diff[j, i]] for j in chosen):
                continue
            chosen.append(i)
            if extend(i + 1):
                return True
            chosen.pop()
        return False

    if extend(0):
        return RecurrenceVerdict(False, [elems[i] for i in chosen], explored, "exhaustive")
    return RecurrenceVerdict(True, None, explored, "exhaustive")


def r_epsilon_set(sigma, eps, probes):
    """Probes ``g`` with ``rigidity_defect(sigma, g) < eps``."""
    keep = [g for g in probes if rigidity_defect(sigma, g) < eps]
    return FiniteSubset(keep, sigma.primes)


# cube lemma


class CubeInstance:
    """``Lambda^d`` with ``Lambda = prod_l Lambda_{k_l}``, plus ``delta`` and ``eps``."""

    def __init__(self, k_list, d, delta, eps):
        self.k_list = tuple(int(k) for k in k_list)
        if not self.k_list or any(k < 2 for k in self.k_list):
            raise ValueError(f"orders must be at least 2, got {k_list}")
        if d < 1:
            raise ValueError("d must be at least 1")
        self.d = int(d)
        self.delta = Fraction(delta).limit_denominator(10 ** 9) if not isinstance(delta, Fraction) else delta
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta = {delta} outside (0, 1]")
        self.eps = float(eps)
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def shape(self):
        return self.k_list * self.d

    @property
    def size(self):
        return math.prod(self.shape)

    def min_size(self):
        return math.ceil(self.delta * self.size)

    def __repr__(self):
        return f"CubeInstance(k={list(self.k_list)}, d={self.d}, delta={self.delta}, eps={self.eps})"


def _chords(k):
    return 2.0 * np.abs(np.sin(np.pi * np.arange(k) / k))


def cube_distance_field(inst, marked):
    """``min over marked q of rho(x, q)`` for every ``x``, as an array of ``inst.shape``.

    The metric is a sum over axes, so the min-plus transform runs one axis
    at a time.
    """
    shape = inst.shape
    D = np.where(marked.reshape(shape), 0.0, np.inf)
    for axis, k in enumerate(shape):
        c = _chords(k)
        D = np.min(np.stack([np.roll(D, s, axis=axis) + c[s] for s in range(k)]), axis=0)
    return D / (inst.d * len(inst.k_list))


def _quotients(inst, A):
    shape = np.array(inst.shape)
    digits = np.array(np.unravel_index(A, inst.shape)).T
    Q = (digits[:, None, :] - digits[None, :, :]).reshape(-1, len(shape)) % shape
    marked = np.zeros(inst.size, dtype=bool)
    marked[np.ravel_multi_index(Q.T, inst.shape)] = True
    return marked


CubeVerdict = namedtuple(
    "CubeVerdict", "passed label mode checked worst counterexample ties lemma_applies bound_N")


def cube_lemma_check(inst, mode="exhaustive", count=100, seed=0, budget=BUDGET):
    """Look for ``A`` and ``x`` with no ``a, b`` in ``A`` giving ``rho(a b^-1, x) < eps``.

    Only ``|A| = ceil(delta |Lambda^d|)`` is searched: enlarging ``A``
    enlarges ``A A^-1``.  A worst distance within ``1e-9`` of ``eps`` is a
    tie; ties never count as passing.
    """
    n, k = inst.size, inst.min_size()
    if n > budget:
        raise BudgetError(f"|Lambda^d| = {n} exceeds the budget {budget}")
    N = mcdiarmid_bound(float(inst.delta), inst.eps) if inst.delta < 1 else 0
    if mode == "exhaustive":
        total = math.comb(n, k)
        if total * n > budget:
            raise BudgetError(f"{total} subsets of {n} points exceed the budget {budget}")
        candidates = itertools.combinations(range(n), k)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        candidates = (np.sort(rng.choice(n, size=k, replace=False)) for _ in range(count))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    worst, bad, ties, checked = 0.0, None, 0, 0
    for A in candidates:
        A = np.asarray(A, dtype=np.int64)
        D = cube_distance_field(inst, _quotients(inst, A))
        checked += 1
        top = float(D.max())
        if abs(top - inst.eps) <= GUARD:
            ties += 1
        if top > worst:
            worst = top
        if top >= inst.eps - GUARD and bad is None:
            x = int(np.argmax(D))
            bad = {"A": [list(map(int, np.unravel_index(a, inst.shape))) for a in A],
                   "x": list(map(int, np.unravel_index(x, inst.shape))), "distance": top}
    passed = bad is None
    if mode == "exhaustive":
        label = "proved" if passed else "counterexample"
    else:
        label = "no violation in sample" if passed else "violation"
    return CubeVerdict(passed, label, mode, checked, worst, bad, ties, inst.d > N, N)


def mcdiarmid_bound(delta, eps):
    """``ceil(16 eps^-2 ln(1/delta))``."""
    if not 0 < delta <= 1:
        raise ValueError(f"delta = {delta} outside (0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return math.ceil(16 * math.log(1 / delta) / eps ** 2)


BlowupBound = namedtuple("BlowupBound", "value raw")


def blowup_lower_bound(alpha, d, t):
    """``1 - exp(-d t^2 / 8) / alpha``, clamped to ``[0, 1]`` (the raw value is kept)."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha = {alpha} outside (0, 1]")
    if t <= 0:
        raise ValueError("t must be positive")
    if d < 1:
        raise ValueError("d must be at least 1")
    raw = 1 - math.exp(-d * t * t / 8) / alpha
    return BlowupBound(min(1.0, max(0.0, raw)), raw)


def blowup_ratio(inst, A, t):
    """``|A_t| / |Lambda^d|`` with ``A_t = {x : rho(x, a) < t for some a in A}``.

    Points within ``1e-9`` of the threshold are left out, so the count
    errs low.
    """
    marked = np.zeros(inst.size, dtype=bool)
    marked[np.asarray(A, dtype=np.int64)] = True
    D = cube_distance_field(inst, marked)
    return Fraction(int((D < t - GUARD).sum()), inst.size)
