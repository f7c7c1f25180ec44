"""Finite-depth Cantor-type construction of a measure with small rigidity defect.

Starting from ``sigma_0 = delta_1`` the measure is refined ``depth`` times.
At level ``p`` each of the ``2^p`` atoms ``chi_s`` gives up half its mass
to a new character picked from a family ``C`` inside the cylinder cell
of ``chi_s`` and agreeing with it on the first ``m`` coordinates:

    sigma_{p,s} = sigma_{p,s-1} + 2^-(p+1) (delta_new - delta_{chi_s}).

``m`` starts at ``schedule[0]`` and grows by ``schedule[1]`` until the
candidate keeps the defect inside its bounds on ``[0, horizon]``.  The
cut-off ``N_{p,s}`` is the first index after which the defect stays below
``2^-(p+2)`` up to the horizon.  Then the cell is split on the first
coordinate where the two characters differ.

Every bound is emitted as a certificate row.  Rows hold exact Fractions
whenever all chords involved are rational (always the case for p = 2);
otherwise floats compared with a ``1e-12`` guard where a tie fails.

The universally quantified tails are only certified up to ``horizon``,
which is recorded in the certificate header.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .certificate import Certificate
from .dualgroup import Character, GroupElt, WindowError, char_eval, example_sequence_geometric, element_from_poly
from .ffield import check_prime
from .measures import AtomicMeasure

__all__ = [
    "C0Geometric",
    "C0IndexSet",
    "ConstructionError",
    "ConstructionState",
    "FinitelySupported",
    "HorizonError",
    "PickError",
    "RigiditySequence",
    "cell_mass_check",
    "construct_wm_measure",
    "geometric_sequence",
    "indexset_sequence",
    "monomial_sequence",
    "reverify",
    "sigma_at",
]

GUARD = 1e-12


class ConstructionError(RuntimeError):
    """A certificate row failed: the construction itself is wrong."""


class PickError(ConstructionError):
    """The family has no admissible character at the required resolution."""


class HorizonError(ConstructionError):
    """The horizon is too short to certify a cut-off."""


# sequences


class RigiditySequence:
    """``n -> a_n`` in G, with a name for serialization."""

    def __init__(self, name, primes, fn):
        self.name = name
        self.primes = tuple(primes)
        self._fn = fn

    def __call__(self, n):
        return self._fn(n)

    def __repr__(self):
        return f"RigiditySequence({self.name!r})"


def monomial_sequence(p):
    """``a_n = t^n``."""
    check_prime(p)
    return RigiditySequence(f"t^n mod {p}", (p,), lambda n: GroupElt({(0, n + 1): 1}, (p,)))


def geometric_sequence(p):
    """``a_n = 1 + t + ... + t^(np-1)`` (``a_0 = 0``)."""
    check_prime(p)

    def a(n):
        if n == 0:
            return GroupElt.zero((p,))
        return element_from_poly(example_sequence_geometric(n, p))

    return RigiditySequence(f"geometric mod {p}", (p,), a)


def indexset_sequence(index_set, p, name="index set"):
    """``a_n = t^(i_n)`` with ``i_0 < i_1 < ...`` enumerating ``index_set``."""
    check_prime(p)
    members = []

    def a(n):
        i = members[-1] + 1 if members else 0
        while len(members) <= n:
            if (index_set(i) if callable(index_set) else i in index_set):
                members.append(i)
            i += 1
        return GroupElt({(0, members[n] + 1): 1}, (p,))

    return RigiditySequence(f"{name} mod {p}", (p,), a)


# families


class _Family:
    primes = ()
    window = ()

    def trivial(self):
        return Character.trivial(self.primes, self.window)

    def moves(self, near, m):
        raise NotImplementedError

    def pick(self, cell, near, m, exclude):
        """First move away from ``near`` beyond coordinate ``m`` that stays in ``cell``."""
        for cand in self.moves(near, m):
            if _in_cell(cand, cell) and cand not in exclude:
                return cand
        return None


class FinitelySupported(_Family):
    """All characters of one ``Z/p`` block supported on positions ``1..window``."""

    def __init__(self, p, window):
        self.p = check_prime(p)
        self.primes = (p,)
        self.window = (window,)

    def contains(self, chi):
        return chi.primes == self.primes and chi.window == self.window

    def moves(self, near, m):
        x = near.entries
        for k in range(m + 1, self.window[0] + 1):
            base = x.get((0, k), 0)
            for dv in range(1, self.p):
                new = dict(x)
                new[(0, k)] = base + dv
                yield Character(new, self.primes, self.window)

    def describe(self):
        return {"family": "finitely_supported", "p": self.p, "window": self.window[0]}


class C0Geometric(_Family):
    """Characters constant on each run of positions ``jp+1..(j+1)p``."""

    def __init__(self, p, nblocks):
        self.p = check_prime(p)
        self.nblocks = nblocks
        self.primes = (p,)
        self.window = (nblocks * p,)

    def contains(self, chi):
        x = chi.entries
        for b in range(self.nblocks):
            if len({x.get((0, b * self.p + i), 0) for i in range(1, self.p + 1)}) != 1:
                return False
        return chi.window == self.window

    def moves(self, near, m):
        x = near.entries
        p = self.p
        for b in range(self.nblocks):
            if b * p + 1 <= m:
                continue
            base = x.get((0, b * p + 1), 0)
            for dv in range(1, p):
                new = dict(x)
                for i in range(1, p + 1):
                    new[(0, b * p + i)] = base + dv
                yield Character(new, self.primes, self.window)

    def describe(self):
        return {"family": "c0_geometric", "p": self.p, "blocks": self.nblocks}


class C0IndexSet(_Family):
    """Characters with exponent 0 at position ``n+1`` for every ``n`` in the index set."""

    def __init__(self, index_set, p, window):
        self.p = check_prime(p)
        self.index_set = index_set
        self.primes = (p,)
        self.window = (window,)
        self.free = [k for k in range(1, window + 1) if not self._member(k - 1)]

    def _member(self, n):
        s = self.index_set
        return s(n) if callable(s) else n in s

    def contains(self, chi):
        return all(not self._member(n - 1) for (_, n) in chi.entries) and chi.window == self.window

    def moves(self, near, m):
        x = near.entries
        for k in self.free:
            if k <= m:
                continue
            base = x.get((0, k), 0)
            for dv in range(1, self.p):
                new = dict(x)
                new[(0, k)] = base + dv
                yield Character(new, self.primes, self.window)

    def describe(self):
        return {"family": "c0_indexset", "p": self.p, "window": self.window[0]}


# cylinder cells are dicts {(block, position): exponent}


def _in_cell(chi, cell):
    x = chi.entries
    return all(x.get(k, 0) == v for k, v in cell.items())


def _cell_subset(inner, outer):
    return all(inner.get(k) == v for k, v in outer.items())


def _cells_disjoint(a, b):
    return any(k in b and b[k] != v for k, v in a.items())


def _first_difference(chi, psi):
    x, y = chi.entries, psi.entries
    for k in sorted(set(x) | set(y)):
        if x.get(k, 0) != y.get(k, 0):
            return k
    raise ValueError("characters coincide")


@dataclass
class ConstructionState:
    depth: int
    horizon: int
    chars: list
    cutoffs: list
    step_cutoffs: dict = field(default_factory=dict)
    cells: list = field(default_factory=list)
    agreement: dict = field(default_factory=dict)
    schedule: tuple = (1, 1)
    sequence: str = ""
    family: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "depth": self.depth,
            "horizon": self.horizon,
            "sequence": self.sequence,
            "family": self.family,
            "schedule": list(self.schedule),
            "cutoffs": list(self.cutoffs),
            "step_cutoffs": [[p, s, n] for (p, s), n in sorted(self.step_cutoffs.items())],
            "agreement": [[p, s, m] for (p, s), m in sorted(self.agreement.items())],
            "characters": [chi.to_json() for chi in self.chars],
            "cells": [[[[j, n, v] for (j, n), v in sorted(c.items())] for c in level] for level in self.cells],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            depth=obj["depth"],
            horizon=obj["horizon"],
            chars=[Character.from_json(c) for c in obj["characters"]],
            cutoffs=list(obj["cutoffs"]),
            step_cutoffs={(p, s): n for p, s, n in obj["step_cutoffs"]},
            cells=[[{(j, n): v for j, n, v in c} for c in level] for level in obj["cells"]],
            agreement={(p, s): m for p, s, m in obj["agreement"]},
            schedule=tuple(obj["schedule"]),
            sequence=obj["sequence"],
            family=obj["family"],
        )


def sigma_at(state, p, s=0):
    """``sigma_p`` (``s = 0``) or the intermediate ``sigma_{p,s}``."""
    chars = state.chars
    half, full = Fraction(1, 2 ** (p + 1)), Fraction(1, 2 ** p)
    atoms = []
    for i in range(1, 2 ** p + 1):
        if i <= s:
            atoms += [(chars[i - 1], half), (chars[2 ** p + i - 1], half)]
        else:
            atoms.append((chars[i - 1], full))
    return AtomicMeasure(atoms)


# fast defect evaluation


class _Evaluator:
    """Residues of ``chi(a_n)`` for ``n = 0..horizon`` via one integer matrix product."""

    def __init__(self, primes, window, seq, horizon):
        self.L = math.prod(sorted(set(primes)))
        self.coords = [(j, n) for j, w in enumerate(window) for n in range(1, w + 1)]
        index = {c: i for i, c in enumerate(self.coords)}
        scale = [self.L // p for p in primes]
        S = np.zeros((horizon + 1, len(self.coords)), dtype=np.int64)
        for n in range(horizon + 1):
            for (j, k), v in seq(n).items:
                if k > window[j]:
                    raise WindowError(f"a_{n} reaches position {k} of block {j}, window is {window[j]}")
                S[n, index[(j, k)]] = v * scale[j]
        self.S = S
        self.index = index
        r = np.arange(self.L)
        self.chord = 2.0 * np.abs(np.sin(np.pi * r / self.L))
        exact = np.full(self.L, -1, dtype=np.int64)
        exact[0] = 0
        if self.L % 2 == 0:
            exact[self.L // 2] = 2
        if self.L % 6 == 0:
            exact[self.L // 6] = exact[5 * self.L // 6] = 1
        self.exact = exact
        self._cache = {}

    def residues(self, chi):
        hit = self._cache.get(chi)
        if hit is None:
            x = np.zeros(len(self.coords), dtype=np.int64)
            for k, v in chi.items:
                x[self.index[k]] = v
            hit = (self.S @ x) % self.L
            self._cache[chi] = hit
        return hit

    def defect(self, sigma, scale):
        """``(values, exact)``: integers ``defect * scale`` when exact, else floats."""
        rows = [(self.residues(chi), w) for chi, w in sigma.atoms]
        if all((self.exact[r] >= 0).all() for r, _ in rows):
            total = np.zeros(self.S.shape[0], dtype=np.int64)
            for r, w in rows:
                total += int(w * scale) * self.exact[r]
            return total, True
        total = np.zeros(self.S.shape[0])
        for r, w in rows:
            total += float(w) * self.chord[r]
        return total, False


def _strict_below(value, bound, exact, scale):
    if exact:
        return int(value) < bound * scale
    return float(value) < float(bound) - GUARD


def _left(value, exact, scale):
    return Fraction(int(value), scale) if exact else float(value)


# the row plan shared by the main pass and the re-verification pass


def _plan(state):
    """``(ineq, params, measure key, n-range, bound)`` for every defect row."""
    P, H, N = state.depth, state.horizon, state.cutoffs
    rows = []
    for p in range(P + 1):
        for j in range(p):
            rows.append(("level_early_window", {"p": p, "j": j, "from": N[j], "to": N[j + 1]},
                         (p, 0), (N[j], min(N[j + 1], H)), Fraction(2) ** (1 - j)))
        rows.append(("level_tail", {"p": p, "from": N[p], "horizon": H},
                     (p, 0), (N[p], H), Fraction(1, 2 ** (p + 1))))
    for p in range(P):
        for s in range(1, 2 ** p + 1):
            key = (p, s)
            for j in range(p):
                rows.append(("step_early_window", {"p": p, "s": s, "j": j, "from": N[j], "to": N[j + 1]},
                             key, (N[j], min(N[j + 1], H)), Fraction(2) ** (1 - j)))
            rows.append(("step_mid_tail", {"p": p, "s": s, "from": N[p], "horizon": H},
                         key, (N[p], H), Fraction(2) ** (1 - p)))
            Nps = state.step_cutoffs[key]
            rows.append(("step_late_tail", {"p": p, "s": s, "from": Nps, "horizon": H},
                         key, (Nps, H), Fraction(1, 2 ** (p + 2))))
    return rows


def _cell_rows(state, cert):
    """Disjointness, nesting and membership of the cylinder cells, per level and per split."""
    P, chars, cells = state.depth, state.chars, state.cells
    for p in range(P + 1):
        bad = []
        level = cells[p]
        for a in range(len(level)):
            for b in range(a + 1, len(level)):
                if not _cells_disjoint(level[a], level[b]):
                    bad.append(f"V_{p},{a + 1} meets V_{p},{b + 1}")
        for q in range(p):
            for r in range(1, 2 ** q + 1):
                for l in range(2 ** (p - q)):
                    i = l * 2 ** q + r
                    if not _in_cell(chars[i - 1], level[i - 1]):
                        bad.append(f"chi_{i} not in V_{p},{i}")
                    if not _cell_subset(level[i - 1], cells[q][r - 1]):
                        bad.append(f"V_{p},{i} not inside V_{q},{r}")
        if p == 0 and not _in_cell(chars[0], level[0]):
            bad.append("chi_1 not in V_0,1")
        cert.add("level_cells", {"p": p}, len(bad), 0, not bad, "; ".join(bad[:3]))
    for p in range(P):
        for s in range(1, 2 ** p + 1):
            lo, hi, up = cells[p + 1][s - 1], cells[p + 1][2 ** p + s - 1], cells[p][s - 1]
            bad = []
            if not _cells_disjoint(lo, hi):
                bad.append("split cells meet")
            if not (_cell_subset(lo, up) and _cell_subset(hi, up)):
                bad.append("split cells escape parent")
            if not _in_cell(chars[s - 1], lo) or not _in_cell(chars[2 ** p + s - 1], hi):
                bad.append("atom outside its cell")
            cert.add("step_split", {"p": p, "s": s}, len(bad), 0, not bad, "; ".join(bad))


def _certify(state, defects):
    """Certificate from ``defects(key) -> (values, exact, scale)``."""
    cert = Certificate(meta={
        "kind": "wm_construction",
        "depth": state.depth,
        "horizon": state.horizon,
        "sequence": state.sequence,
        "note": "tails certified on [from, horizon] only",
    })
    for ineq, params, key, (lo, hi), bound in _plan(state):
        vals, exact, scale = defects(key)
        seg = vals[lo:hi + 1]
        if len(seg) == 0:
            cert.add(ineq, params, 0, bound, True, "empty range")
            continue
        k = int(np.argmax(seg)) if isinstance(seg, np.ndarray) else max(range(len(seg)), key=seg.__getitem__)
        top = seg[k]
        params = dict(params, argmax=lo + k)
        cert.add(ineq, params, _left(top, exact, scale), bound, _strict_below(top, bound, exact, scale))
    _cell_rows(state, cert)
    return cert


def construct_wm_measure(family, seq, depth, horizon, schedule=(1, 1)):
    """Run the refinement to ``depth`` and certify it up to ``horizon``.

    Returns ``(sigma, state, certificate)``.  ``schedule = (start, step)``
    controls how the agreement depth ``m`` escalates per pick.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    start, step = schedule
    if start < 0 or step < 1:
        raise ValueError(f"bad agreement schedule {schedule}")
    scale = 2 ** (depth + 3)
    ev = _Evaluator(family.primes, family.window, seq, horizon)
    chars = [family.trivial()]
    cells = [[{}]]
    N = [0]
    step_cutoffs, agreement = {}, {}
    max_coord = sum(family.window)

    state = ConstructionState(depth, horizon, chars, N, step_cutoffs, cells, agreement,
                              tuple(schedule), seq.name, family.describe())

    for p in range(depth):
        nxt = [None] * (2 ** (p + 1))
        prev_cut = N[p]
        for s in range(1, 2 ** p + 1):
            near, cell = chars[s - 1], cells[p][s - 1]
            exclude = set(chars)
            m = start
            while True:
                if m >= max_coord:
                    raise PickError(f"no admissible character for level {p}, atom {s} at window {family.window}")
                cand = family.pick(cell, near, m, exclude)
                if cand is None:
                    raise PickError(f"family exhausted in cell {p},{s} beyond agreement depth {m}")
                chars.append(cand)
                trial = sigma_at(state, p, s)
                vals, exact = ev.defect(trial, scale)
                ok = all(_strict_below(vals[N[j]:N[j + 1] + 1].max(), Fraction(2) ** (1 - j), exact, scale)
                         for j in range(p))
                ok = ok and _strict_below(vals[N[p]:].max(), Fraction(2) ** (1 - p), exact, scale)
                if ok:
                    break
                chars.pop()
                m += step
            agreement[(p, s)] = m
            # smallest N > prev_cut whose tail stays under 2^-(p+2)
            tail = np.maximum.accumulate(vals[::-1])[::-1]
            bound = Fraction(1, 2 ** (p + 2))
            cut = next((n for n in range(prev_cut + 1, horizon + 1)
                        if _strict_below(tail[n], bound, exact, scale)), None)
            if cut is None:
                raise HorizonError(f"defect of sigma_{p},{s} does not settle below {bound} before {horizon}")
            step_cutoffs[(p, s)] = prev_cut = cut
            k = _first_difference(near, cand)
            x, y = near.entries, cand.entries
            nxt[s - 1] = dict(cell) | {k: x.get(k, 0)}
            nxt[2 ** p + s - 1] = dict(cell) | {k: y.get(k, 0)}
        cells.append(nxt)
        N.append(prev_cut)

    sigma = sigma_at(state, depth)
    if depth == 0:
        # nothing was refined, so there is nothing to certify
        return sigma, state, Certificate(meta={"kind": "wm_construction", "depth": 0, "horizon": horizon,
                                               "sequence": seq.name})

    def fast(key):
        vals, exact = ev.defect(sigma_at(state, *key), scale)
        return vals, exact, scale

    cert = _certify(state, fast)
    cert.meta["agreement_schedule"] = list(schedule)
    if not cert.passed:
        raise ConstructionError(f"certificate rows failed: {[r.ineq for r in cert.failures()][:5]}")
    return sigma, state, cert


def cell_mass_check(state, sigma):
    """``sigma(V_{q,r}) = 2^-q`` exactly for every level ``q`` and cell ``r``."""
    cert = Certificate(meta={"kind": "cell_mass"})
    for q, level in enumerate(state.cells):
        for r, cell in enumerate(level, start=1):
            mass = sum((w for chi, w in sigma.atoms if _in_cell(chi, cell)), Fraction(0))
            cert.add("cell_mass", {"q": q, "r": r}, mass, Fraction(1, 2 ** q), mass == Fraction(1, 2 ** q))
    return cert


# independent re-verification by direct summation


def _direct_defects(state, seq):
    H = state.horizon
    memo = {}

    def value(chi, n):
        key = (chi, n)
        if key not in memo:
            memo[key] = char_eval(chi, seq(n))
        return memo[key]

    def defects(key):
        sigma = sigma_at(state, *key)
        exact_vals = []
        for n in range(H + 1):
            acc = Fraction(0)
            for chi, w in sigma.atoms:
                c = value(chi, n).chord_exact()
                if c is None:
                    acc = None
                    break
                acc += w * c
            if acc is None:
                break
            exact_vals.append(acc)
        if len(exact_vals) == H + 1:
            return [v * 2 ** (state.depth + 3) for v in exact_vals], True, 2 ** (state.depth + 3)
        floats = [sum(float(w) * value(chi, n).chord() for chi, w in sigma.atoms) for n in range(H + 1)]
        return floats, False, 1

    return defects


def _plain_cells(state, cert):
    # set-based restatement of the cell checks
    def members(cell):
        return {i for i, chi in enumerate(state.chars) if all(chi.entries.get(k, 0) == v for k, v in cell.items())}

    def disjoint(a, b):
        return any(b.get(k, v) != v for k, v in a.items())

    def inside(a, b):
        return set(b.items()) <= set(a.items())

    cells, P = state.cells, state.depth
    for p in range(P + 1):
        bad = []
        lv = cells[p]
        n = len(lv)
        bad += [f"V_{p},{a + 1} meets V_{p},{b + 1}" for a in range(n) for b in range(a + 1, n)
                if not disjoint(lv[a], lv[b])]
        for q in range(p):
            for i in range(1, 2 ** p + 1):
                r = (i - 1) % 2 ** q + 1
                if i - 1 not in members(lv[i - 1]):
                    bad.append(f"chi_{i} not in V_{p},{i}")
                if not inside(lv[i - 1], cells[q][r - 1]):
                    bad.append(f"V_{p},{i} not inside V_{q},{r}")
        if p == 0 and 0 not in members(lv[0]):
            bad.append("chi_1 not in V_0,1")
        cert.add("level_cells", {"p": p}, len(bad), 0, not bad, "; ".join(bad[:3]))
    for p in range(P):
        for s in range(1, 2 ** p + 1):
            lo, hi, up = cells[p + 1][s - 1], cells[p + 1][2 ** p + s - 1], cells[p][s - 1]
            bad = []
            if not disjoint(lo, hi):
                bad.append("split cells meet")
            if not (inside(lo, up) and inside(hi, up)):
                bad.append("split cells escape parent")
            if s - 1 not in members(lo) or 2 ** p + s - 1 not in members(hi):
                bad.append("atom outside its cell")
            cert.add("step_split", {"p": p, "s": s}, len(bad), 0, not bad, "; ".join(bad))


def reverify(state, seq, cert):
    """Recompute every row by direct summation and compare with ``cert``.

    Returns ``(agrees, mismatches, recomputed)``.
    """
    fresh = Certificate(meta=dict(cert.meta))
    if state.depth == 0:
        return len(cert) == 0, ([] if len(cert) == 0 else ["rows present at depth 0"]), fresh
    defects = _direct_defects(state, seq)
    cache = {}
    for ineq, params, key, (lo, hi), bound in _plan(state):
        if key not in cache:
            cache[key] = defects(key)
        vals, exact, scale = cache[key]
        seg = list(vals[lo:hi + 1])
        if not seg:
            fresh.add(ineq, params, 0, bound, True, "empty range")
            continue
        top = max(seg)
        k = seg.index(top)
        if exact:
            left = Fraction(top) / scale
            ok = left < bound
        else:
            left = top
            ok = top < float(bound) - GUARD
        fresh.add(ineq, dict(params, argmax=lo + k), left, bound, ok)
    _plain_cells(state, fresh)

    mismatches = []
    if len(fresh) != len(cert):
        mismatches.append(f"row count {len(fresh)} vs {len(cert)}")
    for a, b in zip(cert.rows, fresh.rows):
        same_left = (a.left == b.left) if isinstance(a.left, (int, Fraction)) and isinstance(b.left, (int, Fraction)) \
            else abs(float(a.left) - float(b.left)) <= GUARD
        if a.ineq != b.ineq or a.passed != b.passed or not same_left or a.bound != b.bound:
            mismatches.append(f"{a.ineq} {a.params}: {a.left} vs {b.left}")
    return not mismatches, mismatches, fresh
