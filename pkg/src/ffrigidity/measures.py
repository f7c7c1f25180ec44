"""Finite atomic probability measures on the dual group.

Weights are exact :class:`~fractions.Fraction` values summing to 1.
Fourier coefficients come out complex; the rigidity defect
``sum_i w_i |chi_i(g) - 1|`` is available both as a float and, when
every chord is rational, as an exact Fraction.
"""

from __future__ import annotations

from collections import namedtuple
from fractions import Fraction

from .dualgroup import Character, WindowError, char_eval

__all__ = [
    "AtomicMeasure",
    "SupportReport",
    "convolve",
    "fourier",
    "rigidity_defect",
    "rigidity_defect_exact",
    "support_group_check",
]


class AtomicMeasure:
    """``sum_i w_i delta_{chi_i}`` with exact positive weights summing to 1."""

    def __init__(self, atoms):
        merged = {}
        for chi, w in atoms:
            w = Fraction(w)
            if w <= 0:
                raise ValueError(f"atom weight {w} is not positive")
            merged[chi] = merged.get(chi, Fraction(0)) + w
        if not merged:
            raise ValueError("a probability measure needs at least one atom")
        if sum(merged.values()) != 1:
            raise ValueError(f"weights sum to {sum(merged.values())}, not 1")
        chars = list(merged)
        head = chars[0]
        for chi in chars[1:]:
            if chi.primes != head.primes or chi.window != head.window:
                raise WindowError("all atoms must share one window")
        self.atoms = tuple(sorted(merged.items(), key=lambda kv: kv[0].items))
        self.primes = head.primes
        self.window = head.window

    @classmethod
    def dirac(cls, chi):
        return cls([(chi, 1)])

    @classmethod
    def uniform(cls, chars):
        chars = list(chars)
        return cls([(chi, Fraction(1, len(chars))) for chi in chars])

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def weight(self, chi):
        return dict(self.atoms).get(chi, Fraction(0))

    def characters(self):
        return [chi for chi, _ in self.atoms]

    def __eq__(self, other):
        return isinstance(other, AtomicMeasure) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __mul__(self, other):
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return convolve(self, other)

    def __repr__(self):
        inner = ", ".join(f"{w}*{chi!r}" for chi, w in self.atoms[:4])
        more = "" if len(self.atoms) <= 4 else f", ... ({len(self.atoms)} atoms)"
        return f"AtomicMeasure({inner}{more})"

    def to_json(self):
        return {
            "atoms": [{"weight": str(w), "character": chi.to_json()} for chi, w in self.atoms],
        }

    @classmethod
    def from_json(cls, obj):
        return cls([(Character.from_json(a["character"]), Fraction(a["weight"])) for a in obj["atoms"]])


def fourier(sigma, g):
    """``sigma^(g) = sum_i w_i chi_i(g)``."""
    return sum(float(w) * complex(char_eval(chi, g)) for chi, w in sigma.atoms)


def rigidity_defect(sigma, g):
    """``sum_i w_i |chi_i(g) - 1|`` as a float."""
    return sum(float(w) * char_eval(chi, g).chord() for chi, w in sigma.atoms)


def rigidity_defect_exact(sigma, g):
    """The defect as a Fraction, or None when some chord is irrational."""
    total = Fraction(0)
    for chi, w in sigma.atoms:
        c = char_eval(chi, g).chord_exact()
        if c is None:
            return None
        total += w * c
    return total


def convolve(a, b):
    """``a * b``: atoms ``chi psi`` with weight ``w_chi w_psi``."""
    if a.primes != b.primes or a.window != b.window:
        raise WindowError(f"convolving measures with windows {a.window} and {b.window}")
    return AtomicMeasure([(chi * psi, wa * wb) for chi, wa in a.atoms for psi, wb in b.atoms])


SupportReport = namedtuple("SupportReport", "annihilator annihilated witnesses missing passed")


def support_group_check(sigma, probes, tol=1e-12):
    """Finite-window check that the atoms of ``sigma`` generate ``K^perp``.

    ``K`` is read off the Fourier transform (``|sigma^(g) - 1| <= tol``).
    Then every atom must be exactly 1 on ``K``, and every probe outside
    ``K`` must have a witnessing atom with ``chi(g) != 1``.
    """
    probes = list(probes)
    K = [g for g in probes if abs(fourier(sigma, g) - 1) <= tol]
    annihilated = all(char_eval(chi, g).is_one() for g in K for chi, _ in sigma.atoms)
    inK = set(K)
    witnesses, missing = {}, []
    for g in probes:
        if g in inK:
            continue
        for chi, _ in sigma.atoms:
            if not char_eval(chi, g).is_one():
                witnesses[g] = chi
                break
        else:
            missing.append(g)
    return SupportReport(K, annihilated, witnesses, missing, annihilated and not missing)
