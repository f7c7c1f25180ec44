"""Continued fractions in F_p((1/t)).

Two routes produce partial quotients:

* rationals ``num/den`` go through the Euclidean chain of ``divmod`` and
  are exact;
* truncated series go through the Gauss map ``x -> {1/x}`` on the
  fractional part, and stop with :class:`PrecisionError` once the known
  coefficients no longer determine the next quotient.

The two must agree wherever both apply; the test-suite holds them to it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import Certificate
from .ffield import AbsValue, Poly
from .laurent import DEFAULT_PRECISION, Laurent, PrecisionError, l_floor, l_frac, l_inv

__all__ = [
    "CFExpansion",
    "Convergents",
    "cf_expand",
    "cf_step",
    "convergents",
    "fibonacci_alpha",
    "norm_exponents",
    "verify_approx",
]


@dataclass(frozen=True)
class CFExpansion:
    alpha: object  # Laurent, or (num, den) for exact rationals
    quotients: tuple
    terminated: bool

    def __post_init__(self):
        for n, a in enumerate(self.quotients[1:], start=1):
            if a.degree < 1:
                raise ValueError(f"partial quotient a_{n} = {a} has degree < 1")


@dataclass(frozen=True)
class Convergents:
    p: tuple
    q: tuple

    def __len__(self):
        return len(self.q)

    def __iter__(self):
        return iter(zip(self.p, self.q))


def cf_step(x):
    """One application of ``T x = {1/x}`` on the fractional part (``T 0 = 0``)."""
    if x.coeffs and x.top > -1:
        raise ValueError(f"cf_step expects an element with no polynomial part, got {x}")
    if x.is_known_zero():
        return Laurent.zero(x.p)
    return l_frac(l_inv(x))


def _expand_rational(num, den, n):
    out = []
    a, b = num, den
    while len(out) <= n:
        q, r = divmod(a, b)
        out.append(q)
        if r.is_zero():
            return out, True
        a, b = b, r
    return out, False


def cf_expand(alpha, n):
    """Partial quotients ``a_0 .. a_n`` (fewer if the expansion terminates).

    ``alpha`` is a :class:`Laurent`, a :class:`Poly`, or a pair
    ``(num, den)`` of polynomials.
    """
    if isinstance(alpha, Poly):
        return CFExpansion(alpha, (alpha,), True)
    if isinstance(alpha, tuple):
        num, den = alpha
        if den.is_zero():
            raise ZeroDivisionError("rational with zero denominator")
        qs, done = _expand_rational(num, den, n)
        return CFExpansion(alpha, tuple(qs), done)
    quotients = [l_floor(alpha)]
    x = l_frac(alpha)
    while len(quotients) <= n:
        if x.is_known_zero():
            return CFExpansion(alpha, tuple(quotients), True)
        if x.is_visible_zero():
            raise PrecisionError(
                f"precision exhausted after {len(quotients)} partial quotients")
        y = l_inv(x)
        quotients.append(l_floor(y))
        x = l_frac(y)
    return CFExpansion(alpha, tuple(quotients), False)


def convergents(cf):
    """``p_n/q_n`` from ``q_n = a_n q_{n-1} + q_{n-2}`` (same rule for p_n)."""
    qs = cf.quotients
    if not qs:
        raise ValueError("no partial quotients")
    F = qs[0].p
    one, zero = Poly.one(F), Poly.zero(F)
    p_prev, p_cur = one, qs[0]
    q_prev, q_cur = zero, one
    ps, qq = [p_cur], [q_cur]
    for a in qs[1:]:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        ps.append(p_cur)
        qq.append(q_cur)
    return Convergents(tuple(ps), tuple(qq))


def fibonacci_alpha(p, prec=64):
    """``[t; t, t, ...]``, the large root of ``x^2 - t x - 1``."""
    from .pisot import MonicIntPoly, pv_root

    t = Poly.t(p)
    f = MonicIntPoly([Poly.one(p), t])
    return pv_root(f, prec).root


def _norm(alpha, qn):
    """``||q_n alpha||`` as ``(AbsValue, exact)``."""
    if isinstance(alpha, tuple):
        num, den = alpha
        r = (qn * num) % den
        return (AbsValue.zero() if r.is_zero() else AbsValue(r.degree - den.degree)), True
    return l_frac(Laurent.from_poly(qn) * alpha).abs_bound()


def _approx_error(alpha, pn, qn):
    """``alpha - p_n/q_n`` by series division, as ``(AbsValue, exact)``."""
    if isinstance(alpha, tuple):
        num, den = alpha
        r = qn * num - pn * den
        if r.is_zero():
            return AbsValue.zero(), True
        return AbsValue(r.degree - den.degree - qn.degree), True
    need = alpha.prec if alpha.prec is not None else DEFAULT_PRECISION
    ratio = Laurent.from_rational(pn, qn, need + 1)
    return (alpha - ratio).abs_bound()


def _below(value, exponent):
    # an inexact value carries its largest possible exponent, so one test serves both
    return value.is_zero or value.exponent < exponent


def verify_approx(alpha, conv):
    """Check ``|alpha - p_n/q_n| < |q_n|^-2`` and ``||q_n alpha|| < |q_n|^-1`` for every n.

    ``alpha`` is a :class:`Laurent` or an exact pair ``(num, den)``.
    Comparisons are on integer exponents; a quantity hidden below the
    known precision is certified only when that precision already
    reaches under the bound.
    """
    cert = Certificate(meta={"kind": "cf_approximation"})
    for n, (pn, qn) in enumerate(conv):
        dq = qn.degree
        err, exact = _approx_error(alpha, pn, qn)
        cert.add("cf_abs_error", {"n": n, "deg_q": dq}, _fmt(err, exact), -2 * dq, _below(err, -2 * dq))
        nrm, exact = _norm(alpha, qn)
        cert.add("cf_norm", {"n": n, "deg_q": dq}, _fmt(nrm, exact), -dq, _below(nrm, -dq))
    return cert


def norm_exponents(alpha, conv):
    """Exponent of ``||q_n alpha||`` per n; ``None`` for an exact zero."""
    out = []
    for _, qn in conv:
        v, exact = _norm(alpha, qn)
        if not exact:
            raise PrecisionError(f"||q_n alpha|| hidden below precision for deg q_n = {qn.degree}")
        out.append(v.exponent)
    return out


def _fmt(v, exact):
    if v.is_zero:
        return "zero"
    return v.exponent if exact else f"<={v.exponent}"
