"""Canonical algebra of exponential-polynomial-trigonometric functions of u.

All symbolic work in this package happens in the substituted variable
``u = t**alpha / alpha``, where the conformable derivative of order alpha
acts as plain d/du.  Every function the solver manipulates -- homogeneous
solutions, forcing terms, variation-of-parameters integrands -- is a
finite sum of terms

    coeff * u**upow * exp(erate*u) * {1 | cos(tfreq*u) | sin(tfreq*u)}

and this module implements that sum type: canonical construction, the
ring operations, d/du, the antiderivative, and pointwise evaluation back
in the t domain.

Exponent keys (``erate``, ``tfreq``) are exact rationals rather than
binary64 floats.  Rates and frequencies only ever arise as small integer
combinations of a finite set of inputs (characteristic roots, forcing
parameters), and the cancellations the solver depends on -- a particular
solution landing exactly on the forcing term's key, or a resonant
integrand landing exactly on rate zero -- require those combinations to
be exact, which float addition cannot guarantee across different
evaluation orders.  Coefficients stay binary64; like-term merging prunes
the float cancellation dust they accumulate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

COS = "cos"
SIN = "sin"

#: A merged coefficient is dropped when it is smaller than this times the
#: largest coefficient folded into the same key (floored at 1), which
#: absorbs cancellation noise from product-to-sum rewrites and determinant
#: expansion without touching legitimate small terms.
PRUNE_REL = 1e-12

_TRIG_ORDER = {None: 0, COS: 1, SIN: 2}
_TRIG_BY_ORDER = (None, COS, SIN)


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class UTerm:
    """One product ``coeff * u^upow * e^(erate*u) * trig(tfreq*u)``.

    Construction normalizes trig parity so that ``tfreq`` is never
    negative (``cos(-b*u) = cos(b*u)``, ``sin(-b*u) = -sin(b*u)``) and
    collapses zero frequencies (``cos(0) = 1``, ``sin(0) = 0``), so a
    term with ``trig is None`` always has ``tfreq == 0`` and a term with
    a trig factor always has ``tfreq > 0``.
    """

    coeff: float
    upow: int = 0
    erate: Fraction = Fraction(0)
    trig: str | None = None
    tfreq: Fraction = Fraction(0)

    def __post_init__(self):
        upow = self.upow
        if upow != int(upow) or upow < 0:
            raise ValueError(f"upow must be a non-negative integer, got {upow!r}")
        if self.trig not in _TRIG_ORDER:
            raise ValueError(f"trig must be None, {COS!r} or {SIN!r}, got {self.trig!r}")
        coeff = float(self.coeff)
        erate = _rat(self.erate)
        tfreq = _rat(self.tfreq)
        trig = self.trig
        if trig is None:
            if tfreq != 0:
                raise ValueError("tfreq must be zero when there is no trig factor")
        else:
            if tfreq < 0:
                if trig == SIN:
                    coeff = -coeff
                tfreq = -tfreq
            if tfreq == 0:
                coeff = coeff if trig == COS else 0.0
                trig = None
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "upow", int(upow))
        object.__setattr__(self, "erate", erate)
        object.__setattr__(self, "trig", trig)
        object.__setattr__(self, "tfreq", tfreq)

    @property
    def key(self):
        return (self.upow, self.erate, _TRIG_ORDER[self.trig], self.tfreq)

    def with_coeff(self, coeff: float) -> UTerm:
        return UTerm(coeff, self.upow, self.erate, self.trig, self.tfreq)


@dataclass(frozen=True)
class UExpr:
    """A canonical sum of :class:`UTerm`: keys unique, sorted, noise pruned.

    The empty tuple is the zero function.  Instances are only built
    through :func:`canonicalize` (or the operations below, which all
    re-canonicalize), so structural equality is semantic equality up to
    float coefficient rounding.
    """

    terms: tuple[UTerm, ...] = ()

    def is_zero(self) -> bool:
        return not self.terms

    def eval(self, t: float, subst: SubstMap) -> float:
        return eval_expr(self, t, subst)

    def __add__(self, other: UExpr) -> UExpr:
        return add(self, other)

    def __sub__(self, other: UExpr) -> UExpr:
        return add(self, scale(other, -1.0))

    def __neg__(self) -> UExpr:
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, UExpr):
            return mul(self, other)
        return scale(self, float(other))

    __rmul__ = __mul__


ZERO = UExpr()


def expr(*terms: UTerm) -> UExpr:
    """Build a canonical expression from loose terms."""
    return canonicalize(terms)


def one() -> UExpr:
    return expr(UTerm(1.0))


@dataclass(frozen=True)
class SubstMap:
    """Carries alpha and the substitution ``u = t**alpha / alpha``."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not 0.0 < a <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    def u_of(self, t: float) -> float:
        if t <= 0.0:
            raise ValueError(f"the substitution requires t > 0, got t={t!r}")
        return t ** self.alpha / self.alpha


def canonicalize(terms) -> UExpr:
    """Merge like terms, prune cancellation noise, sort by key.

    Idempotent: applying it to an already-canonical expression returns an
    equal expression.
    """
    acc: dict[tuple, list[float]] = {}
    for term in terms:
        slot = acc.get(term.key)
        if slot is None:
            acc[term.key] = [term.coeff, abs(term.coeff)]
        else:
            slot[0] += term.coeff
            slot[1] = max(slot[1], abs(term.coeff))
    out = []
    for key in sorted(acc):
        total, biggest = acc[key]
        if abs(total) >= PRUNE_REL * max(1.0, biggest):
            upow, erate, trig_rank, tfreq = key
            out.append(UTerm(total, upow, erate, _TRIG_BY_ORDER[trig_rank], tfreq))
    return UExpr(tuple(out))


def add(f: UExpr, g: UExpr) -> UExpr:
    return canonicalize(f.terms + g.terms)


def scale(f: UExpr, c: float) -> UExpr:
    return canonicalize([t.with_coeff(t.coeff * c) for t in f.terms])


def _mul_terms(t1: UTerm, t2: UTerm) -> list[UTerm]:
    coeff = t1.coeff * t2.coeff
    upow = t1.upow + t2.upow
    erate = t1.erate + t2.erate
    if t1.trig is None and t2.trig is None:
        return [UTerm(coeff, upow, erate)]
    if t1.trig is None:
        return [UTerm(coeff, upow, erate, t2.trig, t2.tfreq)]
    if t2.trig is None:
        return [UTerm(coeff, upow, erate, t1.trig, t1.tfreq)]
    # Product-to-sum: the class is closed, each trig*trig pair gives two
    # terms at frequencies b1-b2 and b1+b2 (parity fixed at construction).
    b1, b2 = t1.tfreq, t2.tfreq
    half = 0.5 * coeff
    pair = (t1.trig, t2.trig)
    if pair == (COS, COS):
        return [UTerm(half, upow, erate, COS, b1 - b2),
                UTerm(half, upow, erate, COS, b1 + b2)]
    if pair == (SIN, SIN):
        return [UTerm(half, upow, erate, COS, b1 - b2),
                UTerm(-half, upow, erate, COS, b1 + b2)]
    if pair == (SIN, COS):
        return [UTerm(half, upow, erate, SIN, b1 + b2),
                UTerm(half, upow, erate, SIN, b1 - b2)]
    return [UTerm(half, upow, erate, SIN, b1 + b2),
            UTerm(-half, upow, erate, SIN, b1 - b2)]


def mul(f: UExpr, g: UExpr) -> UExpr:
    out = []
    for t1 in f.terms:
        for t2 in g.terms:
            out.extend(_mul_terms(t1, t2))
    return canonicalize(out)


def diff_u(f: UExpr) -> UExpr:
    """Term-wise d/du (product rule; at most three child terms per term)."""
    out = []
    for t in f.terms:
        if t.upow:
            out.append(UTerm(t.coeff * t.upow, t.upow - 1, t.erate, t.trig, t.tfreq))
        if t.erate:
            out.append(UTerm(t.coeff * float(t.erate), t.upow, t.erate, t.trig, t.tfreq))
        if t.trig == COS:
            out.append(UTerm(-t.coeff * float(t.tfreq), t.upow, t.erate, SIN, t.tfreq))
        elif t.trig == SIN:
            out.append(UTerm(t.coeff * float(t.tfreq), t.upow, t.erate, COS, t.tfreq))
    return canonicalize(out)


def _antiderivative(term: UTerm) -> list[UTerm]:
    c, k, a, trig, b = term.coeff, term.upow, term.erate, term.trig, term.tfreq
    if trig is None:
        if a == 0:
            # Pure power.  This branch is also what makes resonance work
            # downstream: a variation-of-parameters integrand whose rate
            # cancels exactly lands here and picks up one power of u.
            return [UTerm(c / (k + 1), k + 1)]
        af = float(a)
        head = UTerm(c / af, k, a)
        if k == 0:
            return [head]
        return [head] + _antiderivative(UTerm(-c * k / af, k - 1, a))
    af, bf = float(a), float(b)
    denom = af * af + bf * bf
    if trig == COS:
        base = [UTerm(c * af / denom, 0, a, COS, b),
                UTerm(c * bf / denom, 0, a, SIN, b)]
    else:
        base = [UTerm(c * af / denom, 0, a, SIN, b),
                UTerm(-c * bf / denom, 0, a, COS, b)]
    if k == 0:
        return base
    # integral(u^k * g) = u^k * G - k * integral(u^(k-1) * G) with G the
    # k = 0 antiderivative just computed; recursion descends on k.
    out = [UTerm(g.coeff, k, g.erate, g.trig, g.tfreq) for g in base]
    for g in base:
        out.extend(_antiderivative(UTerm(-k * g.coeff, k - 1, g.erate, g.trig, g.tfreq)))
    return out


def integrate_u(f: UExpr) -> UExpr:
    """Antiderivative with respect to u, integration constant fixed to 0."""
    out = []
    for term in f.terms:
        out.extend(_antiderivative(term))
    for t in out:
        if not math.isfinite(t.coeff):
            raise OverflowError(
                "antiderivative coefficient overflowed binary64 "
                f"(near-resonant rate {float(term.erate)!r}?) while integrating "
                f"{format_u(f)}")
    return canonicalize(out)


def div_by_term(f: UExpr, d: UTerm) -> UExpr:
    """Divide by a single pure-exponential term ``c * e^(a*u)``."""
    if d.coeff == 0.0:
        raise ZeroDivisionError("division by a zero term")
    if d.upow or d.trig is not None:
        raise ValueError(
            "division is only defined for pure exponential terms "
            f"(upow == 0, no trig), got {d!r}")
    return canonicalize([
        UTerm(t.coeff / d.coeff, t.upow, t.erate - d.erate, t.trig, t.tfreq)
        for t in f.terms
    ])


def eval_expr(f: UExpr, t: float, subst: SubstMap) -> float:
    """Evaluate back in the t domain through ``u = t**alpha / alpha``."""
    u = subst.u_of(t)
    total = 0.0
    for term in f.terms:
        v = term.coeff
        if term.upow:
            v *= u ** term.upow
        if term.erate:
            v *= math.exp(float(term.erate) * u)
        if term.trig == COS:
            v *= math.cos(float(term.tfreq) * u)
        elif term.trig == SIN:
            v *= math.sin(float(term.tfreq) * u)
        total += v
    return total


# ---------------------------------------------------------------------------
# rendering

def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _term_factors_u(term: UTerm) -> list[str]:
    factors = []
    if term.upow == 1:
        factors.append("u")
    elif term.upow:
        factors.append(f"u^{term.upow}")
    if term.erate:
        factors.append("e^{" + _fmt(float(term.erate)) + "·u}")
    if term.trig:
        factors.append(f"{term.trig}({_fmt(float(term.tfreq))}·u)")
    return factors


def _term_factors_t(term: UTerm, alpha: float) -> list[str]:
    factors = []
    if term.upow:
        factors.append("t^" + _fmt(term.upow * alpha))
    if term.erate:
        factors.append("e^{" + _fmt(float(term.erate) / alpha) + "·t^" + _fmt(alpha) + "}")
    if term.trig:
        factors.append(f"{term.trig}({_fmt(float(term.tfreq) / alpha)}·t^{_fmt(alpha)})")
    return factors


def _join(parts: list[tuple[float, list[str]]]) -> str:
    if not parts:
        return "0"
    chunks = []
    for i, (coeff, factors) in enumerate(parts):
        mag = abs(coeff)
        body = "·".join(([_fmt(mag)] if not factors or mag != 1.0 else []) + factors)
        if i == 0:
            chunks.append(("-" if coeff < 0 else "") + body)
        else:
            chunks.append((" - " if coeff < 0 else " + ") + body)
    return "".join(chunks)


def format_u(f: UExpr) -> str:
    """Deterministic plain-text rendering in the u variable."""
    return _join([(t.coeff, _term_factors_u(t)) for t in f.terms])


def format_t(f: UExpr, subst: SubstMap) -> str:
    """Deterministic rendering in the t variable with alpha substituted.

    Powers of u are folded into the coefficient: ``u^k = t^(k*alpha) /
    alpha^k``.
    """
    alpha = subst.alpha
    return _join([(t.coeff / alpha ** t.upow, _term_factors_t(t, alpha)) for t in f.terms])


def term_records(f: UExpr) -> list[dict]:
    """JSON-ready list of term records (rates/frequencies as floats)."""
    return [
        {"coeff": t.coeff, "upow": t.upow, "erate": float(t.erate),
         "trig": t.trig, "tfreq": float(t.tfreq)}
        for t in f.terms
    ]


def expr_from_records(records) -> UExpr:
    return canonicalize([
        UTerm(float(r["coeff"]), int(r["upow"]), Fraction(float(r["erate"])),
              r["trig"], Fraction(float(r["tfreq"])))
        for r in records
    ])
