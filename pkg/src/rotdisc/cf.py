"""Continued fractions, convergents and named rotation numbers."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from rotdisc.core import EPS, Rotation, as_rotation

#: Residual below which further digits describe the binary representation
#: rather than the number itself.
RESIDUAL_FLOOR = 4 * EPS


@dataclass(frozen=True)
class ConvergentTable:
    """Partial quotients ``a_1, a_2, ...`` of ``rho = [0; a_1, a_2, ...]``,
    the convergents ``p_n/q_n`` and the local irrationality exponents."""

    digits: tuple
    p: tuple
    q: tuple
    mu: tuple

    def __len__(self):
        return len(self.digits)

    @property
    def convergents(self):
        return list(zip(self.p, self.q))

    def denominators(self, minimum=2):
        return [q for q in self.q if q >= minimum]

    def is_anchor(self, N) -> bool:
        """Whether ``N`` is a multiple of a convergent denominator ``>= 2``."""
        return any(N % q == 0 for q in self.q if q >= 2)

    def to_dict(self):
        mu = [None if not math.isfinite(m) else m for m in self.mu]
        return {"digits": list(self.digits), "p": list(self.p), "q": list(self.q), "mu": mu}


def convergents(digits: Sequence[int]):
    """``(p_n, q_n)`` for ``[0; a_1, ..., a_n]`` via the standard recurrence."""
    p_prev, q_prev, p, q = 1, 0, 0, 1
    out = []
    for a in digits:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def cf_to_fraction(digits: Sequence[int]) -> Fraction:
    """Exact value of the finite continued fraction ``[0; a_1, ..., a_n]``."""
    if not digits:
        return Fraction(0)
    p, q = convergents(digits)[-1]
    return Fraction(p, q)


def cf_value(prefix: Sequence[int], period: Sequence[int] = ()) -> float:
    """Machine value of ``[0; prefix, period, period, ...]``.

    Periodic tails are unrolled until the truncation error is far below the
    resolution of a double, then the exact rational is rounded once.
    """
    digits = [int(a) for a in prefix]
    if any(a < 1 for a in digits) or any(int(a) < 1 for a in period):
        raise ValueError("continued-fraction digits must be >= 1")
    if period:
        period = [int(a) for a in period]
        while not digits or convergents(digits)[-1][1] < 2 ** 80:
            digits.extend(period)
    return float(cf_to_fraction(digits))


def _liouville() -> float:
    total = Fraction(0)
    k = 1
    while math.factorial(k) < 40:
        total += Fraction(1, 10 ** math.factorial(k))
        k += 1
    return float(total)


_NAMED = {
    "golden": lambda: (math.sqrt(5.0) - 1.0) / 2.0,
    "sqrt2m1": lambda: math.sqrt(2.0) - 1.0,
    "pi_m3": lambda: math.pi - 3.0,
    "e_m2": lambda: math.e - 2.0,
    "zeta2_m1": lambda: math.pi ** 2 / 6.0 - 1.0,
    "liouville": _liouville,
    "alpha_st": lambda: cf_value([2, 40, 40], [2]),
}

NAMES = tuple(_NAMED) + ("cf:[digits]",)


def rotation_from_cf(prefix: Sequence[int], period: Sequence[int] = (), label=None) -> Rotation:
    """Rotation for ``[0; prefix, (period)...]``.

    A finite expansion is a rational, so it keeps its exact value.
    """
    prefix = tuple(int(a) for a in prefix)
    period = tuple(int(a) for a in period)
    if not prefix and not period:
        raise ValueError("empty continued fraction")
    if period:
        return Rotation(cf_value(prefix, period), source="cf-digits",
                        cf_digits=prefix + period, label=label)
    exact = cf_to_fraction(prefix)
    if exact == 1:
        exact = Fraction(0)
    return Rotation(float(exact), source="cf-digits", cf_digits=prefix, exact=exact, label=label)


def named_rho(name: str) -> Rotation:
    """Look up a named rotation number.

    Names: golden, sqrt2m1, pi_m3, e_m2, zeta2_m1, liouville, alpha_st, or
    ``cf:[a1,a2,...]`` for a custom expansion (a trailing ``...`` repeats the
    last digit).
    """
    key = name.strip()
    if key.startswith("cf:"):
        body = key[3:].strip().strip("[]")
        items = [s.strip() for s in body.split(",") if s.strip()]
        repeat = bool(items) and items[-1] in ("...", "…")
        if repeat:
            items = items[:-1]
        digits = [int(s) for s in items]
        if repeat:
            return rotation_from_cf(digits, digits[-1:], label=key)
        return rotation_from_cf(digits, label=key)
    try:
        maker = _NAMED[key]
    except KeyError:
        raise LookupError(f"unknown rotation name {name!r}; valid names: {', '.join(NAMES)}") from None
    return Rotation(maker(), source="named-constant", label=key)


def irrationality_exponent(rho, p: int, q: int) -> float:
    """Local irrationality exponent ``-log|rho - p/q| / log q``.

    The difference is taken exactly against the machine value of ``rho``.
    Returns ``inf`` (with a warning) when ``p/q`` equals that value.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    rho = as_rotation(rho)
    gap = abs(rho.exact_value() - Fraction(p, q))
    if gap == 0:
        warnings.warn(f"{p}/{q} equals the machine value of rho; exponent unresolved",
                      RuntimeWarning, stacklevel=2)
        return math.inf
    # log of a Fraction without underflow
    log_gap = math.log(gap.numerator) - math.log(gap.denominator)
    return -log_gap / math.log(q)


def cf_expand(rho, q_limit: int) -> ConvergentTable:
    """Continued-fraction digits and convergents of the machine value of rho.

    Stops before a denominator exceeds ``q_limit``, or once the convergent
    is within ``4 * eps`` of rho.
    """
    rho = as_rotation(rho)
    if q_limit < 1:
        raise ValueError("q_limit must be positive")
    x = rho.exact_value()
    digits, ps, qs, mus = [], [], [], []
    p_prev, q_prev, p, q = 1, 0, 0, 1
    rem = x
    while rem != 0:
        inv = 1 / rem
        a = math.floor(inv)
        rem = inv - a
        p_new, q_new = a * p + p_prev, a * q + q_prev
        if q_new > q_limit:
            break
        p_prev, q_prev, p, q = p, q, p_new, q_new
        digits.append(a)
        ps.append(p)
        qs.append(q)
        gap = abs(x - Fraction(p, q))
        if q < 2:
            mus.append(math.nan)
        elif gap == 0:
            mus.append(math.inf)
        else:
            mus.append(-(math.log(gap.numerator) - math.log(gap.denominator)) / math.log(q))
        if gap < RESIDUAL_FLOOR:
            break
    return ConvergentTable(tuple(digits), tuple(ps), tuple(qs), tuple(mus))


def anchor_sample(table: ConvergentTable, n_max: int, per_gap: int = 0):
    """Sample sizes built around convergent denominators.

    Every multiple ``k*q_n <= n_max`` of every denominator ``q_n >= 2`` is
    included, plus ``per_gap`` geometrically spaced integers strictly between
    consecutive anchors.  2 and ``n_max`` are always present.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    anchors = {2, int(n_max)}
    for q in set(table.q):
        if q >= 2:
            anchors.update(range(q, n_max + 1, q))
    ordered = sorted(anchors)
    if per_gap > 0:
        extra = []
        for lo, hi in zip(ordered[:-1], ordered[1:]):
            if hi - lo > 1:
                fill = np.rint(np.geomspace(lo, hi, per_gap + 2)[1:-1]).astype(np.int64)
                extra.extend(int(v) for v in fill if lo < v < hi)
        anchors.update(extra)
        ordered = sorted(anchors)
    return ordered


def table_for(rho, n_max: int) -> Optional[ConvergentTable]:
    rho = as_rotation(rho)
    if rho.value == 0.0 and (rho.exact is None or rho.exact == 0):
        return ConvergentTable((), (), (), ())
    return cf_expand(rho, n_max)
