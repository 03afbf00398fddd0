"""Reference evaluations used to check the branch construction.

``naive_sample`` is the unstable textbook sampler; ``exact_eval`` evaluates
the floor form of D_N in exact rational arithmetic.  A machine float is a
dyadic rational, so the exact oracle gives the true value of D_N for the
rotation number the floating-point code actually sees.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from rotdisc.core import EPS, Rotation, build_branches

ExactRational = Fraction


def to_exact(value) -> Fraction:
    """Exact rational for a float, int, Fraction or Rotation (the value the
    branch construction uses)."""
    if isinstance(value, Rotation):
        return value.computed_value()
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def naive_sample(rho, N, n_samples):
    """Sample D_N on an even grid by summing ``(x + i*rho) mod 1 - 1/2``.

    A deliberately literal double loop, O(N * n_samples).  Returns a list of
    ``(x, D_N(x))`` pairs for ``x = k / n_samples``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    r = rho.value if isinstance(rho, Rotation) else float(rho)
    out = []
    for k in range(n_samples):
        x = k / n_samples
        s = 0.0
        for i in range(1, N + 1):
            s += (x + i * r) % 1.0 - 0.5
        out.append((x, s))
    return out


def _log2_exact(n: int):
    """Exponent if ``n`` is a power of two, else None."""
    return n.bit_length() - 1 if n & (n - 1) == 0 else None


class _ExactSum:
    """Integer data for repeated exact evaluation at fixed (rho, N).

    When rho and x are both dyadic (every machine float is), the floor sum
    reduces to integer additions and right shifts on a common power-of-two
    scale.  Other rationals take the general floor-division path.
    """

    def __init__(self, rho_exact, N: int):
        self.rho = to_exact(rho_exact)
        self.N = N
        self.num, self.den = self.rho.numerator, self.rho.denominator
        self.const = Fraction(N * (N + 1), 2) * self.rho - Fraction(N, 2)
        self.terms = np.array([k * self.num for k in range(1, N + 1)], dtype=object)
        exp = _log2_exact(self.den)
        if exp is not None:
            self.scale = exp + 80
            self.scaled = self.terms * (1 << 80)
        else:
            self.scale = None

    def floor_sum(self, x: Fraction, left=False) -> int:
        a, b = x.numerator, x.denominator
        exp = _log2_exact(b)
        if self.scale is not None and exp is not None and exp <= self.scale:
            t = self.scaled + (a << (self.scale - exp))
            shift = self.scale
            if left:
                # left limit of floor(t) is ceil(t) - 1
                return int((-((-t) >> shift)).sum()) - self.N
            return int((t >> shift).sum())
        t = self.terms * b + a * self.den
        scale = b * self.den
        if left:
            return int((-((-t) // scale)).sum()) - self.N
        return int((t // scale).sum())

    def value(self, x, left=False) -> Fraction:
        x = to_exact(x)
        return self.N * x + self.const - self.floor_sum(x, left)


def exact_eval(rho_exact, N, x_exact, side="right") -> Fraction:
    """D_N at ``x`` in exact rational arithmetic, O(N).

    ``side="right"`` gives the value of the floor form at ``x`` itself (the
    value just after a jump); ``side="left"`` gives the limit from the left,
    which also allows ``x = 1``.
    """
    x = to_exact(x_exact)
    if side == "right":
        if not 0 <= x < 1:
            raise ValueError("x must lie in [0, 1)")
    elif side == "left":
        if not 0 < x <= 1:
            raise ValueError("left limits need x in (0, 1]")
    else:
        raise ValueError("side must be 'right' or 'left'")
    return _ExactSum(rho_exact, int(N)).value(x, left=(side == "left"))


def exact_discontinuities(rho_exact, N):
    """Exact ``ceil(k*rho) - k*rho`` for ``k = 1..N`` (unsorted, by k)."""
    rho = to_exact(rho_exact)
    out = []
    for k in range(1, N + 1):
        t = k * rho
        out.append(math.ceil(t) - t)
    return out


def _exact_structure(rho, N):
    """Sorted distinct exact discontinuities in (0, 1), their counts, and the
    count at 0."""
    counts = {}
    for d in exact_discontinuities(rho, N):
        counts[d] = counts.get(d, 0) + 1
    wrap = counts.pop(Fraction(0), 0)
    points = sorted(counts)
    return points, [counts[d] for d in points], wrap


def branch_order_matches(branches, rho_exact=None) -> bool:
    """Check that the float breakpoints are the exact ones, in the same order.

    The i-th float breakpoint must be nearer to the i-th exact discontinuity
    than to either exact neighbour, with identical jump heights, and the
    wrap jump at 0 must agree.
    """
    rho = to_exact(rho_exact if rho_exact is not None else branches.rho)
    exact, mults, wrap = _exact_structure(rho, branches.n_terms)
    if wrap != branches.wrap_jump:
        return False
    got = [Fraction(x) for x in branches.breakpoints[1:].tolist()]
    if len(exact) != len(got) or mults != branches.multiplicities[1:].tolist():
        return False
    bounds = [Fraction(0)] + exact + [Fraction(1)]
    for i, x in enumerate(got):
        e = bounds[i + 1]
        if 2 * abs(x - e) >= min(e - bounds[i], bounds[i + 2] - e):
            return False
    return True


def exact_endpoints(rho_exact, N):
    """Exact ``(x_left, a, b)`` of every branch of ``D_N``.

    ``a`` is the floor-form value at the exact discontinuity.  ``b`` is the
    left limit at the next one, which exceeds the value there by the number
    of terms jumping at that point.
    """
    rho = to_exact(rho_exact)
    ev = _ExactSum(rho, N)
    points, mults, wrap = _exact_structure(rho, N)
    lefts = [Fraction(0)] + points
    starts = [ev.value(x) for x in lefts]
    ends = [starts[j + 1] + mults[j] for j in range(len(points))]
    ends.append(ev.value(Fraction(1), left=True))
    return lefts, starts, ends


def endpoint_errors(branches, rho_exact=None):
    """Absolute deviation of every branch endpoint from the exact one.

    Branches are paired with the exact ones by order, so the result is only
    meaningful when :func:`branch_order_matches` holds.  Returns the arrays
    ``(start_errors, end_errors)``.
    """
    rho = to_exact(rho_exact if rho_exact is not None else branches.rho)
    _, starts, ends = exact_endpoints(rho, branches.n_terms)
    if len(starts) != branches.n_branches:
        raise ValueError("branch count differs from the exact structure")
    err_a = np.array([abs(float(Fraction(v) - e))
                      for v, e in zip(branches.starts.tolist(), starts)])
    err_b = np.array([abs(float(Fraction(v) - e))
                      for v, e in zip(branches.ends.tolist(), ends)])
    return err_a, err_b


def error_profile(q_list: Iterable[int]):
    """Largest deviation of branch endpoints from +-1/2 at ``rho = 1/q, N = q``.

    ``rho`` is the double nearest to ``1/q`` (so powers of two are exact).
    Returns ``[(q, max_error), ...]``.
    """
    out = []
    for q in q_list:
        q = int(q)
        if q < 2:
            raise ValueError("q must be at least 2")
        b = build_branches(Rotation.from_value(1.0 / q), q)
        ends = np.concatenate((b.starts, b.ends))
        dev = np.minimum(np.abs(ends - 0.5), np.abs(ends + 0.5))
        out.append((q, float(dev.max())))
    return out


def fit_line(x, y):
    """Least-squares ``y = slope*x + intercept``; returns (slope, intercept, r2)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2
