"""Exact branch structure of the rotation discrepancy sum.

For a rotation number ``rho`` and ``N`` terms,

    D_N(x, rho) = sum_{k=1}^{N} [ (x + k*rho) mod 1 - 1/2 ]
                = N*x + N(N+1)/2 * rho - N/2 - sum_k floor(x + k*rho)

is piecewise linear in ``x`` with slope ``N`` and integer downward jumps at
the points ``ceil(k*rho) - k*rho``.  :func:`build_branches` finds those
points and returns the value of ``D_N`` at both ends of every linear piece,
which describes the function completely in O(N) storage.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from rotdisc._sorting import sort_points

#: Largest supported number of terms.  Keeps sum(floor(k*rho)) < 2**51.
MAX_TERMS = 2 ** 26

#: Fractions with larger denominators are treated as plain floats.
MAX_EXACT_DENOMINATOR = 2 ** 31

EPS = np.finfo(np.float64).eps

SOURCES = ("decimal", "fraction", "named-constant", "cf-digits")


class CapacityError(ValueError):
    """Number of terms outside ``1 <= N <= MAX_TERMS``."""


def _reduce_unit(value: float) -> float:
    if 0.0 <= value < 1.0:
        return value
    warnings.warn(f"rotation number {value!r} reduced mod 1", stacklevel=3)
    reduced = value % 1.0
    # tiny negative inputs round up to exactly 1.0
    return 0.0 if reduced >= 1.0 else reduced


@dataclass(frozen=True)
class Rotation:
    """A rotation number in [0, 1) together with where it came from.

    ``exact`` holds the rational value when the rotation was given as a
    fraction (or a terminating continued fraction).  Such rotations take
    the integer discontinuity path, so coincident discontinuities are
    bit-identical and collapse into jumps of height > 1.
    """

    value: float
    source: str = "decimal"
    cf_digits: Optional[tuple] = None
    exact: Optional[Fraction] = None
    label: Optional[str] = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown rotation source {self.source!r}")
        if not (0.0 <= self.value < 1.0) or not math.isfinite(self.value):
            raise ValueError(f"rotation value must lie in [0, 1), got {self.value!r}")
        if self.exact is not None and not (0 <= self.exact < 1):
            raise ValueError("exact rotation value must lie in [0, 1)")
        if self.cf_digits is not None and any(int(a) < 1 for a in self.cf_digits):
            raise ValueError("continued-fraction digits must be >= 1")

    @classmethod
    def from_value(cls, value, source="decimal", label=None):
        return cls(_reduce_unit(float(value)), source=source, label=label)

    @classmethod
    def from_fraction(cls, p, q=None, label=None):
        frac = Fraction(p) if q is None else Fraction(p, q)
        if not 0 <= frac < 1:
            warnings.warn(f"rotation number {frac} reduced mod 1", stacklevel=2)
            frac -= math.floor(frac)
        return cls(float(frac), source="fraction", exact=frac, label=label)

    def exact_value(self) -> Fraction:
        """The rotation as an exact rational (the float itself if irrational)."""
        return self.exact if self.exact is not None else Fraction(self.value)

    def computed_value(self) -> Fraction:
        """The exact rational the branch construction works with."""
        return self.exact if self.uses_integer_path else Fraction(self.value)

    @property
    def uses_integer_path(self) -> bool:
        return self.exact is not None and self.exact.denominator <= MAX_EXACT_DENOMINATOR

    def __str__(self):
        if self.label:
            return self.label
        if self.exact is not None:
            return str(self.exact)
        return repr(self.value)


def as_rotation(rho) -> Rotation:
    if isinstance(rho, Rotation):
        return rho
    if isinstance(rho, Fraction):
        return Rotation.from_fraction(rho)
    return Rotation.from_value(rho)


def _check_terms(N) -> int:
    if isinstance(N, (bool, np.bool_)) or int(N) != N:
        raise CapacityError(f"number of terms must be an integer, got {N!r}")
    N = int(N)
    if not 1 <= N <= MAX_TERMS:
        raise CapacityError(f"number of terms must satisfy 1 <= N <= 2**26, got {N}")
    return N


@dataclass(frozen=True)
class _Discontinuities:
    points: np.ndarray        # unique locations, ascending
    mults: np.ndarray         # multiplicity of each location
    floor_sum: int            # sum_k floor(k*rho)
    residues: Optional[np.ndarray] = None   # integer path: points == residues / q


def _collapse(sorted_vals):
    n = sorted_vals.shape[0]
    new = np.empty(n, dtype=bool)
    new[0] = True
    np.not_equal(sorted_vals[1:], sorted_vals[:-1], out=new[1:])
    starts = np.flatnonzero(new)
    mults = np.diff(np.append(starts, n))
    return sorted_vals[starts], mults.astype(np.int64)


def _split(value: float):
    """``value = hi + lo`` with ``hi`` holding the leading 26 significant bits.

    For integer ``k <= 2**26`` both ``k*hi`` and ``k*lo`` are exact doubles.
    """
    bits = np.array(value, dtype=np.float64).view(np.int64)
    hi = float((bits & ~np.int64((1 << 27) - 1)).view(np.float64))
    return hi, value - hi


def _float_terms(rho: Rotation, N: int):
    # k*rho = whole + s + err exactly: split product, then a two-sum
    hi, lo = _split(rho.value)
    k = np.arange(1, N + 1, dtype=np.float64)
    t_hi = k * hi
    whole = np.floor(t_hi)
    frac = t_hi - whole
    t_lo = k * lo
    s = frac + t_lo
    bv = s - frac
    err = (frac - (s - bv)) + (t_lo - bv)
    up = np.ceil(s)
    up[(up == s) & (err > 0)] += 1.0
    d = (up - s) - err
    # a point within half an ulp of 1 still lies inside [0, 1)
    d[d >= 1.0] = np.nextafter(1.0, 0.0)
    # floor(k*rho) = ceil(k*rho) - (k*rho not integral); exact in int64
    ceil_sum = int(whole.astype(np.int64).sum()) + int(up.astype(np.int64).sum())
    return d, ceil_sum - int(np.count_nonzero(d))


def _integer_terms(rho: Rotation, N: int):
    p, q = rho.exact.numerator, rho.exact.denominator
    kp = np.arange(1, N + 1, dtype=np.int64) * p
    return (-kp) % q, int((kp // q).sum())


def _locate(rho: Rotation, N: int, sort: str) -> _Discontinuities:
    if rho.uses_integer_path:
        res, floor_sum = _integer_terms(rho, N)
        residues, mults = np.unique(res, return_counts=True)
        q = rho.exact.denominator
        return _Discontinuities(residues / q, mults.astype(np.int64), floor_sum, residues)
    d, floor_sum = _float_terms(rho, N)
    points, mults = _collapse(sort_points(d, sort))
    return _Discontinuities(points, mults, floor_sum)


def discontinuities(rho, N, sort="bucket"):
    """Jump locations of ``D_N`` in [0, 1) with their multiplicities.

    Returns ``(points, multiplicities)``: the distinct values of
    ``ceil(k*rho) - k*rho`` for ``k = 1..N`` in ascending order, and how many
    ``k`` produce each.  Values are compared bit for bit.
    """
    rho = as_rotation(rho)
    N = _check_terms(N)
    found = _locate(rho, N, sort)
    return found.points, found.mults


def _intercept_exact(rho: Rotation, N: int, floor_sum: int) -> Fraction:
    num, den = rho.computed_value().as_integer_ratio()
    triangle = N * (N + 1) // 2
    return Fraction(2 * triangle * num - (N + 2 * floor_sum) * den, 2 * den)


def y_intercept(rho, N) -> float:
    """``D_N(0, rho) = N(N+1)/2 * rho - N/2 - sum_k floor(k*rho)``.

    The triangular number is an exact integer and is multiplied by the exact
    binary value of ``rho``; the result is rounded once.
    """
    rho = as_rotation(rho)
    N = _check_terms(N)
    if rho.uses_integer_path:
        floor_sum = _integer_terms(rho, N)[1]
    else:
        floor_sum = _float_terms(rho, N)[1]
    value = _intercept_exact(rho, N, floor_sum)
    return value.numerator / value.denominator


def _freeze(arr):
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BranchList:
    """Exact piecewise-linear description of ``D_N`` on [0, 1).

    Branch ``j`` covers ``[breakpoints[j], breakpoints[j+1])`` (the last one
    ends at 1), starts at ``starts[j]`` and rises with slope ``N`` to
    ``ends[j]``.  ``multiplicities[j]`` is the downward jump at
    ``breakpoints[j]``; entry 0 is the jump across the wrap from 1 back to 0.
    """

    n_terms: int
    breakpoints: np.ndarray
    multiplicities: np.ndarray
    starts: np.ndarray
    ends: np.ndarray
    rho: Optional[Rotation] = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("breakpoints", "multiplicities", "starts", "ends"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    @property
    def n_branches(self) -> int:
        return int(self.breakpoints.shape[0])

    @property
    def right_edges(self) -> np.ndarray:
        return np.append(self.breakpoints[1:], 1.0)

    @property
    def widths(self) -> np.ndarray:
        return self.right_edges - self.breakpoints

    @property
    def jump_right(self) -> np.ndarray:
        """Jump height at the right end of each branch."""
        return np.append(self.multiplicities[1:], self.multiplicities[0])

    @property
    def wrap_jump(self) -> int:
        return int(self.multiplicities[0])

    def __len__(self):
        return self.n_branches

    def __repr__(self):
        return f"BranchList(n_terms={self.n_terms}, n_branches={self.n_branches}, rho={self.rho})"

    def rows(self):
        """Yield ``(x_left, x_right, a, b, jump_right)`` per branch."""
        for row in zip(self.breakpoints.tolist(), self.right_edges.tolist(),
                       self.starts.tolist(), self.ends.tolist(),
                       self.jump_right.tolist()):
            yield row


def build_branches(rho, N, sort="bucket") -> BranchList:
    """Discontinuity-tracking construction of the branches of ``D_N``.

    The first branch starts at x=0 with the y-intercept.  Each later branch
    starts where the previous one ended minus the jump height at the shared
    breakpoint; along a branch the value rises by ``N`` times its width.
    Start values are evaluated in closed form,
    ``a_j = D_N(0) - (jumps so far) + N * x_{j-1}``, which equals the running
    recurrence in exact arithmetic without accumulating rounding.

    Parameters
    ----------
    rho : Rotation, float or Fraction
        Rotation number.  Fractions use exact integer arithmetic.
    N : int
        Number of terms, ``1 <= N <= 2**26``.
    sort : {"bucket", "comparison"}
        Sorting strategy for the float path.
    """
    rho = as_rotation(rho)
    N = _check_terms(N)
    found = _locate(rho, N, sort)
    points, mults = found.points, found.mults

    if points[0] == 0.0:
        wrap = int(mults[0])
        inner, inner_mults = points[1:], mults[1:]
        inner_res = None if found.residues is None else found.residues[1:]
    else:
        wrap = 0
        inner, inner_mults = points, mults
        inner_res = found.residues

    breakpoints = np.concatenate(([0.0], inner))
    multiplicities = np.concatenate(([wrap], inner_mults)).astype(np.int64)
    jumps_before = np.concatenate(([0], np.cumsum(inner_mults))).astype(np.int64)
    intercept = _intercept_exact(rho, N, found.floor_sum)

    if inner_res is not None:
        starts, ends = _integer_endpoints(rho.exact.denominator, N, intercept,
                                          jumps_before, inner_res)
    else:
        y0 = intercept.numerator / intercept.denominator
        starts = (y0 - jumps_before.astype(np.float64)) + N * breakpoints
        ends = np.empty_like(starts)
        ends[:-1] = starts[1:] + inner_mults
        ends[-1] = starts[0] + wrap

    return BranchList(N, breakpoints, multiplicities, starts, ends, rho=rho)


def _integer_endpoints(q, N, intercept, jumps_before, inner_res):
    # endpoint values as integers over the common denominator 2q
    den = 2 * q
    y0_num = intercept.numerator * (den // intercept.denominator)
    left = np.concatenate(([0], inner_res)).astype(np.int64)
    right = np.append(inner_res, q).astype(np.int64)
    base = y0_num - den * jumps_before

    def to_float(num):
        whole, rem = np.divmod(num, den)
        return whole.astype(np.float64) + rem / den

    return to_float(base + 2 * N * left), to_float(base + 2 * N * right)


def _check_unit(x):
    xa = np.asarray(x, dtype=np.float64)
    if np.any(~(xa >= 0.0) | ~(xa < 1.0)):
        raise ValueError("x must lie in [0, 1)")
    return xa


def eval_branch(branches: BranchList, x):
    """Value of ``D_N`` at ``x`` read off the branch list.

    Branches are closed on the left, so at a breakpoint this returns the
    value just after the jump.  Accepts a scalar or an array.
    """
    xa = _check_unit(x)
    j = np.searchsorted(branches.breakpoints, xa, side="right") - 1
    out = branches.starts[j] + branches.n_terms * (xa - branches.breakpoints[j])
    return float(out) if out.ndim == 0 else out


def eval_direct(rho, N, x) -> float:
    """Evaluate ``D_N(x)`` term by term from the floor form, O(N) per call.

    The ``N(N+1)/2 * rho`` product and the integer floor sum are combined
    exactly before rounding.
    """
    rho = as_rotation(rho)
    N = _check_terms(N)
    x = float(_check_unit(x))
    t = np.arange(1, N + 1, dtype=np.float64) * rho.value
    floors = int(np.floor(x + t).astype(np.int64).sum())
    const = Fraction(N * (N + 1) // 2) * rho.computed_value() - floors - Fraction(N, 2)
    return float(const) + N * x


__all__ = [
    "MAX_TERMS", "EPS", "CapacityError", "Rotation", "BranchList", "as_rotation",
    "discontinuities", "y_intercept", "build_branches", "eval_branch", "eval_direct",
]

