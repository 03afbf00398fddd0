"""Exact probability density of D_N under uniformly distributed x.

Every branch has slope N, so a branch covering values [a, b) contributes
density 1/N there.  The density is therefore piecewise constant, and its
breaks are exactly the branch endpoint values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rotdisc.core import BranchList, eval_branch


@dataclass(frozen=True, eq=False)
class PiecewisePdf:
    """Piecewise-constant density: ``density[j]`` on ``[bounds[j], bounds[j+1])``."""

    bounds: np.ndarray
    density: np.ndarray
    n_terms: int
    counts: np.ndarray = None

    def __post_init__(self):
        for name in ("bounds", "density", "counts"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.ascontiguousarray(arr)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.bounds.shape[0] != self.density.shape[0] + 1:
            raise ValueError("need exactly one more bound than density value")

    @property
    def n_bins(self) -> int:
        return int(self.density.shape[0])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bounds)

    @property
    def area(self) -> float:
        return float(np.dot(self.density, self.widths))

    @property
    def max_density(self) -> float:
        return float(self.density.max())

    def __call__(self, y):
        return pdf_eval(self, y)

    def rows(self):
        """Yield ``(y_left, y_right, density)`` per bin."""
        yield from zip(self.bounds[:-1].tolist(), self.bounds[1:].tolist(),
                       self.density.tolist())

    def cdf(self, y):
        """Cumulative distribution at ``y`` (piecewise linear)."""
        y = np.asarray(y, dtype=np.float64)
        cum = np.concatenate(([0.0], np.cumsum(self.density * self.widths)))
        j = np.clip(np.searchsorted(self.bounds, y, side="right") - 1, 0, self.n_bins - 1)
        out = cum[j] + self.density[j] * (y - self.bounds[j])
        out = np.where(y < self.bounds[0], 0.0, out)
        return np.where(y >= self.bounds[-1], cum[-1], out)


def build_pdf(branches: BranchList) -> PiecewisePdf:
    """Sweep-line construction of the exact density from a branch list.

    The sorted unique endpoint values become bin boundaries.  Each branch is
    a +1 event at its start value and a -1 event at its end value; the
    running sum over the sorted events is the number of branches covering a
    bin, and the density there is that count divided by N.
    """
    starts, ends = branches.starts, branches.ends
    bounds = np.unique(np.concatenate((starts, ends)))
    events = np.zeros(bounds.shape[0], dtype=np.int64)
    np.add.at(events, np.searchsorted(bounds, starts), 1)
    np.add.at(events, np.searchsorted(bounds, ends), -1)
    counts = np.cumsum(events)[:-1]
    return PiecewisePdf(bounds, counts / branches.n_terms, branches.n_terms, counts)


def pdf_eval(pdf: PiecewisePdf, y):
    """Density at ``y``; right-continuous, zero outside the support."""
    ya = np.asarray(y, dtype=np.float64)
    j = np.searchsorted(pdf.bounds, ya, side="right") - 1
    inside = (j >= 0) & (j < pdf.n_bins)
    out = np.where(inside, pdf.density[np.clip(j, 0, pdf.n_bins - 1)], 0.0)
    return float(out) if out.ndim == 0 else out


def histogram_check(branches: BranchList, n_grid: int, bin_width=None, edges=None) -> PiecewisePdf:
    """Grid estimate of the density, for cross-checking :func:`build_pdf`.

    Samples ``D_N`` at ``n_grid`` evenly spaced points of [0, 1) and bins the
    values with width ``bin_width`` (default: a hundredth of the range).  The
    result is only an approximation; it blurs every feature narrower than a
    bin and misses branches shorter than the grid spacing.  Explicit bin
    ``edges`` override ``bin_width``.
    """
    if n_grid < 10:
        raise ValueError("n_grid must be at least 10")
    values = eval_branch(branches, np.arange(n_grid) / n_grid)
    if edges is not None:
        edges = np.asarray(edges, dtype=np.float64)
        counts, _ = np.histogram(values, bins=edges)
        return PiecewisePdf(edges, counts / (n_grid * np.diff(edges)), branches.n_terms, counts)
    lo, hi = float(values.min()), float(values.max())
    if bin_width is None:
        bin_width = max(hi - lo, 1e-12) / 100
    n_bins = max(1, int(np.ceil((hi - lo) / bin_width)))
    edges = lo + bin_width * np.arange(n_bins + 1)
    if edges[-1] <= hi:
        edges = np.append(edges, edges[-1] + bin_width)
    counts, _ = np.histogram(values, bins=edges)
    density = counts / (n_grid * np.diff(edges))
    return PiecewisePdf(edges, density, branches.n_terms, counts)


def grid_samples(branches: BranchList, n_grid: int) -> np.ndarray:
    return eval_branch(branches, np.arange(n_grid) / n_grid)


def plateau_density(pdf: PiecewisePdf) -> float:
    """The density level covering the largest total width of y."""
    levels, inverse = np.unique(pdf.counts, return_inverse=True)
    weight = np.bincount(inverse, weights=pdf.widths)
    return float(levels[int(np.argmax(weight))]) / pdf.n_terms


def spike_intervals(pdf: PiecewisePdf, threshold=None):
    """Maximal y-intervals where the density exceeds ``threshold``.

    The default threshold sits half a count level, ``1/(2N)``, above the
    plateau density.  Returns ``[(y_lo, y_hi), ...]`` in ascending order.
    """
    if threshold is None:
        threshold = plateau_density(pdf) + 0.5 / pdf.n_terms
    above = np.concatenate(([False], pdf.density > threshold, [False]))
    change = np.flatnonzero(above[1:] != above[:-1])
    return [(float(pdf.bounds[i]), float(pdf.bounds[j])) for i, j in zip(change[::2], change[1::2])]
