"""Support, sup-norm, variance and kurtosis of the discrepancy distribution."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from rotdisc.cf import ConvergentTable, table_for
from rotdisc.core import BranchList, as_rotation, build_branches
from rotdisc.pdf import PiecewisePdf, build_pdf

STATS_FIELDS = ("N", "support_lo", "support_hi", "sup_norm", "variance",
                "kurtosis", "argmax_x", "is_anchor")


class DegenerateError(ValueError):
    """Moment ratio requested for a distribution with zero variance."""


class SweepError(RuntimeError):
    def __init__(self, N, cause):
        super().__init__(f"N={N}: {cause}")
        self.N = N
        self.cause = cause


@dataclass(frozen=True)
class StatsRow:
    n_terms: int
    support_lo: float
    support_hi: float
    sup_norm: float
    variance: float
    kurtosis: float
    argmax_x: float
    is_anchor: bool

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["N"] = rec.pop("n_terms")
        return {k: rec[k] for k in STATS_FIELDS}


def support(pdf: PiecewisePdf):
    return float(pdf.bounds[0]), float(pdf.bounds[-1])


def sup_norm(branches: BranchList):
    """``sup_x |D_N(x)|`` over the closure of the branches, and where the
    supremum of ``D_N`` is approached.

    The location is the right end of the branch with the largest end value
    (the smallest such x on ties); branches are open on the right, so
    ``D_N`` only tends to its supremum there.
    """
    hi = float(branches.ends.max())
    lo = float(branches.starts.min())
    j = int(np.flatnonzero(branches.ends == hi)[0])
    return max(hi, -lo), float(branches.right_edges[j])


def variance_pdf(pdf: PiecewisePdf) -> float:
    """Second moment from the density: ``sum c_j (y_{j+1}^3 - y_j^3) / 3``."""
    y = pdf.bounds
    return float(np.dot(pdf.density, y[1:] ** 3 - y[:-1] ** 3) / 3.0)


def variance_branches(branches: BranchList) -> float:
    """``integral_0^1 D_N(x)^2 dx`` summed branch by branch."""
    a, b = branches.starts, branches.ends
    return float(np.sum(b ** 3 - a ** 3) / (3.0 * branches.n_terms))


def kurtosis_pdf(pdf: PiecewisePdf, variance: float) -> float:
    """Fourth moment from the density divided by the squared variance."""
    if not variance > 0:
        raise DegenerateError(f"kurtosis needs positive variance, got {variance!r}")
    y = pdf.bounds
    fourth = float(np.dot(pdf.density, y[1:] ** 5 - y[:-1] ** 5) / 5.0)
    return fourth / variance ** 2


def stats_row(rho, N, table: Optional[ConvergentTable] = None, sort="bucket") -> StatsRow:
    branches = build_branches(rho, N, sort=sort)
    pdf = build_pdf(branches)
    lo, hi = support(pdf)
    norm, where = sup_norm(branches)
    var = variance_pdf(pdf)
    anchor = table.is_anchor(N) if table is not None else False
    return StatsRow(int(N), lo, hi, norm, var, kurtosis_pdf(pdf, var), where, anchor)


def stats_sweep(rho, n_list: Iterable[int], threads: int = 1, sort="bucket"):
    """One :class:`StatsRow` per entry of ``n_list``, in the same order.

    Rows are independent, so ``threads > 1`` computes them on a thread pool.
    A failure is re-raised as :class:`SweepError` carrying the offending N.
    """
    rho = as_rotation(rho)
    n_list = [int(n) for n in n_list]
    if not n_list:
        return []
    table = table_for(rho, max(n_list))

    def one(N):
        try:
            return stats_row(rho, N, table, sort)
        except Exception as exc:
            raise SweepError(N, exc) from exc

    if threads <= 1:
        return [one(N) for N in n_list]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, n_list))
