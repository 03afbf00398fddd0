"""Exact discrepancy sums of circle rotations by discontinuity tracking."""

from rotdisc.cf import (ConvergentTable, anchor_sample, cf_expand, irrationality_exponent,
                        named_rho, rotation_from_cf)
from rotdisc.core import (EPS, MAX_TERMS, BranchList, CapacityError, Rotation, build_branches,
                          discontinuities, eval_branch, eval_direct, y_intercept)
from rotdisc.oracle import endpoint_errors, error_profile, exact_eval, naive_sample
from rotdisc.parsing import SpecError, parse_nspec, parse_rho
from rotdisc.pdf import PiecewisePdf, build_pdf, histogram_check, pdf_eval
from rotdisc.stats import StatsRow, stats_row, stats_sweep, sup_norm, variance_pdf

__all__ = [
    "EPS", "MAX_TERMS", "BranchList", "CapacityError", "ConvergentTable", "PiecewisePdf",
    "Rotation", "SpecError", "StatsRow", "anchor_sample", "build_branches", "build_pdf",
    "cf_expand", "discontinuities", "endpoint_errors", "error_profile", "eval_branch",
    "eval_direct", "exact_eval", "histogram_check", "irrationality_exponent", "named_rho",
    "naive_sample", "parse_nspec", "parse_rho", "pdf_eval", "rotation_from_cf", "stats_row",
    "stats_sweep", "sup_norm", "variance_pdf", "y_intercept",
]
