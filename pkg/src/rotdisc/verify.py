"""Small-scale run of every structural invariant, for ``rotdisc verify``.

Each check returns ``(name, passed, detail)``.  Cases are drawn from a fixed
seed so the report is reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from rotdisc.cf import anchor_sample, cf_expand, named_rho
from rotdisc.core import EPS, Rotation, build_branches, eval_branch
from rotdisc.oracle import (_ExactSum, branch_order_matches, endpoint_errors, exact_discontinuities,
                            exact_eval, naive_sample)
from rotdisc.pdf import build_pdf, grid_samples
from rotdisc.stats import kurtosis_pdf, sup_norm, support, variance_branches, variance_pdf

SEED = 20240611


def _cases(n_random=12, n_max=1024, seed=SEED):
    rng = np.random.default_rng(seed)
    out = [(named_rho(name), N) for name in ("golden", "pi_m3", "liouville", "alpha_st")
           for N in (1, 7, 113, 610)]
    out += [(Rotation.from_fraction(Fraction(p, q)), k * q)
            for p, q in ((1, 3), (2, 5), (16, 113)) for k in (1, 2, 5)]
    for _ in range(n_random):
        out.append((Rotation.from_value(float(rng.random())), int(rng.integers(1, n_max + 1))))
    return out


def _worst(values):
    return max(values) if values else 0.0


def ks_distance(pdf, samples) -> float:
    """Kolmogorov-Smirnov distance between the exact CDF and samples."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    F = pdf.cdf(s)
    i = np.arange(n)
    return float(max(np.max(np.abs(F - i / n)), np.max(np.abs(F - (i + 1) / n))))


def _core_checks(cases):
    closure, mean, width, sym = [], [], [], []
    jump_ok = True
    for rho, N in cases:
        b = build_branches(rho, N)
        tol = N * EPS
        closure.append(abs(b.ends[-1] - b.wrap_jump - b.starts[0]) / tol)
        mean.append(abs(float(np.dot(b.widths, (b.starts + b.ends) / 2))) / tol)
        jump_ok &= int(b.multiplicities.sum()) == N
        width.append(abs(float(b.widths.sum()) - 1.0) / EPS)
        sym.append(abs(float(b.ends.max()) + float(b.starts.min())) / tol)
    return [
        ("core.closure", _worst(closure) <= 4, f"worst |b_B - r_0 - a_1| = {_worst(closure):.3g} N eps"),
        ("core.zero_mean", _worst(mean) <= 8, f"worst |mean| = {_worst(mean):.3g} N eps"),
        ("core.jump_conservation", jump_ok, "sum of multiplicities equals N"),
        ("core.width_conservation", _worst(width) <= 4, f"worst |sum widths - 1| = {_worst(width):.3g} eps"),
        ("core.range_symmetry", _worst(sym) <= 8, f"worst |max b + min a| = {_worst(sym):.3g} N eps"),
    ]


def _oracle_checks(cases):
    worst_ep, worst_mid = 0.0, 0.0
    order_ok, closure_ok = True, True
    for rho, N in cases:
        if N > 2 ** 12:
            continue
        b = build_branches(rho, N)
        ea, eb = endpoint_errors(b)
        worst_ep = max(worst_ep, float(max(ea.max(), eb.max())) / (N * EPS))
        order_ok &= branch_order_matches(b)
        ev = _ExactSum(rho.computed_value(), N)
        mids = (b.breakpoints + b.right_edges) / 2
        got = eval_branch(b, mids)
        for m, v in zip(mids.tolist(), got.tolist()):
            worst_mid = max(worst_mid, abs(float(Fraction(v) - ev.value(Fraction(m)))) / (N * EPS))
        wrap = sum(1 for d in exact_discontinuities(rho.computed_value(), N) if d == 0)
        closure_ok &= ev.value(Fraction(1), left=True) - wrap == ev.value(Fraction(0))
    return [
        ("oracle.endpoint_equivalence", worst_ep <= 4, f"worst endpoint error = {worst_ep:.3g} N eps"),
        ("oracle.midpoint_equivalence", worst_mid <= 4, f"worst eval_branch error = {worst_mid:.3g} N eps"),
        ("oracle.breakpoint_order", order_ok, "float breakpoints pair with exact ones in order"),
        ("oracle.exact_closure", closure_ok, "exact D_N(1-) - r_0 equals D_N(0)"),
    ]


def _naive_growth():
    rho = named_rho("golden")
    rows = []
    for N in (16, 256, 4096):
        samples = naive_sample(rho, N, 8)
        ev = _ExactSum(rho.computed_value(), N)
        dev = max(abs(float(Fraction(v) - ev.value(Fraction(x)))) for x, v in samples)
        rows.append(f"N={N}: {dev:.3g}")
    return [("oracle.naive_deviation", True, "recorded only; " + ", ".join(rows))]


def _pdf_checks(cases):
    area, count, sym, ks = [], [], [], []
    for rho, N in cases:
        b = build_branches(rho, N)
        p = build_pdf(b)
        area.append(abs(p.area - 1.0))
        measure = float(np.dot(p.density * N, p.widths))
        count.append(abs(measure - float(np.sum(b.ends - b.starts))) / N)
        lo, hi = support(p)
        sym.append(abs(lo + hi) / (N * EPS))
    n_grid = 20000
    for name in ("golden", "pi_m3", "alpha_st"):
        for N in (50, 377):
            b = build_branches(named_rho(name), N)
            ks.append(ks_distance(build_pdf(b), grid_samples(b, n_grid)) * math.sqrt(n_grid))
    return [
        ("pdf.area", _worst(area) <= 1e-9, f"worst |area - 1| = {_worst(area):.3g}"),
        ("pdf.count_consistency", _worst(count) <= 1e-9, f"worst measure gap = {_worst(count):.3g} N"),
        ("pdf.support_symmetry", _worst(sym) <= 8, f"worst |lo + hi| = {_worst(sym):.3g} N eps"),
        ("pdf.histogram_convergence", _worst(ks) <= 3,
         f"worst KS distance = {_worst(ks):.3g} / sqrt(n_grid)"),
    ]


def _stats_checks(cases):
    dual, norm = [], []
    for rho, N in cases:
        b = build_branches(rho, N)
        p = build_pdf(b)
        v = variance_pdf(p)
        dual.append(abs(v - variance_branches(b)) / v)
        lo, hi = support(p)
        norm.append(abs(sup_norm(b)[0] - max(abs(lo), abs(hi))) / (N * EPS))
    uniform = []
    for q in (2, 7, 64):
        p = build_pdf(build_branches(Rotation.from_value(1.0 / q), q))
        v = variance_pdf(p)
        uniform.append(max(abs(v - 1 / 12), abs(kurtosis_pdf(p, v) - 1.8)))
    scale = []
    for p_, q in ((1, 3), (2, 5), (16, 113)):
        for k in (1, 2, 5):
            N = k * q
            b = build_branches(Rotation.from_fraction(p_, q), N)
            scale.append(abs(sup_norm(b)[0] - k / 2) / (N * EPS))
    return [
        ("stats.dual_path_variance", _worst(dual) <= 1e-9, f"worst relative gap = {_worst(dual):.3g}"),
        ("stats.sup_norm_support", _worst(norm) <= 4, f"worst gap = {_worst(norm):.3g} N eps"),
        ("stats.uniform_moments", _worst(uniform) <= 1e-12, f"worst error = {_worst(uniform):.3g}"),
        ("stats.rational_scale", _worst(scale) <= 2, f"worst |sup - k/2| = {_worst(scale):.3g} N eps"),
    ]


def _cf_checks():
    ok_bound = True
    for name in ("golden", "pi_m3", "e_m2", "alpha_st", "liouville"):
        rho = named_rho(name)
        t = cf_expand(rho, 10 ** 12)
        x = rho.exact_value()
        for (p, q), q_next in zip(t.convergents, t.q[1:]):
            ok_bound &= abs(x - Fraction(p, q)) < Fraction(1, q * q_next) + 4 * Fraction(EPS)
    t = cf_expand(named_rho("golden"), 10 ** 6)
    fib = [1, 2]
    while fib[-1] + fib[-2] <= 10 ** 6:
        fib.append(fib[-1] + fib[-2])
    n_max = 5000
    t_pi = cf_expand(named_rho("pi_m3"), n_max)
    sample = anchor_sample(t_pi, n_max, per_gap=3)
    need = {k * q for q in t_pi.q if q >= 2 for k in range(1, n_max // q + 1)}
    return [
        ("cf.convergent_bound", ok_bound, "|rho - p/q| < 1/(q q') for consecutive convergents"),
        ("cf.fibonacci", list(t.q) == fib, f"golden denominators {list(t.q)[:6]}..."),
        ("cf.anchor_sample", min(sample) >= 2 and max(sample) <= n_max and need <= set(sample),
         f"{len(sample)} sizes in [2, {n_max}]"),
    ]


def run_all():
    """Every invariant check, in a fixed order."""
    cases = _cases()
    results = []
    results += _core_checks(cases)
    results += _pdf_checks(cases)
    results += _stats_checks(cases)
    results += _oracle_checks(cases)
    results += _naive_growth()
    results += _cf_checks()
    # the exact oracle's own anchor examples
    results.append(("oracle.small_examples",
                    exact_eval(Fraction(1, 2), 2, 0) == Fraction(-1, 2)
                    and exact_eval(Fraction(1, 3), 3, Fraction(1, 3)) == Fraction(-1, 2),
                    "D_2(0; 1/2) = -1/2 and D_3(1/3; 1/3) = -1/2"))
    return [(name, bool(ok), detail) for name, ok, detail in results]
