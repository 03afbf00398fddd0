from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rotdisc.cf import named_rho
from rotdisc.core import EPS, build_branches
from rotdisc.pdf import build_pdf
from rotdisc.stats import (STATS_FIELDS, DegenerateError, SweepError, kurtosis_pdf, stats_row,
                           stats_sweep, sup_norm, support, variance_branches, variance_pdf)

rhos = st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False)


def pdf_of(rho, N):
    return build_pdf(build_branches(rho, N))


def test_support_examples():
    assert support(pdf_of(Fraction(1, 3), 3)) == (-0.5, 0.5)
    assert support(pdf_of(Fraction(1, 3), 6)) == (-1.0, 1.0)
    assert support(pdf_of(0.0, 4)) == (-2.0, 2.0)


def test_sup_norm_examples():
    assert sup_norm(build_branches(Fraction(1, 3), 3)) == (0.5, 1 / 3)
    assert sup_norm(build_branches(0.0, 4)) == (2.0, 1.0)


@pytest.mark.parametrize("q", [2, 3, 7, 64, 100])
def test_uniform_moments(q):
    p = pdf_of(1.0 / q, q)
    v = variance_pdf(p)
    assert v == pytest.approx(1 / 12, abs=1e-12)
    assert kurtosis_pdf(p, v) == pytest.approx(1.8, abs=1e-12)


def test_variance_examples():
    assert variance_pdf(pdf_of(Fraction(1, 3), 6)) == pytest.approx(1 / 3, abs=1e-15)
    assert variance_pdf(pdf_of(0.0, 4)) == pytest.approx(4 / 3, abs=1e-15)
    assert variance_branches(build_branches(Fraction(1, 3), 3)) == pytest.approx(1 / 12, abs=1e-15)
    assert variance_branches(build_branches(0.0, 4)) == pytest.approx(4 / 3, abs=1e-15)
    assert kurtosis_pdf(pdf_of(0.0, 4), 4 / 3) == pytest.approx(1.8, abs=1e-12)


def test_kurtosis_degenerate():
    with pytest.raises(DegenerateError):
        kurtosis_pdf(pdf_of(0.0, 4), 0.0)


def test_sweep_rational_scale():
    rows = stats_sweep(Fraction(1, 7), [7, 14, 21])
    assert [r.sup_norm for r in rows] == [0.5, 1.0, 1.5]


def test_sweep_single_row():
    rows = stats_sweep(named_rho("e_m2"), [2])
    assert len(rows) == 1
    assert all(np.isfinite(v) for v in (rows[0].variance, rows[0].kurtosis, rows[0].sup_norm))


def test_sweep_golden_local_minima():
    golden = named_rho("golden")
    rows = stats_sweep(golden, range(1, 988))
    s = [r.sup_norm for r in rows]
    minima = {i + 1 for i in range(1, len(s) - 1) if s[i] < s[i - 1] and s[i] < s[i + 1]}
    for q in (5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610):
        assert q in minima
    assert all(rows[q - 1].is_anchor for q in (2, 3, 5, 8, 610, 987))


def test_sweep_threads_preserve_order():
    rho = named_rho("pi_m3")
    ns = [300, 5, 113, 226, 7, 1000]
    one = stats_sweep(rho, ns, threads=1)
    many = stats_sweep(rho, ns, threads=4)
    assert [r.n_terms for r in many] == ns
    assert one == many


def test_sweep_error_carries_n():
    with pytest.raises(SweepError) as info:
        stats_sweep(named_rho("golden"), [5, 0])
    assert info.value.N == 0


def test_record_fields():
    rec = stats_row(named_rho("golden"), 10).as_record()
    assert tuple(rec) == STATS_FIELDS


@given(rhos, st.integers(1, 3000))
def test_dual_path_and_support(rho, N):
    b = build_branches(rho, N)
    p = build_pdf(b)
    v = variance_pdf(p)
    assert abs(v - variance_branches(b)) <= 1e-9 * v
    lo, hi = support(p)
    assert abs(sup_norm(b)[0] - max(abs(lo), abs(hi))) <= 4 * EPS * N


@given(st.integers(1, 200), st.integers(2, 200), st.integers(1, 12))
def test_rational_scale_law(p, q, k):
    rho = Fraction(p % q, q)
    if rho.denominator != q:
        return
    value, _ = sup_norm(build_branches(rho, k * q))
    assert abs(value - k / 2) <= 2 * k * q * EPS
