import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rotdisc.cf import (NAMES, ConvergentTable, anchor_sample, cf_expand, cf_to_fraction,
                        cf_value, convergents, irrationality_exponent, named_rho,
                        rotation_from_cf, table_for)
from rotdisc.core import EPS, Rotation


def fibonacci(limit):
    out = [1, 2]
    while out[-1] + out[-2] <= limit:
        out.append(out[-1] + out[-2])
    return out


def test_golden_all_ones():
    t = cf_expand(named_rho("golden"), 10 ** 6)
    assert set(t.digits) == {1}
    assert list(t.q) == fibonacci(10 ** 6)
    assert 610 in t.q and 987 in t.q


def test_pi_denominators():
    t = cf_expand(named_rho("pi_m3"), 33102)
    assert list(t.q) == [7, 106, 113, 33102]
    assert list(t.p) == [1, 15, 16, 4687]


def test_liouville_second_denominator():
    t = cf_expand(named_rho("liouville"), 10 ** 6)
    assert t.q[1] == 100
    assert t.is_anchor(300)


def test_zero_is_empty():
    t = table_for(0.0, 100)
    assert len(t) == 0 and not t.is_anchor(10)


def test_termination_by_residual():
    # digits stop once the convergent is within 4 eps of the machine value
    t = cf_expand(named_rho("golden"), 10 ** 30)
    x = named_rho("golden").exact_value()
    p, q = t.convergents[-1]
    assert abs(x - Fraction(p, q)) < 4 * Fraction(EPS)
    p, q = t.convergents[-2]
    assert abs(x - Fraction(p, q)) >= 4 * Fraction(EPS)


def test_exact_rational_terminates():
    t = cf_expand(Rotation.from_fraction(16, 113), 10 ** 9)
    assert t.convergents[-1] == (16, 113)
    assert math.isinf(t.mu[-1])


@pytest.mark.parametrize("rho, p, q, mu", [
    ("pi_m3", 16, 113, 3.2),
    ("alpha_st", 40, 81, 2.8),
    ("e_m2", 51, 71, 2.46),
    ("zeta2_m1", 89, 138, 2.42),
])
def test_irrationality_exponents(rho, p, q, mu):
    assert irrationality_exponent(named_rho(rho), p, q) == pytest.approx(mu, abs=0.05)


def test_exponent_frozen_values():
    # frozen from exact rational differences at the machine values
    assert irrationality_exponent(named_rho("pi_m3"), 16, 113) == pytest.approx(3.2019587425, abs=1e-9)


def test_exponent_equal_value():
    with pytest.warns(RuntimeWarning):
        assert irrationality_exponent(0.5, 1, 2) == math.inf
    with pytest.raises(ValueError):
        irrationality_exponent(0.5, 0, 1)


def test_named_values():
    assert named_rho("golden").value == 0.6180339887498949
    assert f"{named_rho('liouville').value:.16f}" == "0.1100010000000000"
    assert named_rho("pi_m3").value == 0.14159265358979312
    assert named_rho("alpha_st").value == cf_value([2, 40, 40], [2])


def test_named_custom_cf():
    r = named_rho("cf:[2,2,2,2,10,2,2,...]")
    assert r.value == cf_value([2, 2, 2, 2, 10, 2], [2])
    t = cf_expand(r, 10 ** 6)
    assert list(t.digits[:7]) == [2, 2, 2, 2, 10, 2, 2]


def test_named_unknown_lists_names():
    with pytest.raises(LookupError) as info:
        named_rho("tau")
    for name in NAMES:
        assert name in str(info.value)


def test_alpha_st_digits():
    t = cf_expand(named_rho("alpha_st"), 10 ** 9)
    assert list(t.digits[:6]) == [2, 40, 40, 2, 2, 2]
    assert (40, 81) in t.convergents


def test_anchor_sample_golden():
    t = cf_expand(named_rho("golden"), 13)
    assert anchor_sample(t, 13) == [2, 3, 4, 5, 6, 8, 9, 10, 12, 13]


def test_anchor_sample_single():
    t = ConvergentTable((7,), (1,), (7,), (math.nan,))
    assert anchor_sample(t, 21) == [2, 7, 14, 21]


def test_anchor_sample_infill():
    t = cf_expand(named_rho("pi_m3"), 33102)
    base = anchor_sample(t, 33102)
    dense = anchor_sample(t, 33102, per_gap=4)
    assert set(base) <= set(dense)
    assert len(dense) > len(base)
    assert dense == sorted(set(dense))


def test_finite_cf_keeps_exact():
    r = rotation_from_cf([3, 7])
    assert r.exact == Fraction(7, 22)
    assert r.uses_integer_path


def test_to_dict():
    d = cf_expand(Rotation.from_fraction(1, 2), 10).to_dict()
    assert d == {"digits": [2], "p": [1], "q": [2], "mu": [None]}


@given(st.lists(st.integers(1, 50), min_size=1, max_size=12))
def test_convergent_roundtrip(digits):
    x = cf_to_fraction(digits)
    if x == 1:
        return
    assert convergents(digits)[-1] == (x.numerator, x.denominator)
    # expansion may stop early at the residual floor, never elsewhere
    t = cf_expand(Rotation.from_fraction(x), 10 ** 30)
    expected = set(convergents(digits)) | set(convergents(digits[:-1] + [digits[-1] - 1, 1]))
    assert set(t.convergents) <= expected
    last = Fraction(*t.convergents[-1])
    assert last == x or abs(x - last) < 4 * Fraction(EPS)


@given(st.floats(1e-6, 1.0, exclude_max=True))
def test_classical_bound(rho):
    t = cf_expand(rho, 10 ** 12)
    x = Fraction(rho)
    for (p, q), q_next in zip(t.convergents, t.q[1:]):
        assert abs(x - Fraction(p, q)) < Fraction(1, q * q_next) + 4 * Fraction(EPS)


@given(st.floats(1e-6, 1.0, exclude_max=True), st.integers(2, 5000), st.integers(0, 3))
def test_anchor_sample_contents(rho, n_max, per_gap):
    t = cf_expand(rho, n_max)
    out = anchor_sample(t, n_max, per_gap)
    assert min(out) >= 2 and max(out) <= n_max
    assert 2 in out and n_max in out
    for q in t.q:
        if q >= 2:
            assert set(range(q, n_max + 1, q)) <= set(out)
