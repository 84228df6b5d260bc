import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from pstl.smoothing import (BumpSpec, certified_trunc, chi, chi_series, coeff_bound,
                            coeffs, tail_bound)

SPEC = BumpSpec(0.1, 0.02, 3)

# direct summation of the coefficient bound over |m| > 67, r = 13, Delta = 0.195 (mpmath nsum)
TAIL_R13_REF = 1.4326189387213975583e-8


def chi_oracle(Y, Delta, r, t, dps=60):
    """Bump value from the Irwin-Hall CDF as an alternating sum, in high precision."""
    with mpmath.workdps(dps):
        Y, Delta, t = mpmath.mpf(Y), mpmath.mpf(Delta), mpmath.mpf(t)
        d = t - mpmath.floor(t)
        d = min(d, 1 - d)
        a = Y - Delta / 2
        w = Delta / r

        def cdf(x):
            u = x / w + mpmath.mpf(r) / 2
            if u <= 0:
                return mpmath.mpf(0)
            if u >= r:
                return mpmath.mpf(1)
            s = sum((-1) ** k * mpmath.binomial(r, k) * (u - k) ** r
                    for k in range(int(mpmath.floor(u)) + 1))
            return s / mpmath.factorial(r)

        return float(cdf(d + a) - cdf(d - a))


def test_g0():
    assert SPEC.fourier_coeff(0) == pytest.approx(0.18, abs=1e-15)
    assert SPEC.g0 == pytest.approx(9 / 5 * 0.1, abs=1e-15)


def test_coeff_trivial_bound():
    m = np.arange(1, 10**5)
    assert np.all(np.abs(SPEC.fourier_coeff(m)) <= 1 / (np.pi * m))


def test_coeff_even():
    m = np.arange(1, 1000)
    assert np.array_equal(SPEC.fourier_coeff(m), SPEC.fourier_coeff(-m))


def test_coeff_matches_quadrature():
    K = 1 << 14
    t = np.arange(K) / K
    quad = np.mean(chi(SPEC, t) * np.exp(-2j * np.pi * 7 * t))
    assert abs(quad.imag) < 1e-12
    assert quad.real == pytest.approx(SPEC.fourier_coeff(7), abs=1e-8)


@pytest.mark.parametrize("r", [1, 2, 3, 13])
def test_chi_matches_oracle(r):
    spec = BumpSpec(0.1, 0.02, r)
    rng = np.random.default_rng(r)
    ts = np.concatenate([rng.uniform(0.07, 0.11, 40), rng.uniform(-2, 2, 10)])
    got = chi(spec, ts)
    ref = [chi_oracle(0.1, 0.02, r, t) for t in ts]
    assert np.allclose(got, ref, rtol=0, atol=1e-12)


def test_chi_trapezoid_r1():
    spec = BumpSpec(0.25, 0.05, 1)
    d = np.linspace(0, 0.5, 1001)
    trap = np.clip((0.25 - d) / 0.05, 0, 1)
    assert np.allclose(chi(spec, d), trap, atol=1e-14)


def test_chi_regimes():
    assert chi(SPEC, 0.05) == pytest.approx(1.0, abs=1e-9)
    assert chi(SPEC, 0.5) == pytest.approx(0.0, abs=1e-9)
    assert 0.0 < chi(SPEC, 0.09) < 1.0
    assert SPEC.regime(0.05) == "plateau"
    assert SPEC.regime(0.09) == "transition"
    assert SPEC.regime(0.5) == "zero"


def test_tail_bound_r13():
    val = tail_bound(0.195, 13, 67)
    assert val >= TAIL_R13_REF
    assert val <= 1.5 * TAIL_R13_REF
    # the dropped tail times X stays below 1 at the schedule scale X = 1e6
    assert val * 1e6 < 1


def test_tail_bound_r1_finite():
    v = tail_bound(0.5, 1, 1)
    assert 0 < v < math.inf


def test_tail_bound_decreasing():
    vals = [tail_bound(0.02, 3, m) for m in (1, 2, 5, 10, 100, 1000)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_certified_trunc_is_minimal():
    for r in (3, 5, 13):
        K = certified_trunc(0.02, r)
        assert tail_bound(0.02, r, K) <= 1e-9 < tail_bound(0.02, r, K - 1)


def test_trunc_capped_for_r1():
    spec = BumpSpec(0.1, 0.02, 1)
    assert spec.trunc == 1 << 20
    assert spec.tail > 1e-9


def test_mean_value():
    K = 1 << 16
    v = chi(SPEC, np.arange(K) / K)
    assert abs(v.mean() - SPEC.g0) <= 1e-8


@given(st.floats(-3, 3))
def test_symmetry(t):
    assert chi(SPEC, t) == pytest.approx(chi(SPEC, -t), abs=1e-12)
    assert chi(SPEC, t) == pytest.approx(chi(SPEC, 1 - t), abs=1e-12)


@pytest.mark.parametrize("r", [3, 13])
def test_coeff_bound_both_branches(r):
    spec = BumpSpec(0.1, 0.02, r)
    m = np.arange(1, 10 * spec.trunc + 1)
    g = np.abs(coeffs(0.1, 0.02, r, m))
    base = 1 / (np.pi * m)
    assert np.all(g <= base)
    assert np.all(g <= base * (r / (np.pi * m * 0.02)) ** r * (1 + 1e-12))
    assert np.all(g <= coeff_bound(0.02, r, m) * (1 + 1e-12))


def test_series_matches_exact():
    rng = np.random.default_rng(11)
    t = rng.random(1000)
    assert np.max(np.abs(chi_series(SPEC, t) - chi(SPEC, t))) <= 1e-8


@pytest.mark.parametrize("r", [1, 2, 3])
def test_smoothness_proxy(r):
    spec = BumpSpec(0.1, 0.02, r)
    h = 1e-3
    t = np.arange(-0.2, 0.2, h / 7)
    k = np.arange(r + 2)
    w = np.array([(-1) ** (r + 1 - j) * math.comb(r + 1, j) for j in k])
    diffs = sum(wj * chi(spec, t + j * h) for wj, j in zip(w, k))
    assert np.max(np.abs(diffs)) <= 10 * h**r * (2 * r / 0.02) ** r


@pytest.mark.parametrize("Y, D", [(0.1, 0.1), (0.6, 0.1), (0.1, 0.0)])
def test_invalid_spec(Y, D):
    with pytest.raises(ValueError):
        BumpSpec(Y, D, 3)
