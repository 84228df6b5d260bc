import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pstl import expsums as es
from pstl import representations as rp
from pstl.expsums import FloorPowerMap
from pstl.primes import sieve
from pstl.representations import (brute_force_count, build_spectrum, enumerate_representations,
                                  gamma_sharp, gamma_smooth, lanczos_gamma, main_term,
                                  ratio_scan, ternary_count, ternary_counts_all)
from pstl.smoothing import BumpSpec

R6_REF = 0.33302465198892947972   # (log 2)^3
R7_REF = 1.5834947556544992806    # 3 (log 2)^2 log 3
# 50-digit mpmath: Gamma(1 + 1/c)^3 / Gamma(3/c) * N^(3/c - 1) at c = 1.02, N = 1e4
MAIN_REF = 29944178.865039913144


def test_spectrum_small(table10):
    t, fp = table10
    s = build_spectrum(t, 1.02, "plain", fp=fp)
    assert s.as_dict() == pytest.approx({2: math.log(2), 3: math.log(3),
                                         5: math.log(5), 7: math.log(7)})


def test_sharp_half_is_plain(table200):
    t, fp = table200
    a = build_spectrum(t, 1.02, "plain", fp=fp)
    b = build_spectrum(t, 1.02, "sharp", Y=0.5, fp=fp)
    assert np.array_equal(a.weights, b.weights)


def test_smooth_plateau_is_plain(table10):
    t, fp = table10
    a = build_spectrum(t, 1.02, "plain", fp=fp)
    b = build_spectrum(t, 1.02, "smooth", spec=BumpSpec(0.5, 0.05, 3), fp=fp)
    assert np.allclose(a.weights, b.weights, atol=1e-9)


def test_masses(table2000):
    t, fp = table2000
    spec = BumpSpec(0.25, 0.05, 5)
    plain = build_spectrum(t, 1.02, "plain", fp=fp).mass()
    smooth = build_spectrum(t, 1.02, "smooth", spec=spec, fp=fp).mass()
    sharp = build_spectrum(t, 1.02, "sharp", Y=0.2, fp=fp).mass()
    assert plain == pytest.approx(t.theta(), rel=1e-12)
    from pstl.smoothing import chi
    assert smooth == pytest.approx(math.fsum(chi(spec, t.sqrt_dist) * t.logp), rel=1e-12)
    assert sharp == pytest.approx(math.fsum(t.logp[t.sqrt_dist < 0.2]), rel=1e-12)


@pytest.mark.parametrize("N, ref", [(6, R6_REF), (7, R7_REF), (2, 0.0), (22, 0.0)])
def test_ternary_count_small(table10, N, ref):
    t, fp = table10
    s = build_spectrum(t, 1.02, fp=fp)
    assert ternary_count(s, N) == pytest.approx(ref, rel=1e-13, abs=1e-300)


def test_brute_force_small(table10):
    t, fp = table10
    assert brute_force_count(t, 1.02, 7, fp=fp) == pytest.approx(R7_REF, rel=1e-14)


@settings(max_examples=15, deadline=None)
@given(st.floats(1.001, 1.0277), st.sampled_from(["plain", "smooth", "sharp"]),
       st.integers(50, 200))
def test_convolution_equals_brute_force(c, mode, X):
    t = sieve(X)
    fp = FloorPowerMap(t, c)
    kw = {"smooth": {"spec": BumpSpec(0.3, 0.06, 4)}, "sharp": {"Y": 0.3}, "plain": {}}[mode]
    allc = ternary_counts_all(build_spectrum(t, c, mode, fp=fp, **kw))
    brute = rp.brute_force_counts_all(t, c, mode, fp=fp, **kw)
    assert len(allc) == len(brute)
    assert np.allclose(allc, brute, rtol=1e-10, atol=1e-10 * brute.max())
    for N in range(6, len(allc), 37):
        assert ternary_count(build_spectrum(t, c, mode, fp=fp, **kw), N) == pytest.approx(
            brute[N], rel=1e-10, abs=1e-10 * brute.max())


def test_fft_path_matches_direct(table2000, monkeypatch):
    t, fp = table2000
    s = build_spectrum(t, 1.02, fp=fp)
    direct = ternary_counts_all(s)
    monkeypatch.setattr(rp, "FFT_CROSSOVER", 16)
    fft = ternary_counts_all(s)
    big = direct > 1e-6 * direct.max()
    assert np.allclose(fft[big], direct[big], rtol=1e-9)


def test_gamma_sharp(table200):
    t, fp = table200
    plain = ternary_count(build_spectrum(t, 1.02, fp=fp), 400)
    assert gamma_sharp(t, 1.02, 0.5, 400, fp=fp) == plain
    assert gamma_sharp(t, 1.02, 1e-4, 400, fp=fp) == 0.0
    ys = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
    vals = [gamma_sharp(t, 1.02, y, 400, fp=fp) for y in ys]
    assert vals == sorted(vals)


def test_gamma_smooth_fourier_inversion():
    t = sieve(500)
    fp = FloorPowerMap(t, 1.02)
    spec = BumpSpec(0.25, 0.05, 5)
    allc = ternary_counts_all(build_spectrum(t, 1.02, "smooth", spec=spec, fp=fp))
    support = np.flatnonzero(allc)
    N0 = int(support[len(support) // 2])
    conv = gamma_smooth(t, 1.02, spec, N0, fp=fp)
    integ = es.integral_H3(t, fp, spec, N0)
    assert integ.real == pytest.approx(conv, rel=1e-8)


def test_gamma_smooth_sandwich(table2000):
    t, fp = table2000
    spec = BumpSpec(0.25, 0.05, 5)
    for N in (3000, 4000, 5000):
        lo = gamma_sharp(t, 1.02, spec.Y - spec.Delta, N, fp=fp)
        mid = gamma_smooth(t, 1.02, spec, N, fp=fp)
        hi = gamma_sharp(t, 1.02, spec.Y, N, fp=fp)
        assert lo <= mid * (1 + 1e-12) and mid <= hi * (1 + 1e-12)


def test_enumeration_orbits(table200):
    t, fp = table200
    for N in (150, 301, 402):
        recs = enumerate_representations(t, 1.02, N, fp=fp)
        total = math.fsum(r.weight * r.orbit for r in recs)
        assert total == pytest.approx(ternary_count(build_spectrum(t, 1.02, fp=fp), N),
                                      rel=1e-12)
        for r in recs:
            assert list(r.triple) == sorted(r.triple)
            assert sum(es.floor_power(p, 1.02) for p in r.triple) == N
            assert r.orbit == {3: 6, 2: 3, 1: 1}[len(set(r.triple))]


def test_lanczos_against_mpmath():
    for x in np.linspace(1, 4, 61):
        assert lanczos_gamma(float(x)) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


def test_main_term_values():
    assert main_term(100, 1.0) == pytest.approx(5000.0, rel=1e-13)
    assert main_term(1, 1.0) == pytest.approx(0.5, rel=1e-13)
    assert main_term(10**4, 1.02) == pytest.approx(MAIN_REF, rel=1e-10)


def test_ratio_scan_median():
    t = sieve(2e4)
    fp = FloorPowerMap(t, 1.02)
    Ns = np.linspace(5000, 50000, 46).astype(int)
    rows, summary = ratio_scan(t, 1.02, Ns, fp=fp)
    assert len(rows) == 46
    assert 0.5 <= summary["median_ratio"] <= 2.0
    assert summary["iqr"] >= 0


def test_ratio_scan_tiny_n(table10):
    t, fp = table10
    rows, _ = ratio_scan(t, 1.02, [6], fp=fp)
    assert rows[0].count == pytest.approx(R6_REF)
    assert rows[0].ratio == rows[0].count / rows[0].main_term


def test_lower_bound_monitor_positive(table2000):
    t, fp = table2000
    spec = BumpSpec(0.25, 0.05, 5)
    expr = spec.Y**3 * t.X ** (3 - 1.02)
    for N in range(2500, 6000, 500):
        assert gamma_smooth(t, 1.02, spec, N, fp=fp) / expr > 0
