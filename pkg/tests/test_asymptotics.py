import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainspectra import modes
from chainspectra.asymptotics import (
    approx_eigvec_error,
    band_edge_match,
    c2_of_a,
    classify_regime,
    inband_pattern,
    k32_of_a,
    near_band_edge_existence,
    odd_chain_midgap,
    predict_edge_states,
)
from chainspectra.core import solve_decay
from chainspectra.eigensolver import ChainConfig, full_spectrum
from chainspectra.errors import NoMatch, PatternUndetermined
from chainspectra.semi_infinite import solve_semi_infinite


def gap_labels(cfg):
    cs = modes.analyze(cfg)
    p = cfg.bulk
    return sorted(m.label for m in cs.modes if not p.in_band(m.omega2))


def exact_delta_theta(cfg, band, edge, k_max):
    """|theta - edge angle| of the k_max modes nearest the chosen edge."""
    p = cfg.bulk
    (alo, ahi), (olo, ohi) = p.band_intervals()
    lo, hi = (alo, ahi) if band == "Acoustic" else (olo, ohi)
    inb = [w for w in full_spectrum(cfg).omega2 if lo < w < hi]
    inb = sorted(inb) if edge == "Lower" else sorted(inb, reverse=True)
    e_val = lo if edge == "Lower" else hi
    theta_pi = e_val in (2 * min(cfg.k1, cfg.k2), 2 * max(cfg.k1, cfg.k2))
    out = []
    for k in range(1, k_max + 1):
        th = solve_decay(p, inb[k - 1]).theta
        out.append(math.pi - th if theta_pi else th)
    return out


# --------------------------------------------------------------------------
# Regime taxonomy
# --------------------------------------------------------------------------

def test_classify_regime_tags():
    mk = lambda k31, k32: ChainConfig(n=50, k1=1, k2=2.3, k31=k31, k32=k32)
    assert classify_regime(mk(1.3, 3.5)).tag == "NearlyInfinite"
    assert classify_regime(mk(1.3, 4.6)).tag == "NearlySemiInfiniteLeft"
    assert classify_regime(mk(0.0, 3.5)).tag == "NearlySemiInfiniteRight"
    assert classify_regime(mk(0.05, 4.55)).tag == "Finite"
    # annulus between 5/n = 0.1 and 50/n = 1.0
    r = classify_regime(mk(0.5, 3.5))
    assert r.ambiguous == (True, False)
    assert r.tag == "NearlyInfinite"


# --------------------------------------------------------------------------
# c2_of_a and k32_of_a
# --------------------------------------------------------------------------

def test_c2_vanishes_at_semi_infinite_root_and_is_linear():
    root = [r for r in solve_semi_infinite(1, 2.3, 1.3) if r.location][0]
    assert abs(c2_of_a(1, 2.3, 1.3, root.a_tilde, root.sigma)) <= 1e-10
    d = 1e-9
    cp = c2_of_a(1, 2.3, 1.3, root.a_tilde + d, root.sigma)
    cp2 = c2_of_a(1, 2.3, 1.3, root.a_tilde + 2 * d, root.sigma)
    cm = c2_of_a(1, 2.3, 1.3, root.a_tilde - d, root.sigma)
    assert abs(cp2 / cp - 2) <= 1e-4
    assert abs(cp + cm) <= 1e-4 * abs(cp)


def test_k32_of_a_round_trip_from_exact_mode():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5)
    cs = modes.analyze(cfg)
    right = [m for m in cs.modes if m.label == "RightEdge"][0]
    a, sigma = right.te.a.real, right.te.sigma
    c2 = c2_of_a(1, 2.3, 1.3, a, sigma)
    assert abs(k32_of_a(1, 2.3, 50, a, sigma, c2) - 3.5) <= 1e-6


def test_k32_of_a_size_regimes():
    root = [r for r in solve_semi_infinite(1, 2.3, 1.3) if r.location][0]
    a, sigma = root.a_tilde, root.sigma
    # Vanishing tail: the semi-infinite matching stiffness k31 k2/(k31-k2).
    assert abs(k32_of_a(1, 2.3, 50, a, sigma, 0.0)
               - 1.3 * 2.3 / (1.3 - 2.3)) <= 1e-9
    # Dominant tail: the left stiffness itself (the mirrored root).
    big = abs(a) ** (2 * 50) * 1e6
    assert abs(k32_of_a(1, 2.3, 50, a, sigma, big) - 1.3) <= 1e-3


# --------------------------------------------------------------------------
# Band-edge matching
# --------------------------------------------------------------------------

def test_band_edge_match_pure_generalized_branch():
    # a=-1, sigma=1, k31 = 2k2 - 2k1 puts c1 = 0 and
    # k32 = 2k2 - 2k1/(1 + (n-1)(2k2-2k1)/k2).
    k1, k2, n = 1.0, 2.3, 30
    m = band_edge_match(k1, k2, 2 * k2 - 2 * k1, n, a=-1, sigma=1)
    assert m.c1 == 0.0
    expect = 2 * k2 - 2 * k1 / (1 + (n - 1) * (2 * k2 - 2 * k1) / k2)
    assert abs(m.k32 - expect) <= 1e-12


def test_band_edge_match_c2_zero_branch():
    # a=1, sigma=1, k31 = 2k2: the matched k32 is also 2k2 (c2 = 0).
    m = band_edge_match(1.0, 2.3, 4.6, 40, a=1, sigma=1)
    assert abs(m.c2) <= 1e-12
    assert abs(m.k32 - 4.6) <= 1e-12


def test_band_edge_match_far_tier_example():
    n, k1, k2, k31 = 100, 1.0, 1.7, 1.6
    m = band_edge_match(k1, k2, k31, n, a=-1, sigma=1)
    assert m.margin_regime == "far"
    asym = 2 * k2 - k1 * k2 / (n * (k2 - k1))
    assert abs(m.k32_asymptotic - asym) <= 1e-12
    assert abs(m.k32 - asym) <= 1.0 / n ** 2


def test_band_edge_match_near_tier_mirror():
    # k31 deep inside the critical tube: the matched offset reflects,
    # k32 - 2k2 = -(k31 - 2k2) to leading order.
    n, k1, k2 = 100, 1.0, 1.7
    for off in (0.002, -0.002):
        k31 = 2 * k2 + off
        m = band_edge_match(k1, k2, k31, n, a=-1, sigma=1)
        assert m.margin_regime == "near"
        assert abs(m.k32_asymptotic - (2 * k2 - off)) <= 1e-12
        assert abs(m.k32 - m.k32_asymptotic) <= 0.1 * abs(off)


def test_band_edge_match_intermediate_tier_sign():
    n, k1, k2 = 100, 1.0, 1.7
    for k31 in (2 * k2 + 0.2, 2 * k2 - 0.2):
        m = band_edge_match(k1, k2, k31, n, a=-1, sigma=1)
        assert m.margin_regime == "intermediate"
        assert math.isnan(m.k32_asymptotic)
        assert m.predicted_sign is not None
        assert m.predicted_sign == int(math.copysign(1.0, m.k32 - 2 * k2))
        # Theta(1/n) magnitude
        assert 0.1 / n <= abs(m.k32 - 2 * k2) <= 50.0 / n


def test_band_edge_match_no_match():
    with pytest.raises(NoMatch):
        # a=1, sigma=-1 targets omega^2 = 0; a clamped left end has no
        # zero mode with nonnegative right stiffness.
        band_edge_match(1.0, 2.3, 6.0, 10, a=1, sigma=-1)


@given(k1=st.floats(0.5, 3.0), k2=st.floats(0.5, 3.0),
       k31=st.floats(0.0, 7.0), a=st.sampled_from([1, -1]),
       sigma=st.sampled_from([1, -1]), n=st.integers(8, 40))
@settings(max_examples=60, deadline=None)
def test_band_edge_match_places_exact_eigenvalue(k1, k2, k31, a, sigma, n):
    try:
        m = band_edge_match(k1, k2, k31, n, a, sigma)
    except NoMatch:
        return
    spec = full_spectrum(ChainConfig(n=n, k1=k1, k2=k2, k31=k31, k32=m.k32))
    scale = max(1.0, 2 * (k1 + k2))
    assert min(abs(spec.omega2 - m.omega2)) <= 1e-10 * scale


def test_band_edge_crossing_bisection_stable_constant():
    # The exact stiffness where a gap mode crosses the edge at 2k2,
    # located by bisection on the gap-mode count, stays within C/n^2 of
    # the first-order estimate with the same C across sizes.
    k1, k2, k31 = 1.0, 1.7, 1.6

    def crossing(n):
        def gap_count(k32):
            w2 = full_spectrum(
                ChainConfig(n=n, k1=k1, k2=k2, k31=k31, k32=k32)).omega2
            return int(np.sum((w2 > 2 * k1 + 1e-11) & (w2 < 2 * k2 - 1e-11)))

        lo, hi = 3.0, 2 * k2
        for _ in range(52):
            mid = 0.5 * (lo + hi)
            if gap_count(mid) >= 2:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    consts = []
    for n in (50, 100, 200):
        m = band_edge_match(k1, k2, k31, n, a=-1, sigma=1)
        consts.append(abs(crossing(n) - m.k32_asymptotic) * n * n)
    assert max(consts) <= 1.0
    assert max(consts) - min(consts) <= 0.2 * max(consts)


# --------------------------------------------------------------------------
# Edge-state prediction vs exact diagonalization
# --------------------------------------------------------------------------

def stratified_sample():
    pts = []
    # k1 < k2: generic x generic, including the two-sided diagonal
    for k31 in (1.0, 1.8, 2.6, 3.4):
        for k32 in (1.2, 2.3, 3.3):
            pts.append((1.0, 2.3, k31, k32))
    for k31, k32 in ((0.0, 2.0), (0.005, 2.0), (4.6, 1.5), (4.605, 1.5),
                     (1.5, 1.5), (3.0, 3.0), (2.3, 2.3), (1.3, 4.54)):
        pts.append((1.0, 2.3, k31, k32))
    # k1 > k2 branches: below/above the 2k2 threshold, plus two-sided
    for k31 in (1.0, 3.0, 3.6):
        for k32 in (1.0, 3.3):
            pts.append((2.3, 1.0, k31, k32))
    pts.append((2.3, 1.0, 3.0, 3.0))
    return pts


def test_edge_count_agreement_stratified():
    sample = stratified_sample()
    assert len(sample) >= 25
    for k1, k2, k31, k32 in sample:
        cfg = ChainConfig(n=50, k1=k1, k2=k2, k31=k31, k32=k32)
        pred = predict_edge_states(cfg).predicted_labels
        assert pred == gap_labels(cfg), (k1, k2, k31, k32)


def test_predicted_root_matches_semi_infinite():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5)
    est = predict_edge_states(cfg)
    root = [r for r in solve_semi_infinite(1, 2.3, 1.3) if r.location][0]
    assert abs(est.a_tilde - root.a_tilde) <= 1e-12
    assert est.delta_a_order == "O(a^{2n})"


def test_order_classes_by_branch():
    mk = lambda k31, k32: ChainConfig(n=50, k1=1, k2=2.3, k31=k31, k32=k32)
    assert predict_edge_states(mk(2.3, 3.5)).delta_a_order == "O((k1/k2)^{4n})"
    assert predict_edge_states(mk(2.3, 3.5)).c2_order == "Theta(a^{2n}/k32)"
    assert predict_edge_states(mk(1.5, 1.5)).delta_a_order == "Theta(a^n)"
    assert predict_edge_states(mk(1.5, 1.5)).c2_order == "Theta(a^n)"


# --------------------------------------------------------------------------
# Finite-size scaling laws
# --------------------------------------------------------------------------

def measured_delta_a(k1, k2, k31, k32, n, a_tilde):
    cs = modes.analyze(ChainConfig(n=n, k1=k1, k2=k2, k31=k31, k32=k32))
    p = cs.spectrum.config.bulk
    gm = [m for m in cs.modes if not p.in_band(m.omega2)]
    m = min(gm, key=lambda m: abs(m.te.a.real - a_tilde))
    return m, abs(m.te.a.real - a_tilde)


def fit_slope(ns, values):
    return float(np.polyfit(ns, np.log(values), 1)[0])


def test_scaling_generic_branch():
    # |a - a_tilde| = O(|a_tilde|^{2n}); root chosen close enough to 1
    # that the shift stays above double-precision resolution at n = 40.
    root = [r for r in solve_semi_infinite(1, 2.3, 0.3) if r.location][0]
    ns = [20, 30, 40]
    da = [measured_delta_a(1, 2.3, 0.3, 3.5, n, root.a_tilde)[1] for n in ns]
    target = 2 * math.log(abs(root.a_tilde))
    assert abs(fit_slope(ns, da) / target - 1) <= 0.15


def test_scaling_k31_equals_k2_branch():
    # |a + k1/k2| = O((k1/k2)^{4n}); a gap ratio near 1 keeps the
    # signal above the precision floor.
    k1, k2 = 1.0, 1.15
    ns = [20, 30, 40]
    da = [measured_delta_a(k1, k2, k2, 3.0, n, -k1 / k2)[1] for n in ns]
    target = 4 * math.log(k1 / k2)
    assert abs(fit_slope(ns, da) / target - 1) <= 0.15


def test_scaling_two_sided_branch():
    root = [r for r in solve_semi_infinite(1, 2.3, 1.5) if r.location][0]
    ns = [20, 30, 40]
    da = [measured_delta_a(1, 2.3, 1.5, 1.5, n, root.a_tilde)[1] for n in ns]
    target = math.log(abs(root.a_tilde))
    assert abs(fit_slope(ns, da) / target - 1) <= 0.15


def test_scaling_c2_generic():
    root = [r for r in solve_semi_infinite(1, 2.3, 0.3) if r.location][0]
    ns = [20, 30, 40]
    c2 = []
    for n in ns:
        m, _ = measured_delta_a(1, 2.3, 0.3, 3.5, n, root.a_tilde)
        c2.append(abs(m.c2 / m.c1))
    target = 2 * math.log(abs(root.a_tilde))
    assert abs(fit_slope(ns, c2) / target - 1) <= 0.15


# --------------------------------------------------------------------------
# Near-band-edge existence counting
# --------------------------------------------------------------------------

def test_near_edge_counts():
    mk = lambda k31, k32: ChainConfig(n=50, k1=1, k2=2.3, k31=k31, k32=k32)
    r = near_band_edge_existence(mk(1.3, 3.5))
    assert (r.max_at_band_edges, r.out_of_band_count) == (0, 2)
    r = near_band_edge_existence(mk(1.3, 4.6))
    assert (r.max_at_band_edges, r.out_of_band_count) == (1, 1)
    r = near_band_edge_existence(mk(4.6, 4.6))
    assert (r.max_at_band_edges, r.out_of_band_count) == (2, 0)
    top = [w for w in r.windows if w.omega2 == 2 * (1 + 2.3)][0]
    assert top.sides_near == ("left", "right")
    assert top.out_sign == 1
    lower = [w for w in r.windows if w.omega2 == 2 * 2.3][0]
    assert lower.out_sign == -1  # gap lies below 2k2 when k1 < k2
    assert lower.magnitude is not None


# --------------------------------------------------------------------------
# In-band patterns
# --------------------------------------------------------------------------

def test_integer_pattern_residuals():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5)
    est = inband_pattern(cfg, "Optical", "Lower", 5)
    assert est.pattern == "Integer"
    ex = exact_delta_theta(cfg, "Optical", "Lower", 5)
    for k in range(1, 6):
        assert abs(ex[k - 1] * 49 / math.pi - k) <= 0.2


def test_half_integer_pattern_residuals():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=4.6)
    est = inband_pattern(cfg, "Optical", "Lower", 5)
    assert est.pattern == "HalfInteger"
    ex = exact_delta_theta(cfg, "Optical", "Lower", 5)
    for k in range(1, 6):
        assert abs(ex[k - 1] * 49 / math.pi - (k - 0.5)) <= 0.2


def test_other_edges_first_order():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5)
    for band, edge in (("Acoustic", "Lower"), ("Acoustic", "Upper"),
                       ("Optical", "Upper")):
        est = inband_pattern(cfg, band, edge, 4)
        assert est.pattern == "Integer"
        ex = exact_delta_theta(cfg, band, edge, 4)
        for k in range(1, 5):
            assert abs(ex[k - 1] * 49 / math.pi - k) <= 0.2
        # Quadratic frequency expansion tracks the exact values.
        for w_pred, w_ex in zip(
                est.omega2,
                sorted((w for w in full_spectrum(cfg).omega2), key=lambda w:
                       abs(w - est.omega2[0]))[:1]):
            assert abs(w_pred - w_ex) <= 5e-3


def test_free_left_end_gives_half_integer_acoustic():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=0.0, k32=3.5)
    est = inband_pattern(cfg, "Acoustic", "Lower", 4)
    assert est.pattern == "HalfInteger"
    ex = exact_delta_theta(cfg, "Acoustic", "Lower", 4)
    for k in range(1, 5):
        assert abs(ex[k - 1] * 49 / math.pi - (k - 0.5)) <= 0.2


def test_shifted_pattern_with_escape():
    # Offsets of size Theta(1/n) on the right end: gamma-shifted ladder.
    # A negative offset pushes the first rung into the gap, so the
    # in-band ladder starts one rung up.
    n, k1, k2 = 100, 1.0, 1.7
    for delta in (0.3, 0.12, -0.12, -0.3):
        cfg = ChainConfig(n=n, k1=k1, k2=k2, k31=1.0, k32=2 * k2 + delta)
        est = inband_pattern(cfg, "Optical", "Lower", 4)
        assert est.pattern == "Shifted"
        assert 0 < est.gamma < math.pi
        ex = exact_delta_theta(cfg, "Optical", "Lower", 4)
        for e, b in zip(ex, est.delta_theta):
            assert abs((e - b) * (n - 1) / math.pi) <= 0.2


def test_pattern_undetermined_and_kmax_guard():
    n, k1, k2 = 100, 1.0, 1.7
    cfg = ChainConfig(n=n, k1=k1, k2=k2, k31=2 * k2 + 0.2, k32=2 * k2 + 0.3)
    with pytest.raises(PatternUndetermined):
        inband_pattern(cfg, "Optical", "Lower", 3)
    with pytest.raises(ValueError):
        inband_pattern(ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5),
                       "Optical", "Lower", 6)


def test_second_order_series_refines_first_order():
    for k32 in (3.5, 4.6):
        for n in (50, 100):
            cfg = ChainConfig(n=n, k1=1, k2=2.3, k31=1.3, k32=k32)
            est = inband_pattern(cfg, "Optical", "Lower", 5)
            assert est.tilde_theta is not None
            ex = exact_delta_theta(cfg, "Optical", "Lower", 5)
            for k, (e, b, t) in enumerate(zip(ex, est.delta_theta,
                                              est.tilde_theta), 1):
                refined = abs(e - b - t / (n - 1))
                assert refined < 0.7 * abs(e - b)
                if k <= 2:
                    assert refined < 0.15 * abs(e - b)


def test_tilde_theta_error_law_exponent():
    # Deviation from linear-in-k growth of the second-order correction
    # scales like k^3/n^3: the fitted exponent in k stays near 3.
    for n in (50, 100, 200):
        cfg = ChainConfig(n=n, k1=1, k2=2.3, k31=1.3, k32=3.5)
        ex = exact_delta_theta(cfg, "Optical", "Lower", 5)
        tt = [d - k * math.pi / (n - 1) for k, d in enumerate(ex, 1)]
        ks = np.arange(2, 6)
        dev = np.array([abs(tt[k - 1] - k * tt[0]) for k in ks])
        slope = float(np.polyfit(np.log(ks), np.log(dev), 1)[0])
        assert 2.5 <= slope <= 3.5
        assert np.all(dev <= 60.0 * ks ** 3 / n ** 3)


def test_tilde_theta_half_integer_bound():
    for n in (50, 100, 200):
        cfg = ChainConfig(n=n, k1=1, k2=2.3, k31=1.3, k32=4.6)
        ex = exact_delta_theta(cfg, "Optical", "Lower", 5)
        tt = [d - (k - 0.5) * math.pi / (n - 1) for k, d in enumerate(ex, 1)]
        for k in range(2, 6):
            assert abs(tt[k - 1] - (2 * k - 1) * tt[0]) <= 60.0 * k ** 3 / n ** 3


def test_sweep_envelopes():
    # 2n = 200 sweep of the right stiffness: every in-band frequency near
    # the edge at 2k2 stays inside its quadratic envelope band
    # [2k2 + c((m-1)pi/(n-1))^2, 2k2 + c(m pi/(n-1))^2].
    n, k1, k2, k31 = 100, 1.0, 1.7, 1.6
    c = k1 * k2 / (2 * (k2 - k1))
    delta_star = -k1 * k2 / (n * (k2 - k1))
    for k32 in np.linspace(2.9, 4.0, 12):
        cfg = ChainConfig(n=n, k1=k1, k2=k2, k31=k31, k32=float(k32))
        w2 = sorted(w for w in full_spectrum(cfg).omega2
                    if 2 * k2 < w < 2 * (k1 + k2))
        offset = 1 if k32 - 2 * k2 < delta_star else 0
        for j, w in enumerate(w2[:5], start=1):
            m = j + offset
            lo = 2 * k2 + c * ((m - 1) * math.pi / (n - 1)) ** 2
            hi = 2 * k2 + c * (m * math.pi / (n - 1)) ** 2
            assert lo - 1e-9 <= w <= hi + 1e-9


# --------------------------------------------------------------------------
# Approximate eigenvectors
# --------------------------------------------------------------------------

def test_approx_eigvec_self_approximation():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5)
    assert approx_eigvec_error(cfg, 1) <= 1e-8


def test_approx_eigvec_error_bounds_and_scaling():
    for k32 in (3.5, 4.6):
        cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=k32)
        assert approx_eigvec_error(cfg, 2) <= 0.05
        ratio = approx_eigvec_error(cfg, 4) / approx_eigvec_error(cfg, 2)
        assert 4 <= ratio <= 16


# --------------------------------------------------------------------------
# Odd chains
# --------------------------------------------------------------------------

def test_odd_chain_midgap_example():
    # 2n+1 = 101 sites
    oc = odd_chain_midgap(1.0, 2.3, 50)
    assert abs(oc.omega2 - 3.3) <= 1e-12
    assert abs(oc.omega2_numeric - 3.3) <= 1e-10
    assert oc.even_sublattice_max <= 1e-12
    assert oc.residual <= 1e-12
    assert oc.side == "left"
    assert abs(oc.ratio + 1 / 2.3) <= 1e-12


def test_odd_chain_localization_flips_under_swap():
    a = odd_chain_midgap(1.0, 2.3, 30)
    b = odd_chain_midgap(2.3, 1.0, 30)
    assert (a.side, b.side) == ("left", "right")
    # Mirror images: envelope of one is the reverse-sorted envelope of
    # the other.
    assert abs(abs(a.ratio) * abs(b.ratio) - 1) <= 1e-12
