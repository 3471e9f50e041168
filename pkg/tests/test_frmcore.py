import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modfrm import (
    AlignmentError,
    Case,
    DesignError,
    FilterSpec,
    Fir,
    ModalConfig,
    SpecError,
    check_power_complementarity,
    compose_frm,
    compose_modfrm,
    design_modal,
    equiripple_design,
    freq_response,
    interpolate,
    cascade,
    masking_edges,
    measure_spec,
    remez,
)
from modfrm.firdesign import lowpass_bands
from modfrm.frmcore import admissible_modal_length, three_db_offset

from conftest import ATTEN_DB, RIPPLE_DB

PI = math.pi
SWEEP = (10, 15, 20, 25, 30, 40)


def cfg(L, case="I", m=3, theta=0.2, phi=0.3):
    return ModalConfig(theta * PI, phi * PI, m, L, case)


def db(x):
    return 20 * np.log10(np.abs(x))


# -------------------------------------------------------------- ModalConfig


def test_config_rejects_even_m():
    with pytest.raises(SpecError, match="m must be odd"):
        ModalConfig(0.2 * PI, 0.3 * PI, 2, 10)


@pytest.mark.parametrize(
    "args",
    [
        (0.2 * PI, 0.31 * PI, 3, 10),  # breaks (m + 1)(theta + phi) = 2 pi
        (0.3 * PI, 0.2 * PI, 3, 10),
        (0.2 * PI, 0.3 * PI, 3, 0),
        (0.2 * PI, 0.3 * PI, -1, 10),
    ],
)
def test_config_rejects_invalid(args):
    with pytest.raises(SpecError):
        ModalConfig(*args)


def test_config_case_parsing_and_from_edges():
    assert ModalConfig(0.2 * PI, 0.3 * PI, 3, 10, "2").case is Case.II
    assert ModalConfig.from_edges(0.4 * PI, 0.6 * PI, 25).m == 1
    with pytest.raises(SpecError):
        Case.parse("III")


# ------------------------------------------------------------ masking edges


def test_masking_edges_case1_l10():
    e = masking_edges(cfg(10))
    assert np.allclose(np.array(e.as_tuple()) / PI, [0.12, 0.17, 0.08, 0.13], rtol=1e-12)


def test_masking_edges_case1_l40():
    e = masking_edges(cfg(40))
    assert np.allclose(np.array(e.as_tuple()) / PI, [0.03, 0.0425, 0.02, 0.0325], rtol=1e-12)


def test_masking_edges_case2_l10():
    # (phi, theta + 2 phi, 2 theta + phi, 3 theta + 2 phi) / L
    e = masking_edges(cfg(10, "II"))
    assert np.allclose(np.array(e.as_tuple()) / PI, [0.03, 0.08, 0.07, 0.12], rtol=1e-12)


@pytest.mark.parametrize("L", SWEEP)
def test_masking_edges_exact_rationals(L):
    # theta = pi/5, phi = 3 pi/10 exactly as fractions of pi
    t, p = Fraction(1, 5), Fraction(3, 10)
    expect = [(3 * t + 2 * p) / L, (4 * t + 3 * p) / L, (t + 2 * p) / L, (2 * t + 3 * p) / L]
    got = np.array(masking_edges(cfg(L)).as_tuple()) / PI
    for g, e in zip(got, expect):
        assert g == pytest.approx(float(e), rel=1e-12)


def test_masking_transition_sum():
    # each masking transition is (theta + phi)/L wide, pi/L together
    for L in SWEEP:
        e = masking_edges(cfg(L))
        total = (e.ma_stop - e.ma_pass) + (e.mc_stop - e.mc_pass)
        assert total == pytest.approx(PI / L, rel=1e-12)


# ---------------------------------------------------- admissible modal length


@given(n=st.integers(1, 400), p=st.integers(0, 5))
def test_admissible_length_property(n, p):
    m = 2 * p + 1
    N = admissible_modal_length(n, m)
    assert N >= n
    k = Fraction(2 * (N - 1), m + 1)
    assert k.denominator == 1 and k.numerator % 2 == 1
    # minimal: the previous admissible length is below n
    assert N - (m + 1) < n


# ---------------------------------------------------------- 3-dB adjustment


def test_modal_3db_l10(design_l10):
    h = freq_response(design_l10.modal, [0.25 * PI])[0]
    assert db(h) == pytest.approx(-3.0103, abs=0.01)


def test_modal_3db_m1(design_m1):
    h = freq_response(design_m1.modal, [0.5 * PI])[0]
    assert db(h) == pytest.approx(-3.0103, abs=0.01)


def test_modal_meets_attenuation(design_l10):
    # the offset keeps the transition width, so the shifted spec still holds
    off = design_l10.edge_offset
    spec = FilterSpec(0.2 * PI + off, 0.3 * PI + off, RIPPLE_DB, ATTEN_DB)
    m = measure_spec(design_l10.modal, spec)
    assert m.achieved_stopband_atten_db >= ATTEN_DB - 1.0
    assert design_l10.modal.is_symmetric and design_l10.modal.length % 2 == 1


def test_three_db_zero_offset_when_centred():
    # |0.5 + 0.5 e^{-jw}| = cos(w/2) is exactly 1/sqrt(2) at pi/2
    calls = []

    def design_at(d):
        calls.append(d)
        return Fir([0.5, 0.5])

    d, f = three_db_offset(design_at, 0.5 * PI, 0.2 * PI)
    assert d == 0.0 and calls == [0.0]


def test_three_db_unbracketed():
    with pytest.raises(DesignError):
        three_db_offset(lambda d: Fir([1.0]), 0.5 * PI, 0.2 * PI)


def test_design_modal_edge_mismatch():
    with pytest.raises(SpecError):
        design_modal(FilterSpec(0.21 * PI, 0.3 * PI, 0.1, 40), cfg(10))


# ---------------------------------------------------- power complementarity


@pytest.mark.parametrize("m", [1, 3, 5])
def test_power_complementarity_flat_case(m):
    h = np.zeros(5)
    h[2] = 1 / math.sqrt(m + 1)
    assert check_power_complementarity(Fir(h), m) < 1e-14


def test_power_complementarity_golden(design_l10):
    dev = check_power_complementarity(design_l10.modal, 3)
    assert dev < 0.02


def test_power_complementarity_improves_with_3db(design_l10):
    spec = FilterSpec(0.2 * PI, 0.3 * PI, RIPPLE_DB, ATTEN_DB + 9.54)
    bands, desired, weight = lowpass_bands(spec)
    plain = remez(design_l10.modal.length, bands, desired, weight)
    assert check_power_complementarity(plain, 3) > check_power_complementarity(design_l10.modal, 3)


# --------------------------------------------------------------- compose_frm


def symmetric_odd(rng, half):
    a = rng.standard_normal(half + 1)
    a[0] = rng.uniform(-1, 1)
    return Fir(np.concatenate([a[:0:-1], a]))


def test_compose_frm_reduces_to_delay(rng):
    ha = symmetric_odd(rng, 12)
    out = compose_frm(ha, Fir([1.0]), Fir([1.0]), 1).coeffs
    expect = np.zeros(ha.length)
    expect[12] = 1.0
    assert np.array_equal(out, expect)


def test_compose_frm_single_branch(rng):
    ha = symmetric_odd(rng, 5)
    hma = symmetric_odd(rng, 3)
    out = compose_frm(ha, hma, Fir(np.zeros(7)), 4).coeffs
    assert np.array_equal(out, cascade(interpolate(ha, 4), hma).coeffs)


def test_compose_frm_rejects_bad_inputs(rng):
    with pytest.raises(SpecError):
        compose_frm(Fir([1.0, 1.0]), Fir([1.0]), Fir([1.0]), 2)
    with pytest.raises(AlignmentError):
        compose_frm(symmetric_odd(rng, 2), Fir([1.0, 1.0]), Fir([1.0]), 2)


def test_compose_frm_sharp_lowpass():
    # conventional FRM: wp = 0.3 pi, ws = 0.31 pi, L = 7 gives a band-edge
    # filter with theta = 0.1 pi, phi = 0.17 pi and masking edges
    # Ma (0.3 pi, 3.83 pi/7), Mc (1.9 pi/7, 0.31 pi)
    L, r, a = 7, 0.1, 40.0
    ha = equiripple_design(FilterSpec(0.1 * PI, 0.17 * PI, r / 2, a + 6))
    ma = equiripple_design(FilterSpec(0.3 * PI, 3.83 * PI / 7, r / 2, a + 6))
    mc = equiripple_design(FilterSpec(1.9 * PI / 7, 0.31 * PI, r / 2, a + 6))
    h = compose_frm(ha, ma, mc, L)
    spec = FilterSpec(0.3 * PI, 0.31 * PI, r, a)
    meas = measure_spec(h, spec)
    assert meas.satisfies(spec)
    assert_mirror(h.coeffs, +1)
    # the composite is far shorter than a direct design of the same spec
    assert ha.length < equiripple_design(spec).length / 3


# ------------------------------------------------------------- compose_modfrm


def test_compose_modfrm_m1_l1_flat():
    spec = FilterSpec(0.4 * PI, 0.6 * PI, 0.01, 50)
    config = ModalConfig(0.4 * PI, 0.6 * PI, 1, 1)
    modal = design_modal(spec, config)
    d = compose_modfrm(config, modal, Fir([1.0]), Fir([1.0]))
    dev = check_power_complementarity(modal, 1)
    H = np.abs(freq_response(d.overall, 2 * PI * np.arange(512) / 512))
    assert np.all(np.abs(H**2 - 1) <= dev + 1e-12)


def test_overall_l40(design_l40):
    meas = measure_spec(design_l40.overall, design_l40.overall_spec)
    assert meas.transition_width == pytest.approx(0.0025 * PI, abs=meas.grid_step)
    assert meas.measured_transition_width <= 0.0025 * PI + meas.grid_step
    assert meas.achieved_stopband_atten_db >= 59.0


def test_overall_m1_l25(design_m1):
    meas = measure_spec(design_m1.overall, design_m1.overall_spec)
    assert meas.transition_width == pytest.approx(0.008 * PI, abs=meas.grid_step)
    assert meas.measured_transition_width <= 0.008 * PI + meas.grid_step
    assert meas.achieved_stopband_atten_db >= 59.0


@pytest.mark.parametrize("fixture", ["design_l10", "design_l40", "design_m1"])
def test_branch_delays_equal(fixture, request):
    d = request.getfixturevalue(fixture)
    assert d.even_branch.length == d.odd_branch.length
    assert d.ma_aligned.length == d.mc_aligned.length == 2 * d.masking_delay + 1
    assert_mirror(d.ma_aligned.coeffs, +1)
    assert_mirror(d.mc_aligned.coeffs, +1)
    gd = d.group_delay
    # integer for odd modal lengths, half-integer for the even m = 1 modal
    assert 2 * gd == int(2 * gd)
    assert (gd == int(gd)) == (d.modal.length % 2 == 1 or d.config.L % 2 == 0)
    assert (d.overall.length - 1) / 2 == gd
    # the even copy group is symmetric and the odd group antisymmetric about
    # the same centre, so both masked branches have group delay gd
    a = cascade(d.even_branch, d.ma_aligned).coeffs
    c = cascade(d.odd_branch, d.mc_aligned).coeffs
    assert a.size == c.size == d.overall.length
    assert_mirror(a, +1)
    assert_mirror(c, -1)
    assert d.overall.is_real


def assert_mirror(h, sign):
    h = np.asarray(h)
    assert np.max(np.abs(h - sign * h[::-1])) <= 1e-14 * np.max(np.abs(h))


def test_recompose_matches(design_l10):
    assert np.array_equal(design_l10.recompose().coeffs, design_l10.overall.coeffs)

