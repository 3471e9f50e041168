import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modfrm import (
    AlignmentError,
    Fir,
    SpecError,
    Symmetry,
    cascade,
    complement,
    freq_response,
    interpolate,
    modulate,
    parallel_sum,
)
from modfrm.transforms import (
    align_delays,
    delay,
    pad_symmetric,
    passband_count,
    replica_centers,
    replica_widths,
)

from oracles import naive_convolve

PI = math.pi
GRID_1024 = 2 * PI * np.arange(1024) / 1024
GRID_256 = 2 * PI * np.arange(256) / 256


def random_fir(seed, n=None, cplx=False):
    r = np.random.default_rng(seed)
    n = n or int(r.integers(1, 80))
    h = r.standard_normal(n)
    if cplx:
        h = h + 1j * r.standard_normal(n)
    return Fir(h)


def symmetric_odd(seed, half=None):
    r = np.random.default_rng(seed)
    half = half if half is not None else int(r.integers(0, 40))
    a = r.standard_normal(half + 1)
    # a centre tap in [-1, 1] keeps 1 - c and c + (1 - c) exactly representable
    a[0] = r.uniform(-1.0, 1.0)
    return Fir(np.concatenate([a[:0:-1], a]))


seeds = st.integers(0, 2**32 - 1)


def wrap(w):
    # np.mod can round a tiny negative angle up to exactly 2*pi
    w = np.mod(w, 2 * PI)
    return np.where(w >= 2 * PI, 0.0, w)


# --------------------------------------------------------------- interpolate


def test_interpolate_identity():
    f = Fir([1.0, -2.0, 3.0])
    assert interpolate(f, 1) is f


def test_interpolate_definition():
    assert interpolate(Fir([1.0, 1.0]), 3).coeffs.tolist() == [1.0, 0.0, 0.0, 1.0]


def test_interpolate_shape_and_zeros(rng):
    h = rng.standard_normal(9)
    out = interpolate(Fir(h), 4).coeffs
    assert out.size == 4 * 8 + 1
    assert np.array_equal(out[::4], h)
    mask = np.ones(out.size, bool)
    mask[::4] = False
    assert np.all(out[mask] == 0.0)


@pytest.mark.parametrize("bad", [0, -1, 2.5, "x"])
def test_interpolate_rejects_bad_factor(bad):
    with pytest.raises(SpecError):
        interpolate(Fir([1.0]), bad)


@given(seed=seeds, L=st.integers(1, 12), cplx=st.booleans())
def test_interpolate_frequency_mapping(seed, L, cplx):
    f = random_fir(seed, cplx=cplx)
    out = freq_response(interpolate(f, L), GRID_1024)
    ref = freq_response(f, wrap(GRID_1024 * L))
    assert np.max(np.abs(out - ref)) < 1e-12 * max(1.0, np.sum(np.abs(f.coeffs)))


def test_replica_geometry():
    # modal filter replicas of the L=10 design sit at 2*pi*k/10
    assert np.allclose(replica_centers(10), 2 * PI * np.arange(11) / 10)
    assert passband_count(10) == 11
    w = replica_widths(0.2 * PI, 10)
    assert w[0] == pytest.approx(0.02 * PI) and w[5] == pytest.approx(0.04 * PI)


# ------------------------------------------------------------------ modulate


def test_modulate_zero_is_identity():
    f = Fir([1.0, 2.0])
    assert modulate(f, 0.0) is f


def test_modulate_phase_step_quarter_turn():
    # theta + phi = 0.5 pi, q = 1 -> center pi/2, i.e. multiply by j**n
    out = modulate(Fir(np.ones(5)), PI * 1 * 0.5).coeffs
    assert np.allclose(out, [1, 1j, -1, -1j, 1], atol=1e-15)
    assert modulate(Fir(np.ones(5)), PI / 2).symmetry is Symmetry.NONE


@given(seed=seeds, center=st.floats(0, 2 * PI, exclude_max=True))
def test_modulate_shift_property(seed, center):
    f = random_fir(seed)
    out = freq_response(modulate(f, center), GRID_256)
    ref = freq_response(f, wrap(GRID_256 - center))
    assert np.max(np.abs(out - ref)) < 1e-12 * max(1.0, np.sum(np.abs(f.coeffs)))


def test_modulate_shift_example(rng):
    f = Fir(rng.standard_normal(40))
    out = freq_response(modulate(f, 0.3 * PI), GRID_256)
    ref = freq_response(f, np.mod(GRID_256 - 0.3 * PI, 2 * PI))
    assert np.max(np.abs(out - ref)) < 1e-12


# ---------------------------------------------------------------- complement


def test_complement_of_delay_is_zero():
    assert complement(Fir([0.0, 1.0, 0.0])).coeffs.tolist() == [0.0, 0.0, 0.0]


def test_complement_of_half_is_half():
    assert complement(Fir([0.0, 0.5, 0.0])).coeffs.tolist() == [0.0, 0.5, 0.0]


@pytest.mark.parametrize("bad", [[1.0, 1.0], [1.0, 2.0, 3.0], [1j, 1.0, 1j]])
def test_complement_rejects_unsupported(bad):
    with pytest.raises(SpecError):
        complement(Fir(bad))


@given(seed=seeds)
def test_complement_involution(seed):
    f = symmetric_odd(seed)
    assert np.array_equal(complement(complement(f)).coeffs, f.coeffs)


@given(seed=seeds)
def test_complement_sum_is_pure_delay(seed):
    f = symmetric_odd(seed)
    s = parallel_sum([f, complement(f)]).coeffs
    c = (f.length - 1) // 2
    expect = np.zeros(f.length)
    expect[c] = 1.0
    assert np.array_equal(s, expect)


# ------------------------------------------------------------------- cascade


def test_cascade_identity(rng):
    x = Fir(rng.standard_normal(7))
    assert np.array_equal(cascade(x, Fir([1.0])).coeffs, x.coeffs)


def test_cascade_small():
    assert cascade(Fir([1.0, 1.0]), Fir([1.0, -1.0])).coeffs.tolist() == [1.0, 0.0, -1.0]


def test_cascade_matches_naive_exactly(rng):
    # integer-valued coefficients make every product and partial sum exact
    a = rng.integers(-1000, 1000, 32).astype(float)
    b = rng.integers(-1000, 1000, 48).astype(float)
    got = cascade(Fir(a), Fir(b)).coeffs
    ref = naive_convolve([int(v) for v in a], [int(v) for v in b])
    assert got.size == 79
    assert got.tolist() == [float(v) for v in ref]


@given(seed=seeds)
def test_cascade_naive_property(seed):
    r = np.random.default_rng(seed)
    a = r.integers(-50, 50, int(r.integers(1, 40))).astype(float)
    b = r.integers(-50, 50, int(r.integers(1, 40))).astype(float)
    ref = naive_convolve([int(v) for v in a], [int(v) for v in b])
    assert cascade(Fir(a), Fir(b)).coeffs.tolist() == [float(v) for v in ref]


@given(s1=seeds, s2=seeds, s3=seeds)
def test_cascade_commutative_associative(s1, s2, s3):
    a, b, c = random_fir(s1, cplx=True), random_fir(s2), random_fir(s3)
    ab, ba = cascade(a, b).coeffs, cascade(b, a).coeffs
    scale = np.sum(np.abs(a.coeffs)) * np.sum(np.abs(b.coeffs))
    assert np.max(np.abs(ab - ba)) <= 1e-14 * scale
    left = cascade(cascade(a, b), c).coeffs
    right = cascade(a, cascade(b, c)).coeffs
    scale *= np.sum(np.abs(c.coeffs))
    assert np.max(np.abs(left - right)) <= 1e-14 * scale


@given(s1=seeds, s2=seeds)
def test_cascade_multiplicative(s1, s2):
    a, b = random_fir(s1, cplx=True), random_fir(s2)
    prod = freq_response(a, GRID_256) * freq_response(b, GRID_256)
    got = freq_response(cascade(a, b), GRID_256)
    scale = np.sum(np.abs(a.coeffs)) * np.sum(np.abs(b.coeffs))
    # relative to the response scale; pointwise relative error is unbounded near nulls
    assert np.max(np.abs(got - prod)) <= 1e-10 * scale
    big = np.abs(prod) > 1e-3 * scale
    assert np.all(np.abs(got - prod)[big] <= 1e-10 * np.abs(prod)[big])


# -------------------------------------------------------------- parallel_sum


def test_parallel_sum_single():
    f = Fir([1.0, 2.0, 3.0])
    assert np.array_equal(parallel_sum([f]).coeffs, f.coeffs)


def test_parallel_sum_pads_right():
    s = parallel_sum([Fir([1.0]), Fir([0.0, 0.0, 2.0])]).coeffs
    assert s.tolist() == [1.0, 0.0, 2.0]


def test_parallel_sum_empty():
    with pytest.raises(SpecError):
        parallel_sum([])


def test_modulated_channels_sum_flat():
    # m + 1 = 4 modulations of a delta-scaled prototype sum to a flat response
    m = 3
    proto = Fir([0.0, 0.5, 0.0])
    chans = [modulate(proto, 2 * PI * q / (m + 1)) for q in range(m + 1)]
    power = sum(np.abs(freq_response(c, GRID_256)) ** 2 for c in chans)
    assert np.max(np.abs(power - 1.0)) < 1e-12


# ----------------------------------------------------------------- alignment


def test_delay_and_padding():
    assert delay(Fir([1.0]), 2).coeffs.tolist() == [0.0, 0.0, 1.0]
    assert pad_symmetric(Fir([1.0, 2.0, 1.0]), 3).coeffs.tolist() == [0, 0, 1, 2, 1, 0, 0]
    with pytest.raises(AlignmentError):
        pad_symmetric(Fir([1.0, 1.0]), 2)
    with pytest.raises(AlignmentError):
        delay(Fir([1.0]), -1)


def test_align_delays():
    a, b = align_delays(Fir([1.0, 2.0, 1.0]), Fir([1.0]))
    assert b.coeffs.tolist() == [0.0, 1.0]
    assert a.length == 3
    with pytest.raises(AlignmentError):
        align_delays(Fir([1.0, 1.0]), Fir([1.0]))
