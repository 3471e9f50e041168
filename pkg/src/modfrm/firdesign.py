"""Equiripple linear-phase FIR design, order estimation and measurement.

All frequencies are normalized angular frequencies in radians/sample, so the
Nyquist frequency is ``pi``.  A lowpass :class:`FilterSpec` is the only
user-facing design target; :func:`remez` accepts arbitrary piecewise-constant
multiband targets and is what the masking/IFIR stages call underneath.

Ripple convention
-----------------
``passband_ripple_db = r`` means the passband magnitude stays inside
``[1 - dp, 1 + dp]`` with ``20*log10(1 + dp) = r``.  ``stopband_atten_db = a``
means the stopband magnitude stays below ``ds = 10**(-a/20)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError, DesignError, SpecError

TWO_PI = 2.0 * np.pi

#: transition widths below this are rejected as unachievable
MIN_TRANSITION = 1e-5 * np.pi


def ripple_to_deviation(ripple_db):
    """Passband ripple in dB -> linear peak deviation from unity."""
    return 10.0 ** (ripple_db / 20.0) - 1.0


def deviation_to_ripple(dev):
    return 20.0 * math.log10(1.0 + dev)


def atten_to_deviation(atten_db):
    return 10.0 ** (-atten_db / 20.0)


def deviation_to_atten(dev):
    if dev <= 0.0:
        return math.inf
    return -20.0 * math.log10(dev)


@dataclass(frozen=True)
class FilterSpec:
    """Lowpass design target.

    Parameters
    ----------
    passband_edge, stopband_edge : float
        Band edges in rad/sample, ``0 < passband_edge < stopband_edge <= pi``.
    passband_ripple_db : float
        Peak passband deviation in dB (see module docstring).
    stopband_atten_db : float
        Minimum stopband attenuation in dB.
    """

    passband_edge: float
    stopband_edge: float
    passband_ripple_db: float
    stopband_atten_db: float

    def __post_init__(self):
        wp, ws = float(self.passband_edge), float(self.stopband_edge)
        if not (0.0 < wp < ws <= np.pi * (1 + 1e-12)):
            raise SpecError(
                f"band edges must satisfy 0 < passband ({wp:.6g}) < stopband ({ws:.6g}) <= pi"
            )
        if not (self.passband_ripple_db > 0 and self.stopband_atten_db > 0):
            raise SpecError("passband ripple and stopband attenuation must be positive")
        object.__setattr__(self, "passband_edge", wp)
        object.__setattr__(self, "stopband_edge", min(ws, np.pi))

    @property
    def transition_width(self):
        return self.stopband_edge - self.passband_edge

    @property
    def passband_deviation(self):
        return ripple_to_deviation(self.passband_ripple_db)

    @property
    def stopband_deviation(self):
        return atten_to_deviation(self.stopband_atten_db)

    def shifted(self, offset):
        """Same spec with both edges moved by ``offset`` (width preserved)."""
        return replace(
            self,
            passband_edge=self.passband_edge + offset,
            stopband_edge=self.stopband_edge + offset,
        )

    def with_deviations(self, passband_deviation=None, stopband_deviation=None):
        kw = {}
        if passband_deviation is not None:
            kw["passband_ripple_db"] = deviation_to_ripple(passband_deviation)
        if stopband_deviation is not None:
            kw["stopband_atten_db"] = deviation_to_atten(stopband_deviation)
        return replace(self, **kw)


class Symmetry(str, enum.Enum):
    EVEN = "even-symmetric"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class Fir:
    """Immutable FIR coefficient sequence.

    Real filters are stored as ``float64`` (their imaginary part is exactly
    zero by construction); anything with a non-zero imaginary part is stored
    as ``complex128``.  ``symmetry`` is detected exactly when not given.
    """

    coeffs: np.ndarray
    symmetry: Symmetry = None

    def __post_init__(self):
        c = np.array(self.coeffs, copy=True)
        if c.ndim != 1 or c.size == 0:
            raise SpecError("FIR coefficients must be a non-empty 1-D sequence")
        if np.iscomplexobj(c):
            if np.all(c.imag == 0):
                c = c.real.astype(np.float64)
            else:
                c = c.astype(np.complex128)
        else:
            c = c.astype(np.float64)
        if not np.all(np.isfinite(c)):
            raise SpecError("FIR coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

        symmetric = (not np.iscomplexobj(c)) and np.array_equal(c, c[::-1])
        if self.symmetry is None:
            sym = Symmetry.EVEN if symmetric else Symmetry.NONE
        else:
            sym = Symmetry(self.symmetry)
            if sym is Symmetry.EVEN and not symmetric:
                raise SpecError("coefficients are not even-symmetric")
        object.__setattr__(self, "symmetry", sym)

    @property
    def length(self):
        return int(self.coeffs.size)

    def __len__(self):
        return self.length

    @property
    def is_real(self):
        return not np.iscomplexobj(self.coeffs)

    @property
    def is_symmetric(self):
        return self.symmetry is Symmetry.EVEN

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coeffs, dtype=dtype)

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"Fir(length={self.length}, {kind}, symmetry={self.symmetry.value!r})"


def as_coeffs(filt):
    """Coefficient array of a :class:`Fir` or anything array-like."""
    if isinstance(filt, Fir):
        return filt.coeffs
    return np.asarray(filt)


@dataclass(frozen=True)
class BandMeasurement:
    """Measured counterpart of a :class:`FilterSpec`.

    ``transition_width`` is the width of the :class:`FilterSpec` the filter was measured
    against.  ``measured_passband_edge`` and ``measured_stopband_edge`` are
    read off the response itself: the distance from the band centre at which
    it first leaves its achieved passband envelope, and beyond which it stays
    inside its achieved stopband envelope.
    """

    achieved_passband_ripple_db: float
    achieved_stopband_atten_db: float
    transition_width: float
    passband_deviation: float = field(default=0.0, repr=False)
    stopband_peak: float = field(default=0.0, repr=False)
    measured_passband_edge: float = field(default=0.0, repr=False)
    measured_stopband_edge: float = field(default=0.0, repr=False)
    grid_step: float = field(default=0.0, repr=False)

    @property
    def measured_transition_width(self):
        return max(self.measured_stopband_edge - self.measured_passband_edge, 0.0)

    def satisfies(self, spec, rel_tol=1e-3):
        """True when both linear deviations are within spec (``rel_tol`` slack)."""
        return (
            self.passband_deviation <= spec.passband_deviation * (1 + rel_tol)
            and self.stopband_peak <= spec.stopband_deviation * (1 + rel_tol)
        )


# ---------------------------------------------------------------------------
# frequency response


def freq_response(filt, grid):
    """Evaluate ``sum_n h[n] exp(-j w n)`` at each frequency of ``grid``.

    ``grid`` values must lie in ``[0, 2*pi)``.
    """
    h = as_coeffs(filt)
    w = np.atleast_1d(np.asarray(grid, dtype=float))
    if not np.all(np.isfinite(w)) or np.any(w < 0) or np.any(w >= TWO_PI):
        raise SpecError("frequency grid values must lie in [0, 2*pi)")
    n = np.arange(h.size, dtype=float)
    out = np.empty(w.shape, dtype=complex)
    chunk = max(1, (1 << 21) // max(h.size, 1))
    for s in range(0, w.size, chunk):
        phase = np.mod(np.outer(w[s:s + chunk], n), TWO_PI)
        out[s:s + chunk] = np.exp(-1j * phase) @ h
    return out


def uniform_response(filt, n_points):
    """Response at ``2*pi*k/n_points``, k = 0..n_points-1 (FFT, any length)."""
    h = as_coeffs(filt)
    n_points = int(n_points)
    if n_points < 1:
        raise SpecError("n_points must be positive")
    if h.size > n_points:
        pad = (-h.size) % n_points
        h = np.concatenate([h, np.zeros(pad, dtype=h.dtype)]).reshape(-1, n_points).sum(axis=0)
    return np.fft.fft(h, n_points)


def measure_spec(filt, spec, *, grid_size=None, center=0.0):
    """Measure passband deviation and stopband attenuation against ``spec``.

    The passband is ``|w - center| <= passband_edge`` and the stopband
    ``|w - center| >= stopband_edge`` (distances wrapped onto the circle).
    Real filters centred at DC are evaluated on ``[0, pi]`` only.  The grid
    has ``16 * N`` points by default plus the exact band edges.
    """
    h = as_coeffs(filt)
    N = h.size
    G = int(grid_size) if grid_size else max(16 * N, 2048)
    wp, ws = spec.passband_edge, spec.stopband_edge
    one_sided = (not np.iscomplexobj(h)) and center == 0.0
    if one_sided:
        nfft = 2 * G
        H = uniform_response(h, nfft)[: G + 1]
        w = np.arange(G + 1) * (TWO_PI / nfft)
        edges = np.array([wp, ws])
        He = freq_response(h, np.mod(edges, TWO_PI))
        w = np.concatenate([w, edges])
        A = np.abs(np.concatenate([H, He]))
        dist = w
    else:
        H = uniform_response(h, G)
        w = np.arange(G) * (TWO_PI / G)
        edges = np.mod(center + np.array([-ws, -wp, wp, ws]), TWO_PI)
        He = freq_response(h, edges)
        w = np.concatenate([w, edges])
        A = np.abs(np.concatenate([H, He]))
        dist = np.abs(np.angle(np.exp(1j * (w - center))))
    tol = 1e-12
    pb = A[dist <= wp + tol]
    sb = A[dist >= ws - tol]
    dev_p = float(np.max(np.abs(pb - 1.0))) if pb.size else 0.0
    peak_s = float(np.max(sb)) if sb.size else 0.0
    mp, ms = _measured_edges(dist, A, dev_p, peak_s)
    return BandMeasurement(
        achieved_passband_ripple_db=deviation_to_ripple(dev_p),
        achieved_stopband_atten_db=max(deviation_to_atten(peak_s), 0.0),
        transition_width=spec.transition_width,
        passband_deviation=dev_p,
        stopband_peak=peak_s,
        measured_passband_edge=mp,
        measured_stopband_edge=ms,
        grid_step=TWO_PI / (2 * G) if one_sided else TWO_PI / G,
    )


def _measured_edges(dist, A, dev_p, peak_s):
    order = np.argsort(dist, kind="stable")
    d, a = dist[order], A[order]
    slack = 1.0 + 1e-9
    out_p = np.nonzero(np.abs(a - 1.0) > dev_p * slack + 1e-15)[0]
    mp = d[out_p[0] - 1] if out_p.size and out_p[0] > 0 else (0.0 if out_p.size else d[-1])
    out_s = np.nonzero(a > peak_s * slack + 1e-15)[0]
    ms = d[out_s[-1] + 1] if out_s.size and out_s[-1] + 1 < d.size else (d[-1] if out_s.size else d[0])
    return float(mp), float(ms)


# ---------------------------------------------------------------------------
# order estimation


def estimate_order(spec, *, min_transition=MIN_TRANSITION):
    """Herrmann-Rabiner-Chan length estimate, rounded up to an odd length."""
    width = spec.transition_width
    if width < min_transition:
        raise SpecError(
            f"transition width {width:.3g} rad below floor {min_transition:.3g}; unachievable"
        )
    dp = min(spec.passband_deviation, 0.5)
    ds = min(spec.stopband_deviation, 0.5)
    lp, ls = math.log10(dp), math.log10(ds)
    d_inf = (0.005309 * lp**2 + 0.07114 * lp - 0.4761) * ls - (
        0.00266 * lp**2 + 0.5941 * lp + 0.4278
    )
    f = 11.01217 + 0.51244 * (lp - ls)
    df = width / TWO_PI
    n = int(math.ceil(d_inf / df - f * df + 1))
    n = max(n, 3)
    return n if n % 2 else n + 1


# ---------------------------------------------------------------------------
# Remez exchange


def _bary_weights(x):
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    sign = np.prod(np.sign(d), axis=1)
    logw = -np.sum(np.log(np.abs(d)), axis=1)
    return sign * np.exp(logw - logw.max())


def _bary_eval(xe, xi, yi, wi):
    out = np.empty(xe.shape)
    chunk = max(1, (1 << 20) // max(xi.size, 1))
    for s in range(0, xe.size, chunk):
        d = xe[s:s + chunk, None] - xi[None, :]
        hit = d == 0.0
        d[hit] = 1.0
        t = wi / d
        val = (t @ yi) / t.sum(axis=1)
        rows, cols = np.nonzero(hit)
        val[rows] = yi[cols]
        out[s:s + chunk] = val
    return out


def _local_extrema(E, band_id):
    # a point qualifies when no same-signed neighbour in its band is larger
    a = np.abs(E)
    sg = np.sign(E)
    same = band_id[1:] == band_id[:-1]
    beats = (a[:-1] >= a[1:]) | (sg[:-1] != sg[1:]) | ~same
    beaten_by = (a[1:] >= a[:-1]) | (sg[1:] != sg[:-1]) | ~same
    left = np.r_[True, beaten_by]
    right = np.r_[beats, True]
    return np.nonzero(left & right & (a > 0))[0]


def _enforce_alternation(idx, E):
    out = []
    for i in idx:
        if out and np.sign(E[i]) == np.sign(E[out[-1]]):
            if abs(E[i]) > abs(E[out[-1]]):
                out[-1] = i
        else:
            out.append(i)
    return out


def _trim(idx, E, count):
    idx = list(idx)
    while len(idx) > count:
        excess = len(idx) - count
        mags = [abs(E[i]) for i in idx]
        if excess == 1:
            idx.pop(0 if mags[0] < mags[-1] else -1)
            continue
        k = int(np.argmin(mags))
        if k in (0, len(idx) - 1):
            idx.pop(k)
        else:
            # dropping an interior point leaves two same-signed neighbours
            idx.pop(k)
            j = k - 1 if mags[k - 1] < mags[k + 1] else k
            idx.pop(j)
    return idx


def _refine_extrema(idx, grid, bid, E, cw, ce, err_fn):
    """Move interior grid extrema to the vertex of a local parabola fit,
    keeping the move only where it increases the error magnitude."""
    inner = (idx > 0) & (idx < grid.size - 1)
    j = idx[inner]
    j = j[(bid[j - 1] == bid[j]) & (bid[j + 1] == bid[j])]
    if j.size == 0:
        return cw, ce
    e0, e1, e2 = E[j - 1], E[j], E[j + 1]
    den = e0 - 2 * e1 + e2
    ok = den != 0.0
    off = np.zeros(j.size)
    off[ok] = 0.5 * (e0[ok] - e2[ok]) / den[ok]
    ok &= np.abs(off) < 1.0
    if not np.any(ok):
        return cw, ce
    j, off, e1 = j[ok], off[ok], e1[ok]
    wr = grid[j] + off * (grid[j + 1] - grid[j])
    er = err_fn(wr, bid[j])
    better = (np.abs(er) > np.abs(e1)) & (np.sign(er) == np.sign(e1))
    pos = np.searchsorted(idx, j)
    cw[pos[better]] = wr[better]
    ce[pos[better]] = er[better]
    return cw, ce


def remez(numtaps, bands, desired, weight=None, *, grid_density=16,
          max_iterations=64, tol=1e-10, refine=True):
    """Minimax linear-phase FIR (Type I for odd, Type II for even lengths).

    Parameters
    ----------
    numtaps : int
        Filter length ``N``.
    bands : sequence of (lo, hi)
        Disjoint increasing bands in rad/sample inside ``[0, pi]``.
    desired, weight : sequence of float
        Constant target amplitude and error weight per band.
    grid_density : int
        Dense-grid points per approximating function.
    max_iterations : int
        Exchange iterations before :class:`ConvergenceError` is raised.
    tol : float
        Relative spread of the extremal errors at which the exchange stops.
    refine : bool
        Refine each grid extremum by a local parabola fit.

    Returns
    -------
    Fir
        Real even-symmetric filter.
    """
    N = int(numtaps)
    if N < 1:
        raise SpecError("numtaps must be >= 1")
    bands = [(float(lo), float(hi)) for lo, hi in bands]
    desired = [float(d) for d in desired]
    weight = [1.0] * len(bands) if weight is None else [float(v) for v in weight]
    if not (len(bands) == len(desired) == len(weight)) or not bands:
        raise SpecError("bands, desired and weight must have equal non-zero length")
    prev = -np.inf
    for lo, hi in bands:
        if not (0.0 <= lo <= hi <= np.pi + 1e-12) or lo < prev:
            raise SpecError("bands must be increasing, disjoint and inside [0, pi]")
        prev = hi
    if any(w <= 0 for w in weight):
        raise SpecError("weights must be positive")

    type2 = N % 2 == 0
    r = N // 2 if type2 else (N + 1) // 2
    spacing = np.pi / (grid_density * max(r, 1))

    grid, D, W, bid, steps = [], [], [], [], []
    for b, ((lo, hi), d, wt) in enumerate(zip(bands, desired, weight)):
        if type2 and hi > np.pi - spacing:
            hi = np.pi - spacing
            if hi < lo:
                continue
        n = max(int(math.ceil((hi - lo) / spacing)), 1) + 1 if hi > lo else 1
        pts = np.linspace(lo, hi, n)
        grid.append(pts)
        D.append(np.full(n, d))
        W.append(np.full(n, wt))
        bid.append(np.full(n, b))
        steps.append((hi - lo) / (n - 1) if n > 1 else 0.0)
    grid = np.concatenate(grid)
    D = np.concatenate(D)
    W = np.concatenate(W)
    bid = np.concatenate(bid)
    if grid.size < r + 1:
        raise SpecError("frequency grid too coarse for the requested length")

    def q_of(w):
        return np.cos(w / 2.0) if type2 else np.ones_like(w)

    Qg = q_of(grid)
    Dt, Wt = D / Qg, W * Qg
    xg = np.cos(grid)
    band_d = np.array(desired)
    band_w = np.array(weight)

    ext_w = grid[np.unique(np.round(np.linspace(0, grid.size - 1, r + 1)).astype(int))]
    ext_b = bid[np.searchsorted(grid, ext_w)]
    if ext_w.size < r + 1:
        raise SpecError("frequency grid too coarse for the requested length")

    def solve(ext_w, ext_b):
        q = q_of(ext_w)
        ed, ew = band_d[ext_b] / q, band_w[ext_b] * q
        x = np.cos(ext_w)
        bw = _bary_weights(x)
        sgn = (-1.0) ** np.arange(x.size)
        delta = np.dot(bw, ed) / np.dot(bw, sgn / ew)
        vals = ed - sgn * delta / ew
        xi, yi = x[:-1], vals[:-1]
        return delta, (xi, yi, _bary_weights(xi))

    def err_at(w, b, interp):
        q = q_of(w)
        P = _bary_eval(np.cos(w), *interp)
        return band_w[b] * q * (band_d[b] / q - P)

    # below this absolute error spread the exchange only chases rounding noise
    noise_floor = 1e-13 * band_w.max() * max(1.0, np.abs(band_d).max())
    converged = False
    best_delta, stalled = 0.0, 0
    for _ in range(max_iterations):
        delta, interp = solve(ext_w, ext_b)
        E = Wt * (Dt - _bary_eval(xg, *interp))

        cand = _local_extrema(E, bid)
        cw, ce = grid[cand].copy(), E[cand].copy()
        if refine:
            cw, ce = _refine_extrema(cand, grid, bid, E, cw, ce,
                                     lambda w, b: err_at(w, b, interp))
        cb = bid[cand]
        keep = np.abs(ce) >= abs(delta)
        # the previous reference always alternates at level |delta|, so
        # merging it in guarantees enough alternating candidates
        cw = np.concatenate([cw[keep], ext_w])
        ce = np.concatenate([ce[keep], err_at(ext_w, ext_b, interp)])
        cb = np.concatenate([cb[keep], ext_b])
        order = np.argsort(cw, kind="stable")
        cw, ce, cb = cw[order], ce[order], cb[order]
        sel = _enforce_alternation(np.arange(cw.size), ce)
        if len(sel) < r + 1:
            raise ConvergenceError("exchange lost alternation; spec numerically infeasible")
        sel = np.asarray(_trim(sel, ce, r + 1))
        new_w, new_b, new_e = cw[sel], cb[sel], ce[sel]
        peak = np.abs(new_e).max()
        ext_w, ext_b = new_w, new_b
        if peak - abs(delta) <= tol * peak + noise_floor:
            converged = True
            break
        # |delta| grows monotonically in exact arithmetic; once it stops
        # growing the remaining spread is rounding noise in the interpolant
        if abs(delta) > best_delta * (1.0 + 1e-12):
            best_delta, stalled = abs(delta), 0
        else:
            stalled += 1
        if stalled >= 3 and peak - abs(delta) <= 1e-4 * peak:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"Remez exchange did not converge in {max_iterations} iterations (N={N})"
        )

    delta, interp = solve(ext_w, ext_b)
    wk = TWO_PI * np.arange(N) / N
    A = _bary_eval(np.cos(wk), *interp) * q_of(wk)
    H = A * np.exp(-1j * wk * (N - 1) / 2.0)
    h = np.fft.ifft(H).real
    h = 0.5 * (h + h[::-1])
    return Fir(h)


def lowpass_bands(spec):
    """``(bands, desired, weight)`` for a lowpass spec, weights ~ 1/deviation."""
    dp, ds = spec.passband_deviation, spec.stopband_deviation
    bands = [(0.0, spec.passband_edge), (spec.stopband_edge, np.pi)]
    return bands, [1.0, 0.0], [1.0, dp / ds]


def equiripple_design(spec, length=None, *, grid_density=16, max_iterations=64,
                      max_length=4095, rel_tol=1e-3):
    """Equiripple lowpass meeting ``spec``.

    With ``length`` given the minimax filter of that length is returned as is
    (odd -> Type I, even -> Type II); ``length=1`` gives the unit impulse.  Otherwise the search starts at
    :func:`estimate_order` and moves in steps of two (odd lengths only) to the
    shortest length whose measurement satisfies ``spec``.
    """
    bands, desired, weight = lowpass_bands(spec)

    def design(n):
        return remez(n, bands, desired, weight, grid_density=grid_density,
                     max_iterations=max_iterations)

    if length is not None:
        if int(length) == 1:
            # a single tap can only scale; keep the passband gain at unity
            return Fir([1.0])
        return design(int(length))

    def attempt(n):
        try:
            fir = design(n)
        except ConvergenceError:
            return None
        return fir if measure_spec(fir, spec).satisfies(spec, rel_tol) else None

    n = estimate_order(spec)
    best = attempt(n)
    if best is not None:
        while n - 2 >= 1:
            trial = attempt(n - 2)
            if trial is None:
                break
            best, n = trial, n - 2
        return best
    while best is None:
        n += 2
        if n > max_length:
            raise DesignError(f"no length <= {max_length} meets the target; unachievable")
        best = attempt(n)
    return best


def weighted_error(filt, bands, desired, weight, grid):
    """Weighted amplitude error ``W(w) * (D(w) - A(w))`` of a symmetric filter.

    Returns ``(w, error)`` restricted to points of ``grid`` inside the bands.
    """
    h = as_coeffs(filt)
    N = h.size
    w = np.asarray(grid, float)
    H = freq_response(h, w)
    A = np.real(H * np.exp(1j * w * (N - 1) / 2.0))
    err = np.full(w.shape, np.nan)
    for (lo, hi), d, wt in zip(bands, desired, weight):
        m = (w >= lo) & (w <= hi)
        err[m] = wt * (d - A[m])
    keep = ~np.isnan(err)
    return w[keep], err[keep]


def count_alternations(err, rel=1e-3):
    """Number of alternating-sign extrema whose magnitude is within ``rel``
    of the peak weighted error."""
    peak = np.max(np.abs(err))
    idx = np.nonzero(np.abs(err) >= peak * (1 - rel))[0]
    count, last = 0, 0.0
    for i in idx:
        s = np.sign(err[i])
        if s != last:
            count += 1
            last = s
    return count
