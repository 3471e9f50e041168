"""Coefficient-domain operators used to assemble masking structures.

Every operator takes and returns :class:`~modfrm.firdesign.Fir` values and is
exact in the coefficient domain: interpolation writes exact zeros, the
complement subtracts from an exact unit impulse and cascading is a plain
linear convolution.
"""

from __future__ import annotations

import operator

import numpy as np

from .errors import AlignmentError, SpecError
from .firdesign import TWO_PI, Fir, as_coeffs


def _factor(L):
    try:
        L = operator.index(L)
    except TypeError:
        raise SpecError(f"interpolation factor must be an integer, got {L!r}") from None
    if L < 1:
        raise SpecError(f"interpolation factor must be >= 1, got {L}")
    return L


def _fir(filt):
    return filt if isinstance(filt, Fir) else Fir(filt)


def interpolate(filt, L):
    """Replace every unit delay by ``L`` delays, i.e. ``H(z) -> H(z**L)``.

    Examples
    --------
    >>> interpolate(Fir([1.0, 1.0]), 3).coeffs
    array([1., 0., 0., 1.])
    """
    L = _factor(L)
    h = as_coeffs(filt)
    if L == 1:
        return _fir(filt)
    out = np.zeros(L * (h.size - 1) + 1, dtype=h.dtype)
    out[::L] = h
    return Fir(out)


def modulate(filt, center):
    """Shift the response by ``center`` rad: ``h[n] * exp(j*center*n)``.

    The phase ``center*n`` is reduced modulo ``2*pi`` before exponentiation
    so long filters keep full precision.
    """
    h = as_coeffs(filt)
    if center == 0:
        return _fir(filt)
    n = np.arange(h.size, dtype=float)
    ph = np.mod(float(center) * n, TWO_PI)
    return Fir(h * np.exp(1j * ph), symmetry="none")


def complement(filt):
    """Delay complement ``z**-((N-1)/2) - H(z)`` of an odd-length symmetric filter."""
    f = _fir(filt)
    if not f.is_real or not f.is_symmetric or f.length % 2 == 0:
        raise SpecError("complement needs a real, even-symmetric, odd-length filter")
    # 1 - (1 - x) is not always x in floating point; remembering the source
    # keeps the complement an exact involution
    src = getattr(f, "_complement_source", None)
    if src is not None:
        return src
    c = -f.coeffs
    c[(f.length - 1) // 2] += 1.0
    out = Fir(c)
    object.__setattr__(out, "_complement_source", f)
    return out


def cascade(a, b):
    """Series connection: linear convolution of the two coefficient sequences."""
    return Fir(np.convolve(as_coeffs(a), as_coeffs(b)))


def parallel_sum(filters):
    """Coefficient-wise sum of filters sharing the same time origin."""
    filters = list(filters)
    if not filters:
        raise SpecError("parallel_sum needs at least one filter")
    if len(filters) == 1:
        return _fir(filters[0])
    arrs = [as_coeffs(f) for f in filters]
    n = max(a.size for a in arrs)
    dtype = np.result_type(*arrs)
    out = np.zeros(n, dtype=dtype)
    for a in arrs:
        out[: a.size] += a
    return Fir(out)


def delay(filt, d):
    """Prepend ``d`` zeros (pure delay by ``d`` samples)."""
    d = int(d)
    if d < 0:
        raise AlignmentError("negative delay")
    h = as_coeffs(filt)
    if d == 0:
        return _fir(filt)
    return Fir(np.concatenate([np.zeros(d, dtype=h.dtype), h]))


def center_delay(filt):
    """Delay ``(N-1)/2`` about which a linear-phase filter is centred."""
    return (len(as_coeffs(filt)) - 1) / 2.0


def pad_symmetric(filt, d):
    """Zero-pad both ends so the filter is centred on integer delay ``d``.

    Symmetry (and hence linear phase and multiplier count) is preserved.
    """
    h = as_coeffs(filt)
    c = center_delay(h)
    extra = d - c
    if extra < 0 or extra != int(extra):
        raise AlignmentError(
            f"cannot centre a length-{h.size} filter on delay {d}: needs integer padding"
        )
    extra = int(extra)
    if extra == 0:
        return _fir(filt)
    z = np.zeros(extra, dtype=h.dtype)
    return Fir(np.concatenate([z, h, z]))


def align_delays(a, b):
    """Delay the shorter-delay filter so both share the larger centre delay.

    Both inputs are treated as centred (linear-phase) filters; the centre
    delays must differ by an integer.
    """
    da, db = center_delay(a), center_delay(b)
    diff = da - db
    if diff != int(diff):
        raise AlignmentError("filter lengths have different parity; delays cannot be matched")
    diff = int(diff)
    if diff > 0:
        return _fir(a), delay(b, diff)
    return delay(a, -diff), _fir(b)


# ---------------------------------------------------------------------------
# interpolation geometry


def passband_count(L):
    """Number of passband replicas over ``[0, 2*pi]`` counting the half bands
    at both ends, ``L + 1``."""
    return _factor(L) + 1


def replica_centers(L):
    """Replica centres ``2*pi*k/L`` for ``k = 0..L`` (both ends included)."""
    L = _factor(L)
    return TWO_PI * np.arange(L + 1) / L


def replica_widths(theta, L):
    """Widths of the replica passbands: ``theta/L`` for the half bands at
    ``0`` and ``2*pi``, ``2*theta/L`` for the interior ones."""
    L = _factor(L)
    w = np.full(L + 1, 2.0 * theta / L)
    w[0] = w[-1] = theta / L
    return w
