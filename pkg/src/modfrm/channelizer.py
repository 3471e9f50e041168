"""Signal harness: filter complex baseband input through a (merged) bank."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SchemaError, SpecError
from .firdesign import TWO_PI, as_coeffs


def tone(freq, n_samples, amplitude=1.0):
    """Complex exponential ``amplitude * exp(1j*freq*n)``."""
    n = np.arange(int(n_samples), dtype=float)
    return amplitude * np.exp(1j * np.mod(freq * n, TWO_PI))


def filter_signal(h, x):
    """Causal FIR filtering by direct convolution, truncated to ``len(x)``."""
    x = np.asarray(x)
    return np.convolve(x, as_coeffs(h))[: x.size]


def channelize(channels, x):
    """Outputs of every channel filter for input ``x``."""
    return [filter_signal(h, x) for h in channels]


def steady_state_gain_db(h, freq, n_samples=None):
    """Gain of ``h`` for a unit tone, measured after the start-up transient."""
    N = len(as_coeffs(h))
    n = n_samples or 2 * N
    if n <= N:
        raise SpecError("signal must be longer than the filter")
    y = filter_signal(h, tone(freq, n))[N - 1:]
    p = np.mean(np.abs(y) ** 2)
    return float(10.0 * np.log10(max(p, 1e-300)))


def merged_band(uniform, allocation, i):
    """Arc ``(lo, hi)`` spanned by merged channel ``i``, crossovers included."""
    half = np.pi / uniform.channel_count
    start = allocation.start_channels[i]
    end = start + allocation.counts[i] - 1
    return uniform.center(start) - half, uniform.center(end) + half


def channel_of(uniform, allocation, freq):
    """Index of the merged channel whose band contains ``freq``, or None."""
    for i in range(len(allocation.counts)):
        lo, hi = merged_band(uniform, allocation, i)
        if np.mod(freq - lo, TWO_PI) < hi - lo:
            return i
    return None


@dataclass(frozen=True)
class ToneReport:
    freq: float
    channel: object
    gains_db: tuple

    @property
    def co_channel_loss_db(self):
        if self.channel is None:
            return None
        return -self.gains_db[self.channel]

    @property
    def min_rejection_db(self):
        if self.channel is None:
            return None
        others = [g for j, g in enumerate(self.gains_db) if j != self.channel]
        return -max(others) if others else None

    def as_dict(self):
        return {
            "freq_rad": self.freq,
            "freq_pi": self.freq / np.pi,
            "channel": self.channel,
            "gains_db": list(self.gains_db),
            "co_channel_loss_db": self.co_channel_loss_db,
            "min_rejection_db": self.min_rejection_db,
        }


def tone_report(merged, freq, n_samples=None):
    """Per-channel steady-state gains for one tone through a merged bank."""
    n = n_samples or 2 * max(c.length for c in merged.channels)
    gains = tuple(steady_state_gain_db(h, freq, n) for h in merged.channels)
    return ToneReport(float(freq), channel_of(merged.uniform, merged.allocation, freq), gains)


def read_iq(path):
    """Interleaved little-endian float32 I/Q samples -> complex128 array."""
    raw = np.fromfile(path, dtype="<f4")
    if raw.size % 2:
        raise SchemaError(f"{path}: odd number of float32 values; expected I/Q pairs")
    return (raw[0::2] + 1j * raw[1::2]).astype(np.complex128)


def iq_bytes(x):
    x = np.asarray(x, dtype=complex)
    out = np.empty(2 * x.size, dtype="<f4")
    out[0::2] = x.real
    out[1::2] = x.imag
    return out.tobytes()
