"""Uniform and non-uniform channel banks built from one modulated FRM design.

Channel ``k`` of the ``M``-channel bank reuses the two interpolated modal
branches of the design and modulates both masking filters to ``2*pi*k/M``.
Even channels mask the even branch with ``H_Ma`` and the odd branch with
``H_Mc``; odd channels swap the two (alternate masking).  Adjacent channels
can then be summed into wider channels, each with its own sign pattern.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import AllocationError, SpecError
from .firdesign import TWO_PI, Fir, uniform_response
from .frmcore import Case, compose_channel

_DIVISOR = {Case.I: 5, Case.II: 3}


def channel_count_formula(m, L, case=Case.I):
    """Bank size ``(m + 1) L / 5`` (Case I) or ``(m + 1) L / 3`` (Case II)."""
    case = Case.parse(case)
    num = (int(m) + 1) * int(L)
    div = _DIVISOR[case]
    if num % div:
        raise SpecError(f"(m+1)*L = {num} is not divisible by {div} for case {case.value}")
    return num // div


def channel_count_or_none(m, L, case=Case.I):
    try:
        return channel_count_formula(m, L, case)
    except SpecError:
        return None


def max_channels(f_s):
    """``ceil(1/f_s)`` for a stopband edge ``f_s`` in units of pi."""
    if not (0 < f_s <= 1):
        raise SpecError("f_s must lie in (0, 1]")
    return int(math.ceil(1.0 / f_s - 1e-12))


@dataclass(frozen=True)
class ParityEntry:
    """Masking filter applied to each modal branch of one channel."""

    channel: int
    even_masker: str
    odd_masker: str


@dataclass(frozen=True, eq=False)
class UniformBank:
    """``M`` complex channels sharing one design."""

    design: object
    channel_count: int
    channels: tuple
    parity_map: tuple

    def __len__(self):
        return self.channel_count

    def __getitem__(self, k):
        return self.channels[k]

    @property
    def spacing(self):
        return TWO_PI / self.channel_count

    def center(self, k):
        return self.spacing * k

    @property
    def cmax(self):
        """Channel bound ``ceil(1/f_s)`` for the nominal overall stopband edge."""
        _, ws = self.design.config.nominal_overall_edges()
        return max_channels(min(ws / np.pi, 1.0))

    @property
    def exceeds_cmax(self):
        return self.channel_count > self.cmax


def build_uniform_bank(design):
    """Alternate-masking bank of ``channel_count_formula(m, L, case)`` channels."""
    cfg = design.config
    M = channel_count_formula(cfg.m, cfg.L, cfg.case)
    chans, parity = [], []
    for k in range(M):
        swap = k % 2 == 1
        if k == 0:
            h = design.overall
        else:
            h = compose_channel(design.even_branch, design.odd_branch,
                                design.ma_aligned, design.mc_aligned,
                                center=TWO_PI * k / M, swap=swap)
        chans.append(h)
        parity.append(ParityEntry(k, "Mc" if swap else "Ma", "Ma" if swap else "Mc"))
    return UniformBank(design, M, tuple(chans), tuple(parity))


def default_grid(bank, minimum=1 << 14):
    n = max(8 * max(c.length for c in bank.channels), minimum)
    return 1 << int(math.ceil(math.log2(n)))


def channel_responses(channels, grid_size):
    """Complex responses on ``2*pi*k/grid_size``, one row per channel."""
    return np.array([uniform_response(c, grid_size) for c in channels])


@dataclass(frozen=True)
class DistortionReport:
    peak_deviation_db: float
    grid_size: int


def amplitude_distortion(bank, grid_size=None):
    """Peak deviation of ``10 log10 sum_k |H_k|^2`` from its grid median."""
    channels = bank.channels if hasattr(bank, "channels") else list(bank)
    longest = max(c.length for c in channels)
    if grid_size is None:
        grid_size = 1 << int(math.ceil(math.log2(max(8 * longest, 1 << 14))))
    elif grid_size < 8 * longest:
        raise SpecError("grid_size must be at least 8 times the longest channel")
    T = np.zeros(grid_size)
    for c in channels:
        T += np.abs(uniform_response(c, grid_size)) ** 2
    db = 10.0 * np.log10(np.maximum(T, 1e-300))
    dev = np.abs(db - np.median(db))
    return DistortionReport(float(dev.max()), int(grid_size))


# ---------------------------------------------------------------------------
# non-uniform merging


@dataclass(frozen=True)
class Allocation:
    """Adjacent-channel grouping of a uniform bank.

    ``counts[i]`` uniform channels starting at ``start_channels[i]`` form
    merged channel ``i``; ``signs[k]`` multiplies source channel ``k``.
    """

    counts: tuple
    start_channels: tuple
    signs: tuple
    group_ripple_db: tuple = ()

    @classmethod
    def contiguous(cls, counts, M):
        counts = tuple(int(a) for a in counts)
        if not counts:
            raise AllocationError("allocation needs at least one count")
        if any(a < 1 for a in counts):
            raise AllocationError("allocation counts must be positive")
        if sum(counts) > M:
            raise AllocationError(f"allocation uses {sum(counts)} channels but the bank has {M}")
        starts = tuple(int(s) for s in np.cumsum((0,) + counts[:-1]))
        return cls(counts, starts, (1,) * sum(counts))

    def members(self, i):
        return range(self.start_channels[i], self.start_channels[i] + self.counts[i])


def band_mask(grid_size, lo, hi):
    """Grid points of ``2*pi*k/grid_size`` inside the arc ``[lo, hi]``."""
    w = TWO_PI * np.arange(grid_size) / grid_size
    d = np.mod(w - lo, TWO_PI)
    return d <= (hi - lo) + 1e-12


def ripple_db(mag):
    """Peak-to-peak ripple ``20 log10(max/min)`` of a magnitude array."""
    return float(20.0 * np.log10(np.max(mag) / np.min(mag)))


def merged_passband(bank, start, count):
    """Arc from the first member's lower to the last member's upper passband edge."""
    wp = bank.design.overall_spec.passband_edge
    return bank.center(start) - wp, bank.center(start + count - 1) + wp


@dataclass(frozen=True, eq=False)
class NonUniformBank:
    channels: tuple
    allocation: Allocation
    uniform: UniformBank

    def __len__(self):
        return len(self.channels)

    def __getitem__(self, i):
        return self.channels[i]

    def __iter__(self):
        return iter(self.channels)


def merge_channels(bank, counts, grid_size=None):
    """Sum runs of adjacent channels with the sign pattern minimising ripple.

    Signs are searched exhaustively per group with the first member fixed to
    +1 (a common sign does not change the magnitude).
    """
    alloc = Allocation.contiguous(counts, bank.channel_count)
    G = grid_size or default_grid(bank)
    merged, signs, ripples = [], [], []
    for i, a in enumerate(alloc.counts):
        n0 = alloc.start_channels[i]
        members = [bank.channels[k] for k in alloc.members(i)]
        lo, hi = merged_passband(bank, n0, a)
        mask = band_mask(G, lo, hi)
        R = np.array([uniform_response(c, G)[mask] for c in members])
        best = None
        for tail in itertools.product((1, -1), repeat=a - 1):
            s = np.array((1,) + tail, dtype=float)
            r = ripple_db(np.abs(s @ R))
            if best is None or r < best[0] - 1e-12:
                best = (r, s)
        r, s = best
        coeffs = sum(sk * c.coeffs for sk, c in zip(s, members))
        merged.append(Fir(coeffs))
        signs.extend(int(v) for v in s)
        ripples.append(r)
    alloc = Allocation(alloc.counts, alloc.start_channels, tuple(signs), tuple(ripples))
    return NonUniformBank(tuple(merged), alloc, bank)
