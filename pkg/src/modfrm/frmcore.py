"""Frequency-response-masking composition.

Two structures are built here:

* the classic two-branch FRM filter, an interpolated band-edge shaping
  filter and its delay complement, each followed by a masking filter;
* the modulated variant, where the shaping filter is replaced by ``m + 1``
  DFT-modulated copies of a power-complementary modal lowpass.  Copies with
  even index are interpolated, summed and masked by ``H_Ma``; odd copies are
  masked by ``H_Mc``.

Frequencies are in rad/sample.  The modal filter edges ``theta`` and ``phi``
obey ``(m + 1) * (theta + phi) = 2*pi`` so that the ``m + 1`` modulated
copies tile the unit circle with crossovers at ``(theta + phi)/2`` offsets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import transforms as tf
from .errors import AlignmentError, DesignError, SpecError
from .firdesign import (
    TWO_PI,
    FilterSpec,
    Fir,
    as_coeffs,
    equiripple_design,
    freq_response,
    lowpass_bands,
    remez,
    uniform_response,
)


class Case(str, enum.Enum):
    """Which fine channels the masking pair selects around DC.

    Case I keeps five fine channels per bank channel, Case II keeps three.
    """

    I = "I"  # noqa: E741
    II = "II"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper().replace("CASE", "").strip(" _-")
        key = {"1": "I", "2": "II"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise SpecError(f"unknown case {value!r}; expected I or II") from None

    @property
    def fine_channels(self):
        """Fine channels merged into one bank channel."""
        return 5 if self is Case.I else 3


@dataclass(frozen=True)
class ModalConfig:
    """Modal lowpass geometry plus the interpolation factor and case.

    Parameters
    ----------
    theta, phi : float
        Modal passband and stopband edges, rad/sample.
    m : int
        Odd number of modulated copies beyond the prototype (``m + 1`` total).
    L : int
        Interpolation factor of the modal branch.
    case : Case
        Masking case.
    """

    theta: float
    phi: float
    m: int
    L: int
    case: Case = Case.I

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise SpecError("m must be an integer")
        if self.m < 1 or self.m % 2 == 0:
            raise SpecError(f"m must be odd and positive (m = 2p + 1), got {self.m}")
        if not isinstance(self.L, (int, np.integer)) or self.L < 1:
            raise SpecError(f"L must be a positive integer, got {self.L!r}")
        if not (0 < self.theta < self.phi):
            raise SpecError("modal edges must satisfy 0 < theta < phi")
        if abs((self.m + 1) * (self.theta + self.phi) - TWO_PI) > 1e-9:
            raise SpecError(
                f"(m + 1)(theta + phi) must equal 2*pi; got {(self.m + 1) * (self.theta + self.phi):.12g}"
            )
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "case", Case.parse(self.case))

    @classmethod
    def from_edges(cls, theta, phi, L, case=Case.I):
        """Config with ``m`` inferred from the tiling condition."""
        m = TWO_PI / (theta + phi) - 1
        mi = int(round(m))
        if abs(m - mi) > 1e-6:
            raise SpecError("theta + phi must divide 2*pi into an even number of parts")
        return cls(theta, phi, mi, L, case)

    @property
    def copies(self):
        return self.m + 1

    @property
    def spacing(self):
        """Modulation step ``theta + phi`` between modal copies."""
        return self.theta + self.phi

    @property
    def crossover(self):
        return 0.5 * (self.theta + self.phi)

    @property
    def transition_width(self):
        return self.phi - self.theta

    def modulation_center(self, q):
        """Centre of modal copy ``q``; exactly ``2*pi*q/(m+1)``."""
        return TWO_PI * q / self.copies

    def nominal_overall_edges(self, offset=0.0):
        """Lowpass edges of the composed filter for a modal edge offset."""
        J = 2 if self.case is Case.I else 1
        base = J * self.spacing
        return (base + self.theta + offset) / self.L, (base + self.phi + offset) / self.L


@dataclass(frozen=True)
class MaskingEdges:
    ma_pass: float
    ma_stop: float
    mc_pass: float
    mc_stop: float

    def __post_init__(self):
        if not (self.ma_pass < self.ma_stop and self.mc_pass < self.mc_stop):
            raise SpecError("masking edges must have pass < stop")

    def as_tuple(self):
        return (self.ma_pass, self.ma_stop, self.mc_pass, self.mc_stop)

    def specs(self, ripple_db, atten_db):
        """``(FilterSpec for H_Ma, FilterSpec for H_Mc)``."""
        return (
            FilterSpec(self.ma_pass, self.ma_stop, ripple_db, atten_db),
            FilterSpec(self.mc_pass, self.mc_stop, ripple_db, atten_db),
        )


def masking_edges(config):
    """Masking-filter edges for the configured case.

    Case I::

        Ma: ((3t + 2p)/L, (4t + 3p)/L)    Mc: ((t + 2p)/L, (2t + 3p)/L)

    Case II::

        Ma: (p/L, (t + 2p)/L)             Mc: ((2t + p)/L, (3t + 2p)/L)
    """
    t, p, L = config.theta, config.phi, config.L
    if config.case is Case.I:
        e = ((3 * t + 2 * p) / L, (4 * t + 3 * p) / L, (t + 2 * p) / L, (2 * t + 3 * p) / L)
    else:
        e = (p / L, (t + 2 * p) / L, (2 * t + p) / L, (3 * t + 2 * p) / L)
    return MaskingEdges(*e)


# ---------------------------------------------------------------------------
# modal filter


@dataclass(frozen=True, eq=False)
class ModalFilter(Fir):
    """Modal lowpass with the common edge offset applied by the 3-dB search."""

    edge_offset: float = 0.0


def admissible_modal_length(n, m):
    """Smallest length ``N >= n`` whose modulated copies add in quadrature.

    Fine channel ``j`` of the interpolated bank carries a phase factor
    ``exp(1j * j * pi * (N - 1)/(m + 1))``.  Neighbouring copies are then in
    quadrature, and their power-complementary magnitudes add to a flat
    response, exactly when ``2(N - 1)/(m + 1)`` is an odd integer.
    """
    half = (m + 1) // 2
    k = max(0, math.ceil((n - 1) / half))
    if k % 2 == 0:
        k += 1
    return 1 + half * k


def default_modal_margin(m):
    """Extra modal attenuation (dB) absorbing the stopband ripple that the
    ``(m + 1)/2`` copies of each branch add coherently."""
    return 20.0 * math.log10((m + 1) / 2 + 1)


def three_db_offset(design_at, crossover, width, *, xtol=1e-12, tol=1e-4):
    """Common edge offset putting ``|H(crossover)|`` at ``1/sqrt(2)``.

    Parameters
    ----------
    design_at : callable
        ``offset -> Fir``; designs the lowpass with both edges moved by offset.
    crossover : float
        Frequency that must sit at -3 dB.
    width : float
        Transition width; the offset is searched in ``(-width/2, width/2)``.

    Returns
    -------
    offset : float
    filt : Fir
    """
    target = 1.0 / math.sqrt(2.0)
    cache = {}

    def g(d):
        if d not in cache:
            cache[d] = design_at(d)
        return abs(freq_response(cache[d], [crossover])[0]) - target

    if abs(g(0.0)) <= 1e-12:
        return 0.0, cache[0.0]
    lim = 0.499 * width
    lo, hi = -lim, lim
    glo, ghi = g(lo), g(hi)
    if np.sign(glo) == np.sign(ghi):
        raise DesignError("3-dB adjustment failed: crossover level cannot be bracketed")
    d = brentq(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    filt = cache[d] if d in cache else design_at(d)
    if abs(abs(freq_response(filt, [crossover])[0]) - target) > tol:
        raise DesignError("3-dB adjustment did not reach the crossover level")
    return d, filt


def design_modal(spec, config, *, atten_margin_db=None, length=None, grid_density=16):
    """Equiripple modal lowpass with its crossover at -3 dB.

    Parameters
    ----------
    spec : FilterSpec
        Edges must equal ``(config.theta, config.phi)``.
    config : ModalConfig
    atten_margin_db : float, optional
        Attenuation added to ``spec`` for the modal design, see
        :func:`default_modal_margin`.  Pass 0 for the plain spec.
    length : int, optional
        Force a length; it is rounded up to the next admissible one.

    Returns
    -------
    ModalFilter
        Both edges moved by ``edge_offset`` (width unchanged) so that the
        magnitude at ``(theta + phi)/2`` is ``1/sqrt(2)``.
    """
    if not (math.isclose(spec.passband_edge, config.theta, rel_tol=0, abs_tol=1e-12)
            and math.isclose(spec.stopband_edge, config.phi, rel_tol=0, abs_tol=1e-12)):
        raise SpecError("spec edges must equal the modal config (theta, phi)")
    margin = default_modal_margin(config.m) if atten_margin_db is None else float(atten_margin_db)
    target = FilterSpec(spec.passband_edge, spec.stopband_edge,
                        spec.passband_ripple_db, spec.stopband_atten_db + margin)
    if length is None:
        length = equiripple_design(target, grid_density=grid_density).length
    N = admissible_modal_length(int(length), config.m)

    bands, desired, weight = lowpass_bands(target)

    def design_at(d):
        b = [(0.0, bands[0][1] + d), (bands[1][0] + d, min(bands[1][1], np.pi))]
        if b[1][0] >= np.pi:
            raise DesignError("shifted stopband edge leaves [0, pi]")
        return remez(N, b, desired, weight, grid_density=grid_density)

    d, filt = three_db_offset(design_at, config.crossover, config.transition_width)
    return ModalFilter(filt.coeffs, edge_offset=float(d))


def modal_offset(modal):
    return float(getattr(modal, "edge_offset", 0.0))


def check_power_complementarity(modal, m, grid_size=8192):
    """Max over the grid of ``|sum_q |H_q(w)|**2 - 1|`` for the ``m + 1``
    copies modulated by ``2*pi*q/(m+1)``."""
    h = as_coeffs(modal)
    G = int(grid_size)
    if G < 1:
        raise SpecError("grid_size must be positive")
    G += (-G) % (m + 1)
    P = np.abs(uniform_response(h, G)) ** 2
    step = G // (m + 1)
    total = sum(np.roll(P, q * step) for q in range(m + 1))
    return float(np.max(np.abs(total - 1.0)))


# ---------------------------------------------------------------------------
# composition


def _effective(masker):
    return getattr(masker, "effective", masker)


def compose_frm(ha, hma, hmc, L):
    """Classic FRM: ``Ha(z^L) Hma(z) + Hc(z^L) Hmc(z)``.

    The masking filter with the smaller centre delay is delayed so that both
    branches have the same group delay before they are added.
    """
    ha = ha if isinstance(ha, Fir) else Fir(ha)
    if not ha.is_real or not ha.is_symmetric or ha.length % 2 == 0:
        raise SpecError("band-edge filter must be real, even-symmetric and odd-length")
    ma, mc = tf.align_delays(_effective(hma), _effective(hmc))
    hc = tf.complement(ha)
    a = tf.cascade(tf.interpolate(ha, L), ma)
    c = tf.cascade(tf.interpolate(hc, L), mc)
    return tf.parallel_sum([a, c])


def _group_sum(modal, config, parity):
    """Real sum of the interpolated modal copies with index parity ``parity``."""
    h = as_coeffs(modal)
    n = np.arange(h.size, dtype=float)
    acc = np.zeros(h.size, dtype=complex)
    for q in range(parity, config.copies, 2):
        acc += h * np.exp(1j * np.mod(config.modulation_center(q) * n, TWO_PI))
    scale = max(np.max(np.abs(acc)), 1e-300)
    if np.max(np.abs(acc.imag)) > 1e-9 * scale:
        raise DesignError("modal copy group is not real; check (m + 1)(theta + phi) = 2*pi")
    return tf.interpolate(Fir(acc.real), config.L)


def compose_channel(even, odd, ma, mc, center=0.0, swap=False):
    """One bank channel: branches masked by maskers modulated to ``center``.

    With ``swap`` the even branch gets ``mc`` and the odd branch ``ma``.
    """
    a = tf.modulate(ma, center)
    c = tf.modulate(mc, center)
    if swap:
        a, c = c, a
    return tf.parallel_sum([tf.cascade(even, a), tf.cascade(odd, c)])


def common_masking_delay(hma, hmc, quantum=1):
    """Smallest delay ``>=`` both centre delays that is a multiple of ``quantum``."""
    ca, cc = tf.center_delay(_effective(hma)), tf.center_delay(_effective(hmc))
    if ca - cc != int(ca - cc) or ca != int(ca):
        raise AlignmentError("masking filters need integer centre delays of equal parity")
    d = int(max(ca, cc))
    quantum = max(int(quantum), 1)
    return -(-d // quantum) * quantum


@dataclass(frozen=True, eq=False)
class ModFrmDesign:
    """Modal filter, masking pair and the composed narrow-transition filter.

    Attributes
    ----------
    modal : Fir
    config : ModalConfig
    hma, hmc : Fir or IfirPair
    overall : Fir
        Real composed filter (channel 0 of the bank).
    masking_delay : int
        Common centre delay ``D`` of the zero-padded maskers.
    spec : FilterSpec or None
        Ripple/attenuation target the parts were designed for.
    """

    modal: Fir
    config: ModalConfig
    hma: object
    hmc: object
    overall: Fir
    masking_delay: int
    spec: FilterSpec = None
    even_branch: Fir = field(repr=False, default=None)
    odd_branch: Fir = field(repr=False, default=None)
    ma_aligned: Fir = field(repr=False, default=None)
    mc_aligned: Fir = field(repr=False, default=None)

    @property
    def edge_offset(self):
        return modal_offset(self.modal)

    @property
    def group_delay(self):
        """Common group delay ``L (N - 1)/2 + D`` of every branch."""
        return self.config.L * (self.modal.length - 1) / 2.0 + self.masking_delay

    @property
    def overall_spec(self):
        """Lowpass spec of the composed filter (edges follow the modal offset)."""
        wp, ws = self.config.nominal_overall_edges(self.edge_offset)
        if self.spec is None:
            return FilterSpec(wp, ws, 0.0065, 60.0)
        return FilterSpec(wp, ws, self.spec.passband_ripple_db, self.spec.stopband_atten_db)

    def recompose(self):
        """Recompute ``overall`` from the parts."""
        return compose_channel(self.even_branch, self.odd_branch, self.ma_aligned, self.mc_aligned)


def compose_modfrm(config, modal, hma, hmc, *, spec=None):
    """Modulated FRM filter ``[sum even copies](z^L) Hma + [sum odd copies](z^L) Hmc``.

    Both maskers are zero-padded symmetrically to a common centre delay ``D``.
    When the configuration defines a uniform bank of ``M`` channels, ``D`` is
    rounded up to a multiple of ``M/2`` so that the maskers modulated to
    ``2*pi*k/M`` stay phase-coherent across adjacent channels (their delay
    terms ``exp(-1j*2*pi*k*D/M)`` are then all +1 or -1).
    """
    from .bank import channel_count_or_none

    if modal.length < 1:
        raise SpecError("empty modal filter")
    M = channel_count_or_none(config.m, config.L, config.case)
    quantum = M // 2 if M else 1
    D = common_masking_delay(hma, hmc, quantum)
    ma = tf.pad_symmetric(_effective(hma), D)
    mc = tf.pad_symmetric(_effective(hmc), D)
    even = _group_sum(modal, config, 0)
    odd = _group_sum(modal, config, 1)
    overall = compose_channel(even, odd, ma, mc)
    return ModFrmDesign(
        modal=modal, config=config, hma=hma, hmc=hmc, overall=overall,
        masking_delay=D, spec=spec, even_branch=even, odd_branch=odd,
        ma_aligned=ma, mc_aligned=mc,
    )


def design_modfrm(spec, config, *, atten_margin_db=None, search_max=16,
                  shared_lifir=False, grid_density=16):
    """Full single-filter pipeline: modal filter, IFIR maskers, composition.

    ``spec`` carries the modal edges ``(theta, phi)`` and the ripple and
    attenuation targets shared by every subfilter.  Each masker picks its own
    IFIR factor; with ``shared_lifir`` both use one factor chosen for their
    combined cost.
    """
    from .ifir import optimize_lifir, optimize_shared_lifir

    modal = design_modal(spec, config, atten_margin_db=atten_margin_db, grid_density=grid_density)
    sa, sc = masking_edges(config).specs(spec.passband_ripple_db, spec.stopband_atten_db)
    if shared_lifir:
        hma, hmc = optimize_shared_lifir((sa, sc), search_max, grid_density=grid_density)
    else:
        hma = optimize_lifir(sa, search_max, grid_density=grid_density)
        hmc = optimize_lifir(sc, search_max, grid_density=grid_density)
    return compose_modfrm(config, modal, hma, hmc, spec=spec)
