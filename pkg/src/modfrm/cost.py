"""Multiplier-count cost model.

A linear-phase filter shares one multiplier between each pair of equal
(or sign-opposite) coefficients ``h[n]``, ``h[N-1-n]``; coefficients that are
exactly zero, such as those written by interpolation, are free.  Interpolated
and modulated copies of a part reuse its multipliers, so a design costs its
modal filter plus the prototype and image suppressor of each masker.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .firdesign import as_coeffs


def multiplier_count(filt):
    """Distinct multipliers of a direct-form FIR.

    Examples
    --------
    >>> multiplier_count([1.0, 2.0, 1.0])
    2
    >>> multiplier_count([1.0, 0.0, 0.0, 1.0])
    1
    """
    h = as_coeffs(filt)
    N = h.size
    half = N // 2
    a, b = h[:half], h[::-1][:half]
    nz_a, nz_b = a != 0, b != 0
    paired = (np.abs(a) == np.abs(b)) & nz_a
    count = int(np.count_nonzero(paired))
    count += int(np.count_nonzero(nz_a & ~paired)) + int(np.count_nonzero(nz_b & ~paired))
    if N % 2 and h[half] != 0:
        count += 1
    return count


def is_wire(filt):
    """True for a pure delay with unit gain, which needs no multiplier."""
    h = as_coeffs(filt)
    nz = np.flatnonzero(h)
    return nz.size == 1 and h[nz[0]] == 1


def part_cost(filt):
    return 0 if is_wire(filt) else multiplier_count(filt)


@dataclass(frozen=True)
class CostReport:
    """Per-part multiplier counts of a modulated FRM design."""

    m_modal: int
    m_ma_pr: int
    m_ma_is: int
    m_mc_pr: int
    m_mc_is: int

    @property
    def total(self):
        return self.m_modal + self.m_ma_pr + self.m_ma_is + self.m_mc_pr + self.m_mc_is

    def parts(self):
        return (self.m_modal, self.m_ma_pr, self.m_ma_is, self.m_mc_pr, self.m_mc_is)

    def __str__(self):
        return "(" + "+".join(str(p) for p in self.parts()) + f")={self.total}"

    def as_dict(self):
        keys = ("m_modal", "m_ma_pr", "m_ma_is", "m_mc_pr", "m_mc_is")
        d = dict(zip(keys, self.parts()))
        d["total"] = self.total
        return d


def _masker_cost(masker):
    proto = getattr(masker, "prototype", None)
    if proto is None:
        return part_cost(masker), 0
    return part_cost(proto), part_cost(masker.image_suppressor)


def total_cost(design):
    """:class:`CostReport` for a design's modal filter and masking pair."""
    ma = _masker_cost(design.hma)
    mc = _masker_cost(design.hmc)
    return CostReport(part_cost(design.modal), ma[0], ma[1], mc[0], mc[1])
