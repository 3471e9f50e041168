"""Interpolated FIR (IFIR) masking filters.

A narrow lowpass with edges ``(wp, ws)`` is realised as a prototype designed
at ``(l*wp, l*ws)``, stretched by ``l``, and an image suppressor that passes
``[0, wp]`` and removes every image from ``2*pi/l - ws`` up to ``pi``.  The
passband deviation is split multiplicatively between the two stages (each
stage gets half the ripple in dB, almost exactly half the linear deviation),
so the cascade stays within the original spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import transforms as tf
from .cost import part_cost
from .errors import ConvergenceError, DesignError, SpecError
from .firdesign import TWO_PI, FilterSpec, Fir, equiripple_design, measure_spec

UNIT = Fir(np.ones(1))


@dataclass(frozen=True, eq=False)
class IfirPair:
    """Prototype, image suppressor and their cascade ``effective``."""

    prototype: Fir
    image_suppressor: Fir
    l_ifir: int
    spec: FilterSpec = None
    effective: Fir = field(init=False, repr=False)

    def __post_init__(self):
        eff = tf.cascade(tf.interpolate(self.prototype, self.l_ifir), self.image_suppressor)
        object.__setattr__(self, "effective", eff)

    @property
    def cost(self):
        return part_cost(self.prototype) + part_cost(self.image_suppressor)

    @property
    def length(self):
        return self.effective.length


def is_feasible(spec, l_ifir):
    """Whether the stretched prototype and the first image gap are valid."""
    l = int(l_ifir)
    if l == 1:
        return True
    return l * spec.stopband_edge < np.pi and TWO_PI / l - spec.stopband_edge > spec.passband_edge


def stage_specs(spec, l_ifir):
    """``(prototype spec, image-suppressor spec)`` for factor ``l_ifir >= 2``."""
    l = int(l_ifir)
    stage_dev = math.sqrt(1.0 + spec.passband_deviation) - 1.0
    ripple = spec.passband_ripple_db / 2.0
    atten = spec.stopband_atten_db + 20.0 * math.log10(1.0 + stage_dev)
    proto = FilterSpec(l * spec.passband_edge, l * spec.stopband_edge, ripple, atten)
    supp = FilterSpec(spec.passband_edge, TWO_PI / l - spec.stopband_edge, ripple, atten)
    return proto, supp


def design_ifir(spec, l_ifir, *, grid_density=16):
    """Two-stage IFIR realisation of the lowpass ``spec``.

    Raises
    ------
    SpecError
        ``l_ifir`` is infeasible (stretched band leaves ``[0, pi]`` or the
        first image overlaps the passband).
    DesignError
        The cascade misses ``spec`` after the budget split.
    """
    l = int(l_ifir)
    if l < 1:
        raise SpecError("l_ifir must be >= 1")
    if l == 1:
        return IfirPair(equiripple_design(spec, grid_density=grid_density), UNIT, 1, spec)
    if not is_feasible(spec, l):
        raise SpecError(f"l_ifir={l} infeasible for edges ({spec.passband_edge:.6g}, {spec.stopband_edge:.6g})")
    sp, ss = stage_specs(spec, l)
    pair = IfirPair(
        equiripple_design(sp, grid_density=grid_density),
        equiripple_design(ss, grid_density=grid_density),
        l,
        spec,
    )
    if not measure_spec(pair.effective, spec).satisfies(spec):
        raise DesignError(f"IFIR cascade with l_ifir={l} misses its target after the ripple split")
    return pair


def optimize_lifir(spec, search_max=16, *, grid_density=16):
    """Cheapest :class:`IfirPair` over ``l_ifir = 1..search_max``.

    Ties go to the smaller factor.  Factors that are infeasible or whose
    cascade misses the target are skipped.
    """
    if int(search_max) < 1:
        raise SpecError("search_max must be >= 1")
    best = None
    for l in range(1, int(search_max) + 1):
        if not is_feasible(spec, l):
            continue
        try:
            pair = design_ifir(spec, l, grid_density=grid_density)
        except (SpecError, DesignError, ConvergenceError):
            continue
        if best is None or pair.cost < best.cost:
            best = pair
    if best is None:
        best = design_ifir(spec, 1, grid_density=grid_density)
    return best


def optimize_shared_lifir(specs, search_max=16, *, grid_density=16):
    """One common factor for several masking specs, minimising their summed cost.

    Returns a tuple of :class:`IfirPair` in the order of ``specs``.  Ties go
    to the smaller factor; if no common factor ``>= 2`` works, each spec gets
    its direct (``l_ifir = 1``) design.
    """
    specs = list(specs)
    if int(search_max) < 1:
        raise SpecError("search_max must be >= 1")
    best, best_cost = None, None
    for l in range(1, int(search_max) + 1):
        if not all(is_feasible(s, l) for s in specs):
            continue
        try:
            pairs = tuple(design_ifir(s, l, grid_density=grid_density) for s in specs)
        except (SpecError, DesignError, ConvergenceError):
            continue
        cost = sum(p.cost for p in pairs)
        if best is None or cost < best_cost:
            best, best_cost = pairs, cost
    if best is None:
        best = tuple(design_ifir(s, 1, grid_density=grid_density) for s in specs)
    return best
