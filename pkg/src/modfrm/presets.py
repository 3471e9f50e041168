"""Channelizer presets: a modal geometry plus a channel allocation.

Allocations are normalized-frequency groupings of a uniform bank; the
standard names are labels only, no physical bandwidth is derived from them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bank import channel_count_formula
from .errors import AllocationError, SpecError
from .frmcore import Case


@dataclass(frozen=True)
class StandardPreset:
    name: str
    theta: float
    phi: float
    m: int
    L: int
    allocation: tuple
    standards: tuple = ()
    case: Case = Case.I
    ripple_db: float = 0.0065
    atten_db: float = 60.0

    def __post_init__(self):
        if sum(self.allocation) > self.uniform_channels:
            raise AllocationError(f"preset {self.name}: allocation exceeds {self.uniform_channels} channels")

    @property
    def uniform_channels(self):
        return channel_count_formula(self.m, self.L, self.case)


_PI = np.pi

PRESETS = {
    p.name: p
    for p in (
        StandardPreset("CDMA2000-x4", 0.2 * _PI, 0.3 * _PI, 3, 10, (2, 1, 3, 2),
                       ("CDMA2000",)),
        StandardPreset("BT-ANT-Zigbee", 0.4 * _PI, 0.6 * _PI, 1, 25, (2, 1, 1, 5, 1),
                       ("Bluetooth", "ANT", "Zigbee")),
        StandardPreset("HSDPA-CDMA2000-WCDMA", 0.2 * _PI, 0.3 * _PI, 3, 15, (4, 1, 4, 3),
                       ("HSDPA", "CDMA2000", "WCDMA")),
        StandardPreset("WCDMA-WiMAX-HSDPA", 0.2 * _PI, 0.3 * _PI, 3, 20, (4, 1, 1, 8, 2),
                       ("WCDMA", "CDMA2000", "Fixed WiMAX", "HSDPA")),
        StandardPreset("nine-standards", 0.2 * _PI, 0.3 * _PI, 3, 40,
                       (5, 5, 1, 1, 5, 5, 3, 6, 1),
                       ("WCDMA", "CDMA2000", "Zigbee", "ANT", "Bluetooth",
                        "Digital Cable TV", "LTE", "HSDPA")),
    )
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise SpecError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
