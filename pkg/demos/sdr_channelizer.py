"""Non-uniform channelizer for several radio standards.

Adjacent uniform channels are summed into wider ones according to an
allocation such as (2, 1, 3, 2).  A sign per constituent channel is chosen
so the overlapping transition bands add constructively.  Test tones then
show which merged channel each standard lands in.

Run with ``python3 demos/sdr_channelizer.py``.
"""

import math

from modfrm import FilterSpec, ModalConfig, build_uniform_bank, design_modfrm, merge_channels
from modfrm.channelizer import merged_band, tone_report
from modfrm.presets import PRESETS

PI = math.pi

for name in ("CDMA2000-x4", "BT-ANT-Zigbee"):
    p = PRESETS[name]
    spec = FilterSpec(p.theta, p.phi, 0.0065, 60.0)
    design = design_modfrm(spec, ModalConfig(p.theta, p.phi, p.m, p.L, p.case))
    bank = build_uniform_bank(design)
    merged = merge_channels(bank, p.allocation)
    print(f"{name}: {bank.channel_count} uniform -> {len(merged)} merged {p.allocation}")
    print(f"  standards: {', '.join(p.standards)}")
    print(f"  signs: {merged.allocation.signs}")
    for i in range(len(merged)):
        lo, hi = merged_band(bank, merged.allocation, i)
        rep = tone_report(merged, 0.5 * (lo + hi))
        print(f"  channel {i}: band {lo / PI:+.3f}pi..{hi / PI:+.3f}pi, "
              f"tone loss {rep.co_channel_loss_db:+.4f} dB, "
              f"worst leakage -{rep.min_rejection_db:.1f} dB")
    print()
