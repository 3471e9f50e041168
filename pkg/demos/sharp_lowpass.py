"""Sharp lowpass from a short modal filter.

A 0.2pi/0.3pi modal lowpass is interpolated by L = 10.  Its four modulated
copies cover the whole circle, and two IFIR masking filters pick one
passband out of the replicas.  The result is a 0.01pi transition band built
from roughly a hundred multipliers.

Run with ``python3 demos/sharp_lowpass.py``.
"""

import math

import numpy as np

from modfrm import (
    FilterSpec,
    ModalConfig,
    design_modfrm,
    equiripple_design,
    estimate_order,
    masking_edges,
    measure_spec,
    multiplier_count,
    total_cost,
)

PI = math.pi
RIPPLE_DB, ATTEN_DB = 0.0065, 60.0

spec = FilterSpec(0.2 * PI, 0.3 * PI, RIPPLE_DB, ATTEN_DB)
config = ModalConfig(0.2 * PI, 0.3 * PI, m=3, L=10)

edges = masking_edges(config)
print("masking edges / pi  (Ma pass, Ma stop, Mc pass, Mc stop)")
print("   ", np.round(np.array(edges.as_tuple()) / PI, 5))

design = design_modfrm(spec, config)
print(f"\nmodal length {design.modal.length}, 3-dB shift {design.edge_offset / PI:.5f} pi")
print(f"IFIR factors: Ma {design.hma.l_ifir}, Mc {design.hmc.l_ifir}")

meas = measure_spec(design.overall, design.overall_spec)
print(f"\noverall filter: {design.overall.length} taps, group delay {design.group_delay}")
print(f"  passband edge {design.overall_spec.passband_edge / PI:.5f} pi")
print(f"  transition    {meas.transition_width / PI:.5f} pi "
      f"(measured {meas.measured_transition_width / PI:.5f} pi)")
print(f"  ripple        {meas.achieved_passband_ripple_db:.4f} dB")
print(f"  attenuation   {meas.achieved_stopband_atten_db:.2f} dB")

cost = total_cost(design)
print(f"\nmultipliers {cost}")

# the same specification as one direct equiripple filter
direct = FilterSpec(design.overall_spec.passband_edge, design.overall_spec.stopband_edge,
                    RIPPLE_DB, ATTEN_DB)
n = estimate_order(direct)
print(f"a direct design needs about {n} taps ({(n + 1) // 2} multipliers)")
if n < 1500:
    print(f"  (Remez: {multiplier_count(equiripple_design(direct))} multipliers)")
