"""Reconfigurable narrow-transition FIR filter banks built by modulated
frequency-response masking.

The package is layered bottom-up:

``firdesign``  equiripple linear-phase design, order estimate, measurement
``transforms`` interpolation, modulation, complement, cascade, sums
``frmcore``    modal filter, masking edges, FRM and modulated-FRM composition
``ifir``       two-stage interpolated masking filters and factor search
``bank``       uniform alternate-masking bank, distortion, channel merging
``cost``       multiplier counts
``cli``        command-line front end
"""

__version__ = "0.1.0"

from .bank import (
    Allocation,
    UniformBank,
    amplitude_distortion,
    build_uniform_bank,
    channel_count_formula,
    max_channels,
    merge_channels,
)
from .cost import CostReport, multiplier_count, total_cost
from .errors import (
    AlignmentError,
    AllocationError,
    ConvergenceError,
    DesignError,
    ModFrmError,
    SchemaError,
    SpecError,
)
from .firdesign import (
    BandMeasurement,
    FilterSpec,
    Fir,
    Symmetry,
    equiripple_design,
    estimate_order,
    freq_response,
    measure_spec,
    remez,
)
from .frmcore import (
    Case,
    MaskingEdges,
    ModalConfig,
    ModFrmDesign,
    check_power_complementarity,
    compose_frm,
    compose_modfrm,
    design_modal,
    design_modfrm,
    masking_edges,
)
from .ifir import IfirPair, design_ifir, optimize_lifir, optimize_shared_lifir
from .transforms import cascade, complement, interpolate, modulate, parallel_sum

__all__ = [name for name in dir() if not name.startswith("_")]
