"""Inductor coupler design and verification for capacitor-less DC links."""

from .harmonics import attenuation_report, ripple_current_spectrum, six_pulse_voltage_spectrum, thd
from .model import (
    Catalog,
    CatalogError,
    CouplerDesign,
    CouplingNetworkModel,
    FreewheelDiodePart,
    HarmonicSpectrum,
    InductorPart,
    SourceSpec,
    TransientResult,
    ValidationError,
    ZenerPart,
    load_catalog,
    load_default_catalog,
)
from .sizing import (
    NoFeasiblePart,
    clamp_voltage_budget,
    compute_z_base,
    design_coupler,
    select_clamp_chain,
    size_ac_reactor,
    size_dc_inductor,
    total_coil_current,
    validate_inductor,
)
from .transient import (
    ClampChain,
    ResolutionError,
    connect_inrush,
    disconnect_analytic,
    simulate_disconnect,
    zener_stress_check,
)

__version__ = "0.1.0"
