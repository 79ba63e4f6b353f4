"""Entangled coherent-state superpositions from quantum-optical high-harmonic generation."""
from .conditioning import (
    ParamsReport,
    amplified_harmonic_cat,
    fundamental_cat,
    harmonic_bundle,
    harmonic_cat,
    pair_state,
    two_color_ecs,
)
from .entanglement import (
    EntropyCurve,
    entropy_sweep,
    s_lin_fundamental,
    s_lin_generic,
    s_lin_nq,
    s_lin_two_color,
)
from .errors import (
    ConfigError,
    DegenerateDepletion,
    HHGStateError,
    InconsistencyError,
    ModeError,
    TruncationTooSmall,
)
from .hhg import (
    HHGConfig,
    PlateauSpec,
    Scheme,
    build_post_hhg_state,
    build_two_color_state,
    omega_partition,
    omega_total,
    plateau_amplitude,
)
from .states import (
    CoherentProduct,
    Rank2Density,
    TwoBranchState,
    coherent_overlap,
    displace_mode,
    norm_squared,
    product_overlap,
    project_modes,
    purity,
    reduce_to_modes,
)
from .wigner import GridSpec, WignerGrid, grid_integral, negativity_volume, wigner_grid, wigner_point

__version__ = "0.1.0"
