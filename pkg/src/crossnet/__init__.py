"""Cross-diffusion instability analysis and simulation on networks."""

from .dynamics import (
    IntegratorConfig,
    NetworkState,
    PatternMetrics,
    SimulationResult,
    check_positivity,
    integrate,
    mode_amplitude_series,
    mode_amplitudes,
    pattern_metrics,
    perturb_homogeneous,
    reaction_terms,
    rhs_general,
    rhs_skt,
    simulate_skt,
)
from .errors import (
    ConfigError,
    CrossnetError,
    EigenSolverError,
    GenerationError,
    IntegrationError,
    NonCoexistenceError,
    StabilityError,
)
from .graphs import (
    DETERMINISTIC_FAMILIES,
    RANDOM_FAMILIES,
    Graph,
    GraphSpec,
    build_graph,
    build_laplacian,
    degrees,
    ensemble_specs,
    gen_lattice,
    gen_path,
    gen_random,
    gen_ring,
    is_connected,
    read_edge_list,
    write_edge_list,
)
from .experiments import (
    EnsembleRow,
    LatticeResult,
    RingSweepRow,
    SeedRunResult,
    SweepSpec,
    ensemble_report,
    lattice_comparison,
    ring_sweep,
    simulate_and_report,
)
from .pde_bridge import PdeParams, discretize_skt_1d, stencil_rhs
from .rng import derive_seed, rng_from
from .spectra import (
    SpectralStats,
    Spectrum,
    algebraic_connectivity,
    check_connectivity_bound,
    eig_symmetric,
    ensemble_spectrum_stats,
    path_spectrum_closed_form,
    ring_spectrum_closed_form,
    write_ensemble_csv,
    write_spectrum_csv,
)
from .stability import (
    DEFAULT_SKT_PARAMS,
    Equilibrium,
    GeneralModel,
    InstabilityReport,
    SktParams,
    characteristic_matrix,
    classify_modes,
    coexistence_equilibrium,
    det_polynomials,
    det_sign_scan,
    diffusion_linearization_general,
    diffusion_linearization_skt,
    dispersion_growth_rate,
    equilibrium,
    instability_region,
    jacobian_at_equilibrium,
    jacobian_general,
    report_to_dict,
    skt_to_general,
    stability_report,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CrossnetError",
    "DEFAULT_SKT_PARAMS",
    "DETERMINISTIC_FAMILIES",
    "EigenSolverError",
    "EnsembleRow",
    "Equilibrium",
    "GeneralModel",
    "GenerationError",
    "Graph",
    "GraphSpec",
    "InstabilityReport",
    "IntegrationError",
    "IntegratorConfig",
    "LatticeResult",
    "NetworkState",
    "NonCoexistenceError",
    "PatternMetrics",
    "PdeParams",
    "RANDOM_FAMILIES",
    "RingSweepRow",
    "SeedRunResult",
    "SimulationResult",
    "SktParams",
    "SpectralStats",
    "Spectrum",
    "StabilityError",
    "SweepSpec",
    "algebraic_connectivity",
    "build_graph",
    "build_laplacian",
    "characteristic_matrix",
    "check_connectivity_bound",
    "check_positivity",
    "classify_modes",
    "coexistence_equilibrium",
    "degrees",
    "derive_seed",
    "det_polynomials",
    "det_sign_scan",
    "diffusion_linearization_general",
    "diffusion_linearization_skt",
    "discretize_skt_1d",
    "dispersion_growth_rate",
    "eig_symmetric",
    "ensemble_report",
    "ensemble_specs",
    "ensemble_spectrum_stats",
    "equilibrium",
    "gen_lattice",
    "gen_path",
    "gen_random",
    "gen_ring",
    "instability_region",
    "integrate",
    "is_connected",
    "jacobian_at_equilibrium",
    "jacobian_general",
    "lattice_comparison",
    "mode_amplitude_series",
    "mode_amplitudes",
    "path_spectrum_closed_form",
    "pattern_metrics",
    "perturb_homogeneous",
    "reaction_terms",
    "read_edge_list",
    "report_to_dict",
    "rhs_general",
    "rhs_skt",
    "ring_spectrum_closed_form",
    "ring_sweep",
    "rng_from",
    "simulate_and_report",
    "simulate_skt",
    "skt_to_general",
    "stability_report",
    "stencil_rhs",
    "write_edge_list",
    "write_ensemble_csv",
    "write_spectrum_csv",
]
