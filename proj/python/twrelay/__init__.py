"""Rate regions of two-way OFDM relaying."""

from ._core import (
    BoundaryPoint,
    ChannelState,
    DegenerateDualError,
    DomainError,
    Error,
    IoError,
    ParameterError,
    PowerBudget,
    RegionBoundary,
    ResourceAllocation,
    SolverConfig,
    SolverError,
    budget_from_snr_db,
    constraints,
    default_rho_grid,
    empirical_slope,
    generate_rayleigh_csi,
    grid_bruteforce_df,
    low_snr_ratio,
    max_r12_on_ray,
    multiplexing_vertices,
    read_csi_file,
    solve_bc,
    solve_boundary_point,
    solve_ma,
    sweep_region,
    waterfill,
    write_csi_file,
)

__version__ = "0.1.0"
