"""Finite-difference laboratory for the 1-D p-Laplacian flow and its linear limit."""
from .grid import (
    FaceFunction,
    GridFunction,
    Mesh1D,
    MeshMismatchError,
    discrete_gradient,
    inner_l2,
    load_grid_function,
    norm_l2,
    norm_V_p,
    save_grid_function,
)
from .operators import ProblemParams, apply_Ap, energy_Jp, energy_tilde_Ep, grad_tilde_Ep, rhs_B
from .spectral import (
    SpectralBasis,
    SpectralCoeffs,
    count_N_lambda,
    fourier_mode,
    laplacian_eigs,
    parseval_mode_bound,
    solve_p2_exact,
)
from .evolution import (
    ConvexityError,
    NewtonFailure,
    SolverConfig,
    Trajectory,
    evolve,
    step_backward_euler,
    v_norm_diagnostic,
)
from .equilibria import (
    EquilibriumError,
    EquilibriumResult,
    solve_equilibrium_2,
    solve_equilibrium_p,
    sweep_equilibrium_continuity,
)
from .asymptotics import (
    AttractorSample,
    EquatorLimit,
    PoincarePoint,
    detect_equator_limit,
    dist_to_A2,
    default_ic_net,
    hausdorff_semidist,
    normalized_state,
    poincare_project,
    sample_attractor_p,
    upper_semicontinuity_experiment,
)

__version__ = "0.1.0"
