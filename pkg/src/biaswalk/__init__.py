"""Biased diffusion on complex networks.

Generation of power-law networks with tunable degree-degree correlation,
mass-transport dynamics (uniform and degree-weighted splitting), annealed
mean-field predictions, and the log-binned measurement protocol connecting
the two.
"""

__version__ = "0.1.0"

from . import _kernels
from .graph import (
    BuildReport,
    EdgeListError,
    Graph,
    build_graph,
    largest_component,
    load_graph,
    read_edge_list,
    write_edge_list,
)
from .meanfield import (
    DegreeJointHistogram,
    MeanFieldPrediction,
    UndirectedOnlyError,
    annealed_transition,
    evolve_degree_space,
    joint_histogram,
    knn_curve,
    knn_slope,
    neighbor_mean_degree,
    predict,
)
from .netgen import (
    CalibrationError,
    GenParams,
    ShuffleParams,
    calibrate_theta,
    degree_sequence,
    generate,
    maslov_sneppen_shuffle,
)
from .pipeline import RunConfig, RunResult, StageError, report_exponents, \
    run_experiment
from .stats import (
    BinnedCurve,
    InsufficientDataError,
    PowerLawFit,
    binned_conditional_mean,
    ccdf,
    ccdf_tail_exponent,
    curve_from_points,
    fit_powerlaw,
    loglog_correlation,
)
from .transport import (
    MassVector,
    ReducibleChainError,
    SteadyState,
    TransportSpec,
    build_plan,
    exact_stationary,
    steady_state,
    step,
)

kernel_backend = _kernels.active_name
