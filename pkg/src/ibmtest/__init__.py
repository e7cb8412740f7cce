"""Two-sample testing of network Bernoulli matrices via interlacing balance statistics."""

from .dcmm import (
    BernoulliMatrix,
    DcmmParams,
    LeastFavorableSpec,
    SnrReport,
    build_omega,
    calibrate_b,
    least_favorable,
    make_case,
    sample_network,
    sinkhorn_normalize,
    snr,
    snr_from_params,
)
from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    IbmError,
    InvalidInputError,
    KernelOverflowError,
    NumericError,
)
from .experiment import ExperimentSpec, McSummary, ScanResult, export, run_monte_carlo, scan_pairwise
from .graph import Network, SignedNetwork, degree_stats, diff, dump_edge_list, load_edge_list
from .oracle import brute_c, brute_u, cycle_balance_counts
from .stats import TestReport, compare, normal_sf, phi_test, psi_test, q2, q2_dense, q2_sparse, q3

__version__ = "0.1.0"
