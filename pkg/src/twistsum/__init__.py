"""Exact computation, bounds and certificates for the number of distinct
values of permutation-twisted dot products ``sum_i a_i * b_pi(i)``."""

__version__ = "0.1.0"

from .complex_case import (
    beck_dichotomy,
    case2_select_pairs,
    complex_certificate,
    line_stats,
    normalize_collinear_to_real,
)
from .errors import TwistSumError
from .gp import (
    PointSet,
    choose_wstar,
    constructive_bound,
    gp_recurrence_bound,
    project_complement,
    validate_general_position,
)
from .montecarlo import sample_sums
from .pairing import PairFamily, check_superadditive, greedy_pairs
from .scalar import GaussianRational, Rational, RationalVector, compare_total, format_scalar, parse_scalar
from .support import (
    SupportSummary,
    TupleInput,
    distinct_subset_sums,
    exact_mode_mass,
    exact_support,
    sum_after_transpositions,
    twisted_sum,
)
from .witness import (
    WitnessCertificate,
    align_b,
    bubble_walk_bound,
    build_certificate,
    empirical_t,
    explore_t_asymptotics,
    verify_certificate,
    witness_family,
)
