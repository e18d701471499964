//! Solver toolkit for shuffled linear systems (`A xi = pi(y)` with the
//! permutation `pi` unknown).
//!
//! The pipeline eliminates the permutation with power sums: the system
//! `q_k(x) = p_k(A x) - p_k(y)` for `k = 1..=n+1` has a unique solution for
//! generic data. That system is relaxed to a trace-minimization SDP over
//! truncated moment matrices, solved with a built-in first-order method,
//! and the solution is read off the rank-one moment matrix and polished by
//! sorting-based refinement. A brute-force permutation oracle provides
//! independent ground truth at small sizes.
//!
//! Modules follow the stages:
//!
//! * [`instance`] - problem data, random generation, noise model, metrics
//! * [`perm`] - permutations and their action on measurement vectors
//! * [`polysys`] - sparse polynomials and the power-sum system
//! * [`moment`] - monomial bases, moment matrices, SDP assembly
//! * [`solver`] - the first-order SDP solver and rank diagnostics
//! * [`extract`] - solution recovery from near-rank-one moment matrices
//! * [`refine`] - permutation recovery by sorting plus least squares
//! * [`oracle`] - exhaustive permutation search with a uniqueness gap
//! * [`pipeline`] - the composed end-to-end run with stage timings
//! * [`selfcheck`] - built-in worked example used by `verify-example`

pub mod error;
pub mod extract;
pub mod instance;
pub mod moment;
pub mod oracle;
pub mod perm;
pub mod pipeline;
pub mod polysys;
pub mod refine;
pub mod selfcheck;
pub mod solver;

pub use error::{Error, Result};
pub use extract::{extract_solution, ExtractionCertificate};
pub use instance::{
    generate_instance, power_sum, relative_error, sigma_from_snr, ErrorReport, ProblemInstance,
    Truth,
};
pub use moment::{
    assemble_sdp, basis, default_relaxation_order, localizing_rows, EqRow, MomentStructure,
    MonomialBasis, SdpProblem,
};
pub use oracle::{brute_force, OracleResult, DEFAULT_MAX_M};
pub use perm::Permutation;
pub use pipeline::{PipelineConfig, PipelineOutput, StageTimings};
pub use polysys::{build_system, expand_linear_form_power, Exponents, Polynomial};
pub use refine::{em_refine, least_squares, sort_match_permutation, EmOutcome};
pub use solver::{
    project_psd, rank_sequence, solve, solve_with_trace, IterTrace, SolverResult, SolverSettings,
    SolverStatus,
};
