//! End-to-end pipeline: power-sum system, relaxation assembly, SDP solve,
//! solution extraction, and sorting-based refinement, with per-stage wall
//! times for the experiment harness.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::extract::{extract_solution, ExtractionCertificate};
use crate::instance::{relative_error, ProblemInstance};
use crate::moment::{assemble_sdp, default_relaxation_order};
use crate::perm::Permutation;
use crate::polysys::build_system;
use crate::refine::em_refine;
use crate::solver::{solve_with_trace, IterTrace, SolverSettings, SolverStatus};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Relaxation order; defaults to `ceil((n+1)/2)`.
    pub t: Option<usize>,
    /// Number of system polynomials; defaults to `n + 1`.
    pub eq_count: Option<usize>,
    pub solver: SolverSettings,
    pub em_max_rounds: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            t: None,
            eq_count: None,
            solver: SolverSettings::default(),
            em_max_rounds: 100,
        }
    }
}

/// Wall-clock seconds per stage. The solve/refine split mirrors the usual
/// SDP-versus-refinement cost comparison.
#[derive(Debug, Clone, Serialize)]
pub struct StageTimings {
    pub assemble_s: f64,
    pub solve_s: f64,
    pub extract_s: f64,
    pub refine_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverSummary {
    pub status: SolverStatus,
    pub iterations: usize,
    pub eq_residual: f64,
    pub psd_violation: f64,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub eq_count: usize,
    pub xi_sdp: Vec<f64>,
    pub xi_em: Vec<f64>,
    /// Alignment satisfying `A xi_em ~= pi_hat(y)`; note this is the
    /// inverse of a shuffle applied to the clean measurements.
    pub pi_hat: Permutation,
    pub rank_sequence: Vec<usize>,
    pub cert: ExtractionCertificate,
    pub solver: SolverSummary,
    pub em_rounds: usize,
    pub em_converged: bool,
    pub em_residual: f64,
    /// Relative errors against the stored truth, when present.
    pub err_sdp: Option<f64>,
    pub err_em: Option<f64>,
    pub timings: StageTimings,
}

impl PipelineOutput {
    /// Error metrics against the stored truth; `None` for instances
    /// without ground truth.
    pub fn error_report(&self) -> Option<crate::instance::ErrorReport> {
        Some(crate::instance::ErrorReport {
            err_sdp: self.err_sdp?,
            err_em: self.err_em?,
            residual_ls: self.em_residual,
            rank_sequence: self.rank_sequence.clone(),
        })
    }
}

pub fn run(instance: &ProblemInstance, config: &PipelineConfig) -> Result<PipelineOutput> {
    run_traced(instance, config, None)
}

pub fn run_traced(
    instance: &ProblemInstance,
    config: &PipelineConfig,
    trace: Option<&mut Vec<IterTrace>>,
) -> Result<PipelineOutput> {
    let n = instance.n;
    let t = config.t.unwrap_or_else(|| default_relaxation_order(n));
    let eq_count = config.eq_count.unwrap_or(n + 1);

    let clock = Instant::now();
    let system = build_system(&instance.a, instance.y.as_slice(), eq_count)?;
    let sdp = assemble_sdp(&system, n, t)?;
    let assemble_s = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let result = solve_with_trace(&sdp, &config.solver, trace);
    let solve_s = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let moment = sdp.structure.moment_matrix(&result.y)?;
    let (xi_sdp, cert) = extract_solution(&moment, n)?;
    let extract_s = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let em = em_refine(&instance.a, instance.y.as_slice(), &xi_sdp, config.em_max_rounds)?;
    let refine_s = clock.elapsed().as_secs_f64();

    let (err_sdp, err_em) = match &instance.truth {
        Some(truth) => (
            Some(relative_error(&xi_sdp, &truth.xi_star)?),
            Some(relative_error(&em.xi, &truth.xi_star)?),
        ),
        None => (None, None),
    };

    Ok(PipelineOutput {
        n,
        m: instance.m,
        t,
        eq_count,
        xi_sdp: xi_sdp.as_slice().to_vec(),
        xi_em: em.xi.as_slice().to_vec(),
        pi_hat: em.pi,
        rank_sequence: result.rank_sequence.clone(),
        cert,
        solver: SolverSummary {
            status: result.status,
            iterations: result.iterations,
            eq_residual: result.eq_residual,
            psd_violation: result.psd_violation,
            objective: result.objective,
        },
        em_rounds: em.rounds,
        em_converged: em.converged,
        em_residual: em.residual,
        err_sdp,
        err_em,
        timings: StageTimings {
            assemble_s,
            solve_s,
            extract_s,
            refine_s,
        },
    })
}
