//! Result-record formatting for the solve and oracle commands.
//!
//! JSON records are deterministic given the instance and flags except for
//! the `timings` field, which is the one field allowed to vary between
//! reruns.

use serde::Serialize;

use unshuffle_core::oracle::OracleResult;
use unshuffle_core::pipeline::{PipelineOutput, SolverSummary, StageTimings};

#[derive(Serialize)]
struct CertRecord {
    lambda1: f64,
    lambda2: f64,
    ratio: f64,
    leading_entry: f64,
}

#[derive(Serialize)]
struct EmRecord {
    rounds: usize,
    converged: bool,
    residual: f64,
}

#[derive(Serialize)]
struct SolveRecord<'a> {
    n: usize,
    m: usize,
    t: usize,
    eqs: usize,
    xi_sdp: &'a [f64],
    xi_em: &'a [f64],
    pi_hat: Vec<usize>,
    rank_sequence: &'a [usize],
    cert: CertRecord,
    solver: &'a SolverSummary,
    em: EmRecord,
    err_sdp: Option<f64>,
    err_em: Option<f64>,
    timings: &'a StageTimings,
}

pub fn solve_record_json(out: &PipelineOutput) -> String {
    let record = SolveRecord {
        n: out.n,
        m: out.m,
        t: out.t,
        eqs: out.eq_count,
        xi_sdp: &out.xi_sdp,
        xi_em: &out.xi_em,
        pi_hat: out.pi_hat.to_one_based(),
        rank_sequence: &out.rank_sequence,
        cert: CertRecord {
            lambda1: out.cert.lambda1,
            lambda2: out.cert.lambda2,
            ratio: out.cert.ratio,
            leading_entry: out.cert.leading_entry,
        },
        solver: &out.solver,
        em: EmRecord {
            rounds: out.em_rounds,
            converged: out.em_converged,
            residual: out.em_residual,
        },
        err_sdp: out.err_sdp,
        err_em: out.err_em,
        timings: &out.timings,
    };
    serde_json::to_string_pretty(&record).expect("record serialization cannot fail")
}

pub fn print_solve_text(out: &PipelineOutput) {
    let fmt_vec = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.9}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!(
        "n = {}, m = {}, relaxation order t = {}, system q1..q{}",
        out.n, out.m, out.t, out.eq_count
    );
    println!(
        "solver: {:?} after {} iterations (eq residual {:.2e}, psd violation {:.2e}, objective {:.6})",
        out.solver.status,
        out.solver.iterations,
        out.solver.eq_residual,
        out.solver.psd_violation,
        out.solver.objective
    );
    println!(
        "rank sequence: {:?}, certificate ratio {:.2e}",
        out.rank_sequence, out.cert.ratio
    );
    println!("xi_sdp = [{}]", fmt_vec(&out.xi_sdp));
    println!("xi_em  = [{}]", fmt_vec(&out.xi_em));
    println!(
        "pi_hat = {} ({} refinement rounds, converged = {})",
        out.pi_hat, out.em_rounds, out.em_converged
    );
    match (out.err_sdp, out.err_em) {
        (Some(s), Some(e)) => println!("err_sdp = {s:.3e}, err_em = {e:.3e}"),
        _ => println!("no ground truth in instance; errors unavailable"),
    }
    println!(
        "timings: assemble {:.3}s, solve {:.3}s, extract {:.3}s, refine {:.3}s",
        out.timings.assemble_s, out.timings.solve_s, out.timings.extract_s, out.timings.refine_s
    );
}

#[derive(Serialize)]
struct OracleRecord<'a> {
    pi_best: &'a [usize],
    xi_best: &'a [f64],
    residual_best: f64,
    residual_second: f64,
    uniqueness_gap: f64,
    evaluated: usize,
    tied: bool,
}

pub fn oracle_record_json(result: &OracleResult) -> String {
    let record = OracleRecord {
        pi_best: &result.pi_best,
        xi_best: &result.xi_best,
        residual_best: result.residual_best,
        residual_second: result.residual_second,
        uniqueness_gap: result.uniqueness_gap(),
        evaluated: result.evaluated,
        tied: result.tied,
    };
    serde_json::to_string_pretty(&record).expect("record serialization cannot fail")
}
