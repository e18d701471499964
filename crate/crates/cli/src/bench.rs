//! Replicated-trial benchmark over a grid of (n, SNR) configurations.
//!
//! Each configuration runs `trials` pipeline solves with seeds
//! `seed_base + trial`, and reports medians in the reference protocol's
//! style: median errors, median wall time (total and per stage), the
//! fraction of outlier trials (refined error above ten times the median),
//! and the most frequent rank sequence. Columns carrying wall time are the
//! only ones expected to vary between reruns.

use std::collections::HashMap;
use std::path::PathBuf;

use unshuffle_core::instance::generate_instance;
use unshuffle_core::moment::{basis, default_relaxation_order};
use unshuffle_core::pipeline::{run, PipelineConfig};
use unshuffle_core::solver::SolverSettings;

use crate::CliError;

pub const CSV_HEADER: &str = "n,t,size,median_err_sdp,median_err_em,time_s,outlier_frac,ranks,assemble_s,solve_s,extract_s,refine_s";

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench(
    n_list: Vec<usize>,
    m: usize,
    snr_db_list: Vec<f64>,
    trials: usize,
    seed_base: u64,
    max_iter: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let snrs: Vec<Option<f64>> = if snr_db_list.is_empty() {
        vec![None]
    } else {
        snr_db_list.into_iter().map(Some).collect()
    };

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for &n in &n_list {
        for &snr in &snrs {
            let row = bench_config(n, m, snr, trials, seed_base, max_iter)?;
            csv.push_str(&row);
            csv.push('\n');
        }
    }

    match out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn bench_config(
    n: usize,
    m: usize,
    snr_db: Option<f64>,
    trials: usize,
    seed_base: u64,
    max_iter: Option<usize>,
) -> Result<String, CliError> {
    let mut errs_sdp = Vec::with_capacity(trials);
    let mut errs_em = Vec::with_capacity(trials);
    let mut t_total = Vec::with_capacity(trials);
    let mut t_assemble = Vec::with_capacity(trials);
    let mut t_solve = Vec::with_capacity(trials);
    let mut t_extract = Vec::with_capacity(trials);
    let mut t_refine = Vec::with_capacity(trials);
    let mut rank_votes: HashMap<Vec<usize>, usize> = HashMap::new();

    let mut solver = SolverSettings::default();
    if let Some(cap) = max_iter {
        solver.max_iter = cap;
    }
    let config = PipelineConfig {
        solver,
        ..PipelineConfig::default()
    };

    for trial in 0..trials {
        let seed = seed_base + trial as u64;
        let instance = generate_instance(n, m, snr_db, seed)?;
        let out = run(&instance, &config)?;
        errs_sdp.push(out.err_sdp.expect("generated instances carry truth"));
        errs_em.push(out.err_em.expect("generated instances carry truth"));
        let t = &out.timings;
        t_total.push(t.assemble_s + t.solve_s + t.extract_s + t.refine_s);
        t_assemble.push(t.assemble_s);
        t_solve.push(t.solve_s);
        t_extract.push(t.extract_s);
        t_refine.push(t.refine_s);
        *rank_votes.entry(out.rank_sequence).or_insert(0) += 1;
    }

    let med_em = median(errs_em.clone());
    let outliers = errs_em.iter().filter(|&&e| e > 10.0 * med_em).count();
    // modal rank sequence; ties resolved toward the lexicographically
    // smallest so reruns are stable
    let modal = rank_votes
        .iter()
        .map(|(r, &c)| (std::cmp::Reverse(c), r.clone()))
        .min()
        .map(|(_, r)| r)
        .unwrap_or_default();
    let ranks = modal
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",");

    let t = default_relaxation_order(n);
    Ok(format!(
        "{n},{t},{size},{med_sdp:e},{med_em:e},{time:.6},{outlier_frac:.3},\"{ranks}\",{a:.6},{s:.6},{x:.6},{r:.6}",
        size = basis(n, t).len(),
        med_sdp = median(errs_sdp),
        time = median(t_total),
        outlier_frac = outliers as f64 / trials as f64,
        a = median(t_assemble),
        s = median(t_solve),
        x = median(t_extract),
        r = median(t_refine),
    ))
}
