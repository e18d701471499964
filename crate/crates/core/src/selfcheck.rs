//! Built-in worked example and self-check.
//!
//! A fixed 4x2 instance with integer data whose solution and permutation
//! are known in closed form. The checks pin the system coefficients
//! exactly, run the full pipeline, cross-check the brute-force oracle, and
//! confirm that the spurious root of the first two equations is rejected
//! by the third.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::instance::{ProblemInstance, Truth};
use crate::oracle::{brute_force, DEFAULT_MAX_M};
use crate::perm::Permutation;
use crate::pipeline::{run, PipelineConfig};
use crate::polysys::{build_system, Exponents, Polynomial};
use crate::solver::SolverStatus;

/// The reference instance: recover `xi* = (-1, -2)` from a shuffled copy
/// of `A xi*` with `pi* = [1, 2, 4, 3]`.
pub fn reference_instance() -> ProblemInstance {
    let a = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 4.0, 3.0, 0.0, -2.0, -2.0, 0.0]);
    let y = DVector::from_vec(vec![-5.0, -10.0, 2.0, 4.0]);
    ProblemInstance {
        n: 2,
        m: 4,
        a,
        y,
        truth: Some(Truth {
            xi_star: DVector::from_vec(vec![-1.0, -2.0]),
            pi_star: Permutation::from_one_based(&[1, 2, 4, 3]).expect("valid by construction"),
            sigma: 0.0,
            snr_db: None,
        }),
        seed: None,
    }
}

/// The root of the degree-(1,2) subsystem that the cubic equation rejects.
pub const SPURIOUS_ROOT: [f64; 2] = [-0.8, -2.2];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SelfCheckReport {
    pub checks: Vec<Check>,
    /// The first three system polynomials, for display.
    pub system: Vec<Polynomial>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_self_check() -> Result<SelfCheckReport> {
    let instance = reference_instance();
    let system = build_system(&instance.a, instance.y.as_slice(), 3)?;
    let mut checks = Vec::new();

    // (a) exact coefficients of q1..q3
    let expected: [&[(&[u32], f64)]; 3] = [
        &[(&[1, 0], 3.0), (&[0, 1], 3.0), (&[0, 0], 9.0)],
        &[
            (&[2, 0], 21.0),
            (&[1, 1], 28.0),
            (&[0, 2], 17.0),
            (&[0, 0], -145.0),
        ],
        &[
            (&[3, 0], 57.0),
            (&[2, 1], 150.0),
            (&[1, 2], 120.0),
            (&[0, 3], 27.0),
            (&[0, 0], 1053.0),
        ],
    ];
    let mut coeff_ok = true;
    let mut detail = String::new();
    for (k, terms) in expected.iter().enumerate() {
        if system[k].num_terms() != terms.len() {
            coeff_ok = false;
            detail = format!("q{} has {} terms, expected {}", k + 1, system[k].num_terms(), terms.len());
            break;
        }
        for &(alpha, c) in terms.iter() {
            let got = system[k].coefficient(&Exponents(alpha.to_vec()));
            if got != c {
                coeff_ok = false;
                detail = format!("q{}: coefficient {got} != {c}", k + 1);
                break;
            }
        }
    }
    checks.push(Check {
        name: "system coefficients exact",
        passed: coeff_ok,
        detail,
    });

    // (b) full pipeline recovers the solution at order 2 with rank-one moments
    let out = run(&instance, &PipelineConfig::default())?;
    let xi_err = ((out.xi_em[0] + 1.0).powi(2) + (out.xi_em[1] + 2.0).powi(2)).sqrt();
    let pipeline_ok = out.solver.status == SolverStatus::Converged
        && out.rank_sequence == vec![1, 1, 1]
        && xi_err <= 1e-6;
    checks.push(Check {
        name: "pipeline recovers (-1, -2)",
        passed: pipeline_ok,
        detail: format!(
            "status {:?}, ranks {:?}, |xi_em - xi*| = {:.3e}",
            out.solver.status, out.rank_sequence, xi_err
        ),
    });

    // (c) brute-force oracle agrees
    let orc = brute_force(&instance.a, instance.y.as_slice(), DEFAULT_MAX_M)?;
    let oracle_ok = orc.pi_best == vec![1, 2, 4, 3]
        && (orc.xi_best[0] + 1.0).abs() <= 1e-9
        && (orc.xi_best[1] + 2.0).abs() <= 1e-9
        && orc.residual_best <= 1e-9;
    checks.push(Check {
        name: "oracle agrees",
        passed: oracle_ok,
        detail: format!(
            "pi {:?}, xi ({:.6}, {:.6}), residual {:.3e}",
            orc.pi_best, orc.xi_best[0], orc.xi_best[1], orc.residual_best
        ),
    });

    // (d) the spurious root solves q1, q2 but fails q3
    let q1 = system[0].evaluate(&SPURIOUS_ROOT);
    let q2 = system[1].evaluate(&SPURIOUS_ROOT);
    let q3 = system[2].evaluate(&SPURIOUS_ROOT);
    let spurious_ok = q1.abs() <= 1e-9 && q2.abs() <= 1e-9 && q3.abs() > 1.0;
    checks.push(Check {
        name: "spurious root rejected by q3",
        passed: spurious_ok,
        detail: format!("q1 = {q1:.3e}, q2 = {q2:.3e}, |q3| = {:.4}", q3.abs()),
    });

    Ok(SelfCheckReport { checks, system })
}
