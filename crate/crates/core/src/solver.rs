//! First-order solver for the assembled relaxation: minimize the trace of
//! the moment matrix over moment sequences satisfying the equality rows,
//! with the moment matrix constrained to the PSD cone.
//!
//! The method is an over-relaxed ADMM consensus split between the moment
//! sequence `y` and a matrix copy `S` of its moment matrix:
//!
//! * the `y`-step minimizes `c.y + (rho/2) |M(y) - (S - U)|_F^2` subject to
//!   the equality rows. Because positions of the moment matrix sharing one
//!   monomial sum read the same sequence entry, the quadratic is diagonal
//!   in sequence space with weights equal to the position multiplicities,
//!   and the step reduces to a weighted projection onto the affine set of a
//!   pulled-back (entry-averaged) target. The projection's linear system is
//!   factorized once and reused.
//! * the `S`-step projects the (over-relaxed) moment matrix plus the scaled
//!   dual onto the PSD cone by eigenvalue clamping.
//!
//! The iterate `y` is a genuine moment sequence at every iteration and
//! satisfies the equality rows exactly whenever they are consistent; the
//! PSD gap is what the iteration drives to zero. The penalty is rebalanced
//! by factors of two when the primal and dual residuals drift apart.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moment::{EqRow, MomentStructure, SdpProblem};

#[derive(Debug, Clone)]
pub struct SolverSettings {
    /// Relative tolerance on the equality residual.
    pub tol_eq: f64,
    /// Tolerance on the minimum eigenvalue, relative to the trace.
    pub tol_psd: f64,
    pub max_iter: usize,
    /// Initial ADMM penalty; adaptively rescaled.
    pub penalty: f64,
    /// Over-relaxation factor in [1, 2).
    pub over_relax: f64,
    /// Eigenvalue-ratio threshold for numerical rank. The default 1e-3
    /// suits clean data; noisy-run outlier analysis typically uses 1e-2.
    pub rank_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol_eq: 1e-8,
            tol_psd: 1e-8,
            max_iter: 50_000,
            penalty: 1.0,
            over_relax: 1.6,
            rank_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    /// Final moment sequence.
    pub y: Vec<f64>,
    /// Trace of the final moment matrix.
    pub objective: f64,
    /// Relative `|Ey - e|`.
    pub eq_residual: f64,
    /// `max(0, -lambda_min(M_t(y))) / max(1, trace)`.
    pub psd_violation: f64,
    pub iterations: usize,
    pub status: SolverStatus,
    /// Numerical rank of `M_s(y)` for `s = 0..=t`.
    pub rank_sequence: Vec<usize>,
}

/// One sampled iteration for the optional trace output.
#[derive(Debug, Clone, Serialize)]
pub struct IterTrace {
    pub iter: usize,
    pub eq_residual: f64,
    pub psd_violation: f64,
    pub objective: f64,
}

/// Frobenius-nearest positive semidefinite matrix: symmetrize, then clamp
/// negative eigenvalues to zero.
pub fn project_psd(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let clamped = eig.eigenvalues.map(|l| l.max(0.0));
    let scaled = {
        let mut v = eig.eigenvectors.clone();
        for (j, l) in clamped.iter().enumerate() {
            v.column_mut(j).scale_mut(*l);
        }
        v
    };
    let p = scaled * eig.eigenvectors.transpose();
    Ok((&p + p.transpose()) * 0.5)
}

/// Numerical rank sequence of the truncated moment matrices `M_s(y)` for
/// `s = 0..=t`: eigenvalues at least `rank_tol` times the largest are
/// counted, and a non-positive largest eigenvalue gives rank 0.
pub fn rank_sequence(y: &[f64], n: usize, t: usize, rank_tol: f64) -> Vec<usize> {
    let structure = MomentStructure::new(n, t);
    assert_eq!(
        y.len(),
        structure.seq_len(),
        "moment sequence length does not match (n, t)"
    );
    let full = structure
        .moment_matrix(y)
        .expect("length checked above");
    (0..=t)
        .map(|s| {
            let size = crate::moment::basis(n, s).len();
            let block = full.view((0, 0), (size, size)).into_owned();
            numerical_rank(&block, rank_tol)
        })
        .collect()
}

fn numerical_rank(m: &DMatrix<f64>, rank_tol: f64) -> usize {
    let eigs = m.clone().symmetric_eigenvalues();
    let lambda_max = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lambda_max <= 0.0 {
        return 0;
    }
    eigs.iter().filter(|&&l| l >= rank_tol * lambda_max).count()
}

/// Weighted projection onto the affine set of the equality rows, with the
/// normal matrix factored once. Falls back to an eigenvalue pseudo-inverse
/// when the rows are linearly dependent, in which case an inconsistent
/// system projects onto its least-squares surrogate and the equality
/// residual stalls at the infeasibility gap.
struct AffineStep {
    rows: Vec<EqRow>,
    rhs: Vec<f64>,
    w_inv: Vec<f64>,
    factor: NormalFactor,
}

enum NormalFactor {
    Cholesky(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    PseudoInverse {
        vectors: DMatrix<f64>,
        inv_eigs: Vec<f64>,
    },
}

impl AffineStep {
    fn new(rows: &[EqRow], w_inv: &[f64]) -> Self {
        let r = rows.len();
        let mut gram = DMatrix::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let g = sparse_weighted_dot(&rows[i], &rows[j], w_inv);
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let factor = match gram.clone().cholesky() {
            Some(c) => NormalFactor::Cholesky(c),
            None => {
                let eig = gram.symmetric_eigen();
                let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
                let cut = 1e-12 * lambda_max.max(1e-300);
                let inv_eigs = eig
                    .eigenvalues
                    .iter()
                    .map(|&l| if l > cut { 1.0 / l } else { 0.0 })
                    .collect();
                NormalFactor::PseudoInverse {
                    vectors: eig.eigenvectors,
                    inv_eigs,
                }
            }
        };
        AffineStep {
            rows: rows.to_vec(),
            rhs: rows.iter().map(|r| r.rhs).collect(),
            w_inv: w_inv.to_vec(),
            factor,
        }
    }

    /// `y = v - W^-1 E^T (E W^-1 E^T)^+ (E v - e)`.
    fn project(&self, v: &[f64]) -> Vec<f64> {
        let r = self.rows.len();
        let mut resid = nalgebra::DVector::zeros(r);
        for (i, row) in self.rows.iter().enumerate() {
            resid[i] = row.evaluate(v);
        }
        let lambda = match &self.factor {
            NormalFactor::Cholesky(c) => c.solve(&resid),
            NormalFactor::PseudoInverse { vectors, inv_eigs } => {
                let mut coords = vectors.transpose() * &resid;
                for (c, &il) in coords.iter_mut().zip(inv_eigs.iter()) {
                    *c *= il;
                }
                vectors * coords
            }
        };
        let mut y = v.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let l = lambda[i];
            if l != 0.0 {
                for (&idx, &c) in row.indices.iter().zip(row.coeffs.iter()) {
                    y[idx] -= self.w_inv[idx] * c * l;
                }
            }
        }
        y
    }

    fn residual_norm(&self, y: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|row| row.evaluate(y).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn rhs_norm(&self) -> f64 {
        self.rhs.iter().map(|e| e * e).sum::<f64>().sqrt()
    }
}

fn sparse_weighted_dot(a: &EqRow, b: &EqRow, w_inv: &[f64]) -> f64 {
    let mut i = 0;
    let mut j = 0;
    let mut acc = 0.0;
    while i < a.indices.len() && j < b.indices.len() {
        match a.indices[i].cmp(&b.indices[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a.coeffs[i] * b.coeffs[j] * w_inv[a.indices[i]];
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn solve(problem: &SdpProblem, settings: &SolverSettings) -> SolverResult {
    solve_with_trace(problem, settings, None)
}

/// Same as [`solve`], optionally sampling an iteration trace
/// (every iteration; intended for debugging small problems).
pub fn solve_with_trace(
    problem: &SdpProblem,
    settings: &SolverSettings,
    mut trace: Option<&mut Vec<IterTrace>>,
) -> SolverResult {
    let st = &problem.structure;
    let w_inv: Vec<f64> = st
        .multiplicity()
        .iter()
        .map(|&c| 1.0 / c as f64)
        .collect();
    let affine = AffineStep::new(&problem.rows, &w_inv);

    let mut rho = settings.penalty;
    let alpha = settings.over_relax;

    let mut y = vec![0.0; problem.n_vars];
    y[0] = 1.0;
    let mut s_mat = st
        .moment_matrix(&y)
        .expect("initial sequence has the right length");
    let mut u = DMatrix::zeros(st.size(), st.size());

    let mut diverged = false;
    let mut iterations = 0;
    let mut stall_probe: Option<f64> = None;
    // plateau detection: noisy data can make the relaxation slightly
    // infeasible, leaving a primal-residual floor no iteration count will
    // cross; give up once the residual stops improving
    const PLATEAU_WINDOW: usize = 2_000;
    const PLATEAU_MIN_ITER: usize = 3_000;
    let mut best_primal = f64::INFINITY;
    let mut best_primal_iter = 0usize;

    for iter in 1..=settings.max_iter {
        iterations = iter;

        // y-step: weighted affine projection of the pulled-back target
        let b = &s_mat - &u;
        let mut v = st.pull_back(&b);
        for ((vi, ci), wi) in v.iter_mut().zip(&problem.objective).zip(&w_inv) {
            *vi -= ci * wi / rho;
        }
        let y_next = affine.project(&v);
        if y_next.iter().any(|x| !x.is_finite()) {
            diverged = true;
            break;
        }
        y = y_next;

        let m_y = st.moment_matrix(&y).expect("projection preserves length");

        // S-step with over-relaxation, then dual update
        let m_relax = &m_y * alpha + &s_mat * (1.0 - alpha);
        let s_new = match project_psd(&(&m_relax + &u)) {
            Ok(p) => p,
            Err(_) => {
                diverged = true;
                break;
            }
        };
        u += &m_relax - &s_new;

        let primal = (&m_y - &s_new).norm();
        let dual = rho * (&s_new - &s_mat).norm();
        s_mat = s_new;

        if let Some(rows) = trace.as_deref_mut() {
            let eigs = m_y.clone().symmetric_eigenvalues();
            let lambda_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
            rows.push(IterTrace {
                iter,
                eq_residual: affine.residual_norm(&y) / affine.rhs_norm().max(1.0),
                psd_violation: (-lambda_min).max(0.0) / m_y.trace().max(1.0),
                objective: problem.objective_value(&y),
            });
        }

        let primal_scale = m_y.trace().abs().max(1.0);
        let dual_scale = (rho * u.norm()).max(1.0);
        if primal <= settings.tol_psd * primal_scale && dual <= settings.tol_psd * dual_scale {
            break;
        }

        if primal < 0.99 * best_primal {
            best_primal = primal;
            best_primal_iter = iter;
        } else if iter >= PLATEAU_MIN_ITER && iter - best_primal_iter >= PLATEAU_WINDOW {
            break;
        }

        // an inconsistent equality system leaves a constant residual the
        // projection can never remove; detect it and stop early
        if iter == 3 {
            let r = affine.residual_norm(&y) / affine.rhs_norm().max(1.0);
            if r > settings.tol_eq {
                stall_probe = Some(r);
            }
        } else if iter == 53 {
            if let Some(r0) = stall_probe {
                let r = affine.residual_norm(&y) / affine.rhs_norm().max(1.0);
                if (r - r0).abs() <= 1e-14 * r0.max(1.0) && r > settings.tol_eq {
                    break;
                }
            }
        }

        // residual balancing; the wide threshold keeps rho from flapping
        let p_rel = primal / primal_scale;
        let d_rel = dual / dual_scale;
        if p_rel > 10.0 * d_rel && rho < 1e6 {
            rho *= 2.0;
            u /= 2.0;
        } else if d_rel > 10.0 * p_rel && rho > 1e-6 {
            rho /= 2.0;
            u *= 2.0;
        }
    }

    finalize(problem, y, iterations, diverged, settings)
}

fn finalize(
    problem: &SdpProblem,
    y: Vec<f64>,
    iterations: usize,
    diverged: bool,
    settings: &SolverSettings,
) -> SolverResult {
    let st = &problem.structure;
    if diverged || y.iter().any(|x| !x.is_finite()) {
        return SolverResult {
            objective: f64::NAN,
            eq_residual: f64::NAN,
            psd_violation: f64::NAN,
            iterations,
            status: SolverStatus::Diverged,
            rank_sequence: vec![0; st.t + 1],
            y,
        };
    }
    let m_y = st.moment_matrix(&y).expect("finalize with valid length");
    let eigs = m_y.clone().symmetric_eigenvalues();
    let lambda_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let trace = m_y.trace();
    let psd_violation = (-lambda_min).max(0.0) / trace.abs().max(1.0);

    let rhs_norm: f64 = problem
        .rows
        .iter()
        .map(|r| r.rhs * r.rhs)
        .sum::<f64>()
        .sqrt();
    let eq_residual = problem
        .rows
        .iter()
        .map(|r| r.evaluate(&y).powi(2))
        .sum::<f64>()
        .sqrt()
        / rhs_norm.max(1.0);

    let status = if eq_residual <= settings.tol_eq
        && psd_violation <= settings.tol_psd
        && (y[0] - 1.0).abs() <= settings.tol_eq
    {
        SolverStatus::Converged
    } else {
        SolverStatus::MaxIter
    };

    SolverResult {
        objective: problem.objective_value(&y),
        eq_residual,
        psd_violation,
        iterations,
        status,
        rank_sequence: rank_sequence(&y, st.n, st.t, settings.rank_tol),
        y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::assemble_sdp;
    use crate::polysys::build_system;
    use nalgebra::DMatrix;
    use rand_chacha::rand_core::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(size: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let raw = DMatrix::from_fn(size, size, |_, _| {
            (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        });
        (&raw + raw.transpose()) * 0.5
    }

    fn random_psd(size: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let raw = DMatrix::from_fn(size, size, |_, _| {
            (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        });
        &raw * raw.transpose()
    }

    #[test]
    fn psd_projection_basic_cases() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((project_psd(&id).unwrap() - &id).amax() < 1e-14);

        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let p = project_psd(&s).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!((p - expected).amax() < 1e-14);
    }

    #[test]
    fn psd_projection_is_idempotent_and_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let s = random_symmetric(6, &mut rng);
            let p = project_psd(&s).unwrap();
            let pp = project_psd(&p).unwrap();
            assert!((&pp - &p).amax() <= 1e-10 * p.norm().max(1.0));
            let eigs = p.clone().symmetric_eigenvalues();
            assert!(eigs.iter().all(|&l| l >= -1e-12 * s.norm()));
            // nearest among sampled PSD competitors
            let dist = (&p - &s).norm();
            for _ in 0..5 {
                let z = random_psd(6, &mut rng);
                assert!(dist <= (&z - &s).norm() + 1e-12);
            }
        }
    }

    #[test]
    fn psd_projection_rejects_non_finite() {
        let mut s = DMatrix::<f64>::identity(2, 2);
        s[(0, 1)] = f64::NAN;
        assert!(matches!(project_psd(&s), Err(Error::NonFiniteMatrix)));
    }

    #[test]
    fn rank_sequence_of_dirac_is_all_ones() {
        let st = MomentStructure::new(3, 2);
        let y = st.dirac_sequence(&[0.3, -1.2, 0.7]);
        assert_eq!(rank_sequence(&y, 3, 2, 1e-3), vec![1, 1, 1]);
    }

    #[test]
    fn rank_sequence_degenerate_cases() {
        let st = MomentStructure::new(1, 1);
        let mut y = vec![0.0; st.seq_len()];
        y[0] = 1.0;
        assert_eq!(rank_sequence(&y, 1, 1, 1e-3), vec![1, 1]);
        let zero = vec![0.0; st.seq_len()];
        assert_eq!(rank_sequence(&zero, 1, 1, 1e-3), vec![0, 0]);
    }

    #[test]
    fn rank_sequence_is_monotone_on_mixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let st = MomentStructure::new(2, 2);
            let mut y = vec![0.0; st.seq_len()];
            let k = 1 + (rng.next_u64() % 3) as usize;
            let mut weight_total = 0.0;
            for _ in 0..k {
                let v = [
                    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0,
                    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0,
                ];
                let w = 0.1 + (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                weight_total += w;
                for (yi, di) in y.iter_mut().zip(st.dirac_sequence(&v)) {
                    *yi += w * di;
                }
            }
            for yi in &mut y {
                *yi /= weight_total;
            }
            let ranks = rank_sequence(&y, 2, 2, 1e-9);
            for w in ranks.windows(2) {
                assert!(w[0] <= w[1], "rank sequence {ranks:?} not monotone");
            }
        }
    }

    #[test]
    fn worked_example_solves_to_rank_one() {
        let a = crate::selfcheck::reference_instance().a;
        let y_obs = [-5.0, -10.0, 2.0, 4.0];
        let q = build_system(&a, &y_obs, 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        let result = solve(&sdp, &SolverSettings::default());
        assert_eq!(result.status, SolverStatus::Converged);
        assert_eq!(result.rank_sequence, vec![1, 1, 1]);
        // degree-1 moments carry the solution
        assert!((result.y[1] - (-1.0)).abs() < 1e-6);
        assert!((result.y[2] - (-2.0)).abs() < 1e-6);
        assert!((result.y[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn converged_iterate_lies_in_feasible_set() {
        let inst = crate::instance::generate_instance(3, 20, None, 4).unwrap();
        let q = build_system(&inst.a, inst.y.as_slice(), 4).unwrap();
        let sdp = assemble_sdp(&q, 3, 2).unwrap();
        let settings = SolverSettings::default();
        let result = solve(&sdp, &settings);
        assert_eq!(result.status, SolverStatus::Converged);
        assert!(result.eq_residual <= settings.tol_eq);
        assert!(result.psd_violation <= settings.tol_psd);
        assert!((result.y[0] - 1.0).abs() <= settings.tol_eq);
        for row in &sdp.rows {
            assert!(row.evaluate(&result.y).abs() <= 1e-6);
        }
    }

    #[test]
    fn objective_not_above_dirac_trace() {
        // the Dirac sequence at the truth is feasible, so the minimizer's
        // trace cannot exceed it by more than solver tolerance
        let inst = crate::instance::generate_instance(2, 8, None, 9).unwrap();
        let truth = inst.truth.as_ref().unwrap();
        let q = build_system(&inst.a, inst.y.as_slice(), 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        let result = solve(&sdp, &SolverSettings::default());
        assert_eq!(result.status, SolverStatus::Converged);
        let dirac = sdp.structure.dirac_sequence(truth.xi_star.as_slice());
        let dirac_obj = sdp.objective_value(&dirac);
        assert!(result.objective <= dirac_obj + 1e-5 * dirac_obj.max(1.0));
    }

    #[test]
    fn contradictory_rows_stall_without_trap() {
        let st = MomentStructure::new(1, 1);
        let problem = SdpProblem {
            n_vars: st.seq_len(),
            objective: vec![1.0, 0.0, 1.0],
            rows: vec![
                EqRow {
                    indices: vec![0],
                    coeffs: vec![1.0],
                    rhs: 1.0,
                },
                EqRow {
                    indices: vec![0],
                    coeffs: vec![1.0],
                    rhs: 0.0,
                },
            ],
            meta: crate::moment::SdpMeta {
                n: 1,
                t: 1,
                half_degrees: vec![],
            },
            structure: st,
        };
        let settings = SolverSettings {
            max_iter: 500,
            ..SolverSettings::default()
        };
        let result = solve(&problem, &settings);
        assert_ne!(result.status, SolverStatus::Converged);
        assert!(result.eq_residual > settings.tol_eq);
        // the stall detector should fire long before max_iter
        assert!(result.iterations < 500);
    }

    #[test]
    fn non_finite_problem_reports_divergence() {
        let st = MomentStructure::new(1, 1);
        let problem = SdpProblem {
            n_vars: st.seq_len(),
            objective: vec![1.0, 0.0, 1.0],
            rows: vec![EqRow {
                indices: vec![0],
                coeffs: vec![1.0],
                rhs: f64::NAN,
            }],
            meta: crate::moment::SdpMeta {
                n: 1,
                t: 1,
                half_degrees: vec![],
            },
            structure: st,
        };
        let result = solve(&problem, &SolverSettings::default());
        assert_eq!(result.status, SolverStatus::Diverged);
    }

    #[test]
    fn concurrent_solves_match_serial_bitwise() {
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        let serial = solve(&sdp, &SolverSettings::default());
        let handles: Vec<_> = (0..2)
            .map(|_| {
                let sdp = sdp.clone();
                std::thread::spawn(move || solve(&sdp, &SolverSettings::default()))
            })
            .collect();
        for handle in handles {
            let parallel = handle.join().unwrap();
            assert_eq!(parallel.iterations, serial.iterations);
            for (x, y) in parallel.y.iter().zip(serial.y.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn trace_rows_are_emitted() {
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        let mut rows = Vec::new();
        let result = solve_with_trace(&sdp, &SolverSettings::default(), Some(&mut rows));
        assert_eq!(rows.len(), result.iterations);
        assert!(rows.last().unwrap().objective.is_finite());
    }
}
