//! Sorting-based refinement: recover the permutation by rank-matching the
//! coordinates of `A xi` against `y`, re-solve the aligned least-squares
//! problem, and iterate to a permutation fixed point.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Relative diagonal threshold for declaring the triangular factor singular.
const QR_RANK_REL: f64 = 1e-12;
/// Tolerance slack for the residual non-increase guard.
const RESIDUAL_GUARD_REL: f64 = 1e-12;

/// Permutation aligning `y` to the ordering of `z`: the position holding
/// the r-th smallest entry of `z` receives the r-th smallest entry of `y`.
/// Ties break by original index on both sides, so the result is stable.
pub fn sort_match_permutation(z: &[f64], y: &[f64]) -> Result<Permutation> {
    if z.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: y.len(),
        });
    }
    let rank_order = |v: &[f64]| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap().then(i.cmp(&j)));
        idx
    };
    let z_order = rank_order(z);
    let y_order = rank_order(y);
    // y[y_order[r]] must land at position z_order[r]
    let mut targets_one_based = vec![0usize; z.len()];
    for r in 0..z.len() {
        targets_one_based[y_order[r]] = z_order[r] + 1;
    }
    Permutation::from_one_based(&targets_one_based)
}

/// Householder-QR least squares with the factorization reusable across
/// right-hand sides; `A` must have full column rank.
pub struct LeastSquaresSolver {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    a: DMatrix<f64>,
}

impl LeastSquaresSolver {
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let qr = a.clone().qr();
        let q = qr.q();
        let r = qr.r();
        let diag_max = (0..r.ncols()).fold(0.0f64, |m, i| m.max(r[(i, i)].abs()));
        if diag_max == 0.0
            || (0..r.ncols()).any(|i| r[(i, i)].abs() < QR_RANK_REL * diag_max)
        {
            return Err(Error::RankDeficient);
        }
        Ok(LeastSquaresSolver {
            q,
            r,
            a: a.clone(),
        })
    }

    /// Returns the minimizer of `|A xi - rhs|` and the residual norm.
    pub fn solve(&self, rhs: &DVector<f64>) -> (DVector<f64>, f64) {
        let qt_rhs = self.q.transpose() * rhs;
        let xi = self
            .r
            .solve_upper_triangular(&qt_rhs)
            .expect("diagonal checked at construction");
        let residual = (&self.a * &xi - rhs).norm();
        (xi, residual)
    }
}

/// Orthogonalization-based least squares, one shot.
pub fn least_squares(a: &DMatrix<f64>, y_aligned: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    if y_aligned.len() != a.nrows() {
        return Err(Error::LengthMismatch {
            expected: a.nrows(),
            got: y_aligned.len(),
        });
    }
    Ok(LeastSquaresSolver::new(a)?.solve(y_aligned))
}

#[derive(Debug, Clone)]
pub struct EmOutcome {
    pub xi: DVector<f64>,
    pub pi: Permutation,
    pub rounds: usize,
    pub converged: bool,
    pub residual: f64,
}

/// Alternates permutation recovery (sorting) and least squares starting
/// from `xi0`, until the permutation repeats or `max_rounds` is hit.
///
/// Round one alone reproduces the single-pass refinement; further rounds
/// can only decrease the residual, and a numerical increase beyond the
/// guard slack reverts to the previous iterate and reports non-convergence.
pub fn em_refine(
    a: &DMatrix<f64>,
    y: &[f64],
    xi0: &DVector<f64>,
    max_rounds: usize,
) -> Result<EmOutcome> {
    assert!(max_rounds >= 1);
    if y.len() != a.nrows() {
        return Err(Error::LengthMismatch {
            expected: a.nrows(),
            got: y.len(),
        });
    }
    let solver = LeastSquaresSolver::new(a)?;

    let mut pi = sort_match_permutation((a * xi0).as_slice(), y)?;
    let mut xi = xi0.clone();
    let mut residual = f64::INFINITY;
    let mut rounds = 0;
    let mut converged = false;

    while rounds < max_rounds {
        rounds += 1;
        let aligned = DVector::from_vec(pi.apply(y)?);
        let (xi_new, res_new) = solver.solve(&aligned);
        if res_new > residual + RESIDUAL_GUARD_REL * residual.max(1.0) {
            // should not happen; numerical safety
            rounds -= 1;
            break;
        }
        xi = xi_new;
        residual = res_new;
        let pi_next = sort_match_permutation((a * &xi).as_slice(), y)?;
        if pi_next == pi {
            converged = true;
            break;
        }
        pi = pi_next;
    }

    Ok(EmOutcome {
        xi,
        pi,
        rounds,
        converged,
        residual,
    })
}
