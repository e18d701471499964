//! Brute-force ground truth: enumerate every permutation of the
//! measurements, solve the aligned least-squares problem for each, and
//! report the best alignment together with an empirical uniqueness gap.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::refine::LeastSquaresSolver;

/// Default enumeration cap; 8! = 40320 least-squares solves.
pub const DEFAULT_MAX_M: usize = 8;

/// Residuals within this relative slack of the winner count as ties.
const TIE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    /// Lexicographically smallest permutation among the best alignments.
    pub pi_best: Vec<usize>,
    pub xi_best: Vec<f64>,
    pub residual_best: f64,
    /// Best residual among permutations whose aligned vectors differ from
    /// the winner's: the uniqueness gap is `residual_second - residual_best`.
    pub residual_second: f64,
    pub evaluated: usize,
    /// Set when a different alignment class ties with the winner.
    pub tied: bool,
}

impl OracleResult {
    pub fn uniqueness_gap(&self) -> f64 {
        self.residual_second - self.residual_best
    }

    pub fn best_permutation(&self) -> Permutation {
        Permutation::from_one_based(&self.pi_best).expect("stored permutation is valid")
    }
}

/// Exhaustive search over all `m!` permutations in lexicographic order.
///
/// Permutations that produce identical aligned vectors (possible only with
/// repeated entries in `y`) belong to one equivalence class; the runner-up
/// residual is taken over classes other than the winner's.
pub fn brute_force(a: &DMatrix<f64>, y: &[f64], max_m: usize) -> Result<OracleResult> {
    let m = a.nrows();
    if m > max_m {
        return Err(Error::TooManyPermutations { m, max_m });
    }
    if y.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: y.len(),
        });
    }
    let solver = LeastSquaresSolver::new(a)?;

    struct Best {
        targets: Vec<usize>,
        xi: DVector<f64>,
        residual: f64,
        aligned: Vec<f64>,
    }

    let mut targets: Vec<usize> = (1..=m).collect();
    let mut evaluated = 0usize;
    let mut best: Option<Best> = None;
    let mut second = f64::INFINITY;

    loop {
        evaluated += 1;
        let pi = Permutation::from_one_based(&targets)?;
        let aligned = pi.apply(y)?;
        let rhs = DVector::from_vec(aligned.clone());
        let (xi, residual) = solver.solve(&rhs);

        match &best {
            None => {
                best = Some(Best {
                    targets: targets.clone(),
                    xi,
                    residual,
                    aligned,
                });
            }
            Some(b) => {
                // residuals within the tie slack keep the earlier,
                // lexicographically smaller permutation
                if residual < b.residual - TIE_REL * b.residual.max(1.0) {
                    let old = best.take().expect("checked above");
                    if old.aligned != aligned {
                        second = second.min(old.residual);
                    }
                    best = Some(Best {
                        targets: targets.clone(),
                        xi,
                        residual,
                        aligned,
                    });
                } else if aligned != b.aligned {
                    second = second.min(residual);
                }
            }
        }

        if !next_permutation(&mut targets) {
            break;
        }
    }

    let best = best.expect("m >= 1 yields at least one permutation");
    let tied = second.is_finite()
        && (second - best.residual) <= TIE_REL * best.residual.max(1.0);
    Ok(OracleResult {
        pi_best: best.targets,
        xi_best: best.xi.as_slice().to_vec(),
        residual_best: best.residual,
        residual_second: second,
        evaluated,
        tied,
    })
}

/// Advances to the next permutation in lexicographic order; returns false
/// after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
