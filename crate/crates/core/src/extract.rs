//! Recovery of the candidate solution from a (near-)rank-one moment matrix.
//!
//! For a symmetric PSD matrix the leading singular vector and the leading
//! eigenvector coincide, so the first-column-of-U recipe reduces to one
//! symmetric eigendecomposition: take the dominant eigenvector `v` of the
//! PSD-projected matrix and normalize by its constant-monomial coordinate,
//! `xi_k = v[k] / v[0]` for `k = 1..=n`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::project_psd;

/// Threshold below which the constant-monomial coordinate counts as zero
/// and normalization is refused.
const LEADING_ENTRY_REL: f64 = 1e-8;

/// Spectral evidence that the moment matrix really had rank one.
#[derive(Debug, Clone, Serialize)]
pub struct ExtractionCertificate {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `lambda2 / lambda1`; 0 for a 1x1 matrix, 1 when the top eigenvalue
    /// is not isolated (or the matrix vanished).
    pub ratio: f64,
    /// Constant-monomial coordinate of the dominant eigenvector before
    /// normalization, sign fixed to be positive.
    pub leading_entry: f64,
}

impl ExtractionCertificate {
    pub fn is_rank_one(&self, rank_tol: f64) -> bool {
        self.ratio <= rank_tol
    }
}

/// Extracts `xi` from a moment matrix whose basis is graded-lex ordered
/// (constant monomial first, then `x1..xn`).
///
/// Extraction proceeds regardless of the eigenvalue ratio; callers decide
/// acceptability from the certificate. A numerically zero leading entry is
/// an error: the normalization the recipe divides by is then undefined and
/// the relaxation failed.
pub fn extract_solution(
    m: &DMatrix<f64>,
    n: usize,
) -> Result<(DVector<f64>, ExtractionCertificate)> {
    assert!(
        m.nrows() == m.ncols() && m.nrows() > n,
        "moment matrix must be square with at least n + 1 rows"
    );
    let psd = project_psd(m)?;
    let eig = psd.symmetric_eigen();

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let lambda1 = eig.eigenvalues[order[0]];
    let lambda2 = if order.len() > 1 {
        eig.eigenvalues[order[1]]
    } else {
        0.0
    };
    let ratio = if lambda1 > 0.0 {
        (lambda2 / lambda1).clamp(0.0, 1.0)
    } else {
        1.0
    };

    let mut v = eig.eigenvectors.column(order[0]).into_owned();
    if v[0] < 0.0 {
        v = -v;
    }
    if v[0].abs() < LEADING_ENTRY_REL * v.amax() {
        return Err(Error::LeadingEntryDegenerate);
    }

    let xi = DVector::from_fn(n, |k, _| v[k + 1] / v[0]);
    Ok((
        xi,
        ExtractionCertificate {
            lambda1,
            lambda2,
            ratio,
            leading_entry: v[0],
        },
    ))
}
