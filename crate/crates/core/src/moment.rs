//! Monomial bases, truncated moment matrices, localizing constraints, and
//! assembly of the trace-minimization SDP from a polynomial system.
//!
//! A moment sequence `y` is indexed by the graded-lex basis of monomials of
//! degree `<= 2t`; the moment matrix of order `t` has entry `(k, l)` equal
//! to `y[alpha_k + alpha_l]`. Vanishing of the localizing matrices of the
//! system polynomials encodes the root conditions, and minimizing the trace
//! of the moment matrix steers the feasible set toward the rank-one
//! completion corresponding to the unique real root.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polysys::{Exponents, Polynomial};

/// Relaxation order used by the end-to-end pipeline: `ceil((n+1)/2)`, the
/// half-degree of the highest polynomial in the default system.
pub fn default_relaxation_order(n: usize) -> usize {
    (n + 2) / 2
}

/// All monomials in `n` variables of total degree at most `t`, graded-lex
/// ordered, with the reverse position lookup.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub n: usize,
    pub t: usize,
    list: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, t: usize) -> Self {
        assert!(n >= 1);
        let mut list = Vec::new();
        let mut alpha = vec![0u32; n];
        for deg in 0..=t as u32 {
            enumerate_degree(n, deg, 0, &mut alpha, &mut list);
        }
        list.sort();
        let index = list
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        MonomialBasis { n, t, list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Exponents {
        &self.list[i]
    }

    pub fn monomials(&self) -> &[Exponents] {
        &self.list
    }

    pub fn position(&self, alpha: &Exponents) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// Vector of monomial values `(v^alpha)` over the basis; for the full
    /// degree-`2t` basis this is the moment sequence of the Dirac measure
    /// at `v`, for the degree-`t` basis it is the rank-one factor.
    pub fn eval_monomials(&self, v: &[f64]) -> DVector<f64> {
        assert_eq!(v.len(), self.n);
        DVector::from_iterator(self.list.len(), self.list.iter().map(|a| a.eval(v)))
    }
}

fn enumerate_degree(n: usize, rem: u32, j: usize, alpha: &mut Vec<u32>, out: &mut Vec<Exponents>) {
    if j == n - 1 {
        alpha[j] = rem;
        out.push(Exponents(alpha.clone()));
        alpha[j] = 0;
        return;
    }
    for e in 0..=rem {
        alpha[j] = e;
        enumerate_degree(n, rem - e, j + 1, alpha, out);
    }
    alpha[j] = 0;
}

/// Convenience constructor mirroring the basis operation of the toolkit.
pub fn basis(n: usize, t: usize) -> MonomialBasis {
    MonomialBasis::new(n, t)
}

/// Index maps tying moment-matrix positions to the flat moment sequence.
#[derive(Debug, Clone)]
pub struct MomentStructure {
    pub n: usize,
    pub t: usize,
    pub basis_t: MonomialBasis,
    pub basis_2t: MonomialBasis,
    /// Row-major `(k, l) ->` sequence index of `alpha_k + alpha_l`.
    pos_to_seq: Vec<usize>,
    /// Per sequence index: number of matrix positions mapping to it.
    multiplicity: Vec<usize>,
}

impl MomentStructure {
    pub fn new(n: usize, t: usize) -> Self {
        let basis_t = MonomialBasis::new(n, t);
        let basis_2t = MonomialBasis::new(n, 2 * t);
        let size = basis_t.len();
        let mut pos_to_seq = vec![0usize; size * size];
        let mut multiplicity = vec![0usize; basis_2t.len()];
        for k in 0..size {
            for l in 0..size {
                let gamma = basis_t.monomial(k).add(basis_t.monomial(l));
                let idx = basis_2t
                    .position(&gamma)
                    .expect("sum of two degree-<=t monomials lies in the 2t basis");
                pos_to_seq[k * size + l] = idx;
                multiplicity[idx] += 1;
            }
        }
        // every moment of degree <= 2t appears somewhere in the matrix
        debug_assert!(multiplicity.iter().all(|&c| c > 0));
        MomentStructure {
            n,
            t,
            basis_t,
            basis_2t,
            pos_to_seq,
            multiplicity,
        }
    }

    /// Side length of the moment matrix, `binom(n+t, t)`.
    pub fn size(&self) -> usize {
        self.basis_t.len()
    }

    /// Length of the moment sequence, `binom(n+2t, 2t)`.
    pub fn seq_len(&self) -> usize {
        self.basis_2t.len()
    }

    pub fn seq_index(&self, k: usize, l: usize) -> usize {
        self.pos_to_seq[k * self.size() + l]
    }

    pub fn multiplicity(&self) -> &[usize] {
        &self.multiplicity
    }

    /// Assembles the order-`t` moment matrix of a sequence. Symmetric by
    /// construction: positions `(k,l)` and `(l,k)` read the same entry.
    pub fn moment_matrix(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        if y.len() != self.seq_len() {
            return Err(Error::SequenceLengthMismatch {
                expected: self.seq_len(),
                got: y.len(),
            });
        }
        let size = self.size();
        Ok(DMatrix::from_fn(size, size, |k, l| {
            y[self.pos_to_seq[k * size + l]]
        }))
    }

    /// Adjoint-style pull-back of a symmetric matrix to sequence space:
    /// entry `gamma` is the average of `s` over all positions whose
    /// monomials sum to `gamma`.
    pub fn pull_back(&self, s: &DMatrix<f64>) -> Vec<f64> {
        let size = self.size();
        let mut acc = vec![0.0; self.seq_len()];
        for k in 0..size {
            for l in 0..size {
                acc[self.pos_to_seq[k * size + l]] += s[(k, l)];
            }
        }
        for (a, &c) in acc.iter_mut().zip(self.multiplicity.iter()) {
            *a /= c as f64;
        }
        acc
    }

    /// Moment sequence of the Dirac measure at `v`: `y_alpha = v^alpha`.
    pub fn dirac_sequence(&self, v: &[f64]) -> Vec<f64> {
        self.basis_2t.eval_monomials(v).as_slice().to_vec()
    }
}

/// One sparse linear equality `sum_i coeffs[i] * y[indices[i]] = rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct EqRow {
    pub indices: Vec<usize>,
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl EqRow {
    pub fn evaluate(&self, y: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(self.coeffs.iter())
            .map(|(&i, &c)| c * y[i])
            .sum::<f64>()
            - self.rhs
    }

    /// Scales coefficients and rhs so the largest coefficient magnitude
    /// is one. Power-sum coefficients grow like `|A|^k`; unscaled rows
    /// stall first-order solvers.
    fn normalized(mut self) -> Self {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max > 0.0 && max != 1.0 {
            for c in &mut self.coeffs {
                *c /= max;
            }
            self.rhs /= max;
        }
        self
    }

    fn dedup_key(&self) -> (Vec<usize>, Vec<u64>, u64) {
        (
            self.indices.clone(),
            self.coeffs.iter().map(|c| c.to_bits()).collect(),
            self.rhs.to_bits(),
        )
    }
}

/// Equality rows expressing that the localizing matrix of `g` vanishes:
/// one row per unordered position pair `(k, l)` over the degree `t - d`
/// basis, where `d = ceil(deg g / 2)`. The row for `(k, l)` depends only on
/// `alpha_k + alpha_l`, so symmetric duplicates are omitted here and exact
/// duplicates are merged later during assembly.
pub fn localizing_rows(g: &Polynomial, structure: &MomentStructure) -> Result<Vec<EqRow>> {
    let d = (g.degree() as usize).div_ceil(2);
    if d > structure.t {
        return Err(Error::OrderTooSmall { d, t: structure.t });
    }
    let low_basis = MonomialBasis::new(structure.n, structure.t - d);
    let mut rows = Vec::new();
    for k in 0..low_basis.len() {
        for l in k..low_basis.len() {
            let beta = low_basis.monomial(k).add(low_basis.monomial(l));
            let mut indices = Vec::with_capacity(g.num_terms());
            let mut coeffs = Vec::with_capacity(g.num_terms());
            for (alpha, c) in g.terms() {
                let idx = structure
                    .basis_2t
                    .position(&alpha.add(&beta))
                    .expect("deg(alpha) + 2(t - d) <= 2t");
                indices.push(idx);
                coeffs.push(c);
            }
            // alpha -> alpha + beta is injective, indices are distinct;
            // sort for a canonical sparse pattern
            let mut order: Vec<usize> = (0..indices.len()).collect();
            order.sort_by_key(|&i| indices[i]);
            rows.push(EqRow {
                indices: order.iter().map(|&i| indices[i]).collect(),
                coeffs: order.iter().map(|&i| coeffs[i]).collect(),
                rhs: 0.0,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct SdpMeta {
    pub n: usize,
    pub t: usize,
    /// Half-degrees `d_j = ceil(deg g_j / 2)` of the system polynomials.
    pub half_degrees: Vec<usize>,
}

/// Linear-algebra form of the relaxation: minimize `objective . y` subject
/// to the equality rows and positive semidefiniteness of the order-`t`
/// moment matrix of `y`.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub n_vars: usize,
    /// Trace of the moment matrix as a linear functional of the sequence.
    pub objective: Vec<f64>,
    /// Deduplicated, max-abs-normalized equality rows; the first row is the
    /// normalization `y_0 = 1` and is the only row with nonzero rhs.
    pub rows: Vec<EqRow>,
    pub structure: MomentStructure,
    pub meta: SdpMeta,
}

impl SdpProblem {
    /// Relative residual of the equality system at `y`.
    pub fn eq_residual(&self, y: &[f64]) -> f64 {
        let sq: f64 = self.rows.iter().map(|r| r.evaluate(y).powi(2)).sum();
        let rhs_norm: f64 = self
            .rows
            .iter()
            .map(|r| r.rhs * r.rhs)
            .sum::<f64>()
            .sqrt();
        sq.sqrt() / rhs_norm.max(1.0)
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.objective
            .iter()
            .zip(y.iter())
            .map(|(c, v)| c * v)
            .sum()
    }

    /// Solver-independent JSON dump for debugging.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            n_vars: usize,
            objective: &'a [f64],
            rows: &'a [EqRow],
            meta: &'a SdpMeta,
        }
        serde_json::to_string_pretty(&Dump {
            n_vars: self.n_vars,
            objective: &self.objective,
            rows: &self.rows,
            meta: &self.meta,
        })
        .expect("sdp dump serialization cannot fail")
    }
}

/// Assembles the trace-minimization relaxation of order `t` for the given
/// polynomial system.
pub fn assemble_sdp(system: &[Polynomial], n: usize, t: usize) -> Result<SdpProblem> {
    assert!(t >= 1, "relaxation order must be at least 1");
    let structure = MomentStructure::new(n, t);

    let mut objective = vec![0.0; structure.seq_len()];
    for k in 0..structure.size() {
        objective[structure.seq_index(k, k)] += 1.0;
    }

    let mut rows = vec![EqRow {
        indices: vec![0],
        coeffs: vec![1.0],
        rhs: 1.0,
    }];
    let mut half_degrees = Vec::with_capacity(system.len());
    let mut seen = std::collections::HashSet::new();
    seen.insert(rows[0].dedup_key());
    for g in system {
        half_degrees.push((g.degree() as usize).div_ceil(2));
        for row in localizing_rows(g, &structure)? {
            let row = row.normalized();
            if seen.insert(row.dedup_key()) {
                rows.push(row);
            }
        }
    }

    Ok(SdpProblem {
        n_vars: structure.seq_len(),
        objective,
        rows,
        structure,
        meta: SdpMeta {
            n,
            t,
            half_degrees,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::{build_system, expand_linear_form_power};
    use nalgebra::DMatrix;

    fn binom(n: usize, k: usize) -> usize {
        let k = k.min(n - k);
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn basis_sizes_match_binomials() {
        assert_eq!(basis(3, 2).len(), 10);
        assert_eq!(basis(4, 3).len(), 35);
        assert_eq!(basis(5, 3).len(), 56);
        assert_eq!(basis(6, 4).len(), 210);
        for n in 1..=8 {
            for t in 0..=5 {
                assert_eq!(basis(n, t).len(), binom(n + t, t));
            }
        }
    }

    #[test]
    fn basis_layout_convention() {
        let b = basis(2, 1);
        assert_eq!(b.len(), 3);
        assert_eq!(b.monomial(0).0, vec![0, 0]);
        assert_eq!(b.monomial(1).0, vec![1, 0]);
        assert_eq!(b.monomial(2).0, vec![0, 1]);
        // degree-1 monomials sit at positions 1..=n for any n
        let b = basis(5, 3);
        assert_eq!(b.monomial(0).0, vec![0; 5]);
        for j in 0..5 {
            let mut e = vec![0u32; 5];
            e[j] = 1;
            assert_eq!(b.monomial(1 + j).0, e);
        }
    }

    #[test]
    fn default_order_examples() {
        assert_eq!(default_relaxation_order(2), 2);
        assert_eq!(default_relaxation_order(3), 2);
        assert_eq!(default_relaxation_order(4), 3);
        assert_eq!(default_relaxation_order(5), 3);
        assert_eq!(default_relaxation_order(6), 4);
    }

    #[test]
    fn dirac_moment_matrix_is_rank_one_factorization() {
        let st = MomentStructure::new(2, 1);
        let y = st.dirac_sequence(&[-1.0, -2.0]);
        let m = st.moment_matrix(&y).unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, -1.0, -2.0, -1.0, 1.0, 2.0, -2.0, 2.0, 4.0]);
        assert_eq!(m, expected);
        let zeta = st.basis_t.eval_monomials(&[-1.0, -2.0]);
        let outer = &zeta * zeta.transpose();
        assert!((m - outer).amax() < 1e-14);
    }

    #[test]
    fn moment_matrix_edge_cases() {
        let st = MomentStructure::new(1, 1);
        let mut y = vec![0.0; st.seq_len()];
        y[0] = 1.0;
        let m = st.moment_matrix(&y).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert!(st.moment_matrix(&[1.0]).is_err());
    }

    #[test]
    fn moment_matrix_is_bit_symmetric() {
        let st = MomentStructure::new(3, 2);
        let y: Vec<f64> = (0..st.seq_len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let m = st.moment_matrix(&y).unwrap();
        for k in 0..st.size() {
            for l in 0..st.size() {
                assert_eq!(m[(k, l)].to_bits(), m[(l, k)].to_bits());
            }
        }
    }

    #[test]
    fn pull_back_inverts_moment_matrix() {
        let st = MomentStructure::new(2, 2);
        let y: Vec<f64> = (0..st.seq_len()).map(|i| (i as f64 + 1.0).recip()).collect();
        let m = st.moment_matrix(&y).unwrap();
        let back = st.pull_back(&m);
        for (a, b) in y.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn single_constraint_single_row() {
        // g = x1 - 1 at n = 1, t = 1: one row  -y0 + y1 = 0
        let g = Polynomial::from_terms(
            1,
            [
                (Exponents(vec![1]), 1.0),
                (Exponents(vec![0]), -1.0),
            ],
        );
        let st = MomentStructure::new(1, 1);
        let rows = localizing_rows(&g, &st).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].indices, vec![0, 1]);
        assert_eq!(rows[0].coeffs, vec![-1.0, 1.0]);
        assert_eq!(rows[0].rhs, 0.0);
    }

    #[test]
    fn localizing_row_count_for_degree_one() {
        // q1 of the worked example at t = 2: pairs over basis(2,1) -> 6 rows
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let st = MomentStructure::new(2, 2);
        let rows = localizing_rows(&q[0], &st).unwrap();
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn localizing_rows_vanish_on_dirac_at_root() {
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let st = MomentStructure::new(2, 2);
        let y = st.dirac_sequence(&[-1.0, -2.0]);
        for g in &q {
            for row in localizing_rows(g, &st).unwrap() {
                let scale = row.coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
                assert!(row.evaluate(&y).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn order_too_small_is_rejected() {
        let g = Polynomial::from_terms(1, [(Exponents(vec![3]), 1.0)]);
        let st = MomentStructure::new(1, 1);
        assert!(matches!(
            localizing_rows(&g, &st),
            Err(Error::OrderTooSmall { d: 2, t: 1 })
        ));
    }

    #[test]
    fn assembled_problem_shape_for_worked_example() {
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        assert_eq!(sdp.n_vars, 15);
        assert_eq!(sdp.structure.size(), 6);
        // exactly one normalization row, everything else homogeneous
        assert_eq!(sdp.rows[0].rhs, 1.0);
        assert!(sdp.rows[1..].iter().all(|r| r.rhs == 0.0));
        // rows are unit max-abs scaled
        for row in &sdp.rows[1..] {
            let max = row.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            assert!((max - 1.0).abs() < 1e-15);
        }
        // no bitwise duplicates kept
        let mut keys: Vec<_> = sdp.rows.iter().map(|r| r.dedup_key()).collect();
        let before = keys.len();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), before);
    }

    #[test]
    fn objective_encodes_trace() {
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        let v = [0.3, -0.7];
        let y = sdp.structure.dirac_sequence(&v);
        let m = sdp.structure.moment_matrix(&y).unwrap();
        assert!((sdp.objective_value(&y) - m.trace()).abs() < 1e-12);
        // Dirac at the origin has trace exactly 1
        let y0 = sdp.structure.dirac_sequence(&[0.0, 0.0]);
        assert!((sdp.objective_value(&y0) - 1.0).abs() < 1e-15);
        // and in general 1 + |v|^2 + higher even moments
        let low = 1.0 + v.iter().map(|x| x * x).sum::<f64>();
        assert!(sdp.objective_value(&y) >= low);
    }

    #[test]
    fn dirac_at_truth_is_feasible() {
        for seed in 0..10 {
            let inst = crate::instance::generate_instance(3, 8, None, seed).unwrap();
            let truth = inst.truth.as_ref().unwrap();
            let q = build_system(&inst.a, inst.y.as_slice(), 4).unwrap();
            let sdp = assemble_sdp(&q, 3, 2).unwrap();
            let y = sdp.structure.dirac_sequence(truth.xi_star.as_slice());
            for row in &sdp.rows {
                assert!(
                    row.evaluate(&y).abs() <= 1e-8,
                    "row residual {} too large",
                    row.evaluate(&y)
                );
            }
        }
    }

    #[test]
    fn dedup_preserves_satisfaction_status() {
        use rand_chacha::rand_core::{Rng, SeedableRng};
        let a = crate::selfcheck::reference_instance().a;
        let yv = [-5.0, -10.0, 2.0, 4.0];
        let q = build_system(&a, &yv, 3).unwrap();
        // t = 3 so that distinct position pairs share monomial sums and
        // genuine duplicate rows appear
        let st = MomentStructure::new(2, 3);
        let mut raw = vec![EqRow {
            indices: vec![0],
            coeffs: vec![1.0],
            rhs: 1.0,
        }];
        for g in &q {
            raw.extend(
                localizing_rows(g, &st)
                    .unwrap()
                    .into_iter()
                    .map(|r| r.normalized()),
            );
        }
        let sdp = assemble_sdp(&q, 2, 3).unwrap();
        assert!(sdp.rows.len() < raw.len());

        let satisfied = |rows: &[EqRow], y: &[f64]| -> bool {
            rows.iter().all(|r| r.evaluate(y).abs() <= 1e-9)
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for case in 0..50 {
            let y: Vec<f64> = if case % 10 == 0 {
                st.dirac_sequence(&[-1.0, -2.0])
            } else {
                (0..st.seq_len())
                    .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
                    .collect()
            };
            assert_eq!(satisfied(&raw, &y), satisfied(&sdp.rows, &y));
        }
    }

    #[test]
    fn sdp_json_dump_parses() {
        let a = crate::selfcheck::reference_instance().a;
        let q = build_system(&a, &[-5.0, -10.0, 2.0, 4.0], 3).unwrap();
        let sdp = assemble_sdp(&q, 2, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&sdp.to_json()).unwrap();
        assert_eq!(v["n_vars"], 15);
        assert!(v["rows"].as_array().unwrap().len() == sdp.rows.len());
    }

    #[test]
    fn expansion_terms_fit_low_basis() {
        // sanity: expanding a degree-k form produces monomials the 2t basis holds
        let p = expand_linear_form_power(&[0.5, -2.0, 1.0], 4);
        let b = basis(3, 4);
        for (alpha, _) in p.terms() {
            assert!(b.position(alpha).is_some());
        }
    }
}
