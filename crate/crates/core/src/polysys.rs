//! Sparse multivariate polynomials over the reals and construction of the
//! power-sum system `q_k(x) = p_k(A x) - p_k(y)` by multinomial expansion.
//!
//! Monomials are ordered graded-lexicographically everywhere: lower total
//! degree first, and within one degree the exponent vector that is
//! lexicographically larger comes first (so `x1` precedes `x2`, `x1^2`
//! precedes `x1 x2`). This fixes iteration order, debug output, and the
//! moment-basis convention downstream.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::instance::power_sum;

/// Largest exponent for which multinomial coefficients are computed with
/// exact native integer arithmetic.
pub const MAX_EXPANSION_DEGREE: u32 = 12;

/// Exponent vector of one monomial; `Ord` is the graded-lex order used
/// across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn zeros(n: usize) -> Self {
        Exponents(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Evaluates the monomial `x^alpha` at a point.
    pub fn eval(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(point.iter())
            .map(|(&e, &x)| if e == 0 { 1.0 } else { x.powi(e as i32) })
            .product()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            // within one degree block, lexicographically larger exponents first
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: exponent vector -> nonzero coefficient.
///
/// The term map never stores an exact zero, so the zero polynomial has an
/// empty map and degree 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponents, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Merges a term list, dropping coefficients that cancel to exactly zero.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponents, f64)>) -> Self {
        let mut p = Polynomial::zero(n);
        for (alpha, c) in terms {
            p.add_term(alpha, c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: Exponents, c: f64) {
        debug_assert_eq!(alpha.0.len(), self.n);
        if c == 0.0 {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = *o.get() + c;
                if merged == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .next_back()
            .map(|(alpha, _)| alpha.degree())
            .unwrap_or(0)
    }

    pub fn coefficient(&self, alpha: &Exponents) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    /// Evaluates at a point, accumulating terms in graded-lex order so the
    /// result is reproducible across runs.
    pub fn evaluate(&self, point: &[f64]) -> f64 {
        assert_eq!(
            point.len(),
            self.n,
            "evaluation point has wrong dimension"
        );
        self.terms
            .iter()
            .map(|(alpha, &c)| c * alpha.eval(point))
            .sum()
    }
}

impl std::fmt::Display for Polynomial {
    /// One `coeff * x1^a1 x2^a2 ...` line per term, graded-lex order.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (alpha, c) in &self.terms {
            if alpha.degree() == 0 {
                writeln!(f, "{c}")?;
            } else {
                write!(f, "{c} *")?;
                for (j, &e) in alpha.0.iter().enumerate() {
                    if e == 1 {
                        write!(f, " x{}", j + 1)?;
                    } else if e > 1 {
                        write!(f, " x{}^{}", j + 1, e)?;
                    }
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Exact multinomial coefficient `k! / (alpha_1! ... alpha_n!)` computed as
/// a product of binomials, so every intermediate value fits in `u64` for
/// `k <= MAX_EXPANSION_DEGREE`.
fn multinomial(alpha: &[u32]) -> u64 {
    let mut rem: u32 = alpha.iter().sum();
    let mut result: u64 = 1;
    for &a in alpha {
        result *= binomial(rem, a);
        rem -= a;
    }
    result
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k.min(n));
    let mut num: u64 = 1;
    let mut den: u64 = 1;
    for i in 0..k {
        num *= (n - i) as u64;
        den *= (i + 1) as u64;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Expands `(a_1 x_1 + ... + a_n x_n)^k` by the multinomial theorem.
///
/// Visits exactly `binom(n+k-1, k)` candidate exponent vectors; terms whose
/// coefficient vanishes (because some `a_j = 0`) are dropped.
pub fn expand_linear_form_power(a_row: &[f64], k: u32) -> Polynomial {
    assert!(k >= 1, "exponent must be at least 1");
    assert!(
        k <= MAX_EXPANSION_DEGREE,
        "exponent {k} exceeds the exact-arithmetic bound {MAX_EXPANSION_DEGREE}"
    );
    let n = a_row.len();
    let mut poly = Polynomial::zero(n);
    let mut alpha = vec![0u32; n];
    expand_rec(a_row, k, 0, &mut alpha, &mut poly);
    poly
}

fn expand_rec(a_row: &[f64], rem: u32, j: usize, alpha: &mut Vec<u32>, out: &mut Polynomial) {
    let n = a_row.len();
    if j == n - 1 {
        alpha[j] = rem;
        let mono: f64 = alpha
            .iter()
            .zip(a_row.iter())
            .map(|(&e, &a)| if e == 0 { 1.0 } else { a.powi(e as i32) })
            .product();
        if mono != 0.0 {
            out.add_term(Exponents(alpha.clone()), multinomial(alpha) as f64 * mono);
        }
        alpha[j] = 0;
        return;
    }
    for e in 0..=rem {
        alpha[j] = e;
        expand_rec(a_row, rem - e, j + 1, alpha, out);
    }
    alpha[j] = 0;
}

/// Builds the power-sum system `[q_1, ..., q_count]` with
/// `q_k(x) = p_k(A x) - p_k(y)`, merging coefficients exactly.
///
/// The default downstream choice is `count = n + 1`, the smallest system
/// with a unique solution for generic data.
pub fn build_system(a: &DMatrix<f64>, y: &[f64], count: usize) -> Result<Vec<Polynomial>> {
    assert!(count >= 1, "system needs at least one polynomial");
    let (m, n) = a.shape();
    if count > m {
        return Err(Error::CountExceedsMeasurements { count, m });
    }
    if y.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: y.len(),
        });
    }
    let mut system = Vec::with_capacity(count);
    for k in 1..=count as u32 {
        let mut q = Polynomial::zero(n);
        for i in 0..m {
            let row: Vec<f64> = (0..n).map(|j| a[(i, j)]).collect();
            for (alpha, c) in expand_linear_form_power(&row, k).terms {
                q.add_term(alpha.clone(), c);
            }
        }
        q.add_term(Exponents::zeros(n), -power_sum(k, y));
        system.push(q);
    }
    Ok(system)
}
