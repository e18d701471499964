//! Permutations of `{1..m}` and their action on measurement vectors.
//!
//! The group action is fixed once for the whole toolkit:
//! `apply(pi, v)[i] = v[pi^-1(i)]`, i.e. the entry at source position `j`
//! is moved to target position `pi(j)`. Storage is 0-based; all I/O
//! (JSON, display) is 1-based one-line notation `[pi(1), ..., pi(m)]`.

use rand_chacha::rand_core::Rng;

use crate::error::{Error, Result};

/// A bijection on `{1..m}`, stored 0-based as `j -> targets[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    targets: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            targets: (0..m).collect(),
        }
    }

    /// Builds a permutation from 1-based one-line notation, validating
    /// that every index in `1..=m` appears exactly once.
    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        let m = map.len();
        let mut seen = vec![false; m];
        let mut targets = Vec::with_capacity(m);
        for &v in map {
            if v < 1 || v > m || seen[v - 1] {
                return Err(Error::NotAPermutation { len: m });
            }
            seen[v - 1] = true;
            targets.push(v - 1);
        }
        Ok(Permutation { targets })
    }

    /// One-line notation with 1-based indices, the external format.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.targets.iter().map(|&t| t + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.targets.iter().enumerate().all(|(j, &t)| j == t)
    }

    /// 0-based target of 0-based source index `j`.
    pub fn target(&self, j: usize) -> usize {
        self.targets[j]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.targets.len()];
        for (j, &t) in self.targets.iter().enumerate() {
            inv[t] = j;
        }
        Permutation { targets: inv }
    }

    /// Applies the group action: output position `pi(j)` receives `v[j]`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.targets.len() {
            return Err(Error::LengthMismatch {
                expected: self.targets.len(),
                got: v.len(),
            });
        }
        let mut out = vec![0.0; v.len()];
        for (j, &t) in self.targets.iter().enumerate() {
            out[t] = v[j];
        }
        Ok(out)
    }

    /// Uniform random permutation via Fisher-Yates on the given stream.
    pub fn random(m: usize, rng: &mut impl Rng) -> Self {
        let mut targets: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            // next_u64 % (i+1) has negligible modulo bias for desk-scale m
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            targets.swap(i, j);
        }
        Permutation { targets }
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, &t) in self.targets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", t + 1)?;
        }
        write!(f, "]")
    }
}
