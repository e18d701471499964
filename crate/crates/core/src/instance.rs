//! Problem instances: data layout, random generation, the noise model,
//! and the error metrics used by the experiment harness.
//!
//! Randomness comes from a single named generator, `ChaCha8Rng`, seeded
//! with a `u64`. Gaussians are produced by the Box-Muller transform of
//! uniforms, so a seed pins every draw; determinism across platforms is
//! best-effort (the stream itself is specified, float rounding is not).

use nalgebra::{DMatrix, DVector};
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Relative threshold for the full-column-rank check on generated matrices.
const RANK_CHECK_REL: f64 = 1e-8;
/// Gaussian matrices essentially never fail the rank check; retry a few
/// times before giving up.
const RANK_CHECK_RETRIES: usize = 16;

/// Ground truth attached to generated instances.
#[derive(Debug, Clone)]
pub struct Truth {
    pub xi_star: DVector<f64>,
    pub pi_star: Permutation,
    /// Noise standard deviation (0 for clean data).
    pub sigma: f64,
    pub snr_db: Option<f64>,
}

/// One shuffled-sensing problem: a full-column-rank `m x n` matrix `A`
/// and an observed vector `y` holding a permuted (possibly noisy) copy
/// of `A xi*`.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub n: usize,
    pub m: usize,
    pub a: DMatrix<f64>,
    pub y: DVector<f64>,
    pub truth: Option<Truth>,
    pub seed: Option<u64>,
}

/// Error metrics for one solved instance.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub err_sdp: f64,
    pub err_em: f64,
    pub residual_ls: f64,
    pub rank_sequence: Vec<usize>,
}

/// k-th power sum of the entries of `v`.
///
/// Symmetric in the entries, hence invariant under any permutation of `v`;
/// this is what removes the unknown shuffle from the problem.
pub fn power_sum(k: u32, v: &[f64]) -> f64 {
    assert!(k >= 1, "power sums are defined here for k >= 1");
    assert!(!v.is_empty(), "power sum of an empty vector");
    v.iter().map(|&x| x.powi(k as i32)).sum()
}

/// Noise level for a target signal-to-noise ratio in decibels, under the
/// uniform(0,1) signal model: `sigma = sqrt(n / (3 * 10^(snr_db/10)))`.
pub fn sigma_from_snr(n: usize, snr_db: f64) -> f64 {
    assert!(snr_db.is_finite(), "snr_db must be finite");
    (n as f64 / (3.0 * 10f64.powf(snr_db / 10.0))).sqrt()
}

/// Relative 2-norm error `|xi* - xi_hat| / |xi*|`.
pub fn relative_error(xi_hat: &DVector<f64>, xi_star: &DVector<f64>) -> Result<f64> {
    if xi_hat.len() != xi_star.len() {
        return Err(Error::LengthMismatch {
            expected: xi_star.len(),
            got: xi_hat.len(),
        });
    }
    let denom = xi_star.norm();
    if denom == 0.0 {
        return Err(Error::ZeroGroundTruth);
    }
    Ok((xi_star - xi_hat).norm() / denom)
}

/// Standard-normal sampler: Box-Muller on uniforms from the given stream.
/// Draws two uniforms per pair of normals and caches the spare.
pub struct GaussianSource<R: Rng> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> GaussianSource<R> {
    pub fn new(rng: R) -> Self {
        GaussianSource { rng, spare: None }
    }

    fn uniform(&mut self) -> f64 {
        // 53 random bits mapped to [0, 1)
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let mut u1 = self.uniform();
        while u1 == 0.0 {
            u1 = self.uniform();
        }
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }
}

/// Draws a random instance: `A` with i.i.d. standard normal entries,
/// `xi*` uniform in (0,1), a uniform random shuffle, and optional additive
/// Gaussian noise at the requested SNR. Deterministic given the seed.
pub fn generate_instance(
    n: usize,
    m: usize,
    snr_db: Option<f64>,
    seed: u64,
) -> Result<ProblemInstance> {
    if n < 1 || m <= n {
        return Err(Error::InvalidDimensions { n, m });
    }
    let mut gauss = GaussianSource::new(ChaCha8Rng::seed_from_u64(seed));

    let mut a = DMatrix::zeros(m, n);
    let mut attempts = 0;
    loop {
        attempts += 1;
        for i in 0..m {
            for j in 0..n {
                a[(i, j)] = gauss.next_normal();
            }
        }
        if has_full_column_rank(&a) {
            break;
        }
        if attempts >= RANK_CHECK_RETRIES {
            return Err(Error::RankCheckFailed { attempts });
        }
    }

    let mut xi_star = DVector::zeros(n);
    for j in 0..n {
        let mut u = (gauss.rng_mut().next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        while u == 0.0 {
            u = (gauss.rng_mut().next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        }
        xi_star[j] = u;
    }

    let pi_star = Permutation::random(m, gauss.rng_mut());
    let clean = &a * &xi_star;
    let shuffled = pi_star.apply(clean.as_slice())?;

    let sigma = snr_db.map(|db| sigma_from_snr(n, db)).unwrap_or(0.0);
    let mut y = DVector::from_vec(shuffled);
    if sigma > 0.0 {
        for i in 0..m {
            y[i] += sigma * gauss.next_normal();
        }
    }

    Ok(ProblemInstance {
        n,
        m,
        a,
        y,
        truth: Some(Truth {
            xi_star,
            pi_star,
            sigma,
            snr_db,
        }),
        seed: Some(seed),
    })
}

fn has_full_column_rank(a: &DMatrix<f64>) -> bool {
    let svd = a.clone().svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    max > 0.0 && min > RANK_CHECK_REL * max
}

// ---------------------------------------------------------------------------
// JSON instance format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TruthWire {
    xi_star: Vec<f64>,
    pi_star: Vec<usize>,
    sigma: f64,
    snr_db: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    y: Vec<f64>,
    truth: Option<TruthWire>,
    seed: Option<u64>,
}

impl ProblemInstance {
    /// Serializes to the toolkit's instance JSON format
    /// (`A` as row-major nested arrays, `pi_star` 1-based).
    pub fn to_json(&self) -> String {
        let wire = InstanceWire {
            n: self.n,
            m: self.m,
            a: (0..self.m)
                .map(|i| (0..self.n).map(|j| self.a[(i, j)]).collect())
                .collect(),
            y: self.y.as_slice().to_vec(),
            truth: self.truth.as_ref().map(|t| TruthWire {
                xi_star: t.xi_star.as_slice().to_vec(),
                pi_star: t.pi_star.to_one_based(),
                sigma: t.sigma,
                snr_db: t.snr_db,
            }),
            seed: self.seed,
        };
        serde_json::to_string_pretty(&wire).expect("instance serialization cannot fail")
    }

    /// Parses and validates the instance JSON format.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: InstanceWire = serde_json::from_str(text)?;
        if wire.n < 1 || wire.m <= wire.n {
            return Err(Error::InvalidDimensions {
                n: wire.n,
                m: wire.m,
            });
        }
        if wire.a.len() != wire.m {
            return Err(Error::LengthMismatch {
                expected: wire.m,
                got: wire.a.len(),
            });
        }
        for row in &wire.a {
            if row.len() != wire.n {
                return Err(Error::LengthMismatch {
                    expected: wire.n,
                    got: row.len(),
                });
            }
        }
        if wire.y.len() != wire.m {
            return Err(Error::LengthMismatch {
                expected: wire.m,
                got: wire.y.len(),
            });
        }
        let a = DMatrix::from_fn(wire.m, wire.n, |i, j| wire.a[i][j]);
        let truth = match wire.truth {
            None => None,
            Some(t) => {
                if t.xi_star.len() != wire.n {
                    return Err(Error::LengthMismatch {
                        expected: wire.n,
                        got: t.xi_star.len(),
                    });
                }
                if t.pi_star.len() != wire.m {
                    return Err(Error::LengthMismatch {
                        expected: wire.m,
                        got: t.pi_star.len(),
                    });
                }
                Some(Truth {
                    xi_star: DVector::from_vec(t.xi_star),
                    pi_star: Permutation::from_one_based(&t.pi_star)?,
                    sigma: t.sigma,
                    snr_db: t.snr_db,
                })
            }
        };
        Ok(ProblemInstance {
            n: wire.n,
            m: wire.m,
            a,
            y: DVector::from_vec(wire.y),
            truth,
            seed: wire.seed,
        })
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read_json(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(v: &[f64]) -> Vec<f64> {
        let mut s = v.to_vec();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s
    }

    #[test]
    fn power_sums_of_worked_example() {
        let y = [-5.0, -10.0, 2.0, 4.0];
        assert_eq!(power_sum(1, &y), -9.0);
        assert_eq!(power_sum(2, &y), 145.0);
        assert_eq!(power_sum(3, &y), -1053.0);
        assert_eq!(power_sum(3, &[0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn sigma_snr_round_trip() {
        assert!((sigma_from_snr(3, 0.0) - 1.0).abs() < 1e-15);
        assert!((sigma_from_snr(4, 60.0) - 1.1547005383792515e-3).abs() < 1e-15);
        // independently: sqrt(6 / 3e5)
        assert!((sigma_from_snr(6, 50.0) - (6f64 / 3e5).sqrt()).abs() < 1e-18);
        for &(n, db) in &[(2usize, 10.0), (5, 37.5), (8, 80.0)] {
            let sigma = sigma_from_snr(n, db);
            let back = 10.0 * (n as f64 / (3.0 * sigma * sigma)).log10();
            assert!((back - db).abs() < 1e-10);
        }
    }

    #[test]
    fn relative_error_cases() {
        let star = DVector::from_vec(vec![3.0, 4.0]);
        assert_eq!(relative_error(&star, &star).unwrap(), 0.0);
        let hat = DVector::from_vec(vec![3.0, 4.5]);
        assert!((relative_error(&hat, &star).unwrap() - 0.1).abs() < 1e-15);
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        assert!((relative_error(&e2, &e1).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(relative_error(&e1, &DVector::zeros(2)).is_err());
    }

    #[test]
    fn clean_generation_is_a_consistent_shuffle() {
        let inst = generate_instance(2, 4, None, 7).unwrap();
        let truth = inst.truth.as_ref().unwrap();
        assert_eq!(truth.sigma, 0.0);
        let clean = &inst.a * &truth.xi_star;
        let scale = inst.y.amax();
        for (a, b) in sorted(inst.y.as_slice())
            .iter()
            .zip(sorted(clean.as_slice()).iter())
        {
            assert!((a - b).abs() <= 1e-12 * scale.max(1.0));
        }
        // and y literally equals pi*(A xi*)
        let shuffled = truth.pi_star.apply(clean.as_slice()).unwrap();
        assert_eq!(inst.y.as_slice(), shuffled.as_slice());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instance(3, 9, Some(40.0), 123).unwrap();
        let b = generate_instance(3, 9, Some(40.0), 123).unwrap();
        assert_eq!(a.a, b.a);
        assert_eq!(a.y, b.y);
        assert_eq!(
            a.truth.as_ref().unwrap().pi_star,
            b.truth.as_ref().unwrap().pi_star
        );
        let c = generate_instance(3, 9, Some(40.0), 124).unwrap();
        assert_ne!(a.y, c.y);
    }

    #[test]
    fn generation_rejects_bad_dimensions() {
        assert!(generate_instance(0, 3, None, 0).is_err());
        assert!(generate_instance(3, 3, None, 0).is_err());
    }

    #[test]
    fn generated_matrix_has_full_column_rank() {
        for seed in 0..5 {
            let inst = generate_instance(4, 10, None, seed).unwrap();
            assert!(has_full_column_rank(&inst.a));
        }
    }

    #[test]
    fn noise_magnitude_tracks_sigma() {
        let n = 4;
        let m = 2000;
        let inst = generate_instance(n, m, Some(60.0), 5).unwrap();
        let truth = inst.truth.as_ref().unwrap();
        let clean = truth
            .pi_star
            .apply((&inst.a * &truth.xi_star).as_slice())
            .unwrap();
        let sample_var: f64 = inst
            .y
            .iter()
            .zip(clean.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / m as f64;
        let sigma = sigma_from_snr(n, 60.0);
        assert!((sample_var.sqrt() - sigma).abs() < 0.1 * sigma);
    }

    #[test]
    fn json_round_trip() {
        let inst = generate_instance(2, 5, Some(50.0), 11).unwrap();
        let text = inst.to_json();
        let back = ProblemInstance::from_json(&text).unwrap();
        assert_eq!(back.n, inst.n);
        assert_eq!(back.m, inst.m);
        assert_eq!(back.a, inst.a);
        assert_eq!(back.y, inst.y);
        assert_eq!(back.seed, inst.seed);
        let t0 = inst.truth.as_ref().unwrap();
        let t1 = back.truth.as_ref().unwrap();
        assert_eq!(t0.xi_star, t1.xi_star);
        assert_eq!(t0.pi_star, t1.pi_star);
        // repeated serialization is byte-identical
        assert_eq!(text, back.to_json());
    }

    #[test]
    fn json_rejects_malformed_input() {
        assert!(ProblemInstance::from_json("{\"n\": 2}").is_err());
        assert!(ProblemInstance::from_json("not json").is_err());
        // inconsistent row length
        let bad = r#"{"n":2,"m":3,"A":[[1,2],[3],[5,6]],"y":[1,2,3],"truth":null,"seed":null}"#;
        assert!(ProblemInstance::from_json(bad).is_err());
        // bad permutation in truth
        let bad = r#"{"n":1,"m":2,"A":[[1],[1]],"y":[1,1],
            "truth":{"xi_star":[1],"pi_star":[1,1],"sigma":0.0,"snr_db":null},"seed":null}"#;
        assert!(ProblemInstance::from_json(bad).is_err());
    }
}
