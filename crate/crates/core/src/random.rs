//! Seeded Haar-random states and unitaries.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::state::{check_dims, PureState};

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Derives the `index`-th child seed of `seed` (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent standard complex Gaussians, normalized.
pub fn random_state(dims: &[usize], seed: u64) -> Result<PureState> {
    let total = check_dims(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..total).map(|_| gaussian(&mut rng)).collect();
    PureState::new(dims.to_vec(), amps)?.normalize()
}

/// Tensor product of independent random single-site states.
pub fn random_product_state(dims: &[usize], seed: u64) -> Result<PureState> {
    check_dims(dims)?;
    let mut state: Option<PureState> = None;
    for (i, &d) in dims.iter().enumerate() {
        let factor = random_state(&[d], derive_seed(seed, i as u64))?;
        state = Some(match state {
            Some(s) => s.tensor_product(&factor),
            None => factor,
        });
    }
    Ok(state.expect("dims checked nonempty"))
}

/// Haar-random `d x d` unitary, returned as rows. Gram-Schmidt on a complex
/// Gaussian matrix; the implied triangular factor has a positive real diagonal.
pub fn random_unitary(d: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| gaussian(&mut rng)).collect())
        .collect();
    for k in 0..d {
        for j in 0..k {
            let (done, rest) = cols.split_at_mut(k);
            let q = &done[j];
            let v = &mut rest[0];
            let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm: f64 = cols[k].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_normalized() {
        let a = random_state(&[2, 3, 2], 7).unwrap();
        let b = random_state(&[2, 3, 2], 7).unwrap();
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert_ne!(a, random_state(&[2, 3, 2], 8).unwrap());
    }

    #[test]
    fn invalid_dims() {
        assert!(random_state(&[1, 2], 0).is_err());
        assert!(random_product_state(&[], 0).is_err());
    }

    #[test]
    fn unitaries_are_unitary() {
        for (d, seed) in [(2, 1), (3, 2), (5, 3)] {
            let u = random_unitary(d, seed);
            for r in 0..d {
                for c in 0..d {
                    let dot: Complex64 = (0..d).map(|k| u[r][k] * u[c][k].conj()).sum();
                    let e = if r == c { 1.0 } else { 0.0 };
                    assert!((dot - e).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: Vec<u64> = (0..3).map(|i| derive_seed(1, i)).collect();
        assert_ne!(seeds[0], seeds[1]);
        assert_ne!(seeds[1], seeds[2]);
    }
}
