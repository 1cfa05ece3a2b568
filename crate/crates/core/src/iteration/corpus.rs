//! Seeded coefficient paths used by the verification suites.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matrizant::{matrizant, sample_coefficient_path, CoefficientPath, SymplecticPath};

/// Steps per half period for corpus matrizants.
pub const CORPUS_STEPS: usize = 2048;

/// Half period, shift and perturbation size drawn for a seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusParams {
    pub tau: f64,
    pub shift: f64,
    pub amplitude: f64,
}

impl CorpusParams {
    pub fn draw(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x5eed);
        CorpusParams {
            tau: rng.random_range(0.8..2.0),
            shift: rng.random_range(-0.5..1.5),
            amplitude: rng.random_range(0.2..0.9),
        }
    }
}

/// `B(t) = c I + P(t)` with a random trigonometric `P` of period `τ`.
///
/// The shift keeps most corpus paths elliptic or mildly hyperbolic so that
/// iterates up to `k = 8` stay well conditioned.
pub fn corpus_path(seed: u64, n: usize) -> Result<CoefficientPath> {
    let p = CorpusParams::draw(seed);
    let pert = sample_coefficient_path(seed, n, 2, p.amplitude, p.tau)?;
    let series = pert.trig_series().expect("sampled paths are trigonometric");
    CoefficientPath::trig(
        series.c0 + DMatrix::identity(2 * n, 2 * n) * p.shift,
        series.cos,
        series.sin,
        p.tau,
    )
}

/// Matrizant of [`corpus_path`] on its half period.
pub fn corpus_matrizant(seed: u64, n: usize) -> Result<SymplecticPath> {
    matrizant(&corpus_path(seed, n)?, CORPUS_STEPS)
}

/// One-line description of a corpus path for reports.
pub fn describe(seed: u64, n: usize) -> String {
    let p = CorpusParams::draw(seed);
    format!(
        "corpus seed={seed} n={n} tau={:.6} shift={:.6} amplitude={:.6}",
        p.tau, p.shift, p.amplitude
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus_path(11, 2).unwrap();
        let b = corpus_path(11, 2).unwrap();
        assert_eq!(a.at(0.3), b.at(0.3));
        assert_ne!(corpus_path(12, 2).unwrap().at(0.3), a.at(0.3));
        assert!(describe(11, 2).starts_with("corpus seed=11 n=2"));
    }
}
