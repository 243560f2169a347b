//! The Long–Servedio construction: a tiny linearly-separable dataset whose
//! noisy version defeats every convex potential booster over linear models.
//!
//! The clean sample `S_clean` places three *observations* in the plane, all
//! labeled positive, with multiplicities:
//!
//! ```text
//! A = (1, 0)        ×1   (the "large margin" point)
//! B = (γ, −γ)       ×2   (the "penalizers")
//! C = (γ, 5γ)       ×1   (the "puller")
//! ```
//!
//! optionally rotated by an angle θ. Any separator `θ·x` with positive
//! coefficients classifies it perfectly — `x₁ ≥ γ` on every point — yet the
//! margin at B is only `γ(θ₁ − θ₂)`, and that tension is what the noise
//! exploits.
//!
//! The noisy sample `S_noisy` applies symmetric label noise of rate
//! `η = 1/(N+1)` *exactly*, by multiplicity bookkeeping rather than by
//! sampling: each observation appears once with its true positive label at
//! `N×` its clean multiplicity and once with the flipped (negative) label at
//! `1×` it. The Bayes posterior of every observation is therefore exactly
//! `N/(N+1) = 1 − η`, and the Bayes-optimal classifier still labels
//! everything positive with accuracy `1 − η`. Because the datasets are exact
//! weighted multisets, every experiment in this crate is deterministic: there
//! is no RNG anywhere in the training path.
//!
//! Both samples are tiny by design (3 and 6 rows); what matters is the
//! *geometry*, not the size. The catastrophic failure of convex losses over
//! linear separators — and its absence one model class up — is driven by the
//! interplay of the three observations above.

use crate::{Error, Result};
use std::f64::consts::TAU;

/// One row of a weighted dataset: a planar point, a 0/1 label, and an
/// integer multiplicity (the number of identical copies it stands for).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example {
    /// The point's coordinates.
    pub x: [f64; 2],
    /// The label: 1 for positive, 0 for negative.
    pub y: u8,
    /// How many copies of `(x, y)` this row represents. Always ≥ 1.
    pub multiplicity: u64,
}

impl Example {
    /// The label in its ±1 incarnation `y* = 2y − 1`.
    pub fn y_star(&self) -> f64 {
        2.0 * f64::from(self.y) - 1.0
    }
}

/// A weighted multiset of planar examples.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// The rows, in construction order.
    pub examples: Vec<Example>,
}

impl Dataset {
    /// Total multiplicity `m` (the number of represented copies).
    pub fn total_multiplicity(&self) -> u64 {
        self.examples.iter().map(|e| e.multiplicity).sum()
    }

    /// Number of rows (distinct `(x, y)` entries).
    pub fn rows(&self) -> usize {
        self.examples.len()
    }
}

/// Parameters of a Long–Servedio dataset.
///
/// # Examples
///
/// ```
/// use properboost::datasets::LsDatasetSpec;
///
/// let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
/// assert_eq!(spec.eta(), 0.25);
/// let clean = spec.make_clean();
/// assert_eq!(clean.rows(), 3);
/// assert_eq!(clean.total_multiplicity(), 4);
/// let noisy = spec.make_noisy();
/// assert_eq!(noisy.rows(), 6);
/// assert_eq!(noisy.total_multiplicity(), 16);
/// assert_eq!(spec.bayes_posterior(), 0.75);
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsDatasetSpec {
    /// Margin parameter `γ > 0`: the x₁ coordinate shared by B and C.
    pub gamma: f64,
    /// Height multiplier `K > 0` of the puller C = (γ, K·γ). The classical
    /// construction uses `K = 5`.
    pub big_k: f64,
    /// Noise denominator `N ≥ 2`: the noise rate is `η = 1/(N+1)` and each
    /// observation's true label carries `N×` the multiplicity of its flipped
    /// copy.
    pub n_copies: u64,
    /// Rotation angle θ applied to every point, normalized to `[0, 2π)`.
    pub theta: f64,
}

impl LsDatasetSpec {
    /// Validates and builds a spec. `gamma` and `big_k` must be finite and
    /// strictly positive, `n_copies ≥ 2`, and `theta` finite (it is
    /// normalized into `[0, 2π)`).
    pub fn new(gamma: f64, big_k: f64, n_copies: u64, theta: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Config(format!(
                "LsDatasetSpec: gamma must be finite and > 0, got {gamma}"
            )));
        }
        if !big_k.is_finite() || big_k <= 0.0 {
            return Err(Error::Config(format!(
                "LsDatasetSpec: big_k must be finite and > 0, got {big_k}"
            )));
        }
        if n_copies < 2 {
            return Err(Error::Config(format!(
                "LsDatasetSpec: n_copies must be at least 2, got {n_copies}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::Config(format!(
                "LsDatasetSpec: theta must be finite, got {theta}"
            )));
        }
        Ok(LsDatasetSpec {
            gamma,
            big_k,
            n_copies,
            theta: theta.rem_euclid(TAU),
        })
    }

    /// The exact noise rate `η = 1/(N+1)`.
    pub fn eta(&self) -> f64 {
        1.0 / (self.n_copies as f64 + 1.0)
    }

    /// The Bayes posterior of every observation in the noisy sample:
    /// `Pr[y = 1 | x] = N/(N+1) = 1 − η`, identical across observations.
    pub fn bayes_posterior(&self) -> f64 {
        self.n_copies as f64 / (self.n_copies as f64 + 1.0)
    }

    /// The three rotated observation points `[A, B, C]`.
    fn points(&self) -> [[f64; 2]; 3] {
        let (sin, cos) = self.theta.sin_cos();
        let rotate = |x1: f64, x2: f64| [cos * x1 - sin * x2, sin * x1 + cos * x2];
        [
            rotate(1.0, 0.0),
            rotate(self.gamma, -self.gamma),
            rotate(self.gamma, self.big_k * self.gamma),
        ]
    }

    /// Clean multiplicities of `[A, B, C]`.
    const CLEAN_MULT: [u64; 3] = [1, 2, 1];

    /// The noiseless sample: rows `[A ×1, B ×2, C ×1]`, all positive.
    pub fn make_clean(&self) -> Dataset {
        let pts = self.points();
        Dataset {
            examples: pts
                .iter()
                .zip(Self::CLEAN_MULT)
                .map(|(&x, m)| Example {
                    x,
                    y: 1,
                    multiplicity: m,
                })
                .collect(),
        }
    }

    /// The noisy sample: the same three observations, each split into a
    /// true-label row at `N×` its clean multiplicity and a flipped-label row
    /// at `1×` it. Rows are ordered positives first (`A⁺, B⁺, C⁺`), then
    /// negatives (`A⁻, B⁻, C⁻`).
    pub fn make_noisy(&self) -> Dataset {
        let pts = self.points();
        let mut examples = Vec::with_capacity(6);
        for (&x, m) in pts.iter().zip(Self::CLEAN_MULT) {
            examples.push(Example {
                x,
                y: 1,
                multiplicity: self.n_copies * m,
            });
        }
        for (&x, m) in pts.iter().zip(Self::CLEAN_MULT) {
            examples.push(Example {
                x,
                y: 0,
                multiplicity: m,
            });
        }
        Dataset { examples }
    }
}

/// Maps a noise rate η to the integer copy count `N = round(1/η) − 1`,
/// rejecting rates that land below the minimum `N = 2` (η must be in
/// `(0, 0.4]` up to rounding).
///
/// # Examples
///
/// ```
/// use properboost::datasets::n_from_eta;
///
/// assert_eq!(n_from_eta(0.25).unwrap(), 3);
/// assert_eq!(n_from_eta(0.1).unwrap(), 9);
/// assert_eq!(n_from_eta(0.4).unwrap(), 2); // round(2.5) − 1 = 2
/// assert!(n_from_eta(0.5).is_err());
/// ```
pub fn n_from_eta(eta: f64) -> Result<u64> {
    if !eta.is_finite() || eta <= 0.0 || eta >= 1.0 {
        return Err(Error::Config(format!(
            "eta must be in (0, 1), got {eta}"
        )));
    }
    let n = (1.0 / eta).round() - 1.0;
    if n < 2.0 {
        return Err(Error::Config(format!(
            "eta = {eta} maps to N = {n}, below the minimum of 2 (use eta ≤ 0.4)"
        )));
    }
    Ok(n as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn spec_validation() {
        assert!(LsDatasetSpec::new(0.0, 5.0, 3, 0.0).is_err());
        assert!(LsDatasetSpec::new(-0.1, 5.0, 3, 0.0).is_err());
        assert!(LsDatasetSpec::new(f64::NAN, 5.0, 3, 0.0).is_err());
        assert!(LsDatasetSpec::new(0.1, 0.0, 3, 0.0).is_err());
        assert!(LsDatasetSpec::new(0.1, 5.0, 1, 0.0).is_err());
        assert!(LsDatasetSpec::new(0.1, 5.0, 0, 0.0).is_err());
        assert!(LsDatasetSpec::new(0.1, 5.0, 3, f64::INFINITY).is_err());
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, -FRAC_PI_2).unwrap();
        // θ is normalized into [0, 2π).
        assert!((spec.theta - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn clean_sample_unrotated() {
        let spec = LsDatasetSpec::new(0.02, 5.0, 3, 0.0).unwrap();
        let clean = spec.make_clean();
        assert_eq!(clean.rows(), 3);
        assert_eq!(clean.total_multiplicity(), 4);
        let ex = &clean.examples;
        assert_eq!(ex[0].x, [1.0, 0.0]);
        assert_eq!(ex[0].multiplicity, 1);
        assert_eq!(ex[1].x, [0.02, -0.02]);
        assert_eq!(ex[1].multiplicity, 2);
        assert_eq!(ex[2].x, [0.02, 0.1]);
        assert_eq!(ex[2].multiplicity, 1);
        assert!(ex.iter().all(|e| e.y == 1));
        assert!(ex.iter().all(|e| e.y_star() == 1.0));
    }

    #[test]
    fn quarter_turn_rotation() {
        // At θ = π/2, (x₁, x₂) ↦ (−x₂, x₁): A → (0,1), B → (γ,γ), C → (−5γ,γ).
        let g = 0.1;
        let spec = LsDatasetSpec::new(g, 5.0, 3, FRAC_PI_2).unwrap();
        let clean = spec.make_clean();
        let close = |a: [f64; 2], b: [f64; 2]| {
            (a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15
        };
        assert!(close(clean.examples[0].x, [0.0, 1.0]));
        assert!(close(clean.examples[1].x, [g, g]));
        assert!(close(clean.examples[2].x, [-5.0 * g, g]));
    }

    #[test]
    fn noisy_sample_structure() {
        let spec = LsDatasetSpec::new(0.02, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        assert_eq!(noisy.rows(), 6);
        // Positives first at N× clean multiplicity, then negatives at 1×.
        let mults: Vec<u64> = noisy.examples.iter().map(|e| e.multiplicity).collect();
        assert_eq!(mults, vec![3, 6, 3, 1, 2, 1]);
        let labels: Vec<u8> = noisy.examples.iter().map(|e| e.y).collect();
        assert_eq!(labels, vec![1, 1, 1, 0, 0, 0]);
        assert_eq!(noisy.total_multiplicity(), 16); // (N+1)·4
        // Row i and row i+3 share the same observation point.
        for i in 0..3 {
            assert_eq!(noisy.examples[i].x, noisy.examples[i + 3].x);
        }
        // Exact noise rate and posterior.
        assert_eq!(spec.eta(), 0.25);
        assert_eq!(spec.bayes_posterior(), 0.75);
        // Noise rate as measured from the multiset: flipped mass / total.
        let flipped: u64 = noisy.examples[3..].iter().map(|e| e.multiplicity).sum();
        assert_eq!(flipped as f64 / noisy.total_multiplicity() as f64, 0.25);
    }

    #[test]
    fn eta_to_n_round_trip() {
        assert_eq!(n_from_eta(0.25).unwrap(), 3);
        assert_eq!(n_from_eta(0.2).unwrap(), 4);
        assert_eq!(n_from_eta(0.1).unwrap(), 9);
        assert_eq!(n_from_eta(0.4).unwrap(), 2);
        assert!(n_from_eta(0.5).is_err());
        assert!(n_from_eta(0.0).is_err());
        assert!(n_from_eta(1.0).is_err());
        assert!(n_from_eta(f64::NAN).is_err());
        // Round trip: η(N) → N for every N in range.
        for n in 2..60 {
            let spec = LsDatasetSpec::new(0.1, 5.0, n, 0.0).unwrap();
            assert_eq!(n_from_eta(spec.eta()).unwrap(), n);
        }
    }

    #[test]
    fn clean_sample_is_linearly_separable_with_margin() {
        // θ = (1, 1/2) separates the unrotated clean sample: θ·x ≥ γ/2 > 0
        // on all three observations (A: 1, B: γ/2, C: 7γ/2 at K = 5).
        let g = 0.05;
        let spec = LsDatasetSpec::new(g, 5.0, 4, 0.0).unwrap();
        for ex in &spec.make_clean().examples {
            let score = ex.x[0] + 0.5 * ex.x[1];
            assert!(score >= g / 2.0 - 1e-15, "margin violated: {score}");
        }
    }
}
