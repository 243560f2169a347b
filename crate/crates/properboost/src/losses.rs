//! Losses for class probability estimation (CPE losses).
//!
//! A CPE loss is a pair of *partial losses* `ℓ₁(u)` and `ℓ₋₁(u)` charging a
//! posterior guess `u ∈ [0,1]` when the true label is positive respectively
//! negative. The *pointwise conditional risk* of guessing `u` when the true
//! posterior is `v` is
//!
//! ```text
//! L(u, v) = v·ℓ₁(u) + (1−v)·ℓ₋₁(u),
//! ```
//!
//! and the loss is *strictly proper* when `u = v` is its unique minimizer.
//! The minimum value `L̄(v) = L(v, v)` is the (concave) *Bayes risk*. Three
//! derived objects turn a proper loss into a boosting engine:
//!
//! * the **canonical link** `fwd_link = −L̄′`, mapping posteriors to real
//!   scores, and its inverse `inv_link = (−L̄′)⁻¹`, mapping scores back to
//!   `[0,1]` (clamped where the link saturates);
//! * the **convex surrogate** `Φ(z) = sup_u {−z·u + L̄(u)}`, the conjugate
//!   form through which a real-valued model `H` is trained: the population
//!   objective is `E[Φ(−H(x)) − y·H(x)]`;
//! * the **boosting weight** `w((x,y), H) = y − y*·inv_link(H(x))`, always in
//!   `[0,1]`, which is the magnitude of the surrogate's slope at the current
//!   score and drives every step of the booster.
//!
//! The surrogate of any strictly proper differentiable loss is convex,
//! non-increasing, and has `Φ′(0) < 0`; we refer to that trio as the
//! *Lemma-1 properties* and expose a numeric checker,
//! [`check_lemma1_properties`].
//!
//! Four concrete losses are provided ([`LossKind`]): the square, log
//! (binary cross-entropy), and Matusita losses — all symmetric — and an
//! asymmetric loss (`asym1`) engineered so that `inv_link(0) = p* ≠ 1/2`,
//! which exercises every asymmetric code path (its link is bounded, so its
//! inverse link clamps to 0 below `−B` and to 1 above `C`).
//!
//! Two conventions are fixed here once and for all:
//!
//! * the square loss is unnormalized (`ℓ₁(u) = (1−u)²`, giving `L̄ = u(1−u)`
//!   and the clamped link `inv_link(z) = (1+z)/2` on `[−1,1]`);
//! * the Matusita loss uses the full-scale convention `ℓ₁(u) = √((1−u)/u)`,
//!   `L̄(u) = 2√(u(1−u))`, hence `inv_link(z) = (1 + z/√(4+z²))/2` and
//!   `Φ(z) = (√(4+z²) − z)/2` with `Φ(0) = 1`. (A half-scale variant halving
//!   `L̄` and `Φ` appears in parts of the literature; all classification
//!   outcomes are invariant to that rescaling, but the partial losses above
//!   force the full-scale link and surrogate, and every constant in this
//!   crate is consistent with them.)

use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

/// Identifier of one of the four built-in proper losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LossKind {
    /// Matusita loss: `ℓ₁(u) = √((1−u)/u)`, `L̄(u) = 2√(u(1−u))`.
    Matusita,
    /// Log loss (binary cross-entropy): `ℓ₁(u) = −ln u`, `L̄` = Shannon entropy.
    Log,
    /// Square loss: `ℓ₁(u) = (1−u)²`, `L̄(u) = u(1−u)`.
    Square,
    /// Engineered asymmetric loss with `inv_link(0) = p* ≈ 0.5732`.
    Asym1,
}

impl LossKind {
    /// All four kinds, in a fixed display order.
    pub const ALL: [LossKind; 4] = [
        LossKind::Matusita,
        LossKind::Log,
        LossKind::Square,
        LossKind::Asym1,
    ];

    /// The canonical lowercase name used by the CLI and the CSV emitter.
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Matusita => "matusita",
            LossKind::Log => "log",
            LossKind::Square => "square",
            LossKind::Asym1 => "asym1",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matusita" => Ok(LossKind::Matusita),
            "log" => Ok(LossKind::Log),
            "square" => Ok(LossKind::Square),
            "asym1" => Ok(LossKind::Asym1),
            other => Err(Error::Config(format!(
                "unknown loss '{other}' (expected one of: matusita, log, square, asym1)"
            ))),
        }
    }
}

/// The closed-form constants of the asymmetric loss.
///
/// ```text
/// A = ln 4 − 4·arctan 2 + arctan(1/2)
/// B = π/2 + ln 4
/// C = 2π − ln 4
/// ```
///
/// The forward link of `asym1` is `fwd(u) = 5·arctan((5u−4)/2) − A`, which
/// maps `(0,1)` onto `(−B, C)`; the inverse link therefore clamps to 0 below
/// `−B` and to 1 above `C`, and the surrogate is linear (`−z`) below `−C` and
/// zero above `B`.
#[derive(Debug, Clone, Copy)]
pub struct LossConstantsAsym1 {
    /// `A = ln 4 − 4·arctan 2 + arctan(1/2)` (negative).
    pub a_const: f64,
    /// `B = π/2 + ln 4`.
    pub b_const: f64,
    /// `C = 2π − ln 4`.
    pub c_const: f64,
}

/// Constants of `asym1`, evaluated once from their closed forms (never from
/// transcribed decimals, to avoid drift).
pub static ASYM1_CONSTANTS: LazyLock<LossConstantsAsym1> = LazyLock::new(|| LossConstantsAsym1 {
    a_const: 4f64.ln() - 4.0 * 2f64.atan() + 0.5f64.atan(),
    b_const: FRAC_PI_2 + 4f64.ln(),
    c_const: 2.0 * PI - 4f64.ln(),
});

/// Integration constant of the asym1 Bayes risk, fixed by fairness
/// (`L̄(1) = ℓ₁(1) = 0`): `K = arctan(1/2) − ln(5/4) − A`.
static ASYM1_BAYES_CONST: LazyLock<f64> =
    LazyLock::new(|| 0.5f64.atan() - 1.25f64.ln() - ASYM1_CONSTANTS.a_const);

/// `ln cos((A−B)/5)`, the constant term of the asym1 surrogate's middle
/// branch. `(A−B)/5 = −arctan 2`, so this equals `−ln √5`.
static ASYM1_PHI_CONST: LazyLock<f64> =
    LazyLock::new(|| ((ASYM1_CONSTANTS.a_const - ASYM1_CONSTANTS.b_const) / 5.0).cos().ln());

/// A strictly proper CPE loss with its link and surrogate calculus.
///
/// Immutable and `Copy`; all operations are pure functions, so a `ProperLoss`
/// can be shared freely across threads.
///
/// # Examples
///
/// ```
/// use properboost::losses::{make_loss, LossKind};
///
/// let sq = make_loss(LossKind::Square);
/// assert_eq!(sq.inv_link(0.0), 0.5);
/// assert_eq!(sq.inv_link(2.0), 1.0); // clamped above z = 1
/// assert_eq!(sq.surrogate(0.0), 0.25);
/// assert!(sq.symmetric);
/// ```
#[derive(Debug, Clone, Copy)]
pub struct ProperLoss {
    kind: LossKind,
    /// Lower bound on `inf_u (ℓ₋₁′ − ℓ₁′)(u) = inf_u (−L̄″)(u)`, the strong
    /// convexity modulus entering every boosting-rate formula.
    pub kappa: f64,
    /// Lower bound `C` with `ℓ₋₁(0), ℓ₁(1) ≥ C`; all four built-in losses are
    /// fair (`ℓ₋₁(0) = ℓ₁(1) = 0`), so this is 0.
    pub floor_c: f64,
    /// Whether `ℓ₁(u) = ℓ₋₁(1−u)` identically.
    pub symmetric: bool,
}

/// Builds one of the four built-in losses.
///
/// To construct from a CLI-style name, parse a [`LossKind`] first:
/// `"asym1".parse::<LossKind>()` fails with a configuration error on unknown
/// names.
pub fn make_loss(kind: LossKind) -> ProperLoss {
    match kind {
        LossKind::Square => ProperLoss {
            kind,
            kappa: 2.0,
            floor_c: 0.0,
            symmetric: true,
        },
        LossKind::Log => ProperLoss {
            kind,
            kappa: 4.0,
            floor_c: 0.0,
            symmetric: true,
        },
        LossKind::Matusita => ProperLoss {
            kind,
            kappa: 4.0,
            floor_c: 0.0,
            symmetric: true,
        },
        LossKind::Asym1 => ProperLoss {
            kind,
            kappa: 2.5,
            floor_c: 0.0,
            symmetric: false,
        },
    }
}

/// `x·ln x`, continuously extended by 0 at `x = 0`.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Numerically stable `σ(z) = 1/(1+e^{−z})`.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable `ln(1 + e^{−z})`.
fn softplus_neg(z: f64) -> f64 {
    if z >= 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

impl ProperLoss {
    /// The loss's kind.
    pub fn kind(&self) -> LossKind {
        self.kind
    }

    /// The loss's canonical lowercase name.
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Partial loss `ℓ₁(u)`: the loss of guessing posterior `u` when the
    /// label is positive. Diverges to `+∞` at `u = 0` for log and Matusita;
    /// the divergence is returned as `f64::INFINITY`, never trapped.
    pub fn partial_pos(&self, u: f64) -> f64 {
        match self.kind {
            LossKind::Square => (1.0 - u) * (1.0 - u),
            LossKind::Log => {
                if u <= 0.0 {
                    f64::INFINITY
                } else {
                    -u.ln()
                }
            }
            LossKind::Matusita => {
                if u <= 0.0 {
                    f64::INFINITY
                } else {
                    ((1.0 - u) / u).max(0.0).sqrt()
                }
            }
            LossKind::Asym1 => self.bayes_risk(u) - (1.0 - u) * self.fwd_link(u),
        }
    }

    /// Partial loss `ℓ₋₁(u)`: the loss of guessing posterior `u` when the
    /// label is negative.
    pub fn partial_neg(&self, u: f64) -> f64 {
        match self.kind {
            LossKind::Square => u * u,
            LossKind::Log => {
                if u >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-u).ln_1p()
                }
            }
            LossKind::Matusita => {
                if u >= 1.0 {
                    f64::INFINITY
                } else {
                    (u / (1.0 - u)).max(0.0).sqrt()
                }
            }
            LossKind::Asym1 => self.bayes_risk(u) + u * self.fwd_link(u),
        }
    }

    /// Bayes risk `L̄(u) = u·ℓ₁(u) + (1−u)·ℓ₋₁(u)`, the minimal pointwise
    /// risk at true posterior `u`. Concave, with `L̄(0) = L̄(1) = 0` for all
    /// four (fair) losses.
    pub fn bayes_risk(&self, u: f64) -> f64 {
        match self.kind {
            LossKind::Square => u * (1.0 - u),
            LossKind::Log => -xlnx(u) - xlnx(1.0 - u),
            LossKind::Matusita => 2.0 * (u * (1.0 - u)).max(0.0).sqrt(),
            LossKind::Asym1 => {
                let s = (5.0 * u - 4.0) / 2.0;
                (1.0 + s * s).ln() - 2.0 * s * s.atan()
                    + ASYM1_CONSTANTS.a_const * u
                    + *ASYM1_BAYES_CONST
            }
        }
    }

    /// Inverse canonical link `(−L̄′)⁻¹: ℝ → [0,1]`, non-decreasing, clamped
    /// exactly where the forward link saturates (square: outside `[−1,1]`;
    /// asym1: below `−B` and above `C`).
    pub fn inv_link(&self, z: f64) -> f64 {
        match self.kind {
            LossKind::Square => (0.5 * (1.0 + z)).clamp(0.0, 1.0),
            LossKind::Log => sigmoid(z),
            LossKind::Matusita => {
                if z.is_infinite() {
                    return if z > 0.0 { 1.0 } else { 0.0 };
                }
                // hypot keeps √(4 + z²) finite for |z| near f64::MAX.
                0.5 * (1.0 + z / z.hypot(2.0))
            }
            LossKind::Asym1 => {
                let c = *ASYM1_CONSTANTS;
                if z <= -c.b_const {
                    0.0
                } else if z >= c.c_const {
                    1.0
                } else {
                    (0.4 * (2.0 + ((z + c.a_const) / 5.0).tan())).clamp(0.0, 1.0)
                }
            }
        }
    }

    /// Forward canonical link `−L̄′: (0,1) → ℝ`, the inverse of
    /// [`inv_link`](Self::inv_link) on the interior of its range. Unbounded
    /// at the endpoints for log and Matusita (`±∞` is returned); bounded for
    /// square (`[−1,1]`) and asym1 (`[−B, C]`).
    pub fn fwd_link(&self, u: f64) -> f64 {
        match self.kind {
            LossKind::Square => 2.0 * u - 1.0,
            LossKind::Log => {
                if u <= 0.0 {
                    f64::NEG_INFINITY
                } else if u >= 1.0 {
                    f64::INFINITY
                } else {
                    (u / (1.0 - u)).ln()
                }
            }
            LossKind::Matusita => {
                if u <= 0.0 {
                    f64::NEG_INFINITY
                } else if u >= 1.0 {
                    f64::INFINITY
                } else {
                    (2.0 * u - 1.0) / (u * (1.0 - u)).sqrt()
                }
            }
            LossKind::Asym1 => 5.0 * ((5.0 * u - 4.0) / 2.0).atan() - ASYM1_CONSTANTS.a_const,
        }
    }

    /// Convex surrogate `Φ(z) = sup_u {−z·u + L̄(u)}`, so that the pointwise
    /// surrogate loss of a real score `H` is `Φ(−H) − y·H` and
    /// `Φ′(z) = −inv_link(−z)`. Convex, non-increasing, `Φ′(0) < 0`, and
    /// `Φ(z) → L̄(0) = 0` as `z → +∞`.
    pub fn surrogate(&self, z: f64) -> f64 {
        match self.kind {
            LossKind::Square => {
                if z < -1.0 {
                    -z
                } else if z > 1.0 {
                    0.0
                } else {
                    0.25 * (1.0 - z) * (1.0 - z)
                }
            }
            LossKind::Log => softplus_neg(z),
            LossKind::Matusita => {
                let r = (4.0 + z * z).sqrt();
                if z > 0.0 {
                    // (r − z)/2 suffers cancellation for large z; use the
                    // algebraically equal form 2/(r + z).
                    2.0 / (r + z)
                } else {
                    0.5 * (r - z)
                }
            }
            LossKind::Asym1 => {
                let c = *ASYM1_CONSTANTS;
                if z < -c.c_const {
                    -z
                } else if z > c.b_const {
                    0.0
                } else {
                    2.0 * (*ASYM1_PHI_CONST - ((c.a_const - z) / 5.0).cos().ln())
                        + 0.8 * (c.b_const - z)
                }
            }
        }
    }
}

/// Boosting weight `w((x,y), H) = y − y*·inv_link(H)` with `y* = 2y − 1`:
/// `1 − inv_link(score)` for a positive example, `inv_link(score)` for a
/// negative one. Always in `[0,1]`.
///
/// # Examples
///
/// ```
/// use properboost::losses::{make_loss, weight, LossKind};
///
/// let sq = make_loss(LossKind::Square);
/// assert_eq!(weight(&sq, 1, 0.0), 0.5);
/// assert_eq!(weight(&sq, 0, 2.0), 1.0); // inverse link clamps to 1 above z = 1
/// ```
pub fn weight(loss: &ProperLoss, y: u8, score: f64) -> f64 {
    debug_assert!(y <= 1, "labels are 0/1");
    if y == 1 {
        1.0 - loss.inv_link(score)
    } else {
        loss.inv_link(score)
    }
}

/// Pointwise conditional risk `v·ℓ₁(u) + (1−v)·ℓ₋₁(u)` of guessing posterior
/// `u` when the true posterior is `v`.
///
/// Divergent partial losses (log/Matusita at `u ∈ {0,1}`) propagate as `+∞`;
/// a zero mixture coefficient annihilates its term (`0·∞ = 0` here), so e.g.
/// the risk of a confident correct guess stays finite.
pub fn pointwise_risk(loss: &ProperLoss, guess: f64, truth: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&guess) && (0.0..=1.0).contains(&truth));
    let term = |coeff: f64, partial: f64| if coeff == 0.0 { 0.0 } else { coeff * partial };
    term(truth, loss.partial_pos(guess)) + term(1.0 - truth, loss.partial_neg(guess))
}

/// Population surrogate risk of a scored multiset: the multiplicity-weighted
/// mean of `Φ(−H(x)) − y·H(x)` over `(score, y, multiplicity)` triples.
///
/// This general form is valid for symmetric and asymmetric losses alike. An
/// empty multiset (or one of total multiplicity zero) is a configuration
/// error.
///
/// # Examples
///
/// ```
/// use properboost::losses::{make_loss, population_surrogate, LossKind};
///
/// let sq = make_loss(LossKind::Square);
/// // A zero model scores every example 0, so the risk is Φ(0) = 0.25
/// // regardless of the labels.
/// let rows = [(0.0, 1, 3), (0.0, 0, 1)];
/// assert_eq!(population_surrogate(&sq, &rows).unwrap(), 0.25);
/// ```
pub fn population_surrogate(loss: &ProperLoss, scored: &[(f64, u8, u64)]) -> Result<f64> {
    let total: u64 = scored.iter().map(|&(_, _, m)| m).sum();
    if total == 0 {
        return Err(Error::Config(
            "population_surrogate: empty multiset".to_string(),
        ));
    }
    let mut acc = 0.0;
    for &(score, y, mult) in scored {
        debug_assert!(y <= 1, "labels are 0/1");
        acc += mult as f64 * (loss.surrogate(-score) - f64::from(y) * score);
    }
    Ok(acc / total as f64)
}

/// Result of [`check_lemma1_properties`]: per-property pass/fail plus the
/// measured slope of `Φ` at zero.
#[derive(Debug, Clone, Copy)]
pub struct Lemma1Report {
    /// Second differences of `Φ` on the grid all `≥ −1e−7`.
    pub convex: bool,
    /// First differences of `Φ` on the grid all `≤ 1e−12`.
    pub non_increasing: bool,
    /// Central difference of `Φ` at 0 is strictly negative.
    pub derivative_negative_at_zero: bool,
    /// The measured central difference of `Φ` at 0 (e.g. `−1/2` for every
    /// symmetric loss, `−p*` for asym1).
    pub phi_prime_at_zero: f64,
}

impl Lemma1Report {
    /// Whether all three properties passed.
    pub fn all_pass(&self) -> bool {
        self.convex && self.non_increasing && self.derivative_negative_at_zero
    }
}

/// Numerically verifies the Lemma-1 property set of the surrogate — convex,
/// non-increasing, negative slope at 0 — on a uniform grid over `[−20, 20]`.
///
/// The grid is deterministic (uniform with fixed endpoints) so repeated runs
/// are reproducible. `grid_size < 100` is a configuration error.
pub fn check_lemma1_properties(loss: &ProperLoss, grid_size: usize) -> Result<Lemma1Report> {
    if grid_size < 100 {
        return Err(Error::Config(format!(
            "check_lemma1_properties: grid_size must be at least 100, got {grid_size}"
        )));
    }
    let (lo, hi) = (-20.0, 20.0);
    let h = (hi - lo) / (grid_size - 1) as f64;
    let phi: Vec<f64> = (0..grid_size)
        .map(|k| loss.surrogate(lo + k as f64 * h))
        .collect();

    let non_increasing = phi.windows(2).all(|w| w[1] - w[0] <= 1e-12);
    let convex = phi.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-7);
    let phi_prime_at_zero = (loss.surrogate(h) - loss.surrogate(-h)) / (2.0 * h);

    Ok(Lemma1Report {
        convex,
        non_increasing,
        derivative_negative_at_zero: phi_prime_at_zero < 0.0,
        phi_prime_at_zero,
    })
}
