//! Experiment drivers: γ×η sweeps over the Long–Servedio construction, the
//! idealized convex minimizer, boosting-rate bounds, and the CSV/SVG
//! emitters the CLI exposes.
//!
//! The headline experiment trains one (loss, model) pair across a grid of
//! margins γ and noise rates η, always *training on the noisy sample and
//! evaluating on the clean one*. Two regimes emerge for linear separators:
//! above a γ threshold the learned separator still classifies the clean
//! sample perfectly; below it, accuracy collapses to 1/2 — the noise forces
//! any convex proper loss to sacrifice the penalizer observation. The same
//! sweep over decision trees (or ADT, K-NN, branching programs) shows no
//! collapse anywhere: one leveraged prediction per region recovers the Bayes
//! posterior exactly. The model class, not the loss, is the culprit.
//!
//! [`ideal_linear_minimizer`] removes boosting from the picture entirely: it
//! minimizes the population surrogate over all linear separators directly
//! (damped gradient descent with a backtracking line search). Its collapse
//! at small γ certifies that no amount of boosting cleverness could have
//! saved the linear class — the *global* convex optimum is already wrong.
//!
//! [`compute_rate_bound`] evaluates the per-class iteration bounds
//! guaranteeing surrogate risk within ε of the floor under the weak learning
//! assumption: with `b = 2(Φ(0) − C)/(κ·ε²·w̲(θ)²·γ_WL²)` for linear
//! separators, trees pay `exp(b)`, N-outdegree ADTs `N·exp(b/N)`, K-NN
//! `m·b/K_rec`, and branching programs `b^{1/(1−c)}` (with merge floor
//! `β = T^{−c}`). The exponential hierarchy is the price of locality — and
//! the reason the tree-shaped classes can afford to be noise-robust.

use crate::booster::{run, ModelClass, RunConfig, StopReason};
use crate::datasets::{n_from_eta, Dataset, LsDatasetSpec};
use crate::losses::{make_loss, LossKind, ProperLoss};
use crate::models::ModelState;
use crate::{Error, Result};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

/// One sweep cell: a (loss, model, γ, η) training run and its evaluation.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    /// Loss trained with.
    pub loss: LossKind,
    /// Model class trained.
    pub model: ModelClass,
    /// Margin parameter of the dataset.
    pub gamma: f64,
    /// Noise rate (exact, `1/(N+1)`).
    pub eta: f64,
    /// Rotation angle of the dataset.
    pub theta: f64,
    /// Multiplicity-weighted accuracy of the final classifier on the clean
    /// sample.
    pub accuracy_clean: f64,
    /// Multiplicity-weighted mean of `inv_link(H(x))` over the clean sample.
    pub expected_posterior: f64,
    /// The true posterior `1 − η` shared by all observations.
    pub bayes_posterior: f64,
    /// Weak-learner calls consumed by training.
    pub weak_calls: usize,
    /// Final population surrogate risk on the (noisy) training sample.
    pub final_surrogate: f64,
    /// Why training stopped.
    pub stop_reason: StopReason,
}

/// Sweep-wide constants.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    /// Height multiplier K of the puller observation (classically 5).
    pub big_k: f64,
    /// Rotation angle applied to every dataset in the sweep.
    pub theta: f64,
    /// Per-run boosting knobs.
    pub run: RunConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            big_k: 5.0,
            theta: 0.0,
            run: RunConfig::default(),
        }
    }
}

/// Multiplicity-weighted accuracy of a model on a dataset.
pub fn dataset_accuracy(model: &ModelState, dataset: &Dataset) -> f64 {
    let mut correct = 0u64;
    let mut total = 0u64;
    for ex in &dataset.examples {
        total += ex.multiplicity;
        if model.predict_label(&ex.x) == ex.y {
            correct += ex.multiplicity;
        }
    }
    correct as f64 / total as f64
}

/// Multiplicity-weighted mean posterior estimate `inv_link(H(x))` of a model
/// on a dataset.
pub fn mean_posterior(loss: &ProperLoss, model: &ModelState, dataset: &Dataset) -> f64 {
    let mut acc = 0.0;
    let mut total = 0u64;
    for ex in &dataset.examples {
        total += ex.multiplicity;
        acc += ex.multiplicity as f64 * loss.inv_link(model.score(&ex.x));
    }
    acc / total as f64
}

/// A logarithmically spaced grid from `lo` to `hi` (inclusive), both
/// strictly positive, `n ≥ 1` points (`n = 1` yields `[lo]`).
pub fn logspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(Error::Config(format!(
            "logspace: bounds must be finite and positive, got {lo}..{hi}"
        )));
    }
    if hi < lo {
        return Err(Error::Config(format!(
            "logspace: hi = {hi} below lo = {lo}"
        )));
    }
    if n == 0 {
        return Err(Error::Config("logspace: need at least one point".to_string()));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (llo, lhi) = (lo.log10(), hi.log10());
    Ok((0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            10f64.powf(llo + t * (lhi - llo))
        })
        .collect())
}

/// Trains every (loss, model, η, γ) cell: noisy-sample training, clean-sample
/// evaluation. Records are sorted by (loss, model, η, γ). All four lists
/// must be nonempty.
pub fn run_sweep(
    losses: &[LossKind],
    models: &[ModelClass],
    gammas: &[f64],
    etas: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRecord>> {
    if losses.is_empty() || models.is_empty() || gammas.is_empty() || etas.is_empty() {
        return Err(Error::Config(
            "run_sweep: losses, models, gammas and etas must all be nonempty".to_string(),
        ));
    }
    let mut records = Vec::with_capacity(losses.len() * models.len() * gammas.len() * etas.len());
    for &loss_kind in losses {
        let loss = make_loss(loss_kind);
        for &model in models {
            for &eta in etas {
                let n = n_from_eta(eta)?;
                for &gamma in gammas {
                    let spec = LsDatasetSpec::new(gamma, cfg.big_k, n, cfg.theta)?;
                    let noisy = spec.make_noisy();
                    let state = run(&loss, model, &noisy, &cfg.run)?;
                    let clean = spec.make_clean();
                    records.push(SweepRecord {
                        loss: loss_kind,
                        model,
                        gamma,
                        eta: spec.eta(),
                        theta: spec.theta,
                        accuracy_clean: dataset_accuracy(&state.model, &clean),
                        expected_posterior: mean_posterior(&loss, &state.model, &clean),
                        bayes_posterior: spec.bayes_posterior(),
                        weak_calls: state.weak_calls,
                        final_surrogate: state.final_surrogate(),
                        stop_reason: state.stop_reason,
                    });
                }
            }
        }
    }
    sort_records(&mut records);
    Ok(records)
}

fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by(|a, b| {
        a.loss
            .name()
            .cmp(b.loss.name())
            .then(a.model.name().cmp(b.model.name()))
            .then(a.eta.total_cmp(&b.eta))
            .then(a.gamma.total_cmp(&b.gamma))
    });
}

/// Result of the idealized (boosting-free) linear surrogate minimization.
#[derive(Debug, Clone, Copy)]
pub struct IdealResult {
    /// The minimizing separator `θ* = (θ₁, θ₂)`.
    pub theta: [f64; 2],
    /// Accuracy of `sign(θ*·x)` on the clean sample.
    pub clean_accuracy: f64,
    /// Final population surrogate risk on the noisy sample.
    pub surrogate: f64,
    /// Gradient-descent steps taken.
    pub steps: usize,
    /// Final gradient norm.
    pub grad_norm: f64,
}

/// Minimizes the population surrogate of a linear separator on the noisy
/// sample directly — no boosting, no weak learner — by damped gradient
/// descent from `θ = (0, 0)`: full gradient, unit initial step, halving
/// backtracking with a floating-point-noise acceptance guard, convergence at
/// `‖∇F‖ < 1e−10`, hard cap of 10⁶ steps (a numeric error if hit).
///
/// Its collapse at small γ is the strongest form of the negative result:
/// the *global* convex optimum over the class is already a coin flip on the
/// clean sample.
pub fn ideal_linear_minimizer(loss: &ProperLoss, spec: &LsDatasetSpec) -> Result<IdealResult> {
    const MAX_STEPS: usize = 1_000_000;
    const GRAD_TOL: f64 = 1e-10;
    let noisy = spec.make_noisy();
    let m = noisy.total_multiplicity() as f64;
    let objective = |theta: &[f64; 2]| {
        noisy
            .examples
            .iter()
            .map(|e| {
                let h = theta[0] * e.x[0] + theta[1] * e.x[1];
                e.multiplicity as f64 * (loss.surrogate(-h) - f64::from(e.y) * h)
            })
            .sum::<f64>()
            / m
    };
    let gradient = |theta: &[f64; 2]| {
        let mut g = [0.0f64; 2];
        for e in &noisy.examples {
            let h = theta[0] * e.x[0] + theta[1] * e.x[1];
            let slope = loss.inv_link(h) - f64::from(e.y);
            g[0] += e.multiplicity as f64 * slope * e.x[0];
            g[1] += e.multiplicity as f64 * slope * e.x[1];
        }
        [g[0] / m, g[1] / m]
    };

    let mut theta = [0.0f64; 2];
    let mut f = objective(&theta);
    let mut steps = 0;
    let mut grad_norm;
    loop {
        let g = gradient(&theta);
        grad_norm = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if grad_norm < GRAD_TOL {
            break;
        }
        if steps >= MAX_STEPS {
            return Err(Error::Numeric(format!(
                "ideal_linear_minimizer: no convergence after {MAX_STEPS} steps \
                 (‖∇F‖ = {grad_norm:e})"
            )));
        }
        // Backtracking: accept any step that does not increase F beyond
        // floating-point noise; demanding strict decrease provably stalls
        // once F sits within one rounding error of its minimum.
        let guard = 4.0 * f64::EPSILON * (1.0 + f.abs());
        let mut lr = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = [theta[0] - lr * g[0], theta[1] - lr * g[1]];
            let fc = objective(&cand);
            if fc <= f + guard {
                theta = cand;
                f = fc;
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if !accepted {
            return Err(Error::Numeric(
                "ideal_linear_minimizer: line search stalled".to_string(),
            ));
        }
        steps += 1;
    }

    let clean = spec.make_clean();
    let mut correct = 0u64;
    let mut total = 0u64;
    for ex in &clean.examples {
        total += ex.multiplicity;
        let h = theta[0] * ex.x[0] + theta[1] * ex.x[1];
        if crate::models::predict_label(h) == ex.y {
            correct += ex.multiplicity;
        }
    }
    Ok(IdealResult {
        theta,
        clean_accuracy: correct as f64 / total as f64,
        surrogate: f,
        steps,
        grad_norm,
    })
}

/// Class-specific constants entering the rate bounds.
#[derive(Debug, Clone, Copy)]
pub struct RateExtras {
    /// Sample size `m` (copies) — K-NN bound.
    pub m: u64,
    /// Least reciprocal-neighborhood multiplicity `K_rec ≥ 1` — K-NN bound.
    pub k_rec: u64,
    /// ADT outdegree `N ≥ 2`.
    pub adt_n: u64,
    /// Branching-program exponent `c ∈ (0, 1)` (merge floor `β = T^{−c}`).
    pub lbp_c: f64,
}

impl Default for RateExtras {
    fn default() -> Self {
        RateExtras {
            m: 16,
            k_rec: 4,
            adt_n: 4,
            lbp_c: 0.5,
        }
    }
}

/// Iterations guaranteeing surrogate risk within ε of the loss's floor under
/// the WLA, per model class:
///
/// ```text
/// b_LS  = 2(Φ(0) − C)/(κ·ε²·w̲(θ)²·γ_WL²),   w̲(θ) = min{1 − inv(θ), inv(−θ)}
/// b_DT  = exp(b_LS)
/// b_ADT = N·exp(b_LS/N)
/// b_KNN = m·b_LS/K_rec
/// b_LBP = b_LS^{1/(1−c)}
/// ```
///
/// A margin level θ at which the weight floor `w̲(θ)` vanishes (θ at or
/// beyond a bounded link's clamp) makes every bound vacuous and is reported
/// as a configuration error. Astronomically small ε·γ can push the tree
/// bounds to `+∞` in `f64`; that is returned as-is, since the bound is
/// genuinely beyond representable range.
pub fn compute_rate_bound(
    class: ModelClass,
    loss: &ProperLoss,
    epsilon: f64,
    theta: f64,
    gamma_wl: f64,
    extras: &RateExtras,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Config(format!(
            "compute_rate_bound: epsilon must be positive, got {epsilon}"
        )));
    }
    if !(gamma_wl > 0.0 && gamma_wl <= 1.0) {
        return Err(Error::Config(format!(
            "compute_rate_bound: gamma_wl must be in (0, 1], got {gamma_wl}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::Config("compute_rate_bound: theta must be finite".to_string()));
    }
    let w_floor = (1.0 - loss.inv_link(theta)).min(loss.inv_link(-theta));
    if w_floor <= 0.0 {
        return Err(Error::Config(format!(
            "compute_rate_bound: the weight floor w̲({theta}) vanishes for the {} loss \
             (θ reaches the link's clamp) — every bound is vacuous there",
            loss.name()
        )));
    }
    let b_ls = 2.0 * (loss.surrogate(0.0) - loss.floor_c)
        / (loss.kappa * epsilon * epsilon * w_floor * w_floor * gamma_wl * gamma_wl);
    match class {
        ModelClass::Ls => Ok(b_ls),
        ModelClass::Dt => Ok(b_ls.exp()),
        ModelClass::Adt => {
            if extras.adt_n < 2 {
                return Err(Error::Config(format!(
                    "compute_rate_bound: ADT outdegree must be ≥ 2, got {}",
                    extras.adt_n
                )));
            }
            let n = extras.adt_n as f64;
            Ok(n * (b_ls / n).exp())
        }
        ModelClass::Knn => {
            if extras.k_rec == 0 || extras.m == 0 {
                return Err(Error::Config(
                    "compute_rate_bound: K-NN needs m ≥ 1 and K_rec ≥ 1".to_string(),
                ));
            }
            if extras.k_rec > extras.m {
                return Err(Error::Config(format!(
                    "compute_rate_bound: K_rec = {} exceeds m = {}",
                    extras.k_rec, extras.m
                )));
            }
            Ok(extras.m as f64 * b_ls / extras.k_rec as f64)
        }
        ModelClass::Lbp => {
            if !(extras.lbp_c > 0.0 && extras.lbp_c < 1.0) {
                return Err(Error::Config(format!(
                    "compute_rate_bound: LBP exponent c must be in (0, 1), got {}",
                    extras.lbp_c
                )));
            }
            Ok(b_ls.powf(1.0 / (1.0 - extras.lbp_c)))
        }
    }
}

/// The exact CSV header emitted by [`emit_csv`].
pub const CSV_HEADER: &str = "loss,model,gamma,eta,theta,accuracy_clean,expected_posterior,\
bayes_posterior,weak_calls,final_surrogate,stop_reason";

/// Writes sweep records as CSV: the fixed header, then one row per record,
/// sorted by (loss, model, η, γ) regardless of input order, floats in
/// shortest round-trip form. Deterministic byte-for-byte across runs.
/// An empty record set is a configuration error.
pub fn emit_csv(records: &[SweepRecord], mut writer: impl Write) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("emit_csv: no records".to_string()));
    }
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    writeln!(writer, "{CSV_HEADER}")?;
    for r in &sorted {
        writeln!(
            writer,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.loss,
            r.model,
            r.gamma,
            r.eta,
            r.theta,
            r.accuracy_clean,
            r.expected_posterior,
            r.bayes_posterior,
            r.weak_calls,
            r.final_surrogate,
            r.stop_reason
        )?;
    }
    Ok(())
}

/// Which quantity an SVG plot shows against γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgPanel {
    /// Clean-sample accuracy.
    Accuracy,
    /// Expected posterior, with a dashed Bayes line per η.
    Posterior,
    /// Weak calls consumed.
    Calls,
}

impl SvgPanel {
    /// Canonical lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            SvgPanel::Accuracy => "accuracy",
            SvgPanel::Posterior => "posterior",
            SvgPanel::Calls => "calls",
        }
    }
}

impl fmt::Display for SvgPanel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SvgPanel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(SvgPanel::Accuracy),
            "posterior" => Ok(SvgPanel::Posterior),
            "calls" => Ok(SvgPanel::Calls),
            other => Err(Error::Config(format!(
                "unknown SVG panel '{other}' (expected accuracy, posterior, or calls)"
            ))),
        }
    }
}

const SVG_PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Renders one panel of a single (loss, model) sweep as a 640×480 SVG:
/// γ on a log-scaled x-axis, one polyline per η, and — on the posterior
/// panel — a dashed horizontal Bayes line (`1 − η`) per η. Records spanning
/// several (loss, model) pairs are a configuration error (emit one file per
/// pair).
pub fn emit_svg(records: &[SweepRecord], panel: SvgPanel, mut writer: impl Write) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("emit_svg: no records".to_string()));
    }
    let (loss, model) = (records[0].loss, records[0].model);
    if records.iter().any(|r| r.loss != loss || r.model != model) {
        return Err(Error::Config(
            "emit_svg: records span several (loss, model) pairs; plot one pair per file"
                .to_string(),
        ));
    }
    if records.iter().any(|r| r.gamma.is_nan() || r.gamma <= 0.0) {
        return Err(Error::Config("emit_svg: gammas must be positive".to_string()));
    }

    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut etas: Vec<f64> = sorted.iter().map(|r| r.eta).collect();
    etas.sort_by(f64::total_cmp);
    etas.dedup();

    let lg_min = sorted
        .iter()
        .map(|r| r.gamma.log10())
        .fold(f64::INFINITY, f64::min);
    let lg_max = sorted
        .iter()
        .map(|r| r.gamma.log10())
        .fold(f64::NEG_INFINITY, f64::max);
    let map_x = |gamma: f64| {
        if lg_max == lg_min {
            330.0
        } else {
            60.0 + (gamma.log10() - lg_min) / (lg_max - lg_min) * 540.0
        }
    };
    let value_of = |r: &SweepRecord| match panel {
        SvgPanel::Accuracy => r.accuracy_clean,
        SvgPanel::Posterior => r.expected_posterior,
        SvgPanel::Calls => r.weak_calls as f64,
    };
    let v_max = match panel {
        SvgPanel::Calls => sorted.iter().map(value_of).fold(1.0, f64::max),
        _ => 1.0,
    };
    let map_y = |v: f64| 440.0 - 400.0 * (v / v_max);

    writeln!(
        writer,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="640" height="480" viewBox="0 0 640 480">"##
    )?;
    writeln!(writer, r##"<rect width="640" height="480" fill="#ffffff"/>"##)?;
    writeln!(
        writer,
        r##"<text x="320" y="24" font-family="sans-serif" font-size="16" text-anchor="middle" fill="#111111">{loss} / {model} — {panel} vs γ</text>"##
    )?;
    // Axes.
    writeln!(
        writer,
        r##"<path d="M 60 40 L 60 440 L 600 440" stroke="#333333" fill="none" stroke-width="1"/>"##
    )?;
    // Decade ticks on the log-γ axis.
    let k_lo = lg_min.ceil() as i32;
    let k_hi = lg_max.floor() as i32;
    for k in k_lo..=k_hi {
        let x = map_x(10f64.powi(k));
        writeln!(
            writer,
            r##"<line x1="{x:.2}" y1="440" x2="{x:.2}" y2="446" stroke="#333333"/>"##
        )?;
        writeln!(
            writer,
            r##"<text x="{x:.2}" y="460" font-family="sans-serif" font-size="11" text-anchor="middle" fill="#333333">1e{k}</text>"##
        )?;
    }
    writeln!(
        writer,
        r##"<text x="330" y="476" font-family="sans-serif" font-size="12" text-anchor="middle" fill="#333333">γ (log scale)</text>"##
    )?;
    // Y ticks.
    let y_ticks: Vec<f64> = match panel {
        SvgPanel::Calls => vec![0.0, v_max],
        _ => vec![0.0, 0.5, 1.0],
    };
    for v in y_ticks {
        let y = map_y(v);
        writeln!(
            writer,
            r##"<line x1="54" y1="{y:.2}" x2="60" y2="{y:.2}" stroke="#333333"/>"##
        )?;
        writeln!(
            writer,
            r##"<text x="48" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end" fill="#333333">{v}</text>"##,
            y + 4.0
        )?;
    }

    for (idx, &eta) in etas.iter().enumerate() {
        let color = SVG_PALETTE[idx % SVG_PALETTE.len()];
        let mut pts: Vec<&SweepRecord> = sorted.iter().filter(|r| r.eta == eta).collect();
        pts.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
        let path: Vec<String> = pts
            .iter()
            .map(|r| format!("{:.2},{:.2}", map_x(r.gamma), map_y(value_of(r))))
            .collect();
        writeln!(
            writer,
            r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"##,
            path.join(" ")
        )?;
        if panel == SvgPanel::Posterior {
            let y = map_y(1.0 - eta);
            writeln!(
                writer,
                r##"<line x1="60" y1="{y:.2}" x2="600" y2="{y:.2}" stroke="{color}" stroke-width="1" stroke-dasharray="6 4" opacity="0.6"/>"##
            )?;
        }
        // Legend.
        let ly = 52.0 + 16.0 * idx as f64;
        writeln!(
            writer,
            r##"<line x1="500" y1="{ly:.2}" x2="524" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"##
        )?;
        writeln!(
            writer,
            r##"<text x="530" y="{:.2}" font-family="sans-serif" font-size="11" fill="#333333">η = {eta}</text>"##,
            ly + 4.0
        )?;
    }
    writeln!(writer, "</svg>")?;
    Ok(())
}
