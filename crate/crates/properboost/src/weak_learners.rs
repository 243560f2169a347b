//! Weak learners and the edge calculus.
//!
//! A weak hypothesis `h` is scored on a region `R` (a subset of example
//! rows) by its *normalized edge*
//!
//! ```text
//!             Σ_{i∈R} m_i w_i y*_i h(x_i)
//! edge(h) = ─────────────────────────────────
//!           (Σ_{i∈R} m_i w_i) · max_{i∈R}|h(x_i)|
//! ```
//!
//! — the weight-expected correlation between `h` and the ±1 labels, scaled
//! into `[−1, 1]`. The region in the denominator is the *whole* region the
//! hypothesis will be leveraged on: a half-stump that vanishes off its
//! covered half is still normalized by the full region's weight mass, which
//! is exactly what makes its edge equal (on a weight-balanced region) to its
//! companion's.
//!
//! The weak learning assumption (WLA) demands `|edge| ≥ γ_WL`; a learner
//! that cannot meet it returns `None` — the booster treats that as
//! exhaustion, not as an error. Everything here is exact and deterministic:
//! candidate thresholds are midpoints of consecutive distinct coordinate
//! values, ties are broken by (lowest axis, lowest threshold, positive
//! polarity), and K-NN leverage candidates by lowest row index.
//!
//! Region choice for trees and branching programs follows the criterion
//! `J(R) = (Σ_{i∈R} m_i w_i)² / M_R` (with `M_R` the region's copy count),
//! i.e. copies × squared mean weight. `J` is superadditive under partition
//! refinement (Cauchy–Schwarz), so the best region of a partition always
//! carries at least its proportional share `J(whole)/N` — the fact that
//! powers the exponentially-slower-but-still-converging tree rates.

use crate::datasets::Dataset;
use crate::models::{AxisCond, KnnIndex, WeakHypothesis};
use crate::{Error, Result};
use std::collections::HashMap;

/// A weak hypothesis together with its normalized edge on the region it was
/// searched over.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeReport {
    /// The hypothesis.
    pub hypothesis: WeakHypothesis,
    /// Its normalized edge (signed).
    pub edge: f64,
}

impl EdgeReport {
    /// `|edge|`, the WLA quantity.
    pub fn abs_edge(&self) -> f64 {
        self.edge.abs()
    }
}

/// Sum of `m_i·w_i` and `m_i·w_i·y*_i·h(x_i)` over a region, plus
/// `max |h(x_i)|`.
fn edge_sums(
    dataset: &Dataset,
    weights: &[f64],
    hypothesis: &WeakHypothesis,
    region_rows: &[usize],
) -> (f64, f64, f64) {
    let mut mass = 0.0;
    let mut corr = 0.0;
    let mut hmax = 0.0f64;
    for &i in region_rows {
        let ex = &dataset.examples[i];
        let m = ex.multiplicity as f64;
        let h = hypothesis.eval(&ex.x);
        mass += m * weights[i];
        corr += m * weights[i] * ex.y_star() * h;
        hmax = hmax.max(h.abs());
    }
    (mass, corr, hmax)
}

/// The normalized edge of `hypothesis` on the region given by `region_rows`.
///
/// Errors: a hypothesis that vanishes identically on the region
/// (`max|h| = 0`) is a configuration error; a region with zero weight mass
/// is a numeric error (the booster has driven the region's weights to zero —
/// there is nothing left to correlate against).
pub fn normalized_edge(
    dataset: &Dataset,
    weights: &[f64],
    hypothesis: &WeakHypothesis,
    region_rows: &[usize],
) -> Result<f64> {
    debug_assert_eq!(weights.len(), dataset.rows());
    if region_rows.is_empty() {
        return Err(Error::Config(
            "normalized_edge: empty region".to_string(),
        ));
    }
    let (mass, corr, hmax) = edge_sums(dataset, weights, hypothesis, region_rows);
    if hmax == 0.0 {
        return Err(Error::Config(
            "normalized_edge: hypothesis vanishes on the region (max|h| = 0)".to_string(),
        ));
    }
    if mass <= 0.0 {
        return Err(Error::Numeric(format!(
            "normalized_edge: zero weight mass on a {}-row region",
            region_rows.len()
        )));
    }
    Ok(corr / (mass * hmax))
}

/// Best coordinate-direction hypothesis `h(x) = x_j` over the whole sample —
/// the linear-separator weak learner. Returns `None` when no axis meets the
/// WLA threshold `γ_WL`; ties prefer the lowest axis.
pub fn best_axis_hypothesis(
    dataset: &Dataset,
    weights: &[f64],
    gamma_wl: f64,
) -> Result<Option<EdgeReport>> {
    let all_rows: Vec<usize> = (0..dataset.rows()).collect();
    let mut best: Option<EdgeReport> = None;
    for axis in 0..2 {
        let hypothesis = WeakHypothesis::axis_direction(axis);
        // An axis on which every point is 0 can't be normalized; skip it
        // rather than erroring, as the other axis may still be usable.
        let (_, _, hmax) = edge_sums(dataset, weights, &hypothesis, &all_rows);
        if hmax == 0.0 {
            continue;
        }
        let edge = normalized_edge(dataset, weights, &hypothesis, &all_rows)?;
        let better = match &best {
            None => true,
            Some(b) => edge.abs() > b.abs_edge(),
        };
        if better {
            best = Some(EdgeReport { hypothesis, edge });
        }
    }
    Ok(best.filter(|b| b.abs_edge() >= gamma_wl))
}

/// Candidate stump thresholds on one axis over a set of rows: the midpoints
/// of consecutive distinct sorted coordinate values. Fewer than two distinct
/// values yields no candidates.
fn midpoint_thresholds(dataset: &Dataset, rows: &[usize], axis: usize) -> Vec<f64> {
    let mut vals: Vec<f64> = rows
        .iter()
        .map(|&i| dataset.examples[i].x[axis])
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Best half-stump `h(x) = c·1[x_j ≥ a]` on a region, with the edge
/// normalized over the *whole* region. Thresholds are midpoints of
/// consecutive distinct coordinate values; `c ∈ {+1, −1}`. Ties prefer the
/// lowest axis, then the lowest threshold, then `c = +1`. Returns `None`
/// when the region has no valid split or no candidate meets `γ_WL`.
pub fn best_stump_half(
    dataset: &Dataset,
    weights: &[f64],
    region_rows: &[usize],
    gamma_wl: f64,
) -> Result<Option<EdgeReport>> {
    let mut best: Option<EdgeReport> = None;
    for axis in 0..2 {
        for threshold in midpoint_thresholds(dataset, region_rows, axis) {
            for value in [1.0, -1.0] {
                let cond = AxisCond {
                    axis,
                    threshold,
                    geq: true,
                };
                let hypothesis = WeakHypothesis::stump_half(cond, value);
                let edge = normalized_edge(dataset, weights, &hypothesis, region_rows)?;
                let better = match &best {
                    None => true,
                    Some(b) => edge.abs() > b.abs_edge(),
                };
                if better {
                    best = Some(EdgeReport { hypothesis, edge });
                }
            }
        }
    }
    Ok(best.filter(|b| b.abs_edge() >= gamma_wl))
}

/// The companion of a half-stump: same axis and threshold, complementary
/// half, negated value — so that stump + companion together form the full
/// two-sided stump. Only half-stumps have companions.
pub fn companion_hypothesis(hypothesis: &WeakHypothesis) -> Result<WeakHypothesis> {
    match hypothesis.base {
        crate::models::BaseHypothesis::StumpHalf { cond, value } => {
            Ok(WeakHypothesis::stump_half(cond.complement(), -value))
        }
        _ => Err(Error::Config(
            "companion_hypothesis: only half-stumps have companions".to_string(),
        )),
    }
}

/// Picks the region of a partition maximizing
/// `J(R) = (Σ_{i∈R} m_i·w_i)² / M_R`. Empty partitions are a configuration
/// error; regions with no rows score 0; ties prefer the lowest index.
pub fn choose_region_by_j(
    dataset: &Dataset,
    weights: &[f64],
    partition: &[Vec<usize>],
) -> Result<usize> {
    if partition.is_empty() {
        return Err(Error::Config(
            "choose_region_by_j: empty partition".to_string(),
        ));
    }
    let mut best_idx = 0;
    let mut best_j = f64::NEG_INFINITY;
    for (idx, rows) in partition.iter().enumerate() {
        let mut mass = 0.0;
        let mut copies = 0u64;
        for &i in rows {
            let ex = &dataset.examples[i];
            mass += ex.multiplicity as f64 * weights[i];
            copies += ex.multiplicity;
        }
        let j = if copies == 0 {
            0.0
        } else {
            mass * mass / copies as f64
        };
        if j > best_j {
            best_j = j;
            best_idx = idx;
        }
    }
    Ok(best_idx)
}

/// Best K-NN leverage point: the training row whose reciprocal neighborhood
/// `R(j)`, treated as the support of a constant `+1` hypothesis, has the
/// largest absolute edge. Rows with identical reciprocal neighborhoods are
/// a single candidate (represented by the lowest row index); ties prefer the
/// lowest row index. Returns `None` when no candidate meets `γ_WL`.
pub fn knn_best_leverage_point(
    dataset: &Dataset,
    weights: &[f64],
    index: &KnnIndex,
    gamma_wl: f64,
) -> Result<Option<(usize, EdgeReport)>> {
    let mut seen: HashMap<&[usize], usize> = HashMap::new();
    let mut candidates: Vec<usize> = Vec::new();
    for (j, rec) in index.reciprocals.iter().enumerate() {
        if !seen.contains_key(rec.as_slice()) {
            seen.insert(rec.as_slice(), j);
            candidates.push(j);
        }
    }
    let mut best: Option<(usize, EdgeReport)> = None;
    for j in candidates {
        // A zero-mass reciprocal neighborhood is perfectly fit; skip it
        // rather than treating the 0/0 edge as an error.
        let mass: f64 = index.reciprocals[j]
            .iter()
            .map(|&i| dataset.examples[i].multiplicity as f64 * weights[i])
            .sum();
        if mass == 0.0 {
            continue;
        }
        let hypothesis = WeakHypothesis::constant(1.0);
        let edge = normalized_edge(dataset, weights, &hypothesis, &index.reciprocals[j])?;
        let better = match &best {
            None => true,
            Some((_, b)) => edge.abs() > b.abs_edge(),
        };
        if better {
            best = Some((j, EdgeReport { hypothesis, edge }));
        }
    }
    Ok(best.filter(|(_, b)| b.abs_edge() >= gamma_wl))
}

/// Best shared split for a branching program: a half-stump over the union of
/// all current nodes' rows, restricted to splits that cut *every* node into
/// two nonempty (by multiplicity) parts. Same tie-breaking as
/// [`best_stump_half`]. Returns `None` when no valid split meets `γ_WL`.
pub fn lbp_best_shared_split(
    dataset: &Dataset,
    weights: &[f64],
    rows_by_node: &[Vec<usize>],
    gamma_wl: f64,
) -> Result<Option<EdgeReport>> {
    if rows_by_node.is_empty() {
        return Err(Error::Config(
            "lbp_best_shared_split: no nodes".to_string(),
        ));
    }
    let union_rows: Vec<usize> = rows_by_node.iter().flatten().copied().collect();
    let cuts_every_node = |cond: &AxisCond| {
        rows_by_node.iter().all(|rows| {
            let mut on = 0u64;
            let mut off = 0u64;
            for &i in rows {
                let ex = &dataset.examples[i];
                if cond.holds(&ex.x) {
                    on += ex.multiplicity;
                } else {
                    off += ex.multiplicity;
                }
            }
            on > 0 && off > 0
        })
    };
    let mut best: Option<EdgeReport> = None;
    for axis in 0..2 {
        for threshold in midpoint_thresholds(dataset, &union_rows, axis) {
            let cond = AxisCond {
                axis,
                threshold,
                geq: true,
            };
            if !cuts_every_node(&cond) {
                continue;
            }
            for value in [1.0, -1.0] {
                let hypothesis = WeakHypothesis::stump_half(cond, value);
                let edge = normalized_edge(dataset, weights, &hypothesis, &union_rows)?;
                let better = match &best {
                    None => true,
                    Some(b) => edge.abs() > b.abs_edge(),
                };
                if better {
                    best = Some(EdgeReport { hypothesis, edge });
                }
            }
        }
    }
    Ok(best.filter(|b| b.abs_edge() >= gamma_wl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::LsDatasetSpec;
    use crate::losses::{make_loss, weight, LossKind};
    use crate::models::{knn_build_index, BaseHypothesis};

    /// Initial square-loss weights (all 1/2) on a dataset.
    fn init_weights(rows: usize) -> Vec<f64> {
        vec![0.5; rows]
    }

    #[test]
    fn constant_edge_on_noisy_sample() {
        // At N = 3 with uniform weights, the constant +1 hypothesis has edge
        // (N−1)/(N+1) = 1/2 on the noisy sample.
        let spec = LsDatasetSpec::new(0.02, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let w = init_weights(6);
        let all: Vec<usize> = (0..6).collect();
        let h = WeakHypothesis::constant(1.0);
        let edge = normalized_edge(&noisy, &w, &h, &all).unwrap();
        assert!((edge - 0.5).abs() < 1e-15);
        // Scaling the constant leaves the normalized edge unchanged.
        let h3 = WeakHypothesis::constant(3.0);
        let e3 = normalized_edge(&noisy, &w, &h3, &all).unwrap();
        assert!((e3 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn edge_error_cases() {
        let spec = LsDatasetSpec::new(0.02, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let all: Vec<usize> = (0..6).collect();
        let zero_h = WeakHypothesis::constant(0.0);
        assert!(matches!(
            normalized_edge(&noisy, &init_weights(6), &zero_h, &all),
            Err(Error::Config(_))
        ));
        let h = WeakHypothesis::constant(1.0);
        assert!(matches!(
            normalized_edge(&noisy, &[0.0; 6], &h, &all),
            Err(Error::Numeric(_))
        ));
        assert!(matches!(
            normalized_edge(&noisy, &init_weights(6), &h, &[]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn first_iteration_axis_edges_match_closed_forms() {
        // Square loss, γ = 0.02, N = 3: edge(x₁) = (1+3γ)(N−1)/(4(N+1)) =
        // 0.1325 and edge(x₂) = 3(N−1)/(20(N+1)) = 0.075, so axis 0 wins.
        let g = 0.02;
        let spec = LsDatasetSpec::new(g, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let w = init_weights(6);
        let report = best_axis_hypothesis(&noisy, &w, 0.001).unwrap().unwrap();
        assert!(matches!(
            report.hypothesis.base,
            BaseHypothesis::AxisDirection { axis: 0 }
        ));
        assert!((report.edge - 0.1325).abs() < 1e-15, "e₁ = {}", report.edge);
        let x2 = WeakHypothesis::axis_direction(1);
        let all: Vec<usize> = (0..6).collect();
        let e2 = normalized_edge(&noisy, &w, &x2, &all).unwrap();
        assert!((e2 - 0.075).abs() < 1e-14, "e₂ = {e2}");
        // A threshold above both edges exhausts the learner.
        assert!(best_axis_hypothesis(&noisy, &w, 0.99).unwrap().is_none());
    }

    #[test]
    fn axis_edge_uses_true_weights_not_just_uniform() {
        // Same closed form at N = 4 under log loss (inv(0) = 1/2 too, so
        // weights are again 1/2 — check a *non*-uniform weight vector also
        // runs through the machinery).
        let spec = LsDatasetSpec::new(0.05, 5.0, 4, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let lg = make_loss(LossKind::Log);
        let w: Vec<f64> = noisy
            .examples
            .iter()
            .map(|e| weight(&lg, e.y, 0.3 * e.x[0]))
            .collect();
        let report = best_axis_hypothesis(&noisy, &w, 0.001).unwrap().unwrap();
        assert!(report.abs_edge() <= 1.0 + 1e-12);
    }

    #[test]
    fn stump_search_on_clean_sample() {
        // Clean sample (γ = 0.1, all positive, uniform weights): the best
        // half-stump is x₂ ≥ −0.05 with c = +1, covering A and C, edge 1/2.
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let clean = spec.make_clean();
        let w = init_weights(3);
        let rows: Vec<usize> = (0..3).collect();
        let report = best_stump_half(&clean, &w, &rows, 0.001)
            .unwrap()
            .unwrap();
        match report.hypothesis.base {
            BaseHypothesis::StumpHalf { cond, value } => {
                assert_eq!(cond.axis, 1);
                assert!((cond.threshold - (-0.05)).abs() < 1e-15);
                assert!(cond.geq);
                assert_eq!(value, 1.0); // tie with c = −1 broken to +1
            }
            other => panic!("unexpected hypothesis {other:?}"),
        }
        assert!((report.edge - 0.5).abs() < 1e-15);
    }

    #[test]
    fn stump_search_exhausts_on_single_point_region() {
        // A region with one distinct point has no midpoint thresholds.
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let w = init_weights(6);
        // Rows 0 and 3 are both at observation A.
        let report = best_stump_half(&noisy, &w, &[0, 3], 0.001).unwrap();
        assert!(report.is_none());
    }

    #[test]
    fn companion_flips_half_and_sign() {
        let cond = AxisCond {
            axis: 0,
            threshold: 0.51,
            geq: true,
        };
        let h = WeakHypothesis::stump_half(cond, 1.0);
        let c = companion_hypothesis(&h).unwrap();
        match c.base {
            BaseHypothesis::StumpHalf { cond, value } => {
                assert!(!cond.geq);
                assert_eq!(value, -1.0);
                assert_eq!(cond.threshold, 0.51);
            }
            other => panic!("unexpected companion {other:?}"),
        }
        // h + companion form the full stump: they never overlap and cover
        // everything.
        for x in [[0.0, 0.0], [0.51, 1.0], [1.0, -1.0]] {
            let vals = (h.eval(&x), c.eval(&x));
            assert!(vals.0 == 0.0 || vals.1 == 0.0);
            assert!((vals.0 + vals.1).abs() == 1.0);
        }
        assert!(companion_hypothesis(&WeakHypothesis::constant(1.0)).is_err());
    }

    #[test]
    fn j_criterion_prefers_mass_over_spread() {
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        // Region 0 = observation A's rows (4 copies), region 1 = B's rows
        // (8 copies). With uniform weights J is proportional to copy count,
        // so B's region wins.
        let w = init_weights(6);
        let partition = vec![vec![0, 3], vec![1, 4]];
        assert_eq!(choose_region_by_j(&noisy, &w, &partition).unwrap(), 1);
        // Zero out B's weights: J(B) = 0 and A wins.
        let mut w2 = w.clone();
        w2[1] = 0.0;
        w2[4] = 0.0;
        assert_eq!(choose_region_by_j(&noisy, &w2, &partition).unwrap(), 0);
        // Ties go to the lowest index.
        let tie = vec![vec![0, 3], vec![2, 5]];
        assert_eq!(choose_region_by_j(&noisy, &w, &tie).unwrap(), 0);
        assert!(choose_region_by_j(&noisy, &w, &[]).is_err());
    }

    #[test]
    fn j_matches_closed_form() {
        // J(whole noisy sample) with uniform weights w: (m·w)²/m = m·w².
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let w = init_weights(6);
        let rows: Vec<usize> = (0..6).collect();
        let mass: f64 = rows
            .iter()
            .map(|&i| noisy.examples[i].multiplicity as f64 * w[i])
            .sum();
        let j = mass * mass / 16.0;
        assert_eq!(j, 4.0); // 8²/16
    }

    #[test]
    fn knn_leverage_candidates_dedupe_to_observations() {
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let idx = knn_build_index(&noisy, 1).unwrap();
        let w = init_weights(6);
        let (row, report) = knn_best_leverage_point(&noisy, &w, &idx, 0.001)
            .unwrap()
            .unwrap();
        // All three observations have edge (N−1)/(N+1) = 1/2; the tie goes
        // to the lowest row.
        assert_eq!(row, 0);
        assert!((report.edge - 0.5).abs() < 1e-15);
        // Raising the WLA threshold above 1/2 exhausts the learner.
        assert!(knn_best_leverage_point(&noisy, &w, &idx, 0.6)
            .unwrap()
            .is_none());
    }

    #[test]
    fn lbp_shared_split_respects_cut_constraint() {
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let w = init_weights(6);
        // Single root node: every midpoint cuts it, so a best split exists.
        let root = vec![(0..6).collect::<Vec<usize>>()];
        let report = lbp_best_shared_split(&noisy, &w, &root, 0.001).unwrap();
        assert!(report.is_some());
        // Two nodes {A} and {B, C}: no single threshold cuts both (A is a
        // lone point on every axis), so the learner exhausts.
        let nodes = vec![vec![0usize, 3], vec![1, 2, 4, 5]];
        let report = lbp_best_shared_split(&noisy, &w, &nodes, 0.001).unwrap();
        assert!(report.is_none());
    }
}
