//! Partition-linear models: the common representation behind linear
//! separators, decision trees, alternating decision trees, leveraged K-NN,
//! and labeled branching programs.
//!
//! Every model this crate trains is a sum of *leveraged weak hypotheses
//! localized to regions*:
//!
//! ```text
//! H(x) = Σ_t α_t · h_t(x) · 1[x ∈ X_t]
//! ```
//!
//! where each `h_t` is a weak real-valued hypothesis and each `X_t` a region
//! of the input domain. The five model classes differ only in which regions
//! and hypotheses they admit:
//!
//! * **LS** (linear separators): `X_t` is always the whole domain and
//!   `h_t(x) = x_j` is a coordinate, so `H(x) = θ·x`;
//! * **DT** (decision trees): regions are tree leaves (conjunctions of axis
//!   conditions) and hypotheses are axis-aligned half-stumps, added in
//!   companion pairs so the leaf partition stays a partition;
//! * **ADT** (alternating decision trees): same growth as DT here, but the
//!   architecture caps the *outdegree* of prediction nodes, which changes the
//!   boosting-rate accounting, not the geometry;
//! * **K-NN** (leveraged nearest neighbors): regions are *reciprocal
//!   neighborhoods* of training examples and the model stores an additive
//!   value per example, summed over a query's K nearest examples;
//! * **LBP** (labeled branching programs): regions are unions of leaf cells,
//!   because a split is shared across every current leaf and the resulting
//!   children are merged two-by-two.
//!
//! The module also houses two decision-tree closed forms. At a leaf with
//! `m⁺` positive of `m` total copies, leveraging drives the leaf score to
//! exactly `fwd_link(m⁺/m)` — saturated at `±Z_MAX` when the link diverges —
//! and once every leaf is leveraged the population surrogate risk equals the
//! multiplicity-weighted mean of the Bayes risks of the leaf posteriors,
//! `Σ_ℓ (m_ℓ/m)·L̄(p⁺_ℓ)`. Both are exposed as ops so tests and experiments
//! can pin the booster's trajectory against them.

use crate::datasets::Dataset;
use crate::losses::ProperLoss;
use crate::{Error, Result};

/// Saturation bound for leaf scores when the canonical link diverges (pure
/// leaves under log or Matusita loss).
pub const Z_MAX: f64 = 50.0;

/// One axis-aligned condition, `x[axis] ≥ threshold` or its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCond {
    /// Coordinate index (0 or 1).
    pub axis: usize,
    /// Threshold `a`.
    pub threshold: f64,
    /// `true` for `x[axis] ≥ a`, `false` for `x[axis] < a`.
    pub geq: bool,
}

impl AxisCond {
    /// Whether the condition holds at `x`.
    pub fn holds(&self, x: &[f64; 2]) -> bool {
        (x[self.axis] >= self.threshold) == self.geq
    }

    /// The complementary condition (same axis and threshold, flipped side).
    pub fn complement(&self) -> AxisCond {
        AxisCond {
            geq: !self.geq,
            ..*self
        }
    }
}

/// A conjunction of axis conditions; the empty conjunction is the whole
/// domain. Decision-tree leaves are cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cell {
    /// The conditions, all of which must hold.
    pub conds: Vec<AxisCond>,
}

impl Cell {
    /// The whole domain.
    pub fn whole() -> Cell {
        Cell::default()
    }

    /// Whether `x` satisfies every condition.
    pub fn contains(&self, x: &[f64; 2]) -> bool {
        self.conds.iter().all(|c| c.holds(x))
    }

    /// This cell further constrained by `cond`.
    pub fn refine(&self, cond: AxisCond) -> Cell {
        let mut conds = self.conds.clone();
        conds.push(cond);
        Cell { conds }
    }
}

/// A union of cells. Branching-program nodes are regions; for trees and
/// linear separators every region is a single cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// The cells whose union forms the region.
    pub cells: Vec<Cell>,
}

impl Region {
    /// The whole domain (one empty cell).
    pub fn whole() -> Region {
        Region {
            cells: vec![Cell::whole()],
        }
    }

    /// A region made of a single cell.
    pub fn from_cell(cell: Cell) -> Region {
        Region { cells: vec![cell] }
    }

    /// Whether any cell contains `x`.
    pub fn contains(&self, x: &[f64; 2]) -> bool {
        self.cells.iter().any(|c| c.contains(x))
    }
}

/// The weak hypothesis alphabet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseHypothesis {
    /// `h(x) = x[axis]` — the linear-separator alphabet.
    AxisDirection {
        /// Coordinate index.
        axis: usize,
    },
    /// `h(x) = value·1[cond holds]` with `|value| = 1` — a half-stump, zero
    /// off its covered half.
    StumpHalf {
        /// The covered half.
        cond: AxisCond,
        /// The half's output, `+1` or `−1`.
        value: f64,
    },
    /// `h(x) = value` everywhere on the region — root predictions and
    /// nearest-neighbor indicator hypotheses.
    Constant {
        /// The constant output.
        value: f64,
    },
}

/// A weak hypothesis: a pure function of the input point. Localization to a
/// region is handled by the step that leverages it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakHypothesis {
    /// The underlying function.
    pub base: BaseHypothesis,
}

impl WeakHypothesis {
    /// `h(x) = x[axis]`.
    pub fn axis_direction(axis: usize) -> WeakHypothesis {
        debug_assert!(axis < 2);
        WeakHypothesis {
            base: BaseHypothesis::AxisDirection { axis },
        }
    }

    /// `h(x) = value` on the step's region.
    pub fn constant(value: f64) -> WeakHypothesis {
        WeakHypothesis {
            base: BaseHypothesis::Constant { value },
        }
    }

    /// `h(x) = value·1[cond]`.
    pub fn stump_half(cond: AxisCond, value: f64) -> WeakHypothesis {
        debug_assert!(value == 1.0 || value == -1.0);
        WeakHypothesis {
            base: BaseHypothesis::StumpHalf { cond, value },
        }
    }

    /// Evaluates the hypothesis at `x`.
    pub fn eval(&self, x: &[f64; 2]) -> f64 {
        match self.base {
            BaseHypothesis::AxisDirection { axis } => x[axis],
            BaseHypothesis::StumpHalf { cond, value } => {
                if cond.holds(x) {
                    value
                } else {
                    0.0
                }
            }
            BaseHypothesis::Constant { value } => value,
        }
    }
}

/// One leveraged step: `x ↦ alpha·h(x)·1[x ∈ region]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlmStep {
    /// Leveraging coefficient `α_t`.
    pub alpha: f64,
    /// The weak hypothesis `h_t`.
    pub hypothesis: WeakHypothesis,
    /// The region `X_t` the step is localized to.
    pub region: Region,
}

impl PlmStep {
    /// The step's contribution to the score at `x`.
    pub fn eval(&self, x: &[f64; 2]) -> f64 {
        if self.region.contains(x) {
            self.alpha * self.hypothesis.eval(x)
        } else {
            0.0
        }
    }
}

/// A partition-linear model: the sum of its steps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlmModel {
    /// The leveraged steps, in training order.
    pub steps: Vec<PlmStep>,
}

impl PlmModel {
    /// `H(x) = Σ_t α_t·h_t(x)·1[x ∈ X_t]`.
    pub fn score(&self, x: &[f64; 2]) -> f64 {
        self.steps.iter().map(|s| s.eval(x)).sum()
    }
}

/// Thresholds a real score into a 0/1 label; the tie `H(x) = 0` goes to the
/// positive class.
pub fn predict_label(score: f64) -> u8 {
    if score >= 0.0 {
        1
    } else {
        0
    }
}

/// K-nearest-neighbor index over a weighted dataset.
///
/// Neighborhoods are *multiplicity-aware and tie-inclusive*: the K nearest
/// copies are collected in distance order, whole distance-levels at a time,
/// so every row at the cut-off distance is included. A row is always in its
/// own neighborhood (distance zero).
///
/// `reciprocals[j]` is the reciprocal neighborhood `R(j) = {i : j ∈ NN_K(i)}`
/// — the set of examples for which example `j` belongs to the K-NN. These
/// are the regions the K-NN booster leverages, and `k_rec`, the least total
/// multiplicity of any `R(j)`, is the coverage constant in the K-NN boosting
/// rate. `R(j)` always contains `j`, so `k_rec ≥ 1`.
#[derive(Debug, Clone)]
pub struct KnnIndex {
    /// Neighborhood size K, counted in copies.
    pub k: u64,
    /// `neighbors[i]` = rows in `NN_K(x_i)`.
    pub neighbors: Vec<Vec<usize>>,
    /// `reciprocals[j]` = rows `i` with `j ∈ neighbors[i]`.
    pub reciprocals: Vec<Vec<usize>>,
    /// `min_j Σ_{i ∈ R(j)} multiplicity(i)`.
    pub k_rec: u64,
}

/// The tie-inclusive K-NN rule: rows of `points`, sorted by distance to `x`,
/// taken whole distance-levels at a time until at least `k` copies are
/// gathered.
fn knn_rows_of_point(points: &[[f64; 2]], mults: &[u64], x: &[f64; 2], k: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    let dist2 = |p: &[f64; 2]| {
        let dx = p[0] - x[0];
        let dy = p[1] - x[1];
        dx * dx + dy * dy
    };
    order.sort_by(|&a, &b| dist2(&points[a]).total_cmp(&dist2(&points[b])));
    let mut taken = Vec::new();
    let mut copies = 0u64;
    let mut idx = 0;
    while idx < order.len() && copies < k {
        // Take the whole distance level (ties included).
        let d = dist2(&points[order[idx]]);
        while idx < order.len() && dist2(&points[order[idx]]) == d {
            taken.push(order[idx]);
            copies += mults[order[idx]];
            idx += 1;
        }
    }
    taken.sort_unstable();
    taken
}

/// Builds the K-NN index of a dataset. `k = 0` is a configuration error;
/// `k` larger than the total multiplicity simply makes every neighborhood
/// the whole sample.
pub fn knn_build_index(dataset: &Dataset, k: u64) -> Result<KnnIndex> {
    if k == 0 {
        return Err(Error::Config("knn_build_index: k must be ≥ 1".to_string()));
    }
    if dataset.examples.is_empty() {
        return Err(Error::Config(
            "knn_build_index: empty dataset".to_string(),
        ));
    }
    let points: Vec<[f64; 2]> = dataset.examples.iter().map(|e| e.x).collect();
    let mults: Vec<u64> = dataset.examples.iter().map(|e| e.multiplicity).collect();
    let n = points.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| knn_rows_of_point(&points, &mults, &points[i], k))
        .collect();
    let mut reciprocals: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, nn) in neighbors.iter().enumerate() {
        for &j in nn {
            reciprocals[j].push(i);
        }
    }
    let k_rec = reciprocals
        .iter()
        .map(|r| r.iter().map(|&i| mults[i]).sum::<u64>())
        .min()
        .expect("nonempty dataset");
    debug_assert!(k_rec >= 1, "every row is its own neighbor");
    Ok(KnnIndex {
        k,
        neighbors,
        reciprocals,
        k_rec,
    })
}

/// A leveraged K-NN model: an additive value per training row, summed over
/// the query's K nearest rows.
#[derive(Debug, Clone)]
pub struct KnnModel {
    /// Training row coordinates.
    pub points: Vec<[f64; 2]>,
    /// Training row multiplicities.
    pub mults: Vec<u64>,
    /// Neighborhood size K (copies).
    pub k: u64,
    /// The per-row additive values `v_j`.
    pub values: Vec<f64>,
}

impl KnnModel {
    /// A zero model over the dataset's rows.
    pub fn new(dataset: &Dataset, k: u64) -> Result<KnnModel> {
        if k == 0 {
            return Err(Error::Config("KnnModel: k must be ≥ 1".to_string()));
        }
        Ok(KnnModel {
            points: dataset.examples.iter().map(|e| e.x).collect(),
            mults: dataset.examples.iter().map(|e| e.multiplicity).collect(),
            k,
            values: vec![0.0; dataset.examples.len()],
        })
    }

    /// `H(x) = Σ_{j ∈ NN_K(x)} v_j`.
    pub fn score(&self, x: &[f64; 2]) -> f64 {
        knn_rows_of_point(&self.points, &self.mults, x, self.k)
            .into_iter()
            .map(|j| self.values[j])
            .sum()
    }
}

/// The trained model of one boosting run, tagged by class.
#[derive(Debug, Clone)]
pub enum ModelState {
    /// Linear separator `H(x) = θ·x`.
    Ls(PlmModel),
    /// Decision tree (root prediction plus half-stump pairs on leaf cells).
    Dt(PlmModel),
    /// Alternating decision tree: same partition-linear form, with the
    /// architecture's outdegree cap recorded for rate accounting.
    Adt {
        /// The additive model.
        plm: PlmModel,
        /// Maximum outdegree N of non-leaf prediction nodes (root included).
        outdegree: u64,
    },
    /// Leveraged K-NN.
    Knn(KnnModel),
    /// Labeled branching program (shared splits, merged nodes).
    Lbp(PlmModel),
}

impl ModelState {
    /// The model's real-valued score at `x`.
    pub fn score(&self, x: &[f64; 2]) -> f64 {
        match self {
            ModelState::Ls(p) | ModelState::Dt(p) | ModelState::Lbp(p) => p.score(x),
            ModelState::Adt { plm, .. } => plm.score(x),
            ModelState::Knn(k) => k.score(x),
        }
    }

    /// The model's 0/1 label at `x` (tie at score 0 → positive).
    pub fn predict_label(&self, x: &[f64; 2]) -> u8 {
        predict_label(self.score(x))
    }
}

/// The leveraged score of a decision-tree leaf, in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafLeverage {
    /// The leaf posterior `p⁺ = m⁺/m`.
    pub p_pos: f64,
    /// The leaf score `fwd_link(p⁺)`, clamped to `±Z_MAX` if the link
    /// diverges or exceeds the bound.
    pub h_leaf: f64,
    /// Whether clamping occurred.
    pub saturated: bool,
}

/// Closed form of leaf leveraging: driving a leaf's weights to balance sets
/// its score to exactly `fwd_link(m⁺/m)`. Pure leaves under an unbounded
/// link saturate at `±Z_MAX`. `m_all = 0` or `m_pos > m_all` is a
/// configuration error.
///
/// # Examples
///
/// ```
/// use properboost::losses::{make_loss, LossKind};
/// use properboost::models::dt_leaf_closed_form;
///
/// let sq = make_loss(LossKind::Square);
/// let leaf = dt_leaf_closed_form(&sq, 3, 4).unwrap();
/// assert_eq!(leaf.h_leaf, 0.5); // fwd(3/4) = 2·(3/4) − 1
/// assert!(!leaf.saturated);
///
/// let lg = make_loss(LossKind::Log);
/// let pure = dt_leaf_closed_form(&lg, 4, 4).unwrap();
/// assert_eq!(pure.h_leaf, 50.0); // the log link diverges at p⁺ = 1
/// assert!(pure.saturated);
/// ```
pub fn dt_leaf_closed_form(loss: &ProperLoss, m_pos: u64, m_all: u64) -> Result<LeafLeverage> {
    if m_all == 0 {
        return Err(Error::Config(
            "dt_leaf_closed_form: empty leaf (m_all = 0)".to_string(),
        ));
    }
    if m_pos > m_all {
        return Err(Error::Config(format!(
            "dt_leaf_closed_form: m_pos = {m_pos} exceeds m_all = {m_all}"
        )));
    }
    let p_pos = m_pos as f64 / m_all as f64;
    let z = loss.fwd_link(p_pos);
    let (h_leaf, saturated) = if !z.is_finite() || z.abs() > Z_MAX {
        (Z_MAX.copysign(if z > 0.0 { 1.0 } else { -1.0 }), true)
    } else {
        (z, false)
    };
    Ok(LeafLeverage {
        p_pos,
        h_leaf,
        saturated,
    })
}

/// Per-leaf multiplicity counts for the surrogate identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafStat {
    /// Positive copies in the leaf.
    pub m_pos: u64,
    /// Total copies in the leaf.
    pub m_all: u64,
}

/// The fully-leveraged tree's population surrogate risk, in closed form:
/// `Σ_ℓ (m_ℓ/m)·L̄(p⁺_ℓ)`. Empty input or an empty leaf is a configuration
/// error.
///
/// This is the bridge between boosting a proper loss and classical
/// impurity-driven tree induction: leveraging leaves minimizes exactly the
/// L̄-impurity of the leaf partition (entropy for log loss, Gini for square
/// loss — up to scale).
pub fn dt_population_surrogate_identity(loss: &ProperLoss, leaves: &[LeafStat]) -> Result<f64> {
    if leaves.is_empty() {
        return Err(Error::Config(
            "dt_population_surrogate_identity: no leaves".to_string(),
        ));
    }
    let mut total = 0u64;
    for leaf in leaves {
        if leaf.m_all == 0 || leaf.m_pos > leaf.m_all {
            return Err(Error::Config(format!(
                "dt_population_surrogate_identity: bad leaf counts {leaf:?}"
            )));
        }
        total += leaf.m_all;
    }
    Ok(leaves
        .iter()
        .map(|l| l.m_all as f64 * loss.bayes_risk(l.m_pos as f64 / l.m_all as f64))
        .sum::<f64>()
        / total as f64)
}

/// Splits every node of a branching program on the same axis condition and
/// merges the outcomes into exactly two children (the `cond`-true child and
/// the `cond`-false child), preserving out-degree 2.
///
/// A branching-program split must cut *every* current node: a node whose
/// examples fall entirely on one side makes the split invalid (configuration
/// error). `rows_by_node` lists each node's example rows in `dataset`.
pub fn lbp_split_merge(
    dataset: &Dataset,
    nodes: &[Region],
    rows_by_node: &[Vec<usize>],
    cond: AxisCond,
) -> Result<[Region; 2]> {
    if nodes.is_empty() || nodes.len() != rows_by_node.len() {
        return Err(Error::Config(
            "lbp_split_merge: nodes and rows_by_node must be nonempty and aligned".to_string(),
        ));
    }
    for (node_idx, rows) in rows_by_node.iter().enumerate() {
        let mut on = 0u64;
        let mut off = 0u64;
        for &r in rows {
            let ex = &dataset.examples[r];
            if cond.holds(&ex.x) {
                on += ex.multiplicity;
            } else {
                off += ex.multiplicity;
            }
        }
        if on == 0 || off == 0 {
            return Err(Error::Config(format!(
                "lbp_split_merge: split (axis {}, threshold {}) does not cut node {node_idx} \
                 (on = {on}, off = {off} copies)",
                cond.axis, cond.threshold
            )));
        }
    }
    let refine_all = |c: AxisCond| Region {
        cells: nodes
            .iter()
            .flat_map(|n| n.cells.iter().map(move |cell| cell.refine(c)))
            .collect(),
    };
    Ok([refine_all(cond), refine_all(cond.complement())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::LsDatasetSpec;
    use crate::losses::{make_loss, LossKind};

    #[test]
    fn axis_cond_and_cells() {
        let c = AxisCond {
            axis: 0,
            threshold: 0.5,
            geq: true,
        };
        assert!(c.holds(&[0.5, 0.0])); // boundary belongs to the ≥ side
        assert!(c.holds(&[0.9, -3.0]));
        assert!(!c.holds(&[0.49, 10.0]));
        assert!(c.complement().holds(&[0.49, 10.0]));
        assert!(!c.complement().holds(&[0.5, 0.0]));

        let cell = Cell::whole().refine(c).refine(AxisCond {
            axis: 1,
            threshold: 0.0,
            geq: false,
        });
        assert!(cell.contains(&[0.7, -0.1]));
        assert!(!cell.contains(&[0.7, 0.0]));
        assert!(Cell::whole().contains(&[1e9, -1e9]));

        let region = Region {
            cells: vec![
                Cell::whole().refine(c),
                Cell::whole().refine(c.complement()),
            ],
        };
        // The union of complementary cells is the whole domain.
        for x in [[0.0, 0.0], [1.0, 1.0], [-5.0, 2.0]] {
            assert!(region.contains(&x));
        }
    }

    #[test]
    fn hypothesis_eval() {
        let h = WeakHypothesis::axis_direction(1);
        assert_eq!(h.eval(&[3.0, -0.25]), -0.25);
        let cond = AxisCond {
            axis: 0,
            threshold: 1.0,
            geq: true,
        };
        let stump = WeakHypothesis::stump_half(cond, -1.0);
        assert_eq!(stump.eval(&[1.0, 0.0]), -1.0);
        assert_eq!(stump.eval(&[0.99, 0.0]), 0.0);
        let k = WeakHypothesis::constant(0.75);
        assert_eq!(k.eval(&[9.0, 9.0]), 0.75);
    }

    #[test]
    fn plm_score_sums_localized_steps() {
        let cond = AxisCond {
            axis: 0,
            threshold: 0.0,
            geq: true,
        };
        let model = PlmModel {
            steps: vec![
                PlmStep {
                    alpha: 2.0,
                    hypothesis: WeakHypothesis::constant(1.0),
                    region: Region::whole(),
                },
                PlmStep {
                    alpha: -3.0,
                    hypothesis: WeakHypothesis::stump_half(cond, 1.0),
                    region: Region::from_cell(Cell::whole()),
                },
            ],
        };
        assert_eq!(model.score(&[1.0, 0.0]), -1.0); // 2 − 3
        assert_eq!(model.score(&[-1.0, 0.0]), 2.0); // stump half is 0 here
        assert_eq!(predict_label(model.score(&[-1.0, 0.0])), 1);
        assert_eq!(predict_label(model.score(&[1.0, 0.0])), 0);
        assert_eq!(predict_label(0.0), 1); // tie goes positive
    }

    #[test]
    fn leaf_closed_forms() {
        let sq = make_loss(LossKind::Square);
        let leaf = dt_leaf_closed_form(&sq, 3, 4).unwrap();
        assert_eq!(leaf.p_pos, 0.75);
        assert_eq!(leaf.h_leaf, 0.5);
        assert!(!leaf.saturated);

        // Pure leaves: bounded links stay exact, unbounded links saturate.
        assert_eq!(dt_leaf_closed_form(&sq, 4, 4).unwrap().h_leaf, 1.0);
        let lg = make_loss(LossKind::Log);
        let pure = dt_leaf_closed_form(&lg, 4, 4).unwrap();
        assert!(pure.saturated);
        assert_eq!(pure.h_leaf, Z_MAX);
        let empty_pos = dt_leaf_closed_form(&lg, 0, 4).unwrap();
        assert!(empty_pos.saturated);
        assert_eq!(empty_pos.h_leaf, -Z_MAX);

        assert!(dt_leaf_closed_form(&sq, 0, 0).is_err());
        assert!(dt_leaf_closed_form(&sq, 5, 4).is_err());
    }

    #[test]
    fn surrogate_identity_matches_hand_sum() {
        let lg = make_loss(LossKind::Log);
        // Two leaves: (3 of 4) and (1 of 12).
        let leaves = [
            LeafStat { m_pos: 3, m_all: 4 },
            LeafStat {
                m_pos: 1,
                m_all: 12,
            },
        ];
        let expect =
            (4.0 * lg.bayes_risk(0.75) + 12.0 * lg.bayes_risk(1.0 / 12.0)) / 16.0;
        assert!((dt_population_surrogate_identity(&lg, &leaves).unwrap() - expect).abs() < 1e-15);
        assert!(dt_population_surrogate_identity(&lg, &[]).is_err());
        assert!(dt_population_surrogate_identity(
            &lg,
            &[LeafStat { m_pos: 1, m_all: 0 }]
        )
        .is_err());
    }

    #[test]
    fn knn_index_on_noisy_sample() {
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        // K = 1: each row's neighborhood is the distance-0 tie level — both
        // rows at its own point.
        let idx = knn_build_index(&noisy, 1).unwrap();
        for i in 0..6 {
            let partner = (i + 3) % 6;
            let mut expect = vec![i, partner];
            expect.sort_unstable();
            assert_eq!(idx.neighbors[i], expect, "row {i}");
            assert_eq!(idx.reciprocals[i], expect, "row {i} reciprocal");
        }
        // Reciprocal multiplicities: point A and C carry 4 copies, B carries 8.
        assert_eq!(idx.k_rec, 4);

        // K = 5 at observation A: its own 4 copies don't suffice, so the
        // next distance level (B, the nearer of the other points) joins.
        let idx5 = knn_build_index(&noisy, 5).unwrap();
        assert_eq!(idx5.neighbors[0], vec![0, 1, 3, 4]);
        // At B (8 copies at distance 0) the own-point level already covers K.
        assert_eq!(idx5.neighbors[1], vec![1, 4]);

        assert!(knn_build_index(&noisy, 0).is_err());
        // K beyond the total multiplicity: everything is everyone's neighbor.
        let idx_all = knn_build_index(&noisy, 1000).unwrap();
        assert_eq!(idx_all.neighbors[2], vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(idx_all.k_rec, 16);
    }

    #[test]
    fn knn_model_scores_sum_neighborhood_values() {
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let mut model = KnnModel::new(&noisy, 1).unwrap();
        model.values[0] = 2.0; // at A⁺
        model.values[3] = 0.5; // at A⁻ (same point)
        model.values[1] = -1.0; // at B⁺
        let a = noisy.examples[0].x;
        let b = noisy.examples[1].x;
        let c = noisy.examples[2].x;
        assert_eq!(model.score(&a), 2.5); // both rows at A
        assert_eq!(model.score(&b), -1.0);
        assert_eq!(model.score(&c), 0.0);
        // A query off the training points snaps to its nearest level.
        assert_eq!(model.score(&[0.9, 0.0]), 2.5);
    }

    #[test]
    fn lbp_split_merge_cuts_every_node() {
        let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
        let noisy = spec.make_noisy();
        let nodes = vec![Region::whole()];
        let rows: Vec<Vec<usize>> = vec![(0..6).collect()];
        // x₀ ≥ 0.55 separates A from {B, C}: cuts the root.
        let cond = AxisCond {
            axis: 0,
            threshold: 0.55,
            geq: true,
        };
        let [on, off] = lbp_split_merge(&noisy, &nodes, &rows, cond).unwrap();
        assert!(on.contains(&[1.0, 0.0]));
        assert!(!on.contains(&[0.1, 0.5]));
        assert!(off.contains(&[0.1, -0.1]));

        // A second split must cut BOTH nodes; x₁ ≥ 0.2 leaves the A-node
        // whole (A is the only example there), so it is rejected.
        let nodes2 = vec![on, off];
        let rows2 = vec![vec![0usize, 3], vec![1, 2, 4, 5]];
        let cond2 = AxisCond {
            axis: 1,
            threshold: 0.2,
            geq: true,
        };
        let err = lbp_split_merge(&noisy, &nodes2, &rows2, cond2);
        assert!(matches!(err, Err(Error::Config(_))));

        // x₁ ≥ −0.05 cuts the {B, C} node (B below, C above) but still not
        // the A node, so it is rejected too; a split on x₀ at 0.55 cuts
        // neither node and is rejected as well.
        assert!(lbp_split_merge(&noisy, &nodes2, &rows2, cond).is_err());
    }

    #[test]
    fn model_state_dispatch() {
        let plm = PlmModel {
            steps: vec![PlmStep {
                alpha: 1.5,
                hypothesis: WeakHypothesis::axis_direction(0),
                region: Region::whole(),
            }],
        };
        let ls = ModelState::Ls(plm.clone());
        assert_eq!(ls.score(&[2.0, 0.0]), 3.0);
        assert_eq!(ls.predict_label(&[2.0, 0.0]), 1);
        assert_eq!(ls.predict_label(&[-2.0, 0.0]), 0);
        let adt = ModelState::Adt {
            plm,
            outdegree: 2,
        };
        assert_eq!(adt.score(&[2.0, 0.0]), 3.0);
    }
}
