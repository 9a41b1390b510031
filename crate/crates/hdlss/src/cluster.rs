//! From PC scores to class labels: the sequential sign rule implied by the
//! score-vertex geometry, seeded k-means with restarts for when the
//! regularity behind the sign rule is in doubt, permutation-matched accuracy
//! against known truth, and the end-to-end pipeline.

use crate::error::{Error, Result};
use crate::model::class_counts;
use crate::pca::dual_pca;
use crate::sampler::DataMatrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clustering strategy used by [`pipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Sequential sign rule on the first `k-1` score rows. Assumes the score
    /// orientation convention, so it is most meaningful when true labels fix
    /// the signs; with ambiguous orientation prefer k-means.
    SignRule,
    /// Lloyd iterations with k-means++ restarts on the score feature space.
    KMeans,
}

impl Method {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sign" => Ok(Self::SignRule),
            "kmeans" => Ok(Self::KMeans),
            other => Err(Error::InvalidInput(format!(
                "unknown method '{other}' (expected sign or kmeans)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SignRule => "sign",
            Self::KMeans => "kmeans",
        }
    }
}

/// Best label permutation against a reference labeling and the agreement it
/// achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatch {
    /// `permutation[i]` is the reference class matched to predicted class
    /// `i+1`.
    pub permutation: Vec<usize>,
    pub accuracy: f64,
}

/// Output of a clustering run.
#[derive(Debug, Clone)]
pub struct ClusterResult {
    /// Predicted class per sample, in `1..=k`.
    pub labels: Vec<usize>,
    pub method: Method,
    /// Number of score components the decision used.
    pub feature_dim: usize,
    /// Cluster centers in the feature space (k-means only).
    pub centers: Option<Vec<Vec<f64>>>,
    /// Filled when true labels were available.
    pub accuracy: Option<LabelMatch>,
}

/// Sequential sign rule: a sample goes to the first class `i < k` whose
/// score row is strictly positive for it, and to class `k` otherwise. Zero
/// sits on the non-positive side, matching the vertex layout where classes
/// before `i` rest exactly at zero.
///
/// Only signs matter: rescaling any row by a positive constant cannot change
/// the labels.
pub fn sign_rule(scores: &[Vec<f64>], k: usize) -> Result<ClusterResult> {
    if k < 2 {
        return Err(Error::InvalidInput("sign rule needs k >= 2".into()));
    }
    if scores.len() < k - 1 {
        return Err(Error::InvalidInput(format!(
            "sign rule needs {} score rows, got {}",
            k - 1,
            scores.len()
        )));
    }
    let n = scores[0].len();
    for (i, row) in scores.iter().enumerate().take(k - 1) {
        if row.len() != n {
            return Err(Error::InvalidInput(format!(
                "score row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
    }
    let labels = (0..n)
        .map(|j| {
            (0..k - 1)
                .find(|&i| scores[i][j] > 0.0)
                .map(|i| i + 1)
                .unwrap_or(k)
        })
        .collect();
    Ok(ClusterResult {
        labels,
        method: Method::SignRule,
        feature_dim: k - 1,
        centers: None,
        accuracy: None,
    })
}

/// Settings for [`kmeans`].
#[derive(Debug, Clone)]
pub struct KMeansConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Relative change of the objective below which Lloyd stops.
    pub tolerance: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 10,
            max_iterations: 100,
            tolerance: 1e-10,
        }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Seeded k-means: best of `restarts` k-means++ initializations by
/// within-cluster sum of squares, Lloyd iterations to a local optimum.
/// Restart `r` draws from stream `r` of the seed, so the result does not
/// depend on evaluation order. An iteration that empties a cluster re-seeds
/// that center to the point farthest from its current center.
pub fn kmeans(points: &[Vec<f64>], k: usize, config: &KMeansConfig) -> Result<ClusterResult> {
    let n = points.len();
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    if n < k {
        return Err(Error::InvalidInput(format!(
            "k-means needs at least k = {k} points, got {n}"
        )));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(Error::InvalidInput("points must have dimension >= 1".into()));
    }
    for (j, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::InvalidInput(format!(
                "point {j} has dimension {}, expected {dim}",
                p.len()
            )));
        }
    }
    let restarts = config.restarts.max(1);
    let mut best: Option<(f64, Vec<usize>, Vec<Vec<f64>>)> = None;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let centers = plus_plus_init(points, k, &mut rng);
        let (objective, labels, centers) = lloyd(points, centers, config);
        let better = match &best {
            None => true,
            Some((obj, _, _)) => objective < *obj,
        };
        if better {
            best = Some((objective, labels, centers));
        }
    }
    let (_, labels, centers) = best.expect("at least one restart ran");
    Ok(ClusterResult {
        labels: labels.iter().map(|&c| c + 1).collect(),
        method: Method::KMeans,
        feature_dim: dim,
        centers: Some(centers),
        accuracy: None,
    })
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let first = ((uniform(rng) * n as f64) as usize).min(n - 1);
    let mut centers = vec![points[first].clone()];
    let mut nearest: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let chosen = if total > 0.0 {
            let mut target = uniform(rng) * total;
            let mut idx = n - 1;
            for (j, &w) in nearest.iter().enumerate() {
                if target < w {
                    idx = j;
                    break;
                }
                target -= w;
            }
            idx
        } else {
            // all remaining mass is on existing centers; any point will do
            ((uniform(rng) * n as f64) as usize).min(n - 1)
        };
        centers.push(points[chosen].clone());
        for (dist, p) in nearest.iter_mut().zip(points) {
            let d = squared_distance(p, centers.last().unwrap());
            if d < *dist {
                *dist = d;
            }
        }
    }
    centers
}

fn assign(points: &[Vec<f64>], centers: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let mut labels = Vec::with_capacity(points.len());
    let mut objective = 0.0;
    for p in points {
        let mut best = 0;
        let mut best_d = squared_distance(p, &centers[0]);
        for (c, center) in centers.iter().enumerate().skip(1) {
            let d = squared_distance(p, center);
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        labels.push(best);
        objective += best_d;
    }
    (labels, objective)
}

fn lloyd(
    points: &[Vec<f64>],
    mut centers: Vec<Vec<f64>>,
    config: &KMeansConfig,
) -> (f64, Vec<usize>, Vec<Vec<f64>>) {
    let k = centers.len();
    let dim = points[0].len();
    let (mut labels, mut objective) = assign(points, &centers);
    for _ in 0..config.max_iterations {
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&labels) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // re-seed an emptied cluster to the point farthest from its
                // current center
                let mut far = 0;
                let mut far_d = -1.0;
                for (j, p) in points.iter().enumerate() {
                    let d = squared_distance(p, &centers[labels[j]]);
                    if d > far_d {
                        far = j;
                        far_d = d;
                    }
                }
                centers[c] = points[far].clone();
            } else {
                for (ctr, s) in centers[c].iter_mut().zip(&sums[c]) {
                    *ctr = s / counts[c] as f64;
                }
            }
        }
        let (new_labels, new_objective) = assign(points, &centers);
        debug_assert!(new_objective <= objective + 1e-9 * objective.abs().max(1.0));
        let converged = (objective - new_objective).abs()
            <= config.tolerance * objective.abs().max(f64::MIN_POSITIVE);
        labels = new_labels;
        objective = new_objective;
        if converged {
            break;
        }
    }
    (objective, labels, centers)
}

/// Maximizes label agreement over all `k!` class permutations (exhaustive,
/// supported for `k <= 8`). Ties resolve to the lexicographically first
/// permutation, so equal predictions map through the identity.
pub fn match_accuracy(pred: &[usize], truth: &[usize], k: usize) -> Result<LabelMatch> {
    if k > 8 {
        return Err(Error::Unsupported(format!(
            "label matching enumerates k! permutations and supports k <= 8, got {k}"
        )));
    }
    if pred.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "label vectors have lengths {} and {}",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::InvalidInput("label vectors are empty".into()));
    }
    class_counts(pred, k)?;
    class_counts(truth, k)?;
    let n = pred.len();
    let mut best_perm: Vec<usize> = (1..=k).collect();
    let mut best_hits = 0usize;
    let mut perm: Vec<usize> = (1..=k).collect();
    permutations(&mut perm, 0, &mut |p| {
        let hits = pred
            .iter()
            .zip(truth)
            .filter(|(&a, &b)| p[a - 1] == b)
            .count();
        if hits > best_hits {
            best_hits = hits;
            best_perm = p.to_vec();
        }
    });
    Ok(LabelMatch {
        permutation: best_perm,
        accuracy: best_hits as f64 / n as f64,
    })
}

/// Visits permutations in lexicographic order of swap positions.
fn permutations(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Settings for [`pipeline`].
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub method: Method,
    /// Components mapped into the feature space; defaults to 3, always at
    /// least `k - 1`, and clamped at `n - 1`.
    pub feature_dim: Option<usize>,
    pub kmeans: KMeansConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            // without labels the score orientation is ambiguous, which can
            // flip the sign rule; k-means does not care
            method: Method::KMeans,
            feature_dim: None,
            kmeans: KMeansConfig::default(),
        }
    }
}

/// Dual-PCA step shared by [`pipeline`] and the command-line front end:
/// retains `max(k - 1, feature_dim or 3)` components clamped at `n - 1`,
/// aligns the orientation with true labels when the data carry them, and
/// reports how many leading score rows are actually defined.
pub fn score_space(
    x: &DataMatrix,
    k: usize,
    feature_dim: Option<usize>,
) -> Result<(crate::pca::DualPca, usize)> {
    let n = x.n();
    if k < 2 {
        return Err(Error::InvalidInput("clustering needs k >= 2".into()));
    }
    if n < k {
        return Err(Error::InvalidInput(format!(
            "need at least k = {k} samples, got {n}"
        )));
    }
    let requested = feature_dim.unwrap_or(3).max(k - 1);
    let retained = requested.min(n - 1);
    let mut pca = dual_pca(x, retained)?;
    if let Some(labels) = x.labels() {
        let occupied = x.counts().map(|c| c.iter().all(|&v| v > 0)).unwrap_or(false);
        if occupied {
            pca.orient_with_labels(labels, k)?;
        }
    }
    let defined = (1..=retained).take_while(|&i| pca.is_defined(i)).count();
    Ok((pca, defined))
}

/// The three-step recommendation: dual PCA, map onto the leading score
/// components, cluster there. When the data carry true labels those fix the
/// score orientation and the result reports permutation-matched accuracy.
pub fn pipeline(x: &DataMatrix, k: usize, config: &PipelineConfig) -> Result<ClusterResult> {
    let n = x.n();
    let (pca, defined) = score_space(x, k, config.feature_dim)?;
    let mut result = match config.method {
        Method::SignRule => {
            let rows = pca.score_rows(k - 1)?;
            sign_rule(&rows, k)?
        }
        Method::KMeans => {
            // use the longest defined prefix of score rows as features
            let rows = pca.score_rows(defined)?;
            let points: Vec<Vec<f64>> = (0..n)
                .map(|j| rows.iter().map(|row| row[j]).collect())
                .collect();
            kmeans(&points, k, &config.kmeans)?
        }
    };
    if let Some(truth) = x.labels() {
        result.accuracy = Some(match_accuracy(&result.labels, truth, k)?);
    }
    Ok(result)
}
