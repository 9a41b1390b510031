//! Mixture models and their asymptotic geometry.
//!
//! A [`MixtureModel`] holds `k` population means, covariances, and mixing
//! proportions. From it the module derives everything the theory side needs:
//! pairwise squared mean gaps, the mixture mean and covariance, the limiting
//! score vertices and eigenvalues, numeric separation diagnostics, and the
//! label-driven limit of the dual covariance used as a test oracle.

use crate::error::{Error, Result};
use crate::linalg::{
    power_iteration_top, sym_eigen, SymMatrix, DENSE_CHOLESKY_CAP, DENSE_EIGEN_CAP,
};

/// A `k`-class mixture: per-class means `mu_i`, covariances `Sigma_i`, and
/// mixing proportions summing to one.
///
/// `k = 1` is admitted so that single-population sphericity checks can run
/// through the same machinery; operations that need at least one pair of
/// classes reject it explicitly.
#[derive(Debug, Clone)]
pub struct MixtureModel {
    k: usize,
    dim: usize,
    means: Vec<Vec<f64>>,
    covariances: Vec<SymMatrix>,
    mix: Vec<f64>,
}

impl MixtureModel {
    /// Covariance positive semidefiniteness is checked lazily where it is
    /// actually used (sampling, eigenvalues), not here.
    pub fn new(means: Vec<Vec<f64>>, covariances: Vec<SymMatrix>, mix: Vec<f64>) -> Result<Self> {
        let k = means.len();
        if k == 0 {
            return Err(Error::InvalidInput("a mixture needs at least one class".into()));
        }
        if covariances.len() != k || mix.len() != k {
            return Err(Error::InvalidInput(format!(
                "component counts disagree: {k} means, {} covariances, {} proportions",
                covariances.len(),
                mix.len()
            )));
        }
        let dim = means[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        for (i, m) in means.iter().enumerate() {
            if m.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "mean {i} has length {}, expected {dim}",
                    m.len()
                )));
            }
            if let Some(col) = m.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col });
            }
        }
        for (i, c) in covariances.iter().enumerate() {
            if c.order() != dim {
                return Err(Error::InvalidInput(format!(
                    "covariance {i} has order {}, expected {dim}",
                    c.order()
                )));
            }
        }
        validate_proportions(&mix)?;
        Ok(Self {
            k,
            dim,
            means,
            covariances,
            mix,
        })
    }

    /// Two-class toy: `mu_1 = 0`, `mu_2 = 1_d`, powered-exponential base
    /// covariance for class 1 and its alternating-sign modulation for
    /// class 2. Both traces equal `d`, and the squared mean gap is `d`.
    pub fn two_class(d: usize) -> Result<Self> {
        check_toy_dim(d)?;
        let gamma = powered_exponential_cov(d, 0.3, 1.0 / 3.0)?;
        let modulated = alternating_scaled_cov(&gamma);
        Self::new(
            vec![vec![0.0; d], vec![1.0; d]],
            vec![gamma, modulated],
            vec![0.5, 0.5],
        )
    }

    /// Three-class toy: means are all-ones vectors truncated at `d`,
    /// `ceil(d^{3/4})`, and `ceil(d^{1/2})` leading ones, so consecutive mean
    /// gaps have disjoint supports and shrinking ratios.
    pub fn three_class(d: usize) -> Result<Self> {
        check_toy_dim(d)?;
        let gamma = powered_exponential_cov(d, 0.3, 1.0 / 3.0)?;
        let modulated = alternating_scaled_cov(&gamma);
        let scaled = gamma.scaled(0.8);
        Self::new(
            vec![
                leading_ones(d, d),
                leading_ones(d, ceil_root_pow(d, 3, 4)),
                leading_ones(d, ceil_root_pow(d, 1, 2)),
            ],
            vec![gamma, modulated, scaled],
            vec![0.5, 0.25, 0.25],
        )
    }

    /// Four-class toy: the three-class construction plus a zero mean with a
    /// heavier modulated covariance, equal mixing proportions.
    pub fn four_class(d: usize) -> Result<Self> {
        check_toy_dim(d)?;
        let gamma = powered_exponential_cov(d, 0.3, 1.0 / 3.0)?;
        let modulated = alternating_scaled_cov(&gamma);
        let third = gamma.scaled(0.8);
        let fourth = modulated.scaled(1.2);
        Self::new(
            vec![
                leading_ones(d, d),
                leading_ones(d, ceil_root_pow(d, 3, 4)),
                leading_ones(d, ceil_root_pow(d, 1, 2)),
                vec![0.0; d],
            ],
            vec![gamma, modulated, third, fourth],
            vec![0.25, 0.25, 0.25, 0.25],
        )
    }

    /// Replaces the mixing proportions, keeping means and covariances.
    pub fn with_mix(mut self, mix: Vec<f64>) -> Result<Self> {
        if mix.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "expected {} proportions, got {}",
                self.k,
                mix.len()
            )));
        }
        validate_proportions(&mix)?;
        self.mix = mix;
        Ok(self)
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mean(&self, class: usize) -> &[f64] {
        &self.means[class - 1]
    }

    pub fn covariance(&self, class: usize) -> &SymMatrix {
        &self.covariances[class - 1]
    }

    pub fn mix(&self) -> &[f64] {
        &self.mix
    }

    /// Pairwise squared Euclidean distances between class means.
    pub fn mean_gaps(&self) -> MeanGaps {
        let mut pairs = Vec::new();
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                let gap: f64 = self.means[i]
                    .iter()
                    .zip(&self.means[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                pairs.push(gap);
            }
        }
        let min = pairs.iter().copied().fold(f64::INFINITY, f64::min);
        MeanGaps {
            k: self.k,
            pairs,
            min: if min.is_finite() { min } else { 0.0 },
        }
    }

    /// Difference of consecutive class means, `mu_i - mu_{i+1}`.
    pub fn mean_gap_vector(&self, i: usize) -> Vec<f64> {
        self.means[i - 1]
            .iter()
            .zip(&self.means[i])
            .map(|(a, b)| a - b)
            .collect()
    }

    /// Mixture mean, the proportion-weighted average of the class means.
    pub fn mixture_mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (eps, mean) in self.mix.iter().zip(&self.means) {
            for (o, m) in out.iter_mut().zip(mean) {
                *o += eps * m;
            }
        }
        out
    }

    /// Mixture covariance: the between-class rank-one sum plus the weighted
    /// within-class covariances, assembled densely.
    pub fn mixture_covariance(&self) -> Result<SymMatrix> {
        if self.dim > DENSE_CHOLESKY_CAP {
            return Err(Error::ResourceLimit {
                kind: "mixture covariance",
                requested: self.dim,
                cap: DENSE_CHOLESKY_CAP,
            });
        }
        let mut out = SymMatrix::zeros(self.dim)?;
        for a in 0..self.dim {
            for b in a..self.dim {
                let mut v = 0.0;
                for i in 0..self.k {
                    for j in (i + 1)..self.k {
                        let da = self.means[i][a] - self.means[j][a];
                        let db = self.means[i][b] - self.means[j][b];
                        v += self.mix[i] * self.mix[j] * da * db;
                    }
                    v += self.mix[i] * self.covariances[i].get(a, b);
                }
                out.set_sym(a, b, v);
            }
        }
        Ok(out)
    }

    /// Trace of the mixture covariance, computed without forming it.
    pub fn mixture_trace(&self) -> f64 {
        let gaps = self.mean_gaps();
        let mut idx = 0;
        let mut between = 0.0;
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                between += self.mix[i] * self.mix[j] * gaps.pairs[idx];
                idx += 1;
            }
        }
        let within: f64 = self
            .mix
            .iter()
            .zip(&self.covariances)
            .map(|(eps, cov)| eps * cov.trace())
            .sum();
        between + within
    }

    /// Numeric left-hand sides of the separation conditions at this model's
    /// dimension. All quantities shrink toward zero as the class structure
    /// dominates the within-class spread.
    pub fn condition_report(&self) -> Result<ConditionReport> {
        if self.k < 2 {
            return Err(Error::InvalidInput(
                "separation diagnostics need at least two classes".into(),
            ));
        }
        let gaps = self.mean_gaps();
        if gaps.min <= 0.0 {
            return Err(Error::InvalidInput(
                "conditions undefined: the minimum squared mean gap is zero".into(),
            ));
        }
        let dmin = gaps.min;

        let mut top_eigen = 0.0f64;
        let mut max_frob_sq = 0.0f64;
        for cov in &self.covariances {
            let top = if self.dim <= DENSE_EIGEN_CAP {
                sym_eigen(cov)?.values[0]
            } else {
                power_iteration_top(cov, 1e-8, 100_000)?
            };
            top_eigen = top_eigen.max(top);
            max_frob_sq = max_frob_sq.max(cov.frobenius_sq());
        }

        let traces: Vec<f64> = self.covariances.iter().map(SymMatrix::trace).collect();
        let mut ratio4 = 0.0f64;
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                ratio4 = ratio4.max((traces[i] - traces[j]).abs() / dmin);
            }
        }

        let (mut ratio5_cos, mut ratio5_gap) = (0.0f64, 0.0f64);
        if self.k >= 3 {
            let gap_vectors: Vec<Vec<f64>> =
                (1..self.k).map(|i| self.mean_gap_vector(i)).collect();
            for i in 0..(self.k - 1) {
                for j in (i + 1)..(self.k - 1) {
                    let dot: f64 = gap_vectors[i]
                        .iter()
                        .zip(&gap_vectors[j])
                        .map(|(a, b)| a * b)
                        .sum();
                    let ni = gaps.consecutive(i + 1).sqrt();
                    let nj = gaps.consecutive(j + 1).sqrt();
                    ratio5_cos = ratio5_cos.max((dot / (ni * nj)).abs());
                    ratio5_gap = ratio5_gap.max(gaps.consecutive(j + 1) / gaps.consecutive(i + 1));
                }
            }
        }

        let mut ratio6 = 0.0f64;
        if self.k >= 3 {
            for i in 1..=(self.k - 2) {
                let gap_vec = self.mean_gap_vector(i);
                for cov in &self.covariances {
                    ratio6 = ratio6.max(cov.quadratic_form(&gap_vec) / (dmin * dmin));
                }
            }
        }

        // Gaussian closed form for the variance of the squared distance to
        // the mixture mean: per class 4 m'Sigma m + 2 tr(Sigma^2), plus the
        // between-class variance of the conditional expectations.
        let mu = self.mixture_mean();
        let mut var_total = 0.0;
        let mut e_first = 0.0;
        let mut e_second = 0.0;
        for i in 0..self.k {
            let m: Vec<f64> = self.means[i].iter().zip(&mu).map(|(a, b)| a - b).collect();
            let quad = self.covariances[i].quadratic_form(&m);
            var_total += self.mix[i] * (4.0 * quad + 2.0 * self.covariances[i].frobenius_sq());
            let cond_mean = m.iter().map(|v| v * v).sum::<f64>() + traces[i];
            e_first += self.mix[i] * cond_mean;
            e_second += self.mix[i] * cond_mean * cond_mean;
        }
        var_total += e_second - e_first * e_first;
        let trace_sq = self.mixture_trace().powi(2);

        Ok(ConditionReport {
            dim: self.dim,
            ratio1: top_eigen / dmin,
            ratio2: max_frob_sq / (dmin * dmin),
            ratio3: 2.0 * max_frob_sq / (dmin * dmin),
            ratio4,
            ratio5_cos,
            ratio5_gap,
            ratio6,
            ratio21: var_total / trace_sq,
        })
    }
}

fn check_toy_dim(d: usize) -> Result<()> {
    if d < 4 {
        Err(Error::InvalidInput(format!(
            "toy models need d >= 4 so the leading-ones cutoffs are distinct, got {d}"
        )))
    } else {
        Ok(())
    }
}

fn leading_ones(d: usize, count: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    for x in v.iter_mut().take(count) {
        *x = 1.0;
    }
    v
}

fn validate_proportions(mix: &[f64]) -> Result<()> {
    for (i, &e) in mix.iter().enumerate() {
        if !(e > 0.0 && e <= 1.0) || !e.is_finite() {
            return Err(Error::InvalidInput(format!(
                "proportion {i} must lie in (0, 1], got {e}"
            )));
        }
    }
    let sum: f64 = mix.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "proportions must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

/// Smallest integer `m` with `m^den >= d^num`, i.e. the exact ceiling of
/// `d^(num/den)`. Integer arithmetic avoids the off-by-one that floating
/// `powf` produces at exact powers.
fn ceil_root_pow(d: usize, num: u32, den: u32) -> usize {
    let target = (d as u128).pow(num);
    let estimate = (d as f64).powf(num as f64 / den as f64);
    let mut m = (estimate.floor() as u128).saturating_sub(2);
    while m.pow(den) < target {
        m += 1;
    }
    m as usize
}

/// Correlation matrix with entries `rho^{|i-j|^exponent}` — the powered
/// exponential family. The diagonal is exactly one, so the trace is exactly
/// the order.
pub fn powered_exponential_cov(d: usize, rho: f64, exponent: f64) -> Result<SymMatrix> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidInput(format!(
            "base must lie in (0, 1), got {rho}"
        )));
    }
    if !(exponent > 0.0) {
        return Err(Error::InvalidInput(format!(
            "exponent must be positive, got {exponent}"
        )));
    }
    SymMatrix::from_fn(d, |i, j| {
        if i == j {
            1.0
        } else {
            rho.powf(((j - i) as f64).powf(exponent))
        }
    })
}

/// `B * base * B` where `B` is the alternating-sign diagonal with entries
/// `(-1)^i sqrt(0.5 + i/(d+1))` for `i = 1..=d`. Applied to a correlation
/// matrix this modulates the variances between 0.5 and 1.5 while keeping the
/// trace equal to the order.
pub fn alternating_scaled_cov(base: &SymMatrix) -> SymMatrix {
    let d = base.order();
    let diag: Vec<f64> = (1..=d)
        .map(|i| {
            let magnitude = (0.5 + i as f64 / (d + 1) as f64).sqrt();
            if i % 2 == 1 {
                -magnitude
            } else {
                magnitude
            }
        })
        .collect();
    SymMatrix::from_fn(d, |i, j| diag[i] * diag[j] * base.get(i, j))
        .expect("scaling preserves finiteness")
}

/// Pairwise squared mean gaps, ordered by `(i, j)` with `i < j`, plus their
/// minimum.
#[derive(Debug, Clone)]
pub struct MeanGaps {
    k: usize,
    pub pairs: Vec<f64>,
    pub min: f64,
}

impl MeanGaps {
    /// Gap between classes `i < j` (1-based).
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        assert!(1 <= i && i < j && j <= self.k);
        let i0 = i - 1;
        let j0 = j - 1;
        // index into the row-major strict upper triangle
        let offset = i0 * self.k - i0 * (i0 + 1) / 2;
        self.pairs[offset + (j0 - i0 - 1)]
    }

    /// Gap between consecutive classes `i` and `i+1` (1-based).
    pub fn consecutive(&self, i: usize) -> f64 {
        self.gap(i, i + 1)
    }
}

/// Separation diagnostics: each field is the left-hand quantity of one
/// asymptotic condition, evaluated at the model's dimension.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub dim: usize,
    /// Largest within-class top eigenvalue over the minimum gap.
    pub ratio1: f64,
    /// Largest squared within-class Frobenius norm over the squared gap.
    pub ratio2: f64,
    /// Gaussian closed form of the squared-norm variance over the squared
    /// gap: exactly twice `ratio2` for Gaussian populations.
    pub ratio3: f64,
    /// Largest within-class trace imbalance over the minimum gap.
    pub ratio4: f64,
    /// Largest |cosine| between distinct consecutive mean-gap directions
    /// (zero when fewer than three classes).
    pub ratio5_cos: f64,
    /// Largest ratio of a later consecutive gap to an earlier one.
    pub ratio5_gap: f64,
    /// Largest `gap' Sigma gap / gap_min^2` over leading gap vectors and all
    /// classes (zero when fewer than three classes).
    pub ratio6: f64,
    /// Sphericity companion: variance of the squared distance to the mixture
    /// mean over the squared total trace, Gaussian closed form.
    pub ratio21: f64,
}

/// Limiting values of the first `k-1` normalized PC scores, one vertex per
/// class. Row `i` (1-based component) takes value 0 for classes before `i`,
/// a positive value at class `i`, and a shared negative value after it.
#[derive(Debug, Clone)]
pub struct ScoreLimits {
    /// `(k-1) x k`: `vertices[i][g]` is the limit of score `i+1` for class `g+1`.
    pub vertices: Vec<Vec<f64>>,
    /// The proportions the vertices were computed from.
    pub proportions: Vec<f64>,
}

impl ScoreLimits {
    pub fn class_count(&self) -> usize {
        self.proportions.len()
    }

    /// The `(k-1)`-dimensional vertex point of a class (1-based).
    pub fn vertex(&self, class: usize) -> Vec<f64> {
        self.vertices.iter().map(|row| row[class - 1]).collect()
    }
}

/// Theoretical score vertices for proportions `p` (population mixing
/// proportions or realized class fractions, the caller chooses which).
///
/// With cumulative sums `P_i`, component `i` maps class `g` to
/// `sqrt((1-P_i)/(p_i (1-P_{i-1})))` at `g = i`,
/// `-sqrt(p_i/((1-P_i)(1-P_{i-1})))` for `g > i`, and 0 for `g < i`.
/// Every row has zero mean and unit variance under `p`.
pub fn score_limits(p: &[f64]) -> Result<ScoreLimits> {
    let k = p.len();
    if k < 2 {
        return Err(Error::InvalidInput(
            "score limits need at least two classes".into(),
        ));
    }
    validate_proportions(p)?;
    let cumulative = cumulative_sums(p);
    let mut vertices = Vec::with_capacity(k - 1);
    for i in 1..k {
        let below = cumulative[i - 1]; // P_{i-1}
        let upto = cumulative[i]; // P_i
        let positive = ((1.0 - upto) / (p[i - 1] * (1.0 - below))).sqrt();
        let negative = -(p[i - 1] / ((1.0 - upto) * (1.0 - below))).sqrt();
        let row = (1..=k)
            .map(|g| {
                if g < i {
                    0.0
                } else if g == i {
                    positive
                } else {
                    negative
                }
            })
            .collect();
        vertices.push(row);
    }
    Ok(ScoreLimits {
        vertices,
        proportions: p.to_vec(),
    })
}

/// Asymptotic eigenvalues paired with the score vertices: the `i`-th limit is
/// `p_i (1 - P_i) / (1 - P_{i-1})` times the `i`-th consecutive mean gap.
///
/// This constant is the one a brute-force reduced eigenproblem confirms (see
/// the tests); it reduces to `p_1 p_2 * gap` in the two-class case.
pub fn limit_eigenvalues(p: &[f64], consecutive_gaps: &[f64]) -> Result<Vec<f64>> {
    let k = p.len();
    if k < 2 {
        return Err(Error::InvalidInput(
            "eigenvalue limits need at least two classes".into(),
        ));
    }
    validate_proportions(p)?;
    if consecutive_gaps.len() != k - 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} consecutive gaps, got {}",
            k - 1,
            consecutive_gaps.len()
        )));
    }
    let cumulative = cumulative_sums(p);
    Ok((1..k)
        .map(|i| p[i - 1] * (1.0 - cumulative[i]) / (1.0 - cumulative[i - 1]) * consecutive_gaps[i - 1])
        .collect())
}

fn cumulative_sums(p: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for &v in p {
        acc += v;
        out.push(acc);
    }
    out
}

/// Realized class fractions of a label vector (labels are 1-based).
pub fn class_fractions(labels: &[usize], k: usize) -> Result<Vec<f64>> {
    let counts = class_counts(labels, k)?;
    let n = labels.len() as f64;
    Ok(counts.iter().map(|&c| c as f64 / n).collect())
}

/// Per-class counts of a label vector (labels are 1-based).
pub fn class_counts(labels: &[usize], k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidInput("class count must be >= 1".into()));
    }
    let mut counts = vec![0usize; k];
    for (j, &label) in labels.iter().enumerate() {
        if label == 0 || label > k {
            return Err(Error::InvalidInput(format!(
                "label {label} at position {j} is outside 1..={k}"
            )));
        }
        counts[label - 1] += 1;
    }
    Ok(counts)
}

/// The unit vectors the dual-covariance eigenvectors converge to, given the
/// realized labels: row `i` is the `i`-th score-limit row under the class
/// fractions, scaled to unit norm. Rows are mutually orthogonal.
///
/// Every class must be occupied, otherwise the defining fractions degenerate.
pub fn limit_score_directions(labels: &[usize], k: usize) -> Result<Vec<Vec<f64>>> {
    let counts = class_counts(labels, k)?;
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidInput(format!(
            "class {} is empty; limit directions are undefined",
            empty + 1
        )));
    }
    let n = labels.len();
    if n < k {
        return Err(Error::InvalidInput(format!(
            "need at least {k} samples, got {n}"
        )));
    }
    let fractions = class_fractions(labels, k)?;
    let limits = score_limits(&fractions)?;
    let scale = 1.0 / (n as f64).sqrt();
    Ok(limits
        .vertices
        .iter()
        .map(|row| labels.iter().map(|&g| row[g - 1] * scale).collect())
        .collect())
}

/// Noise-free counterpart of the dual PCA: every observation is replaced by
/// its class mean, centered at the fraction-weighted mean of the class means.
///
/// Its eigenstructure is the deterministic limit the data-driven dual PCA
/// approaches, which makes it a handy oracle: `u` holds the limiting score
/// directions, and `values`/`vectors` the spectrum of the class-mean Gram
/// matrix `V'V / n` with signs aligned so `vectors[i] . u[i] >= 0`.
#[derive(Debug, Clone)]
pub struct ClassMeanDual {
    /// Limiting unit score directions, `(k-1) x n`.
    pub u: Vec<Vec<f64>>,
    /// Centered class means `nu_i`, `k x d`.
    pub nu: Vec<Vec<f64>>,
    /// Columns of `V`: the centered class mean of each sample, `n x d`.
    pub v_columns: Vec<Vec<f64>>,
    /// Top `k-1` eigenvalues of `V'V / n`, descending.
    pub values: Vec<f64>,
    /// Matching unit eigenvectors, oriented toward `u`.
    pub vectors: Vec<Vec<f64>>,
}

pub fn class_mean_dual(model: &MixtureModel, labels: &[usize]) -> Result<ClassMeanDual> {
    let k = model.class_count();
    if k < 2 {
        return Err(Error::InvalidInput(
            "the class-mean dual needs at least two classes".into(),
        ));
    }
    let u = limit_score_directions(labels, k)?;
    let fractions = class_fractions(labels, k)?;
    let n = labels.len();
    let d = model.dim();

    let mut weighted_mean = vec![0.0; d];
    for (eta, mean) in fractions.iter().zip(&model.means) {
        for (w, m) in weighted_mean.iter_mut().zip(mean) {
            *w += eta * m;
        }
    }
    let nu: Vec<Vec<f64>> = model
        .means
        .iter()
        .map(|mean| mean.iter().zip(&weighted_mean).map(|(a, b)| a - b).collect())
        .collect();
    let v_columns: Vec<Vec<f64>> = labels.iter().map(|&g| nu[g - 1].clone()).collect();

    let gram = SymMatrix::from_fn(n, |i, j| {
        v_columns[i]
            .iter()
            .zip(&v_columns[j])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    })?;
    let eigen = sym_eigen(&gram)?;
    let mut values = Vec::with_capacity(k - 1);
    let mut vectors = Vec::with_capacity(k - 1);
    for i in 0..(k - 1) {
        values.push(eigen.values[i].max(0.0));
        let mut vec = eigen.vectors[i].clone();
        let dot: f64 = vec.iter().zip(&u[i]).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            vec.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.push(vec);
    }
    Ok(ClassMeanDual {
        u,
        nu,
        v_columns,
        values,
        vectors,
    })
}

/// Named toy constructions, mainly for the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyModel {
    TwoClass,
    ThreeClass,
    FourClass,
}

impl ToyModel {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "two_class" => Ok(Self::TwoClass),
            "three_class" => Ok(Self::ThreeClass),
            "four_class" => Ok(Self::FourClass),
            other => Err(Error::InvalidInput(format!(
                "unknown model '{other}' (expected two_class, three_class, or four_class)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::TwoClass => "two_class",
            Self::ThreeClass => "three_class",
            Self::FourClass => "four_class",
        }
    }

    pub fn class_count(self) -> usize {
        match self {
            Self::TwoClass => 2,
            Self::ThreeClass => 3,
            Self::FourClass => 4,
        }
    }

    pub fn build(self, d: usize) -> Result<MixtureModel> {
        match self {
            Self::TwoClass => MixtureModel::two_class(d),
            Self::ThreeClass => MixtureModel::three_class(d),
            Self::FourClass => MixtureModel::four_class(d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn powered_exponential_basics() {
        let g1 = powered_exponential_cov(1, 0.3, 1.0 / 3.0).unwrap();
        assert_eq!(g1.get(0, 0), 1.0);

        let g2 = powered_exponential_cov(2, 0.3, 1.0 / 3.0).unwrap();
        assert_eq!(g2.get(0, 0), 1.0);
        assert!((g2.get(0, 1) - 0.3).abs() < 1e-15);

        let g10 = powered_exponential_cov(10, 0.3, 1.0 / 3.0).unwrap();
        assert_eq!(g10.trace(), 10.0);
        // |i-j| = 8 gives 0.3^(8^(1/3)) = 0.3^2
        assert!((g10.get(0, 8) - 0.09).abs() < 1e-12);

        assert!(powered_exponential_cov(3, 1.0, 0.5).is_err());
        assert!(powered_exponential_cov(3, 0.0, 0.5).is_err());
    }

    #[test]
    fn alternating_modulation_hand_values() {
        let gamma = powered_exponential_cov(2, 0.3, 1.0 / 3.0).unwrap();
        let m = alternating_scaled_cov(&gamma);
        assert!((m.get(0, 0) - 5.0 / 6.0).abs() < 1e-14);
        assert!((m.get(1, 1) - 7.0 / 6.0).abs() < 1e-14);
        let expected = -0.3 * (5.0f64 / 6.0).sqrt() * (7.0f64 / 6.0).sqrt();
        assert!((m.get(0, 1) - expected).abs() < 1e-14);
        assert!((m.get(0, 1) + 0.29580).abs() < 1e-4);
    }

    #[test]
    fn alternating_modulation_trace_and_identity_base() {
        for d in [4, 17, 100] {
            let gamma = powered_exponential_cov(d, 0.3, 1.0 / 3.0).unwrap();
            let m = alternating_scaled_cov(&gamma);
            assert!((m.trace() - d as f64).abs() < 1e-10);
        }
        let d = 5;
        let ident = SymMatrix::identity(d).unwrap();
        let m = alternating_scaled_cov(&ident);
        for i in 0..d {
            let expected = 0.5 + (i + 1) as f64 / (d + 1) as f64;
            assert!((m.get(i, i) - expected).abs() < 1e-14);
            for j in 0..d {
                if i != j {
                    assert_eq!(m.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn toy_gap_structure() {
        let two = MixtureModel::two_class(50).unwrap();
        assert_eq!(two.mean_gaps().consecutive(1), 50.0);

        let three = MixtureModel::three_class(100).unwrap();
        let gaps = three.mean_gaps();
        assert_eq!(gaps.consecutive(1), 68.0); // d - ceil(d^(3/4)) = 100 - 32
        assert_eq!(gaps.consecutive(2), 22.0); // 32 - 10
        assert_eq!(three.mix(), &[0.5, 0.25, 0.25]);

        let four = MixtureModel::four_class(16).unwrap();
        let leading2: f64 = four.mean(2).iter().sum();
        let leading3: f64 = four.mean(3).iter().sum();
        assert_eq!(leading2, 8.0); // ceil(16^(3/4))
        assert_eq!(leading3, 4.0); // ceil(16^(1/2))
        assert_eq!(four.mean_gaps().gap(3, 4), 4.0);

        assert!(MixtureModel::two_class(3).is_err());
    }

    #[test]
    fn exact_ceilings_at_perfect_powers() {
        // 81^(3/4) = 27 exactly; naive powf-then-ceil overshoots to 28
        assert_eq!(ceil_root_pow(81, 3, 4), 27);
        assert_eq!(ceil_root_pow(16, 3, 4), 8);
        assert_eq!(ceil_root_pow(100, 1, 2), 10);
        assert_eq!(ceil_root_pow(101, 1, 2), 11);
        assert_eq!(ceil_root_pow(2000, 3, 4), 300);
        assert_eq!(ceil_root_pow(2000, 1, 2), 45);
    }

    #[test]
    fn gaps_of_identical_means() {
        let cov = SymMatrix::identity(3).unwrap();
        let m = MixtureModel::new(
            vec![vec![1.0, 2.0, 3.0]; 2],
            vec![cov.clone(), cov],
            vec![0.5, 0.5],
        )
        .unwrap();
        let gaps = m.mean_gaps();
        assert_eq!(gaps.pairs, vec![0.0]);
        assert_eq!(gaps.min, 0.0);
        assert!(m.condition_report().is_err());
    }

    #[test]
    fn mixture_covariance_rank_one() {
        let zero = SymMatrix::zeros(3).unwrap();
        let m = MixtureModel::new(
            vec![vec![2.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]],
            vec![zero.clone(), zero],
            vec![0.5, 0.5],
        )
        .unwrap();
        let cov = m.mixture_covariance().unwrap();
        assert!((cov.get(0, 0) - 1.0).abs() < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) != (0, 0) {
                    assert_eq!(cov.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn mixture_covariance_equal_means() {
        let c1 = SymMatrix::identity(2).unwrap();
        let c2 = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let m = MixtureModel::new(
            vec![vec![1.0, 1.0]; 2],
            vec![c1.clone(), c2.clone()],
            vec![0.25, 0.75],
        )
        .unwrap();
        let cov = m.mixture_covariance().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expected = 0.25 * c1.get(i, j) + 0.75 * c2.get(i, j);
                assert!((cov.get(i, j) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn two_class_trace_identity() {
        let m = MixtureModel::two_class(30).unwrap();
        let expected = 30.0 * (1.0 + 0.25);
        assert!((m.mixture_trace() - expected).abs() < 1e-9);
        let dense = m.mixture_covariance().unwrap();
        assert!((dense.trace() - expected).abs() < 1e-9);
    }

    #[test]
    fn conditions_shrink_for_two_class() {
        let reports: Vec<ConditionReport> = [50, 100, 200]
            .iter()
            .map(|&d| MixtureModel::two_class(d).unwrap().condition_report().unwrap())
            .collect();
        for w in reports.windows(2) {
            assert!(w[1].ratio1 < w[0].ratio1);
            assert!(w[1].ratio2 < w[0].ratio2);
            assert!(w[1].ratio3 < w[0].ratio3);
            assert!(w[1].ratio21 < w[0].ratio21);
        }
        for r in &reports {
            // both toy covariances have trace exactly d
            assert!(r.ratio4 < 1e-10, "trace imbalance {}", r.ratio4);
            // with two classes there are no gap pairs
            assert_eq!(r.ratio5_cos, 0.0);
            assert_eq!(r.ratio5_gap, 0.0);
            assert_eq!(r.ratio6, 0.0);
            assert!((r.ratio3 - 2.0 * r.ratio2).abs() < 1e-15);
        }
    }

    #[test]
    fn conditions_three_class_gap_geometry() {
        let r100 = MixtureModel::three_class(100)
            .unwrap()
            .condition_report()
            .unwrap();
        let r400 = MixtureModel::three_class(400)
            .unwrap()
            .condition_report()
            .unwrap();
        // consecutive mean gaps have disjoint supports, so the cosine is exact zero
        assert_eq!(r100.ratio5_cos, 0.0);
        assert_eq!(r400.ratio5_cos, 0.0);
        assert!(r400.ratio5_gap < r100.ratio5_gap);
        assert!(r400.ratio6 < r100.ratio6);
    }

    #[test]
    fn score_limits_hand_cases() {
        let two = score_limits(&[0.5, 0.5]).unwrap();
        assert_eq!(two.vertices.len(), 1);
        assert!((two.vertices[0][0] - 1.0).abs() < 1e-14);
        assert!((two.vertices[0][1] + 1.0).abs() < 1e-14);

        let three = score_limits(&[0.5, 0.25, 0.25]).unwrap();
        let row1 = &three.vertices[0];
        assert!((row1[0] - 1.0).abs() < 1e-14);
        assert!((row1[1] + 1.0).abs() < 1e-14);
        assert!((row1[2] + 1.0).abs() < 1e-14);
        let row2 = &three.vertices[1];
        assert_eq!(row2[0], 0.0);
        assert!((row2[1] - 2.0f64.sqrt()).abs() < 1e-14);
        assert!((row2[2] + 2.0f64.sqrt()).abs() < 1e-14);

        let skew = score_limits(&[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!((skew.vertices[0][0] - 2.0f64.sqrt()).abs() < 1e-14);
        assert!((skew.vertices[0][1] + 1.0 / 2.0f64.sqrt()).abs() < 1e-14);

        assert!(score_limits(&[0.7, 0.2]).is_err());
        assert!(score_limits(&[1.0]).is_err());
    }

    /// The two-class vertex pair coincides with the direct
    /// `(sqrt(p2/p1), -sqrt(p1/p2))` formula.
    #[test]
    fn two_class_limits_match_direct_formula() {
        for p1 in [0.1, 0.25, 0.5, 0.8] {
            let p = [p1, 1.0 - p1];
            let limits = score_limits(&p).unwrap();
            assert!((limits.vertices[0][0] - (p[1] / p[0]).sqrt()).abs() < 1e-13);
            assert!((limits.vertices[0][1] + (p[0] / p[1]).sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn limit_eigenvalue_hand_cases() {
        let two = limit_eigenvalues(&[0.5, 0.5], &[100.0]).unwrap();
        assert!((two[0] - 25.0).abs() < 1e-12);

        let three = limit_eigenvalues(&[0.5, 0.25, 0.25], &[100.0, 8.0]).unwrap();
        assert!((three[1] - 1.0).abs() < 1e-12); // 0.125 * 8

        let skew = limit_eigenvalues(&[0.3, 0.7], &[10.0]).unwrap();
        assert!((skew[0] - 0.21 * 10.0).abs() < 1e-12);

        assert!(limit_eigenvalues(&[0.5, 0.5], &[1.0, 1.0]).is_err());
    }

    /// Exact top-two eigenvalues of the reduced two-gap problem approach the
    /// eigenvalue limits as the gap ratio shrinks.
    #[test]
    fn limit_eigenvalues_vs_reduced_oracle() {
        let p = [0.5, 0.25, 0.25];
        for t in [1e-2f64, 1e-3] {
            let gap1 = 1.0;
            let gap2 = t;
            // mixture covariance restricted to the two gap directions, with
            // zero within-class covariance
            let c11 = p[0] * (1.0 - p[0]);
            let c22 = (p[0] + p[1]) * p[2];
            let c12 = p[0] * p[2];
            let (a, b, c) = (c11 * gap1, c12 * (gap1 * gap2).sqrt(), c22 * gap2);
            let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
            let exact = [(a + c + disc) / 2.0, (a + c - disc) / 2.0];
            let limits = limit_eigenvalues(&p, &[gap1, gap2]).unwrap();
            for (ex, lim) in exact.iter().zip(&limits) {
                let rel = (ex - lim).abs() / ex;
                assert!(rel < 5.0 * t, "t={t}: exact {ex} vs limit {lim} (rel {rel})");
            }
        }
    }

    #[test]
    fn limit_directions_hand_case() {
        let u = limit_score_directions(&[1, 2, 2], 2).unwrap();
        let expected = [(2.0f64 / 3.0).sqrt(), -1.0 / 6.0f64.sqrt(), -1.0 / 6.0f64.sqrt()];
        for (a, b) in u[0].iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(limit_score_directions(&[1, 1, 1], 2).is_err());
    }

    #[test]
    fn class_mean_dual_rank_one() {
        let zero = SymMatrix::zeros(4).unwrap();
        let delta = 5.0f64;
        let mut mean2 = vec![0.0; 4];
        mean2[0] = delta.sqrt();
        let m = MixtureModel::new(
            vec![vec![0.0; 4], mean2],
            vec![zero.clone(), zero],
            vec![0.5, 0.5],
        )
        .unwrap();
        let oracle = class_mean_dual(&m, &[1, 2, 2]).unwrap();
        // V'V/n is rank one, so the top eigenvector equals the limit direction
        for (a, b) in oracle.vectors[0].iter().zip(&oracle.u[0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let eta = [1.0 / 3.0, 2.0 / 3.0];
        assert!((oracle.values[0] / delta - eta[0] * eta[1]).abs() < 1e-12);
        // V annihilates the all-ones direction
        let dim = 4;
        for coord in 0..dim {
            let sum: f64 = oracle.v_columns.iter().map(|c| c[coord]).sum();
            assert!(sum.abs() < 1e-10);
        }
    }

    #[test]
    fn class_mean_dual_degenerate_means() {
        let cov = SymMatrix::identity(3).unwrap();
        let m = MixtureModel::new(
            vec![vec![1.0, 0.0, 0.0]; 2],
            vec![cov.clone(), cov],
            vec![0.5, 0.5],
        )
        .unwrap();
        let oracle = class_mean_dual(&m, &[1, 1, 2, 2]).unwrap();
        assert!(oracle.values.iter().all(|&v| v == 0.0));
    }

    /// The data-free eigenvectors approach the limit directions as the gap
    /// ratio shrinks.
    #[test]
    fn class_mean_dual_approaches_limits() {
        let zero = SymMatrix::zeros(6).unwrap();
        let labels = vec![1, 1, 2, 2, 3, 3];
        let mut angles = Vec::new();
        for t in [1e-1f64, 1e-3] {
            let mut mean1 = vec![0.0; 6];
            mean1[0] = 1.0;
            mean1[1] = t.sqrt();
            let mut mean2 = vec![0.0; 6];
            mean2[1] = t.sqrt();
            let m = MixtureModel::new(
                vec![mean1, mean2, vec![0.0; 6]],
                vec![zero.clone(), zero.clone(), zero.clone()],
                vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            )
            .unwrap();
            let oracle = class_mean_dual(&m, &labels).unwrap();
            let dot: f64 = oracle.vectors[0]
                .iter()
                .zip(&oracle.u[0])
                .map(|(a, b)| a * b)
                .sum();
            angles.push(dot.clamp(-1.0, 1.0).acos());
        }
        assert!(angles[1] < angles[0]);
        assert!(angles[1] < 1e-2);
    }

    #[test]
    fn unit_norm_and_orthogonality_of_limit_directions() {
        let labels = [1, 1, 1, 2, 2, 3, 3, 3, 3];
        let u = limit_score_directions(&labels, 3).unwrap();
        for row in &u {
            let norm: f64 = row.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        let dot: f64 = u[0].iter().zip(&u[1]).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-10);
    }

    proptest! {
        /// Every score-limit row has zero mean and unit variance under the
        /// proportions it was computed from, and zeros above the diagonal.
        #[test]
        fn score_limit_rows_are_standardized(
            k in 2usize..6,
            raw in proptest::collection::vec(0.05f64..1.0, 6),
        ) {
            let total: f64 = raw[..k].iter().sum();
            let p: Vec<f64> = raw[..k].iter().map(|v| v / total).collect();
            let limits = score_limits(&p).unwrap();
            for (i, row) in limits.vertices.iter().enumerate() {
                let mean: f64 = row.iter().zip(&p).map(|(v, w)| v * w).sum();
                let var: f64 = row.iter().zip(&p).map(|(v, w)| v * v * w).sum();
                prop_assert!(mean.abs() < 1e-9);
                prop_assert!((var - 1.0).abs() < 1e-9);
                for g in 0..i {
                    prop_assert_eq!(row[g], 0.0);
                }
            }
        }
    }
}
