//! Reproducible Gaussian-mixture sampling.
//!
//! Every column of a sampled data matrix gets its own counter-mode stream
//! derived from `(master seed, replicate, column)`, so outputs are
//! bit-identical for identical inputs, distinct replicates are independent,
//! and permuting replicate indices permutes outputs without changing any
//! individual replicate. Gaussians come from Box-Muller over the stream's
//! uniform output, which keeps the exact draw sequence easy to reproduce.

use crate::error::{Error, Result};
use crate::linalg::{centered_gram, cholesky, CholeskyFactor, JitterPolicy, SymMatrix};
use crate::model::{class_counts, MixtureModel};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A `d x n` observation matrix stored column-wise, optionally carrying the
/// true class label of each column.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    dim: usize,
    columns: Vec<Vec<f64>>,
    labels: Option<Vec<usize>>,
    counts: Option<Vec<usize>>,
}

impl DataMatrix {
    pub fn unlabeled(columns: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(columns, None, 0)
    }

    /// Labels are 1-based; `k` fixes the class count so per-class counts are
    /// well defined even when a trailing class is empty.
    pub fn labeled(columns: Vec<Vec<f64>>, labels: Vec<usize>, k: usize) -> Result<Self> {
        if labels.len() != columns.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} columns",
                labels.len(),
                columns.len()
            )));
        }
        Self::build(columns, Some(labels), k)
    }

    fn build(columns: Vec<Vec<f64>>, labels: Option<Vec<usize>>, k: usize) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidInput("data matrix has no columns".into()));
        }
        let dim = columns[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("data matrix has zero rows".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "column {j} has length {}, expected {dim}",
                    col.len()
                )));
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, col: j });
            }
        }
        let counts = match &labels {
            Some(l) => Some(class_counts(l, k)?),
            None => None,
        };
        Ok(Self {
            dim,
            columns,
            labels,
            counts,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn counts(&self) -> Option<&[usize]> {
        self.counts.as_deref()
    }

    /// Columns belonging to one class (1-based); empty when unlabeled.
    pub fn class_columns(&self, class: usize) -> Vec<&[f64]> {
        match &self.labels {
            Some(labels) => self
                .columns
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == class)
                .map(|(c, _)| c.as_slice())
                .collect(),
            None => Vec::new(),
        }
    }

    /// The `n x n` centered Gram matrix (dual sample covariance) of the data.
    pub fn centered_gram(&self) -> Result<SymMatrix> {
        centered_gram(&self.columns)
    }
}

/// Identifies one reproducible stream family: a master seed plus a replicate
/// index. Column streams are derived per sample, so distinct
/// `(replicate, column)` pairs never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master: u64,
    pub replicate: u64,
}

impl SeedSpec {
    pub fn new(master: u64) -> Self {
        Self {
            master,
            replicate: 0,
        }
    }

    pub fn replicate(master: u64, replicate: u64) -> Self {
        Self { master, replicate }
    }

    /// Counter-mode generator for one column. Replicate and column indices
    /// are packed into the 64-bit stream id, so both must stay below 2^32.
    fn column_rng(&self, column: usize) -> ChaCha8Rng {
        debug_assert!(self.replicate < (1 << 32));
        debug_assert!((column as u64) < (1 << 32));
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream((self.replicate << 32) | column as u64);
        rng
    }
}

/// Standard Gaussian draws via Box-Muller over one column stream.
struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    fn new(rng: ChaCha8Rng) -> Self {
        Self { rng, spare: None }
    }

    /// Uniform in [0, 1) with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1], so the log is finite
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    fn fill_gaussian(&mut self, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.next_gaussian();
        }
    }
}

fn class_factors(model: &MixtureModel, needed: &[bool]) -> Result<Vec<Option<CholeskyFactor>>> {
    let policy = JitterPolicy::default();
    (1..=model.class_count())
        .map(|class| {
            if needed[class - 1] {
                cholesky(model.covariance(class), &policy).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect()
}

/// Holds the per-class Cholesky factors so repeated replicates do not
/// re-factor the covariances. Sampling output is identical to the free
/// functions.
pub struct MixtureSampler<'a> {
    model: &'a MixtureModel,
    factors: Vec<Option<CholeskyFactor>>,
}

impl<'a> MixtureSampler<'a> {
    /// Factors every class covariance once, up front.
    pub fn new(model: &'a MixtureModel) -> Result<Self> {
        let needed = vec![true; model.class_count()];
        Ok(Self {
            model,
            factors: class_factors(model, &needed)?,
        })
    }

    pub fn fixed_counts(&self, counts: &[usize], seed: SeedSpec) -> Result<DataMatrix> {
        sample_fixed_counts_with(self.model, &self.factors, counts, seed)
    }

    pub fn mixture_draws(&self, n: usize, seed: SeedSpec) -> Result<DataMatrix> {
        sample_mixture_draws_with(self.model, &self.factors, n, seed)
    }
}

fn sample_column(
    model: &MixtureModel,
    factor: &CholeskyFactor,
    class: usize,
    stream: &mut GaussianStream,
) -> Vec<f64> {
    let d = model.dim();
    let mut raw = vec![0.0; d];
    stream.fill_gaussian(&mut raw);
    let colored = factor.mul_vec(&raw);
    model
        .mean(class)
        .iter()
        .zip(&colored)
        .map(|(m, c)| m + c)
        .collect()
}

/// Samples with a fixed number of observations per class, columns grouped in
/// class order (class 1 first). Deterministic given the seed.
pub fn sample_fixed_counts(
    model: &MixtureModel,
    counts: &[usize],
    seed: SeedSpec,
) -> Result<DataMatrix> {
    let k = model.class_count();
    if counts.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} class counts, got {}",
            counts.len()
        )));
    }
    let needed: Vec<bool> = counts.iter().map(|&c| c > 0).collect();
    let factors = class_factors(model, &needed)?;
    sample_fixed_counts_with(model, &factors, counts, seed)
}

fn sample_fixed_counts_with(
    model: &MixtureModel,
    factors: &[Option<CholeskyFactor>],
    counts: &[usize],
    seed: SeedSpec,
) -> Result<DataMatrix> {
    let k = model.class_count();
    if counts.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} class counts, got {}",
            counts.len()
        )));
    }
    let n: usize = counts.iter().sum();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples in total, got {n}"
        )));
    }
    let mut columns = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut column_index = 0usize;
    for (class0, &count) in counts.iter().enumerate() {
        let class = class0 + 1;
        for _ in 0..count {
            let mut stream = GaussianStream::new(seed.column_rng(column_index));
            let factor = factors[class0].as_ref().expect("class with samples is factored");
            columns.push(sample_column(model, factor, class, &mut stream));
            labels.push(class);
            column_index += 1;
        }
    }
    DataMatrix::labeled(columns, labels, k)
}

/// Samples `n` observations with labels drawn i.i.d. from the mixing
/// proportions; columns stay in draw order. Deterministic given the seed.
pub fn sample_mixture_draws(model: &MixtureModel, n: usize, seed: SeedSpec) -> Result<DataMatrix> {
    let needed = vec![true; model.class_count()];
    let factors = class_factors(model, &needed)?;
    sample_mixture_draws_with(model, &factors, n, seed)
}

fn sample_mixture_draws_with(
    model: &MixtureModel,
    factors: &[Option<CholeskyFactor>],
    n: usize,
    seed: SeedSpec,
) -> Result<DataMatrix> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let k = model.class_count();
    let mut columns = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for j in 0..n {
        let mut stream = GaussianStream::new(seed.column_rng(j));
        // the label draw is the first use of the column stream
        let u = stream.uniform();
        let mut class = k;
        let mut acc = 0.0;
        for (i, &eps) in model.mix().iter().enumerate() {
            acc += eps;
            if u < acc {
                class = i + 1;
                break;
            }
        }
        let factor = factors[class - 1].as_ref().expect("all classes are factored");
        columns.push(sample_column(model, factor, class, &mut stream));
        labels.push(class);
    }
    DataMatrix::labeled(columns, labels, k)
}
