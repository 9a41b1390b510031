//! Dense symmetric matrix kernels: eigendecomposition, Cholesky factorization,
//! and centered Gram matrices.
//!
//! Everything here is self-contained and deterministic: identical inputs give
//! bit-identical outputs. Sizes are desk scale — the eigensolver is a cyclic
//! Jacobi (robust for the orders used here), and storage is dense throughout.

use crate::error::{Error, Result};

/// Default cap on the order of a full dense eigendecomposition.
pub const DENSE_EIGEN_CAP: usize = 500;

/// Default cap on the order of a dense Cholesky factorization.
pub const DENSE_CHOLESKY_CAP: usize = 4000;

/// A dense real symmetric matrix. Construction enforces exact symmetry and
/// finite entries, so every consumer can rely on both.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    entries: Vec<f64>, // row-major, full storage
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("matrix order must be >= 1".into()));
        }
        Ok(Self {
            order,
            entries: vec![0.0; order * order],
        })
    }

    pub fn identity(order: usize) -> Result<Self> {
        let mut m = Self::zeros(order)?;
        for i in 0..order {
            m.entries[i * order + i] = 1.0;
        }
        Ok(m)
    }

    /// Builds the matrix from `f(i, j)`, evaluated only for `i <= j` and
    /// mirrored, so the result is symmetric by construction.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(order)?;
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                m.entries[i * order + j] = v;
                m.entries[j * order + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds the matrix from full rows, requiring exact symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidInput("matrix order must be >= 1".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
        }
        let mut m = Self::zeros(order)?;
        for i in 0..order {
            for j in 0..order {
                let v = rows[i][j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if rows[j][i] != v {
                    return Err(Error::InvalidInput(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ: {v} vs {}",
                        rows[j][i]
                    )));
                }
                m.entries[i * order + j] = v;
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Sets both `(i, j)` and `(j, i)`. Crate-internal so symmetry cannot be
    /// broken from outside.
    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] = v;
        self.entries[j * self.order + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Squared Frobenius norm; for a symmetric matrix this equals the trace
    /// of the matrix squared.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        let n = self.order;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Quadratic form `v' A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| self.entries[i * self.order..(i + 1) * self.order].to_vec())
            .collect()
    }
}

/// Full spectrum of a symmetric matrix: eigenvalues sorted descending with
/// the paired orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues, non-increasing.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector paired with `values[i]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Full eigendecomposition by cyclic Jacobi with threshold sweeps.
///
/// Stops once the largest off-diagonal magnitude falls below
/// `1e-12 * ||a||_F`, or errors after 100 sweeps. Eigenvalue ties keep the
/// rotation output order (stable sort), so the result is deterministic.
pub fn sym_eigen(a: &SymMatrix) -> Result<EigenDecomposition> {
    let n = a.order;
    let frob = a.frobenius_norm();
    if frob == 0.0 {
        // zero matrix: any orthonormal basis works, pick the standard one
        let vectors = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        return Ok(EigenDecomposition {
            values: vec![0.0; n],
            vectors,
        });
    }
    let threshold = 1e-12 * frob;
    const MAX_SWEEPS: usize = 100;

    let mut m = a.entries.clone(); // only the upper triangle is kept current
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut residual = 0.0;
    let mut converged = false;
    for sweep in 1..=MAX_SWEEPS {
        let mut off_sum = 0.0;
        residual = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let x = m[p * n + q].abs();
                off_sum += x;
                residual = residual.max(x);
            }
        }
        if residual <= threshold {
            converged = true;
            break;
        }
        // NR-style threshold: skip small rotations during the first sweeps
        let tresh = if sweep < 4 {
            0.2 * off_sum / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let g = 100.0 * apq.abs();
                // once well into the iteration, flush entries that no longer
                // affect the diagonal at working precision
                if sweep > 4
                    && d[p].abs() + g == d[p].abs()
                    && d[q].abs() + g == d[q].abs()
                {
                    m[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                m[p * n + q] = 0.0;
                let rotate = |m: &mut Vec<f64>, i: usize, j: usize, k: usize, l: usize| {
                    let g = m[i * n + j];
                    let h = m[k * n + l];
                    m[i * n + j] = g - s * (h + g * tau);
                    m[k * n + l] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut m, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut m, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut m, p, j, q, j);
                }
                for j in 0..n {
                    rotate(&mut v, j, p, j, q);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            residual,
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap());
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Ladder of diagonal jitters tried in order until Cholesky succeeds. Each
/// factor is scaled by `trace / order` of the input.
#[derive(Debug, Clone)]
pub struct JitterPolicy {
    pub factors: Vec<f64>,
}

impl Default for JitterPolicy {
    fn default() -> Self {
        Self {
            factors: vec![0.0, 1e-12, 1e-10, 1e-8],
        }
    }
}

impl JitterPolicy {
    /// No jitter at all: factor exactly once with epsilon 0.
    pub fn none() -> Self {
        Self { factors: vec![0.0] }
    }
}

/// Lower-triangular Cholesky factor of `a + jitter * I`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    order: usize,
    lower: Vec<f64>, // packed row-major lower triangle
    /// The jitter epsilon that was actually applied (0 when none was needed).
    pub jitter: f64,
}

impl CholeskyFactor {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.lower[i * (i + 1) / 2 + j]
        }
    }

    /// `L * g`, the map that colors a standard Gaussian vector.
    pub fn mul_vec(&self, g: &[f64]) -> Vec<f64> {
        assert_eq!(g.len(), self.order);
        let mut out = vec![0.0; self.order];
        for i in 0..self.order {
            let row = &self.lower[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            out[i] = row.iter().zip(g).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// `L * L'`, for round-trip checks.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.order;
        SymMatrix::from_fn(n, |i, j| {
            (0..=i.min(j)).map(|k| self.get(i, k) * self.get(j, k)).sum()
        })
        .expect("factor entries are finite")
    }
}

/// Cholesky factorization of a symmetric positive semidefinite matrix.
///
/// Tries each epsilon from the jitter ladder in turn and returns the factor
/// of `a + eps * I` for the smallest epsilon that succeeds. Zero pivots are
/// accepted (the corresponding column is zeroed) as long as the residual
/// column is negligible; a pivot below `-tolerance` under every jitter is a
/// hard failure reporting the pivot index.
pub fn cholesky(a: &SymMatrix, policy: &JitterPolicy) -> Result<CholeskyFactor> {
    let n = a.order;
    if n > DENSE_CHOLESKY_CAP {
        return Err(Error::ResourceLimit {
            kind: "Cholesky",
            requested: n,
            cap: DENSE_CHOLESKY_CAP,
        });
    }
    let diag_scale = (0..n).map(|i| a.get(i, i).abs()).sum::<f64>() / n as f64;
    let mut last_failure = Error::NotPositiveSemidefinite {
        index: 0,
        pivot: f64::NAN,
    };
    for &factor in &policy.factors {
        let eps = factor * diag_scale;
        match try_cholesky(a, eps, diag_scale + eps) {
            Ok(lower) => {
                return Ok(CholeskyFactor {
                    order: n,
                    lower,
                    jitter: eps,
                })
            }
            Err(e) => last_failure = e,
        }
    }
    Err(last_failure)
}

fn try_cholesky(a: &SymMatrix, eps: f64, scale: f64) -> Result<Vec<f64>> {
    let n = a.order;
    let pivot_tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let column_tol = 1e-7 * scale.max(f64::MIN_POSITIVE);
    let mut lower = vec![0.0; n * (n + 1) / 2];
    let row_start = |i: usize| i * (i + 1) / 2;
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = (0..j)
                .map(|k| lower[row_start(i) + k] * lower[row_start(j) + k])
                .sum();
            let mut sum = a.get(i, j) - dot;
            if i == j {
                sum += eps;
                if sum < -pivot_tol {
                    return Err(Error::NotPositiveSemidefinite {
                        index: i,
                        pivot: sum,
                    });
                }
                lower[row_start(i) + i] = if sum <= pivot_tol { 0.0 } else { sum.sqrt() };
            } else {
                let piv = lower[row_start(j) + j];
                if piv == 0.0 {
                    // zero pivot: the rest of the column must vanish too,
                    // otherwise the matrix has a negative direction
                    if sum.abs() > column_tol {
                        return Err(Error::NotPositiveSemidefinite {
                            index: j,
                            pivot: sum,
                        });
                    }
                    lower[row_start(i) + j] = 0.0;
                } else {
                    lower[row_start(i) + j] = sum / piv;
                }
            }
        }
    }
    Ok(lower)
}

/// Centered Gram matrix of `n` data columns: `(X - Xbar)' (X - Xbar) / (n-1)`.
///
/// This is the dual of the usual sample covariance: an `n x n` PSD matrix
/// sharing its nonzero eigenvalues, with row sums that vanish because the
/// centering projector annihilates the all-ones direction.
pub fn centered_gram(columns: &[Vec<f64>]) -> Result<SymMatrix> {
    let n = columns.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "centered Gram needs at least 2 columns, got {n}"
        )));
    }
    let dim = columns[0].len();
    for (j, c) in columns.iter().enumerate() {
        if c.len() != dim {
            return Err(Error::InvalidInput(format!(
                "column {j} has length {}, expected {dim}",
                c.len()
            )));
        }
    }
    let mut mean = vec![0.0; dim];
    for c in columns {
        for (m, v) in mean.iter_mut().zip(c) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let centered: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| c.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    let scale = 1.0 / (n - 1) as f64;
    SymMatrix::from_fn(n, |i, j| {
        scale
            * centered[i]
                .iter()
                .zip(&centered[j])
                .map(|(a, b)| a * b)
                .sum::<f64>()
    })
}

/// Largest eigenvalue of a PSD matrix by power iteration, for orders above
/// the full-eigendecomposition cap where only the top value is needed.
pub fn power_iteration_top(a: &SymMatrix, rel_tol: f64, max_iterations: usize) -> Result<f64> {
    let n = a.order;
    // deterministic non-degenerate start
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i.wrapping_mul(2654435761)) % 97) as f64 / 97.0)
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut lambda = 0.0;
    for _ in 0..max_iterations {
        let w = a.mul_vec(&v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        v = w.iter().map(|x| x / norm).collect();
        if (next - lambda).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NoConvergence {
        residual: lambda,
        sweeps: max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn random_sym(order: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
        let draws: Vec<f64> = (0..order * order).map(|_| 2.0 * uniform(rng) - 1.0).collect();
        SymMatrix::from_fn(order, |i, j| draws[i * order + j]).unwrap()
    }

    fn assert_reconstructs(a: &SymMatrix, e: &EigenDecomposition, tol: f64) {
        let n = a.order();
        let mut recon = vec![0.0; n * n];
        for (lam, vec) in e.values.iter().zip(&e.vectors) {
            for i in 0..n {
                for j in 0..n {
                    recon[i * n + j] += lam * vec[i] * vec[j];
                }
            }
        }
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = recon[i * n + j] - a.get(i, j);
                err += d * d;
            }
        }
        let rel = err.sqrt() / a.frobenius_norm().max(f64::MIN_POSITIVE);
        assert!(rel < tol, "reconstruction error {rel}");
    }

    #[test]
    fn eigen_identity() {
        let e = sym_eigen(&SymMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        for (i, v) in e.vectors.iter().enumerate() {
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for (j, w) in e.vectors.iter().enumerate() {
                if i != j {
                    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                    assert!(dot.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn eigen_analytic_2x2() {
        let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        let v0 = &e.vectors[0];
        assert!((v0[0].abs() - s).abs() < 1e-10 && (v0[1].abs() - s).abs() < 1e-10);
        assert!((v0[0] - v0[1]).abs() < 1e-10, "first eigenvector is (1,1)/sqrt2 up to sign");
        let v1 = &e.vectors[1];
        assert!((v1[0] + v1[1]).abs() < 1e-10, "second eigenvector is (1,-1)/sqrt2 up to sign");
    }

    /// Independent oracle: roots of the characteristic polynomial of a 3x3
    /// symmetric matrix, located by bisection between Gershgorin bounds.
    fn charpoly_roots_3x3(a: &SymMatrix) -> Vec<f64> {
        assert_eq!(a.order(), 3);
        let (a11, a12, a13) = (a.get(0, 0), a.get(0, 1), a.get(0, 2));
        let (a22, a23, a33) = (a.get(1, 1), a.get(1, 2), a.get(2, 2));
        let c2 = a11 + a22 + a33;
        let c1 = a11 * a22 + a11 * a33 + a22 * a33 - a12 * a12 - a13 * a13 - a23 * a23;
        let c0 = a11 * a22 * a33 + 2.0 * a12 * a23 * a13
            - a11 * a23 * a23
            - a22 * a13 * a13
            - a33 * a12 * a12;
        // p(x) = -x^3 + c2 x^2 - c1 x + c0; use q = -p so q is monic
        let q = |x: f64| x * x * x - c2 * x * x + c1 * x - c0;
        let radius = (0..3)
            .map(|i| (0..3).map(|j| a.get(i, j).abs()).sum::<f64>())
            .fold(0.0f64, f64::max);
        let (lo, hi) = (-radius - 1.0, radius + 1.0);
        let steps = 20000;
        let mut roots = Vec::new();
        let mut prev_x = lo;
        let mut prev_q = q(lo);
        for s in 1..=steps {
            let x = lo + (hi - lo) * s as f64 / steps as f64;
            let qx = q(x);
            if prev_q == 0.0 {
                roots.push(prev_x);
            } else if prev_q * qx < 0.0 {
                let (mut l, mut r) = (prev_x, x);
                for _ in 0..200 {
                    let m = 0.5 * (l + r);
                    if q(l) * q(m) <= 0.0 {
                        r = m;
                    } else {
                        l = m;
                    }
                }
                roots.push(0.5 * (l + r));
            }
            prev_x = x;
            prev_q = qx;
        }
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        roots
    }

    #[test]
    fn eigen_matches_charpoly_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_sym(3, &mut rng);
            let roots = charpoly_roots_3x3(&a);
            if roots.len() != 3 {
                continue; // grid missed a near-double root; next draw
            }
            let e = sym_eigen(&a).unwrap();
            for (lam, root) in e.values.iter().zip(&roots) {
                assert!((lam - root).abs() < 1e-9, "eigenvalue {lam} vs root {root}");
            }
        }
    }

    #[test]
    fn eigen_trace_and_frobenius_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let order = 2 + (rng.next_u64() % 9) as usize;
            let a = random_sym(order, &mut rng);
            let e = sym_eigen(&a).unwrap();
            let tol = 1e-8 * a.frobenius_norm().max(1.0);
            let sum: f64 = e.values.iter().sum();
            assert!((a.trace() - sum).abs() < tol);
            let sq: f64 = e.values.iter().map(|v| v * v).sum();
            assert!((a.frobenius_sq() - sq).abs() < tol * a.frobenius_norm().max(1.0));
            assert_reconstructs(&a, &e, 1e-8);
        }
    }

    #[test]
    fn eigen_rejects_non_finite() {
        let e = SymMatrix::from_fn(2, |i, j| if i == j { f64::NAN } else { 0.0 });
        assert!(matches!(e, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn cholesky_identity() {
        let a = SymMatrix::identity(2).unwrap();
        let f = cholesky(&a, &JitterPolicy::default()).unwrap();
        assert_eq!(f.jitter, 0.0);
        assert_eq!(f.get(0, 0), 1.0);
        assert_eq!(f.get(1, 0), 0.0);
        assert_eq!(f.get(1, 1), 1.0);
    }

    #[test]
    fn cholesky_analytic_2x2() {
        let a = SymMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap();
        let f = cholesky(&a, &JitterPolicy::default()).unwrap();
        assert_eq!(f.get(0, 0), 2.0);
        assert_eq!(f.get(1, 0), 1.0);
        assert_eq!(f.get(1, 1), 2.0);
    }

    #[test]
    fn cholesky_zero_matrix() {
        let a = SymMatrix::zeros(3).unwrap();
        let f = cholesky(&a, &JitterPolicy::default()).unwrap();
        for i in 0..3 {
            for j in 0..=i {
                assert_eq!(f.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let e = cholesky(&a, &JitterPolicy::default());
        match e {
            Err(Error::NotPositiveSemidefinite { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected not-PSD error, got {other:?}"),
        }
        // zero diagonal with off-diagonal coupling is indefinite too
        let b = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            cholesky(&b, &JitterPolicy::default()),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn cholesky_roundtrip_random_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let order = 2 + (rng.next_u64() % 7) as usize;
            let m = random_sym(order, &mut rng);
            // M M' is PSD by construction
            let a = SymMatrix::from_fn(order, |i, j| {
                (0..order).map(|k| m.get(i, k) * m.get(j, k)).sum()
            })
            .unwrap();
            let f = cholesky(&a, &JitterPolicy::default()).unwrap();
            let r = f.reconstruct();
            let mut err = 0.0;
            for i in 0..order {
                for j in 0..order {
                    let d = r.get(i, j) - a.get(i, j) - if i == j { f.jitter } else { 0.0 };
                    err += d * d;
                }
            }
            let rel = err.sqrt() / a.frobenius_norm().max(f64::MIN_POSITIVE);
            assert!(rel < 1e-8, "round-trip error {rel}");
        }
    }

    #[test]
    fn gram_of_identical_columns_is_zero() {
        let col = vec![1.0, 2.0, 3.0];
        let g = centered_gram(&[col.clone(), col.clone(), col]).unwrap();
        assert_eq!(g.frobenius_norm(), 0.0);
    }

    #[test]
    fn gram_hand_example_d1() {
        let g = centered_gram(&[vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        assert_eq!(g.get(0, 1), -1.0);
        assert_eq!(g.get(1, 1), 1.0);
    }

    #[test]
    fn gram_needs_two_columns() {
        assert!(matches!(
            centered_gram(&[vec![1.0]]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn gram_row_sums_vanish_and_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let n = 3 + (rng.next_u64() % 5) as usize;
            let d = 2 + (rng.next_u64() % 6) as usize;
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| 4.0 * uniform(&mut rng) - 2.0).collect())
                .collect();
            let g = centered_gram(&cols).unwrap();
            for i in 0..n {
                let row_sum: f64 = (0..n).map(|j| g.get(i, j)).sum();
                assert!(row_sum.abs() < 1e-9, "row sum {row_sum}");
            }
            let e = sym_eigen(&g).unwrap();
            let floor = -1e-9 * g.trace();
            assert!(e.values.iter().all(|&v| v >= floor));
        }
    }

    /// The n x n Gram and the d x d covariance of the same data share their
    /// nonzero spectrum; the traces agree exactly up to rounding.
    #[test]
    fn gram_trace_matches_covariance_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let n = 6;
        let d = 4;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| 2.0 * uniform(&mut rng) - 1.0).collect())
            .collect();
        let g = centered_gram(&cols).unwrap();
        // direct d x d sample covariance
        let mut mean = vec![0.0; d];
        for c in &cols {
            for (m, v) in mean.iter_mut().zip(c) {
                *m += v / n as f64;
            }
        }
        let cov = SymMatrix::from_fn(d, |i, j| {
            cols.iter()
                .map(|c| (c[i] - mean[i]) * (c[j] - mean[j]))
                .sum::<f64>()
                / (n - 1) as f64
        })
        .unwrap();
        assert!((g.trace() - cov.trace()).abs() < 1e-12 * g.trace().max(1.0));
        // and the nonzero eigenvalues coincide
        let eg = sym_eigen(&g).unwrap();
        let ec = sym_eigen(&cov).unwrap();
        let rank = d.min(n - 1);
        for i in 0..rank {
            let (x, y) = (eg.values[i], ec.values[i]);
            assert!((x - y).abs() <= 1e-8 * x.max(y).max(1e-12));
        }
    }

    #[test]
    fn power_iteration_matches_full_eigen() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let m = random_sym(8, &mut rng);
        let a = SymMatrix::from_fn(8, |i, j| (0..8).map(|k| m.get(i, k) * m.get(j, k)).sum())
            .unwrap();
        let top = power_iteration_top(&a, 1e-10, 100_000).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert!((top - e.values[0]).abs() < 1e-6 * e.values[0]);
    }
}
