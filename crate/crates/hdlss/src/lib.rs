//! PCA-based clustering for high-dimension, low-sample-size (HDLSS) data.
//!
//! In the HDLSS regime the dimension `d` is large while the sample size `n`
//! stays small and fixed. The `n x n` dual of the sample covariance then
//! develops a rigid geometry: its top eigenvectors align with directions
//! determined purely by the class structure, and the normalized principal
//! component scores of the samples converge to a small set of per-class
//! vertices. That makes PCA an effective clustering device: project onto the
//! first few components and split by sign, or run k-means in the score space.
//!
//! The crate provides:
//!
//! - [`linalg`]: dense symmetric kernels (Jacobi eigensolver, Cholesky with a
//!   jitter ladder, centered Gram matrices);
//! - [`model`]: Gaussian mixture models, the built-in toy constructions,
//!   theoretical score vertices and eigenvalue limits, and separation
//!   diagnostics;
//! - [`sampler`]: reproducible mixture sampling with per-column streams;
//! - [`pca`]: dual-covariance PCA, sample and true PC scores, noise-reduced
//!   eigenvalue estimates, an unbiased mean-gap estimator, and a detector for
//!   the component that carries the class split;
//! - [`cluster`]: the sequential sign rule, seeded k-means with restarts,
//!   permutation-matched accuracy, and the end-to-end pipeline;
//! - [`cli`]: config parsing, CSV ingestion, SVG scatter output, and the
//!   named simulation experiments behind the `hdlss` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod cluster;
pub mod error;
pub mod linalg;
pub mod model;
pub mod pca;
pub mod sampler;

pub use error::{Error, Result};
