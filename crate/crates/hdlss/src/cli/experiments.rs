//! Named simulation experiments and the simulate/cluster front-end commands.
//!
//! Every run writes CSV artifacts (and SVG scatter displays where a figure
//! makes sense) into the configured output directory, stamped with a
//! deterministic echo of the effective configuration. Reruns with the same
//! seed produce byte-identical files; on failure, partially written outputs
//! are removed.

use crate::cli::config::RunConfig;
use crate::cli::csv::{format_float, format_row, render_data_csv};
use crate::cli::svg::Scatter;
use crate::cluster::{self, match_accuracy, sign_rule, ClusterResult, KMeansConfig, Method};
use crate::error::{Error, Result};
use crate::linalg::DENSE_EIGEN_CAP;
use crate::model::{
    class_fractions, limit_score_directions, score_limits, MixtureModel, ScoreLimits, ToyModel,
};
use crate::pca::{dual_pca, TrueScorer};
use crate::sampler::{sample_fixed_counts, sample_mixture_draws, DataMatrix, MixtureSampler, SeedSpec};
use std::path::{Path, PathBuf};

/// The built-in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    /// Two-class eigenvector geometry: angles between the leading dual
    /// eigenvector and its theoretical direction across a dimension grid.
    Fig1,
    /// Three-class score scatter against the triangle of limit vertices.
    Fig2,
    /// Four-class score scatter against the pyramid of limit vertices.
    Fig3,
    /// Separation-condition diagnostics across a dimension grid.
    Conditions,
    /// Convergence of the scaled dual covariance to its rank-one-plus-
    /// projection limit.
    Theorem1,
}

impl ExperimentName {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "conditions" => Ok(Self::Conditions),
            "theorem1" => Ok(Self::Theorem1),
            other => Err(Error::InvalidInput(format!(
                "unknown experiment '{other}' (expected fig1, fig2, fig3, conditions, or theorem1)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Conditions => "conditions",
            Self::Theorem1 => "theorem1",
        }
    }
}

/// Collects files written by one run so a failure can remove them all.
struct Outputs {
    root: PathBuf,
    files: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        let path = self.root.join(name);
        std::fs::write(&path, content)?;
        self.files.push(path);
        Ok(())
    }
}

fn with_outputs(
    out: &Path,
    run: impl FnOnce(&mut Outputs) -> Result<()>,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out)?;
    let mut outputs = Outputs {
        root: out.to_path_buf(),
        files: Vec::new(),
    };
    match run(&mut outputs) {
        Ok(()) => Ok(outputs.files),
        Err(e) => {
            for file in &outputs.files {
                let _ = std::fs::remove_file(file);
            }
            Err(e)
        }
    }
}

fn build_model(cfg: &RunConfig, default: ToyModel, d: usize) -> Result<MixtureModel> {
    let kind = cfg.model.unwrap_or(default);
    let model = kind.build(d)?;
    match &cfg.mix {
        Some(mix) => model.with_mix(mix.clone()),
        None => Ok(model),
    }
}

fn effective_counts(cfg: &RunConfig, default: &[usize]) -> Vec<usize> {
    cfg.counts.clone().unwrap_or_else(|| default.to_vec())
}

fn join_usize(values: &[usize]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn run_experiment(name: ExperimentName, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match name {
        ExperimentName::Fig1 => run_fig1(cfg),
        ExperimentName::Fig2 => run_score_figure(cfg, FigureKind::Fig2),
        ExperimentName::Fig3 => run_score_figure(cfg, FigureKind::Fig3),
        ExperimentName::Conditions => run_conditions(cfg),
        ExperimentName::Theorem1 => run_theorem1(cfg),
    }
}

fn run_fig1(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let kind = cfg.model.unwrap_or(ToyModel::TwoClass);
    if kind.class_count() != 2 {
        return Err(Error::InvalidInput(
            "fig1 needs a two-class model".into(),
        ));
    }
    let counts = effective_counts(cfg, &[1, 2]);
    if counts.len() != 2 || counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput(
            "fig1 needs two positive class counts".into(),
        ));
    }
    let d_grid = cfg.d_grid.clone().unwrap_or_else(|| vec![5, 50, 500, 2000]);
    let replicates = cfg.replicates.unwrap_or(20);
    let n: usize = counts.iter().sum();

    with_outputs(&cfg.out, |outputs| {
        let mut header: Vec<String> = vec!["d".into(), "replicate".into(), "angle".into()];
        header.extend((1..=n).map(|j| format!("u{j}")));
        let mut lines = vec![format_row(&header)];
        for &d in &d_grid {
            let model = build_model(cfg, ToyModel::TwoClass, d)?;
            let sampler = MixtureSampler::new(&model)?;
            let mut plot = Scatter::new(
                &format!("leading dual eigenvector pairs, d = {d}"),
                "component along the limit direction",
                "orthogonal component",
            );
            plot.with_unit_circle();
            plot.solid_segment(0.0, 0.0, 1.0, 0.0);
            let mut basis: Option<(Vec<f64>, Vec<f64>)> = None;
            for rep in 0..replicates {
                let x = sampler.fixed_counts(&counts, SeedSpec::replicate(cfg.seed, rep as u64))?;
                let labels = x.labels().expect("fixed-count sampling labels columns");
                let mut pca = dual_pca(&x, 1)?;
                pca.orient_with_labels(labels, 2)?;
                let direction = &limit_score_directions(labels, 2)?[0];
                let vector = &pca.vectors()[0];
                let dot: f64 = vector.iter().zip(direction).map(|(a, b)| a * b).sum();
                let angle = dot.clamp(-1.0, 1.0).acos();
                let mut cells = vec![d.to_string(), rep.to_string(), format_float(angle)];
                cells.extend(vector.iter().map(|&v| format_float(v)));
                lines.push(format_row(&cells));

                let (b1, b2) = basis.get_or_insert_with(|| plane_basis(direction));
                let px: f64 = vector.iter().zip(b1.iter()).map(|(a, b)| a * b).sum();
                let py: f64 = vector.iter().zip(b2.iter()).map(|(a, b)| a * b).sum();
                plot.point(px, py, 1);
                plot.point(-px, -py, 1);
            }
            outputs.write(&format!("fig1_d{d}.svg"), &plot.render())?;
        }
        outputs.write("fig1_angles.csv", &(lines.join("\n") + "\n"))?;
        outputs.write(
            "config_echo.txt",
            &cfg.echo(
                "experiment fig1",
                &[
                    ("counts", join_usize(&counts)),
                    ("d_grid", join_usize(&d_grid)),
                    ("replicates", replicates.to_string()),
                ],
            ),
        )?;
        Ok(())
    })
}

/// Orthonormal pair spanning the projection plane for the fig1 display: the
/// first axis is the limit direction itself, the second any unit vector
/// orthogonal to it and to the all-ones direction.
fn plane_basis(direction: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = direction.len();
    let b1 = direction.to_vec();
    for c in 0..(n - 1) {
        let scale = 1.0 / (((c + 1) * (c + 2)) as f64).sqrt();
        let mut candidate = vec![0.0; n];
        for entry in candidate.iter_mut().take(c + 1) {
            *entry = scale;
        }
        candidate[c + 1] = -((c + 1) as f64) * scale;
        let dot: f64 = candidate.iter().zip(&b1).map(|(a, b)| a * b).sum();
        for (x, b) in candidate.iter_mut().zip(&b1) {
            *x -= dot * b;
        }
        let norm: f64 = candidate.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-8 {
            candidate.iter_mut().for_each(|v| *v /= norm);
            return (b1, candidate);
        }
    }
    // direction spans the whole complement only when n = 2
    (b1, vec![0.0; n])
}

#[derive(Clone, Copy)]
enum FigureKind {
    Fig2,
    Fig3,
}

impl FigureKind {
    fn name(self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
        }
    }

    fn components(self) -> usize {
        match self {
            Self::Fig2 => 2,
            Self::Fig3 => 3,
        }
    }

    fn default_model(self) -> ToyModel {
        match self {
            Self::Fig2 => ToyModel::ThreeClass,
            Self::Fig3 => ToyModel::FourClass,
        }
    }

    fn default_counts(self) -> &'static [usize] {
        match self {
            Self::Fig2 => &[10, 5, 5],
            Self::Fig3 => &[5, 5, 5, 5],
        }
    }
}

/// Shared body of fig2 and fig3: scatter the leading normalized scores per
/// sample against the theoretical vertices. True scores are used while the
/// dimension admits a dense eigendecomposition; above that cap the sample
/// scores take over (their vertices use realized class fractions).
fn run_score_figure(cfg: &RunConfig, figure: FigureKind) -> Result<Vec<PathBuf>> {
    let kind = cfg.model.unwrap_or(figure.default_model());
    let components = figure.components();
    if kind.class_count() < components + 1 {
        return Err(Error::InvalidInput(format!(
            "{} needs a model with at least {} classes",
            figure.name(),
            components + 1
        )));
    }
    let counts = effective_counts(cfg, figure.default_counts());
    if counts.len() != kind.class_count() || counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput(format!(
            "{} needs {} positive class counts",
            figure.name(),
            kind.class_count()
        )));
    }
    let d_grid = cfg.d_grid.clone().unwrap_or_else(|| vec![100, 300, 2000]);
    let replicates = cfg.replicates.unwrap_or(1);
    let k = kind.class_count();

    with_outputs(&cfg.out, |outputs| {
        let mut header: Vec<String> = vec![
            "d".into(),
            "replicate".into(),
            "sample".into(),
            "label".into(),
            "true_scores".into(),
        ];
        header.extend((1..=components).map(|i| format!("s{i}")));
        let mut lines = vec![format_row(&header)];
        for &d in &d_grid {
            let model = build_model(cfg, figure.default_model(), d)?;
            let sampler = MixtureSampler::new(&model)?;
            let use_true = d <= DENSE_EIGEN_CAP;
            let scorer = if use_true {
                Some(TrueScorer::new(&model, components)?)
            } else {
                None
            };
            let mut all_rows: Vec<(usize, Vec<f64>)> = Vec::new(); // (label, score point)
            for rep in 0..replicates {
                let x =
                    sampler.fixed_counts(&counts, SeedSpec::replicate(cfg.seed, rep as u64))?;
                let labels = x.labels().expect("fixed-count sampling labels columns").to_vec();
                let rows: Vec<Vec<f64>> = match &scorer {
                    Some(s) => {
                        let t = s.scores(&x)?;
                        t.rows
                            .into_iter()
                            .enumerate()
                            .map(|(i, row)| {
                                row.ok_or(Error::UndefinedComponent {
                                    index: i + 1,
                                    reason: "population eigenvalue is zero".into(),
                                })
                            })
                            .collect::<Result<_>>()?
                    }
                    None => {
                        let mut pca = dual_pca(&x, components)?;
                        pca.orient_with_labels(&labels, k)?;
                        pca.score_rows(components)?
                    }
                };
                for j in 0..x.n() {
                    let mut cells = vec![
                        d.to_string(),
                        rep.to_string(),
                        (j + 1).to_string(),
                        labels[j].to_string(),
                        if use_true { "1" } else { "0" }.to_string(),
                    ];
                    let point: Vec<f64> = rows.iter().map(|row| row[j]).collect();
                    cells.extend(point.iter().map(|&v| format_float(v)));
                    lines.push(format_row(&cells));
                    all_rows.push((labels[j], point));
                }
            }
            // vertex overlay: population proportions for true scores,
            // realized fractions for sample scores
            let vertices = if use_true {
                score_limits(model.mix())?
            } else {
                let total: usize = counts.iter().sum();
                let fractions: Vec<f64> =
                    counts.iter().map(|&c| c as f64 / total as f64).collect();
                score_limits(&fractions)?
            };
            let panels: Vec<(usize, usize)> = match figure {
                FigureKind::Fig2 => vec![(1, 2)],
                FigureKind::Fig3 => vec![(1, 2), (2, 3)],
            };
            for (a, b) in panels {
                let mut plot = Scatter::new(
                    &format!("{} scores, d = {d}", figure.name()),
                    &format!("score {a}"),
                    &format!("score {b}"),
                );
                let overlay: Vec<(f64, f64)> = (1..=k)
                    .map(|class| {
                        let v = vertices.vertex(class);
                        (v[a - 1], v[b - 1])
                    })
                    .collect();
                plot.dashed_polygon(&overlay);
                for (label, point) in &all_rows {
                    plot.point(point[a - 1], point[b - 1], *label);
                }
                let suffix = if matches!(figure, FigureKind::Fig2) {
                    format!("fig2_d{d}.svg")
                } else {
                    format!("fig3_d{d}_s{a}{b}.svg")
                };
                outputs.write(&suffix, &plot.render())?;
            }
        }
        outputs.write(
            &format!("{}_scores.csv", figure.name()),
            &(lines.join("\n") + "\n"),
        )?;
        outputs.write(
            "config_echo.txt",
            &cfg.echo(
                &format!("experiment {}", figure.name()),
                &[
                    ("counts", join_usize(&counts)),
                    ("d_grid", join_usize(&d_grid)),
                    ("replicates", replicates.to_string()),
                ],
            ),
        )?;
        Ok(())
    })
}

fn run_conditions(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let d_grid = cfg.d_grid.clone().unwrap_or_else(|| vec![50, 100, 200]);
    with_outputs(&cfg.out, |outputs| {
        let header = [
            "d",
            "ratio1",
            "ratio2",
            "ratio3",
            "ratio4",
            "ratio5_cos",
            "ratio5_gap",
            "ratio6",
            "ratio21",
        ];
        let mut lines = vec![header.join(",")];
        for &d in &d_grid {
            let model = build_model(cfg, ToyModel::TwoClass, d)?;
            let report = model.condition_report()?;
            let cells = vec![
                d.to_string(),
                format_float(report.ratio1),
                format_float(report.ratio2),
                format_float(report.ratio3),
                format_float(report.ratio4),
                format_float(report.ratio5_cos),
                format_float(report.ratio5_gap),
                format_float(report.ratio6),
                format_float(report.ratio21),
            ];
            lines.push(format_row(&cells));
        }
        outputs.write("conditions.csv", &(lines.join("\n") + "\n"))?;
        outputs.write(
            "config_echo.txt",
            &cfg.echo("check-conditions", &[("d_grid", join_usize(&d_grid))]),
        )?;
        Ok(())
    })
}

fn run_theorem1(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let kind = cfg.model.unwrap_or(ToyModel::TwoClass);
    if kind.class_count() != 2 {
        return Err(Error::InvalidInput("theorem1 needs a two-class model".into()));
    }
    let counts = effective_counts(cfg, &[1, 2]);
    if counts.len() != 2 || counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput(
            "theorem1 needs two positive class counts".into(),
        ));
    }
    let d_grid = cfg.d_grid.clone().unwrap_or_else(|| vec![50, 500, 2000]);
    let replicates = cfg.replicates.unwrap_or(20);
    let n: usize = counts.iter().sum();
    let fractions: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();

    with_outputs(&cfg.out, |outputs| {
        let mut lines = vec!["d,replicate,frobenius_distance".to_string()];
        for &d in &d_grid {
            let model = build_model(cfg, ToyModel::TwoClass, d)?;
            let sampler = MixtureSampler::new(&model)?;
            let gap = model.mean_gaps().min;
            let trace = model.mixture_trace();
            let c = gap / trace;
            for rep in 0..replicates {
                let x =
                    sampler.fixed_counts(&counts, SeedSpec::replicate(cfg.seed, rep as u64))?;
                let labels = x.labels().expect("labeled");
                let distance =
                    dual_limit_distance(&x, labels, &fractions, c, trace)?;
                lines.push(format_row(&[
                    d.to_string(),
                    rep.to_string(),
                    format_float(distance),
                ]));
            }
        }
        outputs.write("theorem1.csv", &(lines.join("\n") + "\n"))?;
        outputs.write(
            "config_echo.txt",
            &cfg.echo(
                "experiment theorem1",
                &[
                    ("counts", join_usize(&counts)),
                    ("d_grid", join_usize(&d_grid)),
                    ("replicates", replicates.to_string()),
                ],
            ),
        )?;
        Ok(())
    })
}

/// Frobenius distance of the trace-scaled dual covariance to its two-class
/// limit `c r r' + (1 - eta1 eta2 c) P_n`, with `r` the signed class
/// contrast and `P_n` the centering projector.
pub fn dual_limit_distance(
    x: &DataMatrix,
    labels: &[usize],
    fractions: &[f64],
    c: f64,
    trace: f64,
) -> Result<f64> {
    let n = x.n();
    let contrast: Vec<f64> = labels
        .iter()
        .map(|&l| match l {
            1 => 1.0 - fractions[0],
            2 => -(1.0 - fractions[1]),
            other => {
                debug_assert!(false, "two-class contrast got label {other}");
                0.0
            }
        })
        .collect();
    let gram = x.centered_gram()?;
    let projector_coeff = 1.0 - fractions[0] * fractions[1] * c;
    let scale = (n - 1) as f64 / trace;
    let mut sum_sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = c * contrast[i] * contrast[j]
                + projector_coeff * (if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64);
            let diff = gram.get(i, j) * scale - target;
            sum_sq += diff * diff;
        }
    }
    Ok(sum_sq.sqrt())
}

pub fn run_simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let d = cfg
        .d
        .ok_or_else(|| Error::InvalidInput("simulate needs d".into()))?;
    let kind = cfg
        .model
        .ok_or_else(|| Error::InvalidInput("simulate needs a model".into()))?;
    let model = build_model(cfg, kind, d)?;
    let (x, mode) = match (&cfg.counts, cfg.n) {
        (Some(counts), _) => (
            sample_fixed_counts(&model, counts, SeedSpec::new(cfg.seed))?,
            format!("counts = {}", join_usize(counts)),
        ),
        (None, Some(n)) => (
            sample_mixture_draws(&model, n, SeedSpec::new(cfg.seed))?,
            format!("n = {n}"),
        ),
        (None, None) => {
            return Err(Error::InvalidInput(
                "simulate needs counts or n".into(),
            ))
        }
    };
    with_outputs(&cfg.out, |outputs| {
        outputs.write("data.csv", &render_data_csv(&x))?;
        let mut lines = vec!["sample,label".to_string()];
        for (j, &label) in x.labels().expect("sampling labels columns").iter().enumerate() {
            lines.push(format!("{},{label}", j + 1));
        }
        outputs.write("labels.csv", &(lines.join("\n") + "\n"))?;
        outputs.write(
            "config_echo.txt",
            &cfg.echo("simulate", &[("d", d.to_string()), ("mode", mode)]),
        )?;
        Ok(())
    })
}

pub fn run_cluster(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    // data: either an input CSV or a freshly simulated model draw
    let (x, k) = match &cfg.input {
        Some(path) => {
            let x = crate::cli::csv::ingest_csv(path, cfg.orientation, cfg.header, cfg.label_field)?;
            let k = match cfg.k {
                Some(k) => k,
                None => match x.counts() {
                    Some(counts) => counts.len(),
                    None => {
                        return Err(Error::InvalidInput(
                            "cluster needs k when the input carries no labels".into(),
                        ))
                    }
                },
            };
            (x, k)
        }
        None => {
            let d = cfg
                .d
                .ok_or_else(|| Error::InvalidInput("cluster needs an input file or a model with d".into()))?;
            let kind = cfg
                .model
                .ok_or_else(|| Error::InvalidInput("cluster needs an input file or a model".into()))?;
            let model = build_model(cfg, kind, d)?;
            let x = match (&cfg.counts, cfg.n) {
                (Some(counts), _) => sample_fixed_counts(&model, counts, SeedSpec::new(cfg.seed))?,
                (None, Some(n)) => sample_mixture_draws(&model, n, SeedSpec::new(cfg.seed))?,
                (None, None) => {
                    return Err(Error::InvalidInput("cluster needs counts or n".into()))
                }
            };
            (x, kind.class_count())
        }
    };
    let n = x.n();
    if k < 2 || n < k {
        return Err(Error::InvalidInput(format!(
            "cluster needs 2 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut feature_dim = cfg.feature_dim;
    if let Some(fd) = feature_dim {
        if fd > n - 1 {
            eprintln!("warning: feature_dim {fd} exceeds n - 1 = {}, clamping", n - 1);
            feature_dim = Some(n - 1);
        }
    }
    let method = cfg.method.unwrap_or(Method::KMeans);

    let (pca, defined) = cluster::score_space(&x, k, feature_dim)?;
    let rows = pca.score_rows(defined)?;
    let result: ClusterResult = match method {
        Method::SignRule => {
            let sign_rows = pca.score_rows(k - 1)?;
            sign_rule(&sign_rows, k)?
        }
        Method::KMeans => {
            let points: Vec<Vec<f64>> = (0..n)
                .map(|j| rows.iter().map(|row| row[j]).collect())
                .collect();
            let km = KMeansConfig {
                seed: cfg.seed,
                ..KMeansConfig::default()
            };
            cluster::kmeans(&points, k, &km)?
        }
    };
    let matched = match x.labels() {
        Some(truth) => Some(match_accuracy(&result.labels, truth, k)?),
        None => None,
    };

    with_outputs(&cfg.out, |outputs| {
        let mut header: Vec<String> = vec!["sample".into()];
        header.extend((1..=rows.len()).map(|i| format!("score{i}")));
        let mut score_lines = vec![format_row(&header)];
        for j in 0..n {
            let mut cells = vec![(j + 1).to_string()];
            cells.extend(rows.iter().map(|row| format_float(row[j])));
            score_lines.push(format_row(&cells));
        }
        outputs.write("scores.csv", &(score_lines.join("\n") + "\n"))?;

        let mut label_lines = vec![if x.labels().is_some() {
            "sample,label,truth".to_string()
        } else {
            "sample,label".to_string()
        }];
        for j in 0..n {
            match x.labels() {
                Some(truth) => {
                    label_lines.push(format!("{},{},{}", j + 1, result.labels[j], truth[j]))
                }
                None => label_lines.push(format!("{},{}", j + 1, result.labels[j])),
            }
        }
        outputs.write("labels.csv", &(label_lines.join("\n") + "\n"))?;

        if let Some(m) = &matched {
            let perm = m
                .permutation
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            outputs.write(
                "accuracy.txt",
                &format!("accuracy = {}\npermutation = {perm}\n", format_float(m.accuracy)),
            )?;
        }

        // scatter of the leading scores, colored by predicted class, with
        // the vertex overlay when the truth pins down class fractions
        let overlay = x
            .labels()
            .and_then(|labels| class_fractions(labels, k).ok())
            .and_then(|fractions| score_limits(&fractions).ok());
        if rows.len() >= 2 {
            outputs.write(
                "scores_s12.svg",
                &score_panel(&rows, &result.labels, overlay.as_ref(), 1, 2),
            )?;
        }
        if rows.len() >= 3 {
            outputs.write(
                "scores_s23.svg",
                &score_panel(&rows, &result.labels, overlay.as_ref(), 2, 3),
            )?;
        }

        let effective = vec![
            ("k", k.to_string()),
            ("method", method.name().to_string()),
            ("feature_dim", rows.len().to_string()),
        ];
        outputs.write("config_echo.txt", &cfg.echo("cluster", &effective))?;
        Ok(())
    })
}

fn score_panel(
    rows: &[Vec<f64>],
    labels: &[usize],
    overlay: Option<&ScoreLimits>,
    a: usize,
    b: usize,
) -> String {
    let mut plot = Scatter::new(
        &format!("sample scores {a} vs {b}"),
        &format!("score {a}"),
        &format!("score {b}"),
    );
    if let Some(limits) = overlay {
        let k = limits.class_count();
        if b - 1 < k - 1 {
            let vertices: Vec<(f64, f64)> = (1..=k)
                .map(|class| {
                    let v = limits.vertex(class);
                    (v[a - 1], v[b - 1])
                })
                .collect();
            plot.dashed_polygon(&vertices);
        } else if a - 1 < k - 1 {
            // only the horizontal coordinate has theory: dashed verticals
            let y_min = rows[b - 1].iter().copied().fold(f64::INFINITY, f64::min);
            let y_max = rows[b - 1].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for class in 1..=k {
                let v = limits.vertex(class)[a - 1];
                plot.dashed_segment(v, y_min, v, y_max);
            }
        }
    }
    for (j, &label) in labels.iter().enumerate() {
        plot.point(rows[a - 1][j], rows[b - 1][j], label);
    }
    plot.render()
}

pub fn run_check_conditions(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    run_conditions(cfg)
}
