use clap::{Args, Parser, Subcommand};
use hdlss::cli::{
    run_check_conditions, run_cluster, run_experiment, run_simulate, ExperimentName, RunConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// PCA-based clustering for high-dimension, low-sample-size data.
#[derive(Parser)]
#[command(name = "hdlss", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a labeled data matrix from a built-in mixture model.
    Simulate(CommonArgs),
    /// Cluster a CSV file or a freshly simulated model draw.
    Cluster {
        /// Input CSV (overrides the config `input` key).
        input: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate the separation-condition diagnostics over a dimension grid.
    CheckConditions(CommonArgs),
    /// Run a named experiment: fig1, fig2, fig3, conditions, or theorem1.
    Experiment {
        name: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated strictly increasing dimensions, e.g. 50,500,2000.
    #[arg(long, value_name = "D1,D2,...")]
    d_grid: Option<String>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Clustering method: sign or kmeans.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    feature_dim: Option<usize>,
    /// CSV sample orientation: columns or rows.
    #[arg(long)]
    orientation: Option<String>,
    /// Output directory (default: out).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn build_config(&self) -> hdlss::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(grid) = &self.d_grid {
            cfg.set("d_grid", grid)?;
        }
        if let Some(r) = self.replicates {
            cfg.set("replicates", &r.to_string())?;
        }
        if let Some(k) = self.k {
            cfg.set("k", &k.to_string())?;
        }
        if let Some(m) = &self.method {
            cfg.set("method", m)?;
        }
        if let Some(fd) = self.feature_dim {
            cfg.set("feature_dim", &fd.to_string())?;
        }
        if let Some(o) = &self.orientation {
            cfg.set("orientation", o)?;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        Ok(cfg)
    }
}

fn run() -> hdlss::Result<Vec<PathBuf>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(common) => run_simulate(&common.build_config()?),
        Command::Cluster { input, common } => {
            let mut cfg = common.build_config()?;
            if let Some(path) = input {
                cfg.input = Some(path);
            }
            run_cluster(&cfg)
        }
        Command::CheckConditions(common) => run_check_conditions(&common.build_config()?),
        Command::Experiment { name, common } => {
            let experiment = ExperimentName::from_name(&name)?;
            run_experiment(experiment, &common.build_config()?)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(files) => {
            for file in files {
                println!("{}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
