use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use quospec::verify::Suite;
use serde_json::Value;

use crate::commands;
use crate::config::{parse_chain, Format, JobConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "quospec", version, about = "Eigenvalue measures of group-ring matrices on finite quotients")]
pub struct Cli {
    #[command(flatten)]
    pub job: JobArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags that override fields of the config file.
#[derive(Debug, Default, Args)]
pub struct JobArgs {
    /// JSON job description; flags given alongside take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `Z`, `Z^k`, `ZxZ/6`, `H3`, ...
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// A single group-ring element, e.g. `a - b`.
    #[arg(long, global = true, conflicts_with = "matrix")]
    pub element: Option<String>,
    /// A matrix, e.g. `[[g^2+3*g, 4],[g^3, -g^4+g]]`.
    #[arg(long, global = true)]
    pub matrix: Option<String>,
    /// Quotient levels: `5,25,125`, `4x6,8x12` or `3^1,3^2`.
    #[arg(long, global = true)]
    pub chain: Option<String>,
    /// `grid:M`, `roots:m1,...` or `mc:COUNT[:SEED]`.
    #[arg(long, global = true)]
    pub sampler: Option<String>,
    /// Number of moments in convergence reports.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Zero tolerance on eigenvalue moduli.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true)]
    pub tol_svd: Option<f64>,
    /// Power `K` in `rank(M^K)`.
    #[arg(long, global = true)]
    pub rank_power: Option<u32>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output formats, comma-separated from csv, json, svg.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Vec<String>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectra of the finite-quotient matrices `A_i` along the chain.
    QuotientSpectrum,
    /// Torus limit measure of an abelian matrix, with a convergence report
    /// against the chain when one is given.
    LimitMeasure,
    /// Exact zero-atom masses of `a - b` over `H3(Z/p^m)`.
    HeisenbergTable {
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// `1..4` (inclusive) or `1,2,3`.
        #[arg(long, default_value = "1..4")]
        levels: String,
    },
    /// A nilpotent Jordan block against its corner perturbation.
    DemoDiscontinuity {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, default_value = "smoke")]
        suite: Suite,
    },
    /// Print the resolved job description as JSON.
    ShowConfig,
}

impl JobArgs {
    pub fn resolve(&self) -> Result<JobConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => JobConfig::load(path)?,
            None => JobConfig::default(),
        };
        if let Some(g) = &self.group {
            cfg.group = g.clone();
        }
        if let Some(e) = &self.element {
            cfg.element = Some(e.clone());
            cfg.matrix = None;
        }
        if let Some(m) = &self.matrix {
            cfg.matrix = Some(m.clone());
            cfg.element = None;
        }
        if let Some(c) = &self.chain {
            cfg.chain = parse_chain(c)?;
        }
        if let Some(s) = &self.sampler {
            cfg.sampler = s.parse()?;
        }
        if let Some(d) = self.degree {
            cfg.degree = d;
        }
        if let Some(t) = self.tol {
            cfg.tolerances.tau = t;
        }
        if let Some(t) = self.tol_svd {
            cfg.tolerances.tau_svd = t;
        }
        if self.rank_power.is_some() {
            cfg.tolerances.rank_power = self.rank_power;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if !self.format.is_empty() {
            cfg.formats = self.format.iter().map(|f| f.parse()).collect::<Result<Vec<Format>, _>>()?;
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        Ok(cfg)
    }
}

fn parse_levels(text: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Config(format!("cannot parse levels {text:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

pub fn run(cli: &Cli) -> Result<Value, CliError> {
    let cfg = cli.job.resolve()?;
    if let Some(n) = cfg.threads {
        // fails only if a pool exists already, which keeps the first cap
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::QuotientSpectrum => commands::quotient_spectrum(&cfg),
        Command::LimitMeasure => commands::limit(&cfg),
        Command::HeisenbergTable { p, levels } => commands::heisenberg_table(&cfg, *p, &parse_levels(levels)?),
        Command::DemoDiscontinuity { n, eps } => commands::demo_discontinuity(&cfg, *n, *eps),
        Command::Verify { suite } => commands::verify(*suite, cli.job.out.is_some().then_some(&cfg)),
        Command::ShowConfig => {
            println!("{}", cfg.to_json());
            Ok(serde_json::to_value(&cfg).expect("config serializes"))
        }
    }
}
