//! Experiment configuration: a JSON file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use compatamg::{NormTag, ProblemKind, ProblemSpec, RelaxSpec, SplitPolicy};
use serde::{Deserialize, Serialize};

use crate::recipe::Recipe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    Alternate,
    Firsthalf,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything an experiment needs. Unknown fields are rejected so typos in a
/// config file surface as errors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub split: SplitName,
    pub cfrac: f64,
    pub norms: Vec<String>,
    pub pairs: Vec<String>,
    pub pre: RelaxSpec,
    pub post: RelaxSpec,
    pub iters: usize,
    pub tol: f64,
    pub expect_orthogonal: bool,
    /// Where the report goes. Not echoed into reports, so reruns to different
    /// files stay byte-identical.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problem: ProblemSpec::default(),
            split: SplitName::Alternate,
            cfrac: 0.5,
            norms: Vec::new(),
            pairs: Vec::new(),
            pre: RelaxSpec::NONE,
            post: RelaxSpec::NONE,
            iters: 30,
            tol: compatamg::projection::ORTHO_TOL,
            expect_orthogonal: false,
            output: None,
            format: Format::Json,
        }
    }
}

/// Flags shared by every subcommand. Each one, when given, overrides the
/// config file.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// JSON experiment config; flags below override its fields.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// advection1d | advection2d | advdiff1d | laplacian1d | random
    #[arg(long)]
    pub problem: Option<String>,
    /// Problem size; the grid side for advection2d unless --nx/--ny are given.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Diffusion coefficient for advdiff1d.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Seed for the random problem and the random splitting.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub split: Option<SplitName>,
    /// Probability of a C-point under --split random.
    #[arg(long)]
    pub cfrac: Option<f64>,
    /// Norm tag to evaluate in (repeatable): I, A, A_sym, A*A, sqrtA*A, A*A_sym^-1A.
    #[arg(long = "norm", value_name = "TAG")]
    pub norms: Vec<String>,
    /// Pair recipe (repeatable): red1..red4, t1:M:Q, t2:M:Q, air, galerkin,
    /// cob, random:SEED, zw:ZFILE:WFILE.
    #[arg(long = "pair", value_name = "RECIPE")]
    pub pairs: Vec<String>,
    /// Tolerance for ‖Π‖_M = 1.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Treat every (pair, norm) case as expected to be orthogonal.
    #[arg(long)]
    pub expect_orthogonal: bool,
    /// Pre-relaxation: none, jacobi[:omega[:sweeps]], fjacobi[:omega[:sweeps]], fexact.
    #[arg(long)]
    pub pre: Option<String>,
    /// Post-relaxation, same syntax as --pre.
    #[arg(long)]
    pub post: Option<String>,
    /// Two-grid iterations for `converge`.
    #[arg(long)]
    pub iters: Option<usize>,
}

fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("config: cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("config: invalid {}", path.display()))
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => read_config(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(kind) = &self.problem {
            cfg.problem.kind = kind
                .parse::<ProblemKind>()
                .map_err(|e| anyhow::anyhow!("problem: {e}"))?;
        }
        if let Some(n) = self.n {
            cfg.problem.n = n;
        }
        if let Some(e) = self.epsilon {
            cfg.problem.epsilon = e;
        }
        if let Some(s) = self.seed {
            cfg.problem.seed = s;
        }
        if cfg.problem.kind == ProblemKind::Advection2D {
            let side = cfg.problem.n;
            cfg.problem.nx = self.nx.unwrap_or(if cfg.problem.nx == 0 { side } else { cfg.problem.nx });
            cfg.problem.ny = self.ny.unwrap_or(if cfg.problem.ny == 0 { side } else { cfg.problem.ny });
        }
        if let Some(s) = self.split {
            cfg.split = s;
        }
        if let Some(c) = self.cfrac {
            cfg.cfrac = c;
        }
        if !self.norms.is_empty() {
            cfg.norms = self.norms.clone();
        }
        if !self.pairs.is_empty() {
            cfg.pairs = self.pairs.clone();
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        cfg.expect_orthogonal |= self.expect_orthogonal;
        if let Some(p) = &self.pre {
            cfg.pre = p.parse().map_err(|e| anyhow::anyhow!("pre: {e}"))?;
        }
        if let Some(p) = &self.post {
            cfg.post = p.parse().map_err(|e| anyhow::anyhow!("post: {e}"))?;
        }
        if let Some(i) = self.iters {
            cfg.iters = i;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("tol: must be positive, got {}", self.tol);
        }
        if !(0.0..=1.0).contains(&self.cfrac) {
            bail!("cfrac: must lie in [0, 1], got {}", self.cfrac);
        }
        for tag in &self.norms {
            tag.parse::<NormTag>().map_err(|e| anyhow::anyhow!("norm: {e}"))?;
        }
        for p in &self.pairs {
            Recipe::parse(p)?;
        }
        Ok(())
    }

    pub fn split_policy(&self) -> SplitPolicy {
        match self.split {
            SplitName::Alternate => SplitPolicy::Alternate,
            SplitName::Firsthalf => SplitPolicy::FirstHalfF,
            SplitName::Random => SplitPolicy::Random {
                seed: self.problem.seed,
                cfrac: self.cfrac,
            },
        }
    }

    pub fn norm_tags(&self) -> Vec<NormTag> {
        self.norms.iter().map(|t| t.parse().expect("validated")).collect()
    }
}
