//! Test matrices and CF-splittings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, CFPartition, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "advection1d")]
    Advection1D,
    #[serde(rename = "advection2d")]
    Advection2D,
    #[serde(rename = "advdiff1d")]
    AdvectionDiffusion1D,
    #[serde(rename = "laplacian1d")]
    Laplacian1D,
    #[serde(rename = "random", alias = "random_stable_nonsym")]
    RandomStableNonsym,
}

impl std::str::FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
            .map_err(|_| format!("unknown problem `{s}`"))
    }
}

/// Description of a generated test matrix.
///
/// `n` is the size for 1D and random kinds; `nx`, `ny` the grid for
/// [`ProblemKind::Advection2D`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub nx: usize,
    #[serde(default)]
    pub ny: usize,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self::new(ProblemKind::Advection1D, 32)
    }
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind, n: usize) -> Self {
        ProblemSpec {
            kind,
            n,
            nx: 0,
            ny: 0,
            epsilon: 0.0,
            seed: 0,
        }
    }

    pub fn advection_2d(nx: usize, ny: usize) -> Self {
        ProblemSpec {
            nx,
            ny,
            ..Self::new(ProblemKind::Advection2D, nx * ny)
        }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        ProblemSpec {
            seed,
            ..Self::new(ProblemKind::RandomStableNonsym, n)
        }
    }

    pub fn advection_diffusion(n: usize, epsilon: f64) -> Self {
        ProblemSpec {
            epsilon,
            ..Self::new(ProblemKind::AdvectionDiffusion1D, n)
        }
    }

    /// Number of unknowns of the generated matrix.
    pub fn size(&self) -> usize {
        match self.kind {
            ProblemKind::Advection2D => self.nx * self.ny,
            _ => self.n,
        }
    }
}

fn upwind_1d(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else if i == j + 1 {
            -1.0
        } else {
            0.0
        }
    })
}

fn laplacian_1d(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    })
}

/// Lower-triangular first-order upwind stencil for unit velocity in both
/// directions, lexicographic ordering `k = j * nx + i`.
fn upwind_2d(nx: usize, ny: usize) -> Matrix {
    let n = nx * ny;
    let mut a = Matrix::zeros(n, n);
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            a[(k, k)] = 2.0;
            if i > 0 {
                a[(k, k - 1)] = -1.0;
            }
            if j > 0 {
                a[(k, k - nx)] = -1.0;
            }
        }
    }
    a
}

/// `S + σK` with `S = GGᵀ/n + 0.1 I` and `K` skew; `σ` scales the skew part to
/// the spectral norm of `S`. `A_sym = S` is SPD, so `A` is nonsingular.
fn random_stable_nonsym(n: usize, seed: u64) -> Result<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let g = Matrix::from_fn(n, n, |_, _| draw());
    let h = Matrix::from_fn(n, n, |_, _| draw());
    let s = &g * g.transpose() / n as f64 + Matrix::identity(n, n) * 0.1;
    let k = (&h - h.transpose()) * 0.5;
    let sigma = spectral_norm(&s)? / spectral_norm(&k)?;
    Ok(s + k * sigma)
}

pub fn generate(spec: &ProblemSpec) -> Result<Matrix> {
    let check = |v: usize, name: &str| {
        if v < 2 {
            Err(Error::InvalidProblem(format!("{name} must be at least 2, got {v}")))
        } else {
            Ok(())
        }
    };
    match spec.kind {
        ProblemKind::Advection2D => {
            check(spec.nx, "nx")?;
            check(spec.ny, "ny")?;
        }
        _ => check(spec.n, "n")?,
    }
    if !(spec.epsilon >= 0.0 && spec.epsilon.is_finite()) {
        return Err(Error::InvalidProblem(format!(
            "epsilon must be finite and nonnegative, got {}",
            spec.epsilon
        )));
    }
    Ok(match spec.kind {
        ProblemKind::Advection1D => upwind_1d(spec.n),
        ProblemKind::Laplacian1D => laplacian_1d(spec.n),
        ProblemKind::AdvectionDiffusion1D => {
            let h = 1.0 / (spec.n as f64 + 1.0);
            upwind_1d(spec.n) + laplacian_1d(spec.n) * (spec.epsilon / (h * h))
        }
        ProblemKind::Advection2D => upwind_2d(spec.nx, spec.ny),
        ProblemKind::RandomStableNonsym => random_stable_nonsym(spec.n, spec.seed)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitPolicy {
    /// Even indices F, odd indices C.
    Alternate,
    /// The first `⌈n/2⌉` indices F.
    FirstHalfF,
    /// Each point is C with probability `cfrac`.
    Random { seed: u64, cfrac: f64 },
}

pub fn default_splitting(n: usize, policy: SplitPolicy) -> Result<CFPartition> {
    if n < 2 {
        return Err(Error::InvalidPartition(format!("need at least 2 points, got {n}")));
    }
    let is_c: Vec<bool> = match policy {
        SplitPolicy::Alternate => (0..n).map(|i| i % 2 == 1).collect(),
        SplitPolicy::FirstHalfF => (0..n).map(|i| i >= n.div_ceil(2)).collect(),
        SplitPolicy::Random { seed, cfrac } => {
            if !(0.0..=1.0).contains(&cfrac) {
                return Err(Error::InvalidPartition(format!("cfrac {cfrac} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut flags: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < cfrac).collect();
            if !flags.iter().any(|&c| c) {
                flags[n - 1] = true;
            }
            if flags.iter().all(|&c| c) {
                flags[0] = false;
            }
            flags
        }
    };
    let cpoints = (0..n).filter(|&i| is_c[i]).collect();
    CFPartition::from_cpoints(n, cpoints)
}
