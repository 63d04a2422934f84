//! Relaxation, two-grid error propagation and convergence measurement.
//!
//! The smoother is written `N` (so `E_relax = I − N⁻¹A`); `Q` stays reserved for
//! the matrices that define ideal transfer operators.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, partition, spectral_radius, CFPartition, Matrix, Vector};
use crate::projection::build_pi;
use crate::transfer::TransferPair;

/// Default Jacobi weight.
pub const DEFAULT_OMEGA: f64 = 2.0 / 3.0;

/// Iterations over which the asymptotic rate is averaged.
pub const RATE_WINDOW: (usize, usize) = (10, 25);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RelaxKind {
    None,
    /// `N = diag(A)/ω` on all points.
    WeightedJacobi { omega: f64 },
    /// Weighted Jacobi on F-points only; C-points untouched.
    FJacobi { omega: f64 },
    /// Exact solve with `A_ff` on F-points; C-points untouched.
    FExact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxSpec {
    #[serde(flatten)]
    pub kind: RelaxKind,
    pub sweeps: usize,
}

impl RelaxSpec {
    pub const NONE: RelaxSpec = RelaxSpec {
        kind: RelaxKind::None,
        sweeps: 0,
    };

    pub fn new(kind: RelaxKind, sweeps: usize) -> Self {
        RelaxSpec { kind, sweeps }
    }

    pub fn jacobi(omega: f64, sweeps: usize) -> Self {
        Self::new(RelaxKind::WeightedJacobi { omega }, sweeps)
    }

    pub fn f_exact() -> Self {
        Self::new(RelaxKind::FExact, 1)
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            RelaxKind::WeightedJacobi { omega } | RelaxKind::FJacobi { omega }
                if !(omega > 0.0 && omega < 2.0) =>
            {
                Err(Error::InvalidRelaxation(format!("omega {omega} outside (0, 2)")))
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for RelaxSpec {
    type Err = String;

    /// `none`, `jacobi[:omega[:sweeps]]`, `fjacobi[:omega[:sweeps]]` or
    /// `fexact[:sweeps]`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let rest: Vec<&str> = parts.collect();
        let bad = || format!("bad relaxation `{s}`");
        let num = |i: usize, default: f64| -> std::result::Result<f64, String> {
            rest.get(i).map_or(Ok(default), |t| t.parse().map_err(|_| bad()))
        };
        let sweeps = |i: usize| -> std::result::Result<usize, String> {
            rest.get(i).map_or(Ok(1), |t| t.parse().map_err(|_| bad()))
        };
        let (spec, max_fields) = match name.as_str() {
            "none" => (RelaxSpec::NONE, 0),
            "jacobi" => (RelaxSpec::jacobi(num(0, DEFAULT_OMEGA)?, sweeps(1)?), 2),
            "fjacobi" => (
                RelaxSpec::new(RelaxKind::FJacobi { omega: num(0, DEFAULT_OMEGA)? }, sweeps(1)?),
                2,
            ),
            "fexact" => (RelaxSpec::new(RelaxKind::FExact, sweeps(0)?), 1),
            _ => return Err(bad()),
        };
        if rest.len() > max_fields {
            return Err(bad());
        }
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

/// Dense `N⁻¹` for one sweep of `kind`.
pub fn smoother_inverse(a: &Matrix, part: &CFPartition, kind: RelaxKind) -> Result<Matrix> {
    let n = a.nrows();
    if part.n() != n {
        return Err(Error::dims("smoother", n.to_string(), part.n().to_string()));
    }
    let diag_inv = |i: usize, omega: f64| {
        let d = a[(i, i)];
        if d == 0.0 {
            Err(Error::InvalidRelaxation(format!("zero diagonal at row {i}")))
        } else {
            Ok(omega / d)
        }
    };
    let mut ninv = Matrix::zeros(n, n);
    match kind {
        RelaxKind::None => {}
        RelaxKind::WeightedJacobi { omega } => {
            for i in 0..n {
                ninv[(i, i)] = diag_inv(i, omega)?;
            }
        }
        RelaxKind::FJacobi { omega } => {
            for &i in part.fpoints() {
                ninv[(i, i)] = diag_inv(i, omega)?;
            }
        }
        RelaxKind::FExact => {
            let ap = partition(a, part)?;
            let ff_inv = checked_inverse(ap.ff(), "A_ff")?;
            for (ri, &i) in part.fpoints().iter().enumerate() {
                for (cj, &j) in part.fpoints().iter().enumerate() {
                    ninv[(i, j)] = ff_inv[(ri, cj)];
                }
            }
        }
    }
    Ok(ninv)
}

/// `(I − N⁻¹A)^sweeps`.
pub fn relax_propagator(a: &Matrix, part: &CFPartition, spec: &RelaxSpec) -> Result<Matrix> {
    spec.validate()?;
    let n = a.nrows();
    let eye = Matrix::identity(n, n);
    if spec.sweeps == 0 || spec.kind == RelaxKind::None {
        return Ok(eye);
    }
    let step = &eye - smoother_inverse(a, part, spec.kind)? * a;
    Ok((1..spec.sweeps).fold(step.clone(), |acc, _| &step * acc))
}

/// A two-grid cycle: pre-relaxation, coarse-grid correction, post-relaxation.
#[derive(Clone, Debug)]
pub struct TwoGridSpec {
    pub pair: TransferPair,
    pub pre: RelaxSpec,
    pub post: RelaxSpec,
}

impl TwoGridSpec {
    pub fn new(pair: TransferPair, pre: RelaxSpec, post: RelaxSpec) -> Self {
        TwoGridSpec { pair, pre, post }
    }
}

/// `E = E_post (I − Π) E_pre`.
pub fn two_grid_propagator(a: &Matrix, spec: &TwoGridSpec) -> Result<Matrix> {
    let part = spec.pair.part();
    let (pi, _) = build_pi(a, &spec.pair)?;
    let n = a.nrows();
    let cgc = Matrix::identity(n, n) - pi;
    let pre = relax_propagator(a, part, &spec.pre)?;
    let post = relax_propagator(a, part, &spec.post)?;
    Ok(post * cgc * pre)
}

/// Spectral radius of `e`.
pub fn conv_factor(e: &Matrix) -> Result<f64> {
    if e.nrows() != e.ncols() {
        return Err(Error::dims("conv_factor", "square", format!("{:?}", e.shape())));
    }
    if e.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    spectral_radius(e)
}

/// Largest C-point magnitude of `(I − Π)e`.
pub fn air_cpoint_residual(a: &Matrix, pair: &TransferPair, e: &Vector) -> Result<f64> {
    if e.len() != a.nrows() {
        return Err(Error::dims("error vector", a.nrows().to_string(), e.len().to_string()));
    }
    let (pi, _) = build_pi(a, pair)?;
    let after = e - pi * e;
    Ok(pair
        .part()
        .cpoints()
        .iter()
        .map(|&i| after[i].abs())
        .fold(0.0, f64::max))
}

/// Residual norms `‖b − A x_k‖₂` for `k = 0..=iters` and the final iterate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterationHistory {
    pub residuals: Vec<f64>,
    #[serde(skip)]
    pub x: Vector,
}

impl IterationHistory {
    /// Geometric-mean contraction over [`RATE_WINDOW`]; `None` when the history
    /// is too short.
    pub fn asymptotic_rate(&self) -> Option<f64> {
        let (lo, hi) = RATE_WINDOW;
        let (start, end) = (*self.residuals.get(lo)?, *self.residuals.get(hi)?);
        if start == 0.0 {
            return Some(0.0);
        }
        Some((end / start).powf(1.0 / (hi - lo) as f64))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,residual\n");
        for (k, r) in self.residuals.iter().enumerate() {
            let _ = writeln!(out, "{k},{r:.16e}");
        }
        out
    }
}

/// Runs `iters` two-grid cycles as solution updates, never forming `E`.
pub fn iterate(
    a: &Matrix,
    spec: &TwoGridSpec,
    b: &Vector,
    x0: &Vector,
    iters: usize,
) -> Result<IterationHistory> {
    let n = a.nrows();
    if b.len() != n || x0.len() != n {
        return Err(Error::dims("iterate", n.to_string(), format!("{}/{}", b.len(), x0.len())));
    }
    spec.pre.validate()?;
    spec.post.validate()?;
    let part = spec.pair.part();
    let pre = smoother_inverse(a, part, spec.pre.kind)?;
    let post = smoother_inverse(a, part, spec.post.kind)?;
    let (r_mat, p_mat) = (spec.pair.r(), spec.pair.p());
    let k = r_mat.transpose() * a * p_mat;
    let k_lu = k.clone().lu();
    checked_inverse(&k, "R*AP").map_err(|e| Error::IncompatiblePair { source: Box::new(e) })?;

    let relax = |x: &mut Vector, ninv: &Matrix, sweeps: usize, skip: bool| {
        if skip {
            return;
        }
        for _ in 0..sweeps {
            let r = b - a * &*x;
            *x += ninv * r;
        }
    };
    let mut x = x0.clone();
    let mut residuals = Vec::with_capacity(iters + 1);
    residuals.push((b - a * &x).norm());
    for _ in 0..iters {
        relax(&mut x, &pre, spec.pre.sweeps, spec.pre.kind == RelaxKind::None);
        let r = b - a * &x;
        let coarse = k_lu
            .solve(&(r_mat.transpose() * r))
            .ok_or_else(|| Error::Singular {
                what: "R*AP".into(),
                cond: f64::INFINITY,
            })?;
        x += p_mat * coarse;
        relax(&mut x, &post, spec.post.sweeps, spec.post.kind == RelaxKind::None);
        residuals.push((b - a * &x).norm());
    }
    Ok(IterationHistory { residuals, x })
}
