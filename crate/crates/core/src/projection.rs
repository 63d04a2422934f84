//! The coarse-grid correction `Π = P (RᵀAP)⁻¹ RᵀA` and the quantities that
//! describe how far it is from `M`-orthogonal.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    checked_solve, complement_basis, ensure_square, m_norm_vec, null_basis, operator_m_norm_with,
    orthonormalize, range_basis, rank, singular_values, spectral_norm, Matrix, SpdRoot, Vector, RANK_TOL,
};
use crate::transfer::TransferPair;

/// Number of random probes used by the bilinear-form check.
pub const PROBES: usize = 64;
const PROBE_SEED: u64 = 0x0c0a_25e5;

/// Default tolerance for "‖Π‖_M = 1".
pub const ORTHO_TOL: f64 = 1e-8;

/// `K = RᵀAP`.
#[derive(Clone, Debug)]
pub struct CoarseOperator {
    pub k: Matrix,
}

pub fn build_pi(a: &Matrix, pair: &TransferPair) -> Result<(Matrix, CoarseOperator)> {
    ensure_square(a, "A")?;
    if a.nrows() != pair.r().nrows() {
        return Err(Error::dims(
            "build_pi",
            format!("{} rows", a.nrows()),
            pair.r().nrows().to_string(),
        ));
    }
    let rt_a = pair.r().transpose() * a;
    let k = &rt_a * pair.p();
    let coarse_solve = checked_solve(&k, &rt_a, "R*AP").map_err(|e| Error::IncompatiblePair {
        source: Box::new(e),
    })?;
    Ok((pair.p() * coarse_solve, CoarseOperator { k }))
}

pub fn pi_m_norm(pi: &Matrix, m: &Matrix) -> Result<f64> {
    crate::linalg::operator_m_norm(pi, m)
}

/// `sup ‖Πx‖_M / ‖x‖_M` over `x` in the `M`-orthogonal complement of `range(Π)`.
pub fn nonorth_measure(pi: &Matrix, m: &Matrix) -> Result<f64> {
    nonorth_with(pi, m, &SpdRoot::new(m)?)
}

fn nonorth_with(pi: &Matrix, m: &Matrix, root: &SpdRoot) -> Result<f64> {
    // range(Π)^{⊥_M} = M⁻¹ range(Π)^⊥
    let perp = complement_basis(pi, RANK_TOL)?;
    if perp.ncols() == 0 {
        return Ok(0.0);
    }
    let x = checked_solve(m, &perp, "M")?;
    // M-orthonormalize: columns of M^{1/2} X orthonormal.
    let y = orthonormalize(&(&root.sqrt * x));
    let x_orth = &root.inv_sqrt * y;
    spectral_norm(&(&root.sqrt * pi * x_orth))
}

/// Smallest `M`-canonical angle between `range(Π)` and `null(Π)`, in radians.
pub fn min_canonical_angle(pi: &Matrix, m: &Matrix) -> Result<f64> {
    angle_with(pi, &SpdRoot::new(m)?)
}

fn angle_with(pi: &Matrix, root: &SpdRoot) -> Result<f64> {
    let range = range_basis(pi, RANK_TOL)?;
    let null = null_basis(pi, RANK_TOL)?;
    if range.ncols() == 0 || null.ncols() == 0 {
        return Ok(FRAC_PI_2);
    }
    // In M^{1/2} coordinates the M-inner product is Euclidean.
    let x = orthonormalize(&(&root.sqrt * range));
    let y = orthonormalize(&(&root.sqrt * null));
    let cos = spectral_norm(&(x.transpose() * &y))?;
    let (small, large) = if x.ncols() <= y.ncols() { (&x, &y) } else { (&y, &x) };
    let resid = small - large * (large.transpose() * small);
    let sin = singular_values(&resid)?.last().copied().unwrap_or(0.0);
    Ok(sin.max(0.0).atan2(cos))
}

/// The equivalent characterizations of an `M`-orthogonal projection, each
/// evaluated numerically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityChecks {
    /// `MΠ = (MΠ)ᵀ`
    pub m_pi_symmetric: bool,
    /// `Π = M⁻¹ΠᵀM`
    pub self_adjoint: bool,
    /// `range(MΠ) = range(Πᵀ)`
    pub ranges_equal: bool,
    /// `⟨Πx, (I−Π)y⟩_M = 0` on random probes
    pub probes_orthogonal: bool,
    pub symmetry_residual: f64,
    pub adjoint_residual: f64,
    pub range_gap: f64,
    pub probe_max: f64,
}

impl OrthogonalityChecks {
    pub fn all(&self) -> bool {
        self.m_pi_symmetric && self.self_adjoint && self.ranges_equal && self.probes_orthogonal
    }

    pub fn none(&self) -> bool {
        !(self.m_pi_symmetric || self.self_adjoint || self.ranges_equal || self.probes_orthogonal)
    }

    pub fn agree(&self) -> bool {
        self.all() || self.none()
    }
}

fn rel(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Sine of the largest principal angle between two column spaces given by
/// orthonormal bases; `1` when the dimensions differ.
fn subspace_gap(qx: &Matrix, qy: &Matrix) -> Result<f64> {
    if qx.ncols() != qy.ncols() {
        return Ok(1.0);
    }
    if qx.ncols() == 0 {
        return Ok(0.0);
    }
    spectral_norm(&(qy - qx * (qx.transpose() * qy)))
}

pub fn orthogonality_checks(pi: &Matrix, m: &Matrix, tol: f64) -> Result<OrthogonalityChecks> {
    ensure_square(pi, "Π")?;
    let _ = SpdRoot::new(m)?;
    let m_pi = m * pi;
    let symmetry_residual = rel((&m_pi - m_pi.transpose()).norm(), m_pi.norm());
    let adj = checked_solve(m, &(pi.transpose() * m), "M")?;
    let adjoint_residual = rel((pi - adj).norm(), pi.norm());
    // range(MΠ) = M range(Π); mapping a basis avoids rank decisions on MΠ.
    let mapped = orthonormalize(&(m * range_basis(pi, RANK_TOL)?));
    let gap = subspace_gap(&mapped, &range_basis(&pi.transpose(), RANK_TOL)?)?;

    let n = pi.nrows();
    let eye = Matrix::identity(n, n);
    let comp = &eye - pi;
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut probe_max: f64 = 0.0;
    for _ in 0..PROBES {
        let x = Vector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        let y = Vector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        let px = pi * x;
        let qy = &comp * y;
        let den = m_norm_vec(&px, m) * m_norm_vec(&qy, m);
        if den > 0.0 {
            probe_max = probe_max.max((m * &px).dot(&qy).abs() / den);
        }
    }

    Ok(OrthogonalityChecks {
        m_pi_symmetric: symmetry_residual <= tol,
        self_adjoint: adjoint_residual <= tol,
        ranges_equal: gap <= tol,
        probes_orthogonal: probe_max <= tol,
        symmetry_residual,
        adjoint_residual,
        range_gap: gap,
        probe_max,
    })
}

/// Range form of the compatibility condition: `range(M P) = range(Aᵀ R)`,
/// tested as `rank([M P | Aᵀ R]) = n_c` with orthonormalized blocks.
pub fn verify_compat_equation(a: &Matrix, m: &Matrix, pair: &TransferPair) -> bool {
    compat_gap(a, m, pair).is_some_and(|g| g <= RANK_TOL)
}

/// Relative size of the `(n_c+1)`-th singular value of `[orth(MP) | orth(AᵀR)]`;
/// `None` on shape mismatch or rank-deficient blocks.
pub fn compat_gap(a: &Matrix, m: &Matrix, pair: &TransferPair) -> Option<f64> {
    let n = pair.p().nrows();
    if a.shape() != (n, n) || m.shape() != (n, n) {
        return None;
    }
    let mp = m * pair.p();
    let atr = a.transpose() * pair.r();
    let nc = pair.part().n_c();
    if rank(&mp, RANK_TOL).ok()? != nc || rank(&atr, RANK_TOL).ok()? != nc {
        return None;
    }
    subspace_gap(&orthonormalize(&mp), &orthonormalize(&atr)).ok()
}

/// Everything measured about one `Π` in one norm.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionReport {
    #[serde(skip)]
    pub pi: Matrix,
    pub m_norm: f64,
    pub nonorth_sup: f64,
    pub min_angle: f64,
    pub is_m_orthogonal: bool,
    /// `‖MΠ − (MΠ)ᵀ‖ / ‖MΠ‖`
    pub symmetry_residual: f64,
    pub checks: OrthogonalityChecks,
}

pub fn analyze(pi: &Matrix, m: &Matrix, tol: f64) -> Result<ProjectionReport> {
    let root = SpdRoot::new(m)?;
    let m_norm = operator_m_norm_with(pi, &root)?;
    let checks = orthogonality_checks(pi, m, tol)?;
    Ok(ProjectionReport {
        pi: pi.clone(),
        m_norm,
        nonorth_sup: nonorth_with(pi, m, &root)?,
        min_angle: angle_with(pi, &root)?,
        is_m_orthogonal: (m_norm - 1.0).abs() <= tol,
        symmetry_residual: checks.symmetry_residual,
        checks,
    })
}
