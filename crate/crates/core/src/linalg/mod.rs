//! Dense linear-algebra substrate.
//!
//! Everything here works on column-major [`nalgebra::DMatrix<f64>`] values. The
//! routines are pure: inputs are borrowed, results are freshly allocated.
//!
//! Nonsingularity is decided by a 1-norm condition number computed from the
//! explicit inverse; anything above [`SINGULAR_COND`] is reported as
//! [`Error::Singular`] rather than silently producing garbage.

mod dense;
mod norm_spec;
mod partition;

pub use dense::{singular_values, spectral_radius, svd, sym_eigen, Svd};
pub use norm_spec::{realize_norm, NormSpec, NormTag};
pub use partition::{assemble, partition, schur_c, schur_f, CFPartition, PartitionedMatrix};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Condition numbers above this are treated as singular.
pub const SINGULAR_COND: f64 = 1e12;
/// Default relative tolerance for [`spd_check`].
pub const SPD_TOL: f64 = 1e-10;
/// Default rank tolerance, relative to the leading singular value.
pub const RANK_TOL: f64 = 1e-8;

pub(crate) fn ensure_square(m: &Matrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::dims(
            what,
            "nonempty square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Lowercases and strips whitespace and underscores, for tag parsing.
pub(crate) fn normalize_key(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .collect::<String>()
        .to_ascii_lowercase()
}

fn norm1(m: &Matrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number, `‖M‖₁‖M⁻¹‖₁`; infinite when `M` is exactly singular.
pub fn condition_1(m: &Matrix) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Inverse of `m`, refusing matrices whose condition estimate exceeds
/// [`SINGULAR_COND`].
pub fn checked_inverse(m: &Matrix, what: &str) -> Result<Matrix> {
    ensure_square(m, what)?;
    let singular = |cond| Error::Singular {
        what: what.to_string(),
        cond,
    };
    let inv = m.clone().try_inverse().ok_or_else(|| singular(f64::INFINITY))?;
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > SINGULAR_COND {
        return Err(singular(cond));
    }
    Ok(inv)
}

/// Solves `m X = rhs` by LU after the same condition gate as [`checked_inverse`].
pub fn checked_solve(m: &Matrix, rhs: &Matrix, what: &str) -> Result<Matrix> {
    ensure_square(m, what)?;
    if rhs.nrows() != m.nrows() {
        return Err(Error::dims(
            what,
            format!("{} rhs rows", m.nrows()),
            rhs.nrows().to_string(),
        ));
    }
    let lu = m.clone().lu();
    let singular = |cond| Error::Singular {
        what: what.to_string(),
        cond,
    };
    let inv = lu.try_inverse().ok_or_else(|| singular(f64::INFINITY))?;
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > SINGULAR_COND {
        return Err(singular(cond));
    }
    lu.solve(rhs).ok_or_else(|| singular(f64::INFINITY))
}

/// Solves `X m = rhs`, i.e. right division.
pub fn checked_solve_right(rhs: &Matrix, m: &Matrix, what: &str) -> Result<Matrix> {
    Ok(checked_solve(&m.transpose(), &rhs.transpose(), what)?.transpose())
}

pub fn sym_part(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

/// True when `m` is symmetric to `tol` (relative, Frobenius) and the smallest
/// eigenvalue of its symmetric part exceeds `tol` times the largest.
pub fn spd_check(m: &Matrix, tol: f64) -> bool {
    if m.nrows() != m.ncols() || m.nrows() == 0 || m.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let scale = m.norm();
    if scale == 0.0 || (m - m.transpose()).norm() > tol * scale {
        return false;
    }
    let Ok((vals, _)) = sym_eigen(&sym_part(m)) else {
        return false;
    };
    let (min, max) = (vals[0], vals[vals.len() - 1]);
    max > 0.0 && min > tol * max
}

pub(crate) fn ensure_spd(m: &Matrix, what: &str) -> Result<()> {
    if spd_check(m, SPD_TOL) {
        Ok(())
    } else {
        Err(Error::NotSpd {
            what: what.to_string(),
        })
    }
}

/// Symmetric square root `M^{1/2}` and its inverse, from the eigendecomposition
/// of the symmetric part of `m`.
#[derive(Clone, Debug)]
pub struct SpdRoot {
    pub sqrt: Matrix,
    pub inv_sqrt: Matrix,
}

impl SpdRoot {
    pub fn new(m: &Matrix) -> Result<Self> {
        ensure_spd(m, "M")?;
        let (vals, q) = sym_eigen(&sym_part(m))?;
        let mut qs = q.clone();
        let mut qsi = q.clone();
        for (j, r) in vals.iter().map(|v| v.sqrt()).enumerate() {
            qs.column_mut(j).scale_mut(r);
            qsi.column_mut(j).scale_mut(r.recip());
        }
        Ok(SpdRoot {
            sqrt: &qs * q.transpose(),
            inv_sqrt: &qsi * q.transpose(),
        })
    }
}

pub fn spd_sqrt(m: &Matrix) -> Result<Matrix> {
    SpdRoot::new(m).map(|r| r.sqrt)
}

/// The `M`-adjoint `M⁻¹ Tᵀ M`.
pub fn m_adjoint(t: &Matrix, m: &Matrix) -> Result<Matrix> {
    ensure_square(t, "T")?;
    if t.shape() != m.shape() {
        return Err(Error::dims(
            "m_adjoint",
            format!("{:?}", t.shape()),
            format!("{:?}", m.shape()),
        ));
    }
    ensure_spd(m, "M")?;
    checked_solve(m, &(t.transpose() * m), "M")
}

/// `⟨x, y⟩_M = ⟨Mx, y⟩`.
pub fn m_inner(x: &Vector, y: &Vector, m: &Matrix) -> f64 {
    (m * x).dot(y)
}

pub fn m_norm_vec(x: &Vector, m: &Matrix) -> f64 {
    m_inner(x, x, m).max(0.0).sqrt()
}

pub fn spectral_norm(t: &Matrix) -> Result<f64> {
    Ok(singular_values(t)?.first().copied().unwrap_or(0.0))
}

/// Induced norm `sup ‖Tx‖_M / ‖x‖_M`, evaluated as the spectral norm of
/// `M^{1/2} T M^{-1/2}`.
pub fn operator_m_norm(t: &Matrix, m: &Matrix) -> Result<f64> {
    let root = SpdRoot::new(m)?;
    operator_m_norm_with(t, &root)
}

pub fn operator_m_norm_with(t: &Matrix, root: &SpdRoot) -> Result<f64> {
    if t.shape() != root.sqrt.shape() {
        return Err(Error::dims(
            "operator_m_norm",
            format!("{:?}", root.sqrt.shape()),
            format!("{:?}", t.shape()),
        ));
    }
    spectral_norm(&(&root.sqrt * t * &root.inv_sqrt))
}

/// Numerical rank: singular values above `tol` times the largest.
pub fn rank(m: &Matrix, tol: f64) -> Result<usize> {
    Ok(rank_of(&singular_values(m)?, tol))
}

fn rank_of(s: &[f64], tol: f64) -> usize {
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&v| v > tol * top).count(),
        _ => 0,
    }
}

/// Orthonormal bases for `range(m)` and its orthogonal complement, split at
/// the numerical rank.
pub fn range_and_complement(m: &Matrix, tol: f64) -> Result<(Matrix, Matrix)> {
    let n = m.nrows();
    if m.is_empty() {
        return Ok((Matrix::zeros(n, 0), Matrix::identity(n, n)));
    }
    let f = svd(m)?;
    let r = rank_of(&f.s, tol);
    Ok((f.u.columns(0, r).into_owned(), f.u.columns(r, n - r).into_owned()))
}

/// Orthonormal basis (columns) for the range of `m` at relative tolerance `tol`.
pub fn range_basis(m: &Matrix, tol: f64) -> Result<Matrix> {
    Ok(range_and_complement(m, tol)?.0)
}

/// Orthonormal basis for the Euclidean orthogonal complement of `range(m)`.
pub fn complement_basis(m: &Matrix, tol: f64) -> Result<Matrix> {
    Ok(range_and_complement(m, tol)?.1)
}

/// Orthonormal basis for the null space of a square `m`.
pub fn null_basis(m: &Matrix, tol: f64) -> Result<Matrix> {
    complement_basis(&m.transpose(), tol)
}

/// Orthonormalizes the columns of `m` (assumed full column rank) by thin QR.
pub fn orthonormalize(m: &Matrix) -> Matrix {
    if m.ncols() == 0 {
        return m.clone();
    }
    m.clone().qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spd_check_examples() {
        assert!(spd_check(&Matrix::identity(3, 3), SPD_TOL));
        let skew = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(!spd_check(&skew, SPD_TOL));
        let lap = Matrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        assert!(spd_check(&lap, SPD_TOL));
        let indefinite = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(!spd_check(&indefinite, SPD_TOL));
        assert!(!spd_check(&Matrix::zeros(2, 3), SPD_TOL));
    }

    #[test]
    fn adjoint_identity_metric_is_transpose() {
        let t = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let adj = m_adjoint(&t, &Matrix::identity(2, 2)).unwrap();
        assert_relative_eq!(adj, t.transpose(), epsilon = 1e-15);
    }

    #[test]
    fn adjoint_diagonal_metric() {
        // M⁻¹TᵀM with M = diag(1, 4): Tᵀ = [[0,0],[1,1]], TᵀM = [[0,0],[1,4]].
        let t = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        let m = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 4.0]));
        let adj = m_adjoint(&t, &m).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.25, 1.0]);
        assert_relative_eq!(adj, expected, epsilon = 1e-15);
        let x = Vector::from_vec(vec![0.3, -1.7]);
        let y = Vector::from_vec(vec![2.1, 0.4]);
        let lhs = m_inner(&(&t * &x), &y, &m);
        let rhs = m_inner(&x, &(&adj * &y), &m);
        assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn adjoint_rejects_indefinite_metric() {
        let t = Matrix::identity(2, 2);
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(m_adjoint(&t, &m), Err(Error::NotSpd { .. })));
    }

    #[test]
    fn operator_norm_examples() {
        let orth = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let i2 = Matrix::identity(2, 2);
        assert_relative_eq!(operator_m_norm(&orth, &i2).unwrap(), 1.0, epsilon = 1e-14);
        // TᵀT = [[0,0],[0,2]]
        let t = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        assert_relative_eq!(
            operator_m_norm(&t, &i2).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-14
        );
        let m = Matrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        assert_relative_eq!(operator_m_norm(&i2, &m).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_inverse_is_an_error() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            checked_inverse(&m, "test"),
            Err(Error::Singular { .. })
        ));
        let nearly = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-14]);
        assert!(checked_inverse(&nearly, "test").is_err());
    }

    #[test]
    fn sqrt_squares_back() {
        let m = Matrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0]);
        let root = SpdRoot::new(&m).unwrap();
        assert_relative_eq!(&root.sqrt * &root.sqrt, m, epsilon = 1e-13);
        assert_relative_eq!(
            &root.sqrt * &root.inv_sqrt,
            Matrix::identity(3, 3),
            epsilon = 1e-13
        );
    }

    #[test]
    fn subspace_bases() {
        let m = Matrix::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(rank(&m, RANK_TOL).unwrap(), 1);
        let q = range_basis(&m, RANK_TOL).unwrap();
        let c = complement_basis(&m, RANK_TOL).unwrap();
        assert_eq!((q.ncols(), c.ncols()), (1, 2));
        assert!((q.transpose() * &c).norm() < 1e-14);
        let nb = null_basis(&m, RANK_TOL).unwrap();
        assert_eq!(nb.ncols(), 2);
        assert!((&m * nb).norm() < 1e-14);
    }
}
