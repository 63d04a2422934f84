//! Spectral decompositions, delegated to `faer` and converted back to
//! [`Matrix`] values.

use faer::{Mat, MatRef, Side};

use super::Matrix;
use crate::error::{Error, Result};

fn to_faer(m: &Matrix) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `m = U diag(s) Vᵀ`; `U` and `V` are square, `s` is descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(m: &Matrix) -> Result<Svd> {
    let f = to_faer(m)
        .svd()
        .map_err(|e| Error::NoConvergence(format!("SVD: {e:?}")))?;
    Ok(Svd {
        u: from_faer(f.U()),
        s: f.S().column_vector().iter().copied().collect(),
        v: from_faer(f.V()),
    })
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    to_faer(m)
        .singular_values()
        .map_err(|e| Error::NoConvergence(format!("singular values: {e:?}")))
}

/// Eigenvalues (ascending) and eigenvectors of the symmetric matrix `m`; only
/// the lower triangle is read.
pub fn sym_eigen(m: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let f = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("symmetric eigensolver: {e:?}")))?;
    Ok((
        f.S().column_vector().iter().copied().collect(),
        from_faer(f.U()),
    ))
}

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    let eig = to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::NoConvergence(format!("eigensolver: {e:?}")))?;
    Ok(eig.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_reconstructs_projector() {
        // Orthogonal projector with a repeated unit singular value.
        let q = Matrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 0.6, 0.0, 0.8, 0.0, 0.0]);
        let p = Matrix::identity(4, 4) - &q * q.transpose();
        let f = svd(&p).unwrap();
        let recon = &f.u * Matrix::from_diagonal(&f.s.clone().into()) * f.v.transpose();
        assert!((recon - &p).norm() < 1e-14);
        assert!((f.s[0] - 1.0).abs() < 1e-14 && (f.s[1] - 1.0).abs() < 1e-14);
        assert!(f.s[2] < 1e-14);
    }

    #[test]
    fn eigen_examples() {
        let m = Matrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        let (vals, vecs) = sym_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        assert!((&m * &vecs - &vecs * Matrix::from_diagonal(&vals.into())).norm() < 1e-14);
        let rot = Matrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        assert!((spectral_radius(&rot).unwrap() - 2.0).abs() < 1e-14);
    }
}
