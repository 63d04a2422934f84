//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use compatamg::linalg::{operator_m_norm, sym_part};
use compatamg::transfer::{p_ideal, r_ideal};
use compatamg::{
    default_splitting, generate, partition, CFPartition, Matrix, ProblemKind, ProblemSpec,
    QChoice, SplitPolicy, TransferPair,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// `GGᵀ/n + shift·I` for Gaussian `G`.
pub fn random_spd(n: usize, shift: f64, rng: &mut ChaCha8Rng) -> Matrix {
    let g = gaussian(n, n, rng);
    sym_part(&(&g * g.transpose() / n as f64)) + Matrix::identity(n, n) * shift
}

pub fn problem(kind: ProblemKind, n: usize) -> Matrix {
    generate(&ProblemSpec::new(kind, n)).unwrap()
}

pub fn random_problem(n: usize, seed: u64) -> Matrix {
    generate(&ProblemSpec::random(n, seed)).unwrap()
}

pub fn alternate(n: usize) -> CFPartition {
    default_splitting(n, SplitPolicy::Alternate).unwrap()
}

pub fn realize(q: &QChoice, a: &Matrix) -> Matrix {
    q.realize(a).unwrap()
}

/// `R = R_ideal(qr)`, `P = P_ideal(qp)`, built straight from the definitions.
pub fn ideal_combo(part: &CFPartition, qr: &Matrix, qp: &Matrix) -> compatamg::Result<TransferPair> {
    let r = r_ideal(&partition(qr, part)?)?;
    let p = p_ideal(&partition(qp, part)?)?;
    TransferPair::from_full(part, r, p)
}

pub fn random_zw(part: &CFPartition, rng: &mut ChaCha8Rng) -> TransferPair {
    let z = gaussian(part.n_f(), part.n_c(), rng);
    let w = gaussian(part.n_f(), part.n_c(), rng);
    TransferPair::from_zw(part, &z, &w).unwrap()
}

/// `|‖Π‖_M − ‖I−Π‖_M|`, relative to `max(1, ‖Π‖_M)`.
pub fn complement_norm_gap(pi: &Matrix, m: &Matrix) -> f64 {
    let n = pi.nrows();
    let a = operator_m_norm(pi, m).unwrap();
    let b = operator_m_norm(&(Matrix::identity(n, n) - pi), m).unwrap();
    (a - b).abs() / a.max(1.0)
}

/// Neither `0` nor `I`.
pub fn nontrivial(pi: &Matrix) -> bool {
    let n = pi.nrows();
    pi.norm() > 1e-12 && (pi - Matrix::identity(n, n)).norm() > 1e-12
}
