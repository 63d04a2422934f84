//! Restriction/interpolation construction.
//!
//! Transfer operators take the CF form `R = [Z; I]`, `P = [W; I]` (rows listed in
//! F-first order), optionally with non-identity C-blocks. The ideal operators of
//! a matrix `Q` are
//!
//! ```text
//! W_ideal(Q) = -Q_ff⁻¹ Q_fc,    Z_ideal(Q)ᵀ = -Q_cf Q_ff⁻¹
//! ```
//!
//! and a pair yields an `M`-orthogonal coarse-grid correction exactly when
//! `range(M P) = range(Aᵀ R)`.

mod catalog;
mod figure;

pub use catalog::{catalog_pairs, CatalogEntry, CatalogRecord, CatalogTable, Highlight};
pub use figure::{figure_edges, EdgeStyle, FigureEdge};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    checked_inverse, checked_solve, checked_solve_right, partition, rank, realize_norm, svd, sym_part,
    CFPartition, Matrix, NormSpec, PartitionedMatrix, RANK_TOL,
};

/// Non-identity C-point blocks: `R = [R_f; Y]`, `P = [P_f; V]`.
#[derive(Clone, Debug)]
pub struct CBlocks {
    pub y: Matrix,
    pub v: Matrix,
}

/// A restriction/interpolation pair, both `n × n_c`, stored in original row order.
#[derive(Clone, Debug)]
pub struct TransferPair {
    r: Matrix,
    p: Matrix,
    part: CFPartition,
    cblocks: Option<CBlocks>,
}

impl TransferPair {
    /// `R = [Z; I]`, `P = [W; I]`.
    pub fn from_zw(part: &CFPartition, z: &Matrix, w: &Matrix) -> Result<Self> {
        let eye = Matrix::identity(part.n_c(), part.n_c());
        Ok(TransferPair {
            r: part.stack(z, &eye)?,
            p: part.stack(w, &eye)?,
            part: part.clone(),
            cblocks: None,
        })
    }

    /// `R = [r_f; Y]`, `P = [p_f; V]` with general nonsingular C-blocks.
    pub fn with_cblocks(
        part: &CFPartition,
        r_f: &Matrix,
        y: &Matrix,
        p_f: &Matrix,
        v: &Matrix,
    ) -> Result<Self> {
        let nc = part.n_c();
        for (name, blk) in [("Y", y), ("V", v)] {
            if blk.shape() != (nc, nc) {
                return Err(Error::dims(
                    name,
                    format!("{nc}x{nc}"),
                    format!("{}x{}", blk.nrows(), blk.ncols()),
                ));
            }
            checked_inverse(blk, name)?;
        }
        let pair = TransferPair {
            r: part.stack(r_f, y)?,
            p: part.stack(p_f, v)?,
            part: part.clone(),
            cblocks: Some(CBlocks {
                y: y.clone(),
                v: v.clone(),
            }),
        };
        Ok(pair)
    }

    /// Wraps arbitrary `R`, `P` (original row order); both must have full column rank.
    pub fn from_full(part: &CFPartition, r: Matrix, p: Matrix) -> Result<Self> {
        let shape = (part.n(), part.n_c());
        for (name, m) in [("R", &r), ("P", &p)] {
            if m.shape() != shape {
                return Err(Error::dims(name, format!("{shape:?}"), format!("{:?}", m.shape())));
            }
            if rank(m, RANK_TOL)? != part.n_c() {
                return Err(Error::dims(name, "full column rank", "rank deficient"));
            }
        }
        let (_, y) = part.split_rows(&r)?;
        let (_, v) = part.split_rows(&p)?;
        let eye = Matrix::identity(part.n_c(), part.n_c());
        let cblocks = (y != eye || v != eye).then_some(CBlocks { y, v });
        Ok(TransferPair {
            r,
            p,
            part: part.clone(),
            cblocks,
        })
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn part(&self) -> &CFPartition {
        &self.part
    }

    pub fn cblocks(&self) -> Option<&CBlocks> {
        self.cblocks.as_ref()
    }

    /// The F-block of `R` after normalizing its C-block to the identity.
    pub fn z(&self) -> Result<Matrix> {
        let (f, c) = self.part.split_rows(&self.r)?;
        checked_solve_right(&f, &c, "R C-block")
    }

    /// The F-block of `P` after normalizing its C-block to the identity.
    pub fn w(&self) -> Result<Matrix> {
        let (f, c) = self.part.split_rows(&self.p)?;
        checked_solve_right(&f, &c, "P C-block")
    }
}

/// Choice of matrix whose ideal operator anchors a pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QChoice {
    Identity,
    Aop,
    Asym,
    AstarA,
    AAstar,
    AinvStar,
    Ainv,
    Custom(#[serde(with = "crate::io::matrix_serde")] Matrix),
}

impl QChoice {
    /// Columns of the pair tables, in order.
    pub const TABLE_COLUMNS: [QChoice; 5] = [
        QChoice::Identity,
        QChoice::Aop,
        QChoice::Asym,
        QChoice::AstarA,
        QChoice::AAstar,
    ];

    pub fn expr(&self) -> &'static str {
        match self {
            QChoice::Identity => "I",
            QChoice::Aop => "A",
            QChoice::Asym => "A_sym",
            QChoice::AstarA => "A*A",
            QChoice::AAstar => "AA*",
            QChoice::AinvStar => "A^-*",
            QChoice::Ainv => "A^-1",
            QChoice::Custom(_) => "Q",
        }
    }

    pub fn realize(&self, a: &Matrix) -> Result<Matrix> {
        let n = a.nrows();
        Ok(match self {
            QChoice::Identity => Matrix::identity(n, n),
            QChoice::Aop => a.clone(),
            QChoice::Asym => sym_part(a),
            QChoice::AstarA => a.transpose() * a,
            QChoice::AAstar => a * a.transpose(),
            QChoice::AinvStar => checked_inverse(a, "A")?.transpose(),
            QChoice::Ainv => checked_inverse(a, "A")?,
            QChoice::Custom(q) => {
                if q.shape() != a.shape() {
                    return Err(Error::dims(
                        "custom Q",
                        format!("{n}x{n}"),
                        format!("{}x{}", q.nrows(), q.ncols()),
                    ));
                }
                q.clone()
            }
        })
    }
}

impl fmt::Display for QChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.expr())
    }
}

impl FromStr for QChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = crate::linalg::normalize_key(s);
        Ok(match key.as_str() {
            "i" | "identity" => QChoice::Identity,
            "a" | "aop" => QChoice::Aop,
            "asym" => QChoice::Asym,
            "astara" | "a*a" => QChoice::AstarA,
            "aastar" | "aa*" => QChoice::AAstar,
            "ainvstar" | "a^-*" => QChoice::AinvStar,
            "ainv" | "a^-1" => QChoice::Ainv,
            _ => return Err(format!("unknown Q choice `{s}`")),
        })
    }
}

/// Which side of the pair is ideal with respect to the chosen `Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// `P = P_ideal(Q)`, `R = R_ideal(A M⁻¹ Qᵀ)`.
    PfromQ(QChoice),
    /// `R = R_ideal(Q)`, `P = P_ideal(Qᵀ A⁻ᵀ M)`.
    RfromQ(QChoice),
}

impl Anchor {
    pub fn q(&self) -> &QChoice {
        match self {
            Anchor::PfromQ(q) | Anchor::RfromQ(q) => q,
        }
    }
}

/// `W_ideal(Q) = -Q_ff⁻¹ Q_fc`.
pub fn ideal_w(q: &PartitionedMatrix) -> Result<Matrix> {
    Ok(-checked_solve(q.ff(), q.fc(), "Q_ff")?)
}

/// `Z_ideal(Q)`, the `n_f × n_c` F-block of `R_ideal(Q)`, with `Zᵀ = -Q_cf Q_ff⁻¹`.
pub fn ideal_z(q: &PartitionedMatrix) -> Result<Matrix> {
    Ok(-checked_solve(&q.ff().transpose(), &q.cf().transpose(), "Q_ff")?)
}

pub fn p_ideal(q: &PartitionedMatrix) -> Result<Matrix> {
    let eye = Matrix::identity(q.part().n_c(), q.part().n_c());
    q.part().stack(&ideal_w(q)?, &eye)
}

pub fn r_ideal(q: &PartitionedMatrix) -> Result<Matrix> {
    let eye = Matrix::identity(q.part().n_c(), q.part().n_c());
    q.part().stack(&ideal_z(q)?, &eye)
}

/// The two norms for which the compatible `W`/`Z` closed forms are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatNorm {
    Identity,
    AstarA,
}

fn no_compatible(solved: &'static str, given: &'static str) -> impl FnOnce(Error) -> Error {
    move |e| Error::NoCompatible {
        solved,
        given,
        source: Box::new(e),
    }
}

fn check_block(m: &Matrix, rows: usize, cols: usize, name: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::dims(
            name,
            format!("{rows}x{cols}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Given `Z`, the `W` that makes `Π` orthogonal in the chosen norm.
///
/// * `I`:    `(Zᵀ A_fc + A_cc) Wᵀ = Zᵀ A_ff + A_cf`
/// * `AᵀA`:  `(A_ff − Z A_cf) W = Z A_cc − A_fc`
pub fn compatible_w_from_z(a: &PartitionedMatrix, z: &Matrix, norm: CompatNorm) -> Result<Matrix> {
    let (nf, nc) = (a.part().n_f(), a.part().n_c());
    check_block(z, nf, nc, "Z")?;
    let err = no_compatible("W", "Z");
    match norm {
        CompatNorm::Identity => {
            let coeff = z.transpose() * a.fc() + a.cc();
            let rhs = z.transpose() * a.ff() + a.cf();
            Ok(checked_solve(&coeff, &rhs, "Z*A_fc + A_cc").map_err(err)?.transpose())
        }
        CompatNorm::AstarA => {
            let coeff = a.ff() - z * a.cf();
            let rhs = z * a.cc() - a.fc();
            checked_solve(&coeff, &rhs, "A_ff - Z A_cf").map_err(err)
        }
    }
}

/// Given `W`, the `Z` that makes `Π` orthogonal in the chosen norm.
///
/// * `I`:    `Zᵀ (A_ff − A_fc Wᵀ) = A_cc Wᵀ − A_cf`
/// * `AᵀA`:  `Z (A_cf W + A_cc) = A_ff W + A_fc`
pub fn compatible_z_from_w(a: &PartitionedMatrix, w: &Matrix, norm: CompatNorm) -> Result<Matrix> {
    let (nf, nc) = (a.part().n_f(), a.part().n_c());
    check_block(w, nf, nc, "W")?;
    let err = no_compatible("Z", "W");
    match norm {
        CompatNorm::Identity => {
            let wt = w.transpose();
            let coeff = a.ff() - a.fc() * &wt;
            let rhs = a.cc() * &wt - a.cf();
            Ok(checked_solve_right(&rhs, &coeff, "A_ff - A_fc W*").map_err(err)?.transpose())
        }
        CompatNorm::AstarA => {
            let coeff = a.cf() * w + a.cc();
            let rhs = a.ff() * w + a.fc();
            checked_solve_right(&rhs, &coeff, "A_cf W + A_cc").map_err(err)
        }
    }
}

/// Relative residuals of the two equivalent compatibility equations
/// (W-from-Z form, Z-from-W form) for a candidate `(Z, W)`.
pub fn closed_form_residuals(
    a: &PartitionedMatrix,
    z: &Matrix,
    w: &Matrix,
    norm: CompatNorm,
) -> (f64, f64) {
    let rel = |lhs: Matrix, rhs: Matrix| (&lhs - &rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
    let (zt, wt) = (z.transpose(), w.transpose());
    match norm {
        CompatNorm::Identity => (
            rel((&zt * a.fc() + a.cc()) * &wt, &zt * a.ff() + a.cf()),
            rel(&zt * (a.ff() - a.fc() * &wt), a.cc() * &wt - a.cf()),
        ),
        CompatNorm::AstarA => (
            rel((a.ff() - z * a.cf()) * w, z * a.cc() - a.fc()),
            rel(z * (a.cf() * w + a.cc()), a.ff() * w + a.fc()),
        ),
    }
}

/// Experimental: for any SPD `M`, finds `W` (and an implicit scaling `B`) with
/// `M [W; I] = Aᵀ [Z; I] B` by a least-squares solve of the stacked system
/// `[M_{:,F} | −AᵀR] [W; B] = −M_{:,C}`. Fails when the residual does not vanish
/// or the recovered `B` is singular.
pub fn compatible_w_from_z_lstsq(
    a: &Matrix,
    part: &CFPartition,
    m: &Matrix,
    z: &Matrix,
) -> Result<Matrix> {
    let (n, nf, nc) = (part.n(), part.n_f(), part.n_c());
    check_block(m, n, n, "M")?;
    let eye = Matrix::identity(nc, nc);
    let at_r = a.transpose() * part.stack(z, &eye)?;
    let mut system = Matrix::zeros(n, n);
    system
        .columns_mut(0, nf)
        .copy_from(&m.select_columns(part.fpoints()));
    system.columns_mut(nf, nc).copy_from(&(-at_r));
    let rhs = -m.select_columns(part.cpoints());
    let f = svd(&system)?;
    let cut = f.s.first().copied().unwrap_or(0.0) * 1e-12;
    let mut ut_rhs = f.u.transpose() * &rhs;
    for (i, &s) in f.s.iter().enumerate() {
        let scale = if s > cut { s.recip() } else { 0.0 };
        ut_rhs.row_mut(i).scale_mut(scale);
    }
    let sol = &f.v * ut_rhs;
    let resid = (&system * &sol - &rhs).norm() / rhs.norm().max(1.0);
    let w = sol.rows(0, nf).into_owned();
    let b = sol.rows(nf, nc).into_owned();
    let singular = |what: &str| Error::NoCompatible {
        solved: "W",
        given: "Z",
        source: Box::new(Error::Singular {
            what: what.into(),
            cond: f64::INFINITY,
        }),
    };
    if resid > 1e-8 {
        return Err(singular("least-squares residual"));
    }
    checked_inverse(&b, "B_R").map_err(|_| singular("B_R"))?;
    Ok(w)
}

/// A pair built from one ideal operator plus the companion matrix that makes
/// its partner orthogonal.
#[derive(Clone, Debug)]
pub struct IdealPair {
    pub pair: TransferPair,
    /// `A M⁻¹ Qᵀ` for [`Anchor::PfromQ`], `Qᵀ A⁻ᵀ M` for [`Anchor::RfromQ`].
    pub companion: Matrix,
    /// The realized norm matrix `M`.
    pub metric: Matrix,
}

fn companion_err(e: Error) -> Error {
    Error::CompanionUndefined { source: Box::new(e) }
}

pub fn ideal_pair(
    a: &Matrix,
    part: &CFPartition,
    norm: &NormSpec,
    anchor: &Anchor,
) -> Result<IdealPair> {
    let m = realize_norm(norm, a)?;
    ideal_pair_with_metric(a, part, &m, anchor)
}

/// [`ideal_pair`] with an already realized `M`.
pub fn ideal_pair_with_metric(
    a: &Matrix,
    part: &CFPartition,
    m: &Matrix,
    anchor: &Anchor,
) -> Result<IdealPair> {
    let q = anchor.q().realize(a)?;
    let qp = partition(&q, part)?;
    let (r, p, companion) = match anchor {
        Anchor::PfromQ(_) => {
            let p = p_ideal(&qp)?;
            let companion = a * checked_solve(m, &q.transpose(), "M")?;
            let cp = partition(&companion, part)?;
            let r = r_ideal(&cp).map_err(companion_err)?;
            (r, p, companion)
        }
        Anchor::RfromQ(_) => {
            let r = r_ideal(&qp)?;
            let companion = q.transpose() * checked_solve(&a.transpose(), m, "A*")?;
            let cp = partition(&companion, part)?;
            let p = p_ideal(&cp).map_err(companion_err)?;
            (r, p, companion)
        }
    };
    let (zf, _) = part.split_rows(&r)?;
    let (wf, _) = part.split_rows(&p)?;
    Ok(IdealPair {
        pair: TransferPair::from_zw(part, &zf, &wf)?,
        companion,
        metric: m.clone(),
    })
}

/// The pair `R = [A_fc; A_cc]`, `P = [A_cfᵀ; A_ccᵀ]`: the ideal operators of
/// `A⁻ᵀ` after the C-block changes of basis `Y = A_cc`, `V = A_ccᵀ`. No inverse
/// of `A_cc` is formed; it only has to be nonsingular.
pub fn change_of_basis_pair(a: &Matrix, part: &CFPartition) -> Result<TransferPair> {
    let ap = partition(a, part)?;
    checked_inverse(ap.cc(), "A_cc")?;
    TransferPair::with_cblocks(
        part,
        ap.fc(),
        ap.cc(),
        &ap.cf().transpose(),
        &ap.cc().transpose(),
    )
}
