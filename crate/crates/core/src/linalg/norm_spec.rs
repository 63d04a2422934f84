use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{checked_solve, ensure_spd, spd_check, svd, sym_part, Matrix, SPD_TOL};
use crate::error::{Error, Result};

/// Which SPD matrix `M` defines the inner product `⟨Mx, y⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSpec {
    Identity,
    /// `M = A`, only when `A` itself is SPD.
    A,
    /// `M = (A + Aᵀ)/2`.
    Asym,
    /// `M = AᵀA`.
    AstarA,
    /// `M = (AᵀA)^{1/2} = V Σ Vᵀ` from the SVD of `A`.
    SqrtAstarA,
    /// `M = Aᵀ A_sym⁻¹ A`.
    AstarAsymInvA,
    Custom(#[serde(with = "crate::io::matrix_serde")] Matrix),
}

/// Payload-free discriminant of [`NormSpec`], used for CLI flags and report keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormTag {
    Identity,
    A,
    Asym,
    AstarA,
    SqrtAstarA,
    AstarAsymInvA,
    Custom,
}

impl NormTag {
    pub const BUILTIN: [NormTag; 6] = [
        NormTag::Identity,
        NormTag::A,
        NormTag::Asym,
        NormTag::AstarA,
        NormTag::SqrtAstarA,
        NormTag::AstarAsymInvA,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NormTag::Identity => "identity",
            NormTag::A => "a",
            NormTag::Asym => "asym",
            NormTag::AstarA => "astar_a",
            NormTag::SqrtAstarA => "sqrt_astar_a",
            NormTag::AstarAsymInvA => "astar_asym_inv_a",
            NormTag::Custom => "custom",
        }
    }

    /// Human-readable formula, as used in catalog listings.
    pub fn expr(self) -> &'static str {
        match self {
            NormTag::Identity => "I",
            NormTag::A => "A",
            NormTag::Asym => "A_sym",
            NormTag::AstarA => "A*A",
            NormTag::SqrtAstarA => "(A*A)^1/2",
            NormTag::AstarAsymInvA => "A*A_sym^-1A",
            NormTag::Custom => "M",
        }
    }

    /// The spec for a built-in tag; `None` for [`NormTag::Custom`].
    pub fn spec(self) -> Option<NormSpec> {
        Some(match self {
            NormTag::Identity => NormSpec::Identity,
            NormTag::A => NormSpec::A,
            NormTag::Asym => NormSpec::Asym,
            NormTag::AstarA => NormSpec::AstarA,
            NormTag::SqrtAstarA => NormSpec::SqrtAstarA,
            NormTag::AstarAsymInvA => NormSpec::AstarAsymInvA,
            NormTag::Custom => return None,
        })
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = super::normalize_key(s);
        Ok(match key.as_str() {
            "i" | "identity" => NormTag::Identity,
            "a" => NormTag::A,
            "asym" => NormTag::Asym,
            "astara" | "a*a" => NormTag::AstarA,
            "sqrtastara" | "sqrta*a" | "(a*a)^1/2" => NormTag::SqrtAstarA,
            "astarasyminva" | "a*asym^-1a" => NormTag::AstarAsymInvA,
            "custom" | "m" => NormTag::Custom,
            _ => return Err(format!("unknown norm tag `{s}`")),
        })
    }
}

impl NormSpec {
    pub fn tag(&self) -> NormTag {
        match self {
            NormSpec::Identity => NormTag::Identity,
            NormSpec::A => NormTag::A,
            NormSpec::Asym => NormTag::Asym,
            NormSpec::AstarA => NormTag::AstarA,
            NormSpec::SqrtAstarA => NormTag::SqrtAstarA,
            NormSpec::AstarAsymInvA => NormTag::AstarAsymInvA,
            NormSpec::Custom(_) => NormTag::Custom,
        }
    }
}

fn not_spd(what: &str) -> Error {
    Error::NotSpd {
        what: what.to_string(),
    }
}

/// Forms the SPD matrix `M` selected by `spec` for the operator `a`.
pub fn realize_norm(spec: &NormSpec, a: &Matrix) -> Result<Matrix> {
    super::ensure_square(a, "A")?;
    let n = a.nrows();
    let m = match spec {
        NormSpec::Identity => return Ok(Matrix::identity(n, n)),
        NormSpec::A => {
            if !spd_check(a, SPD_TOL) {
                return Err(not_spd("A"));
            }
            a.clone()
        }
        NormSpec::Asym => {
            let s = sym_part(a);
            if !spd_check(&s, SPD_TOL) {
                return Err(not_spd("A_sym"));
            }
            s
        }
        NormSpec::AstarA => sym_part(&(a.transpose() * a)),
        NormSpec::SqrtAstarA => {
            let f = svd(a)?;
            let mut scaled = f.v.clone();
            for (j, s) in f.s.iter().enumerate() {
                scaled.column_mut(j).scale_mut(*s);
            }
            sym_part(&(scaled * f.v.transpose()))
        }
        NormSpec::AstarAsymInvA => {
            let s = sym_part(a);
            if !spd_check(&s, SPD_TOL) {
                return Err(not_spd("A_sym"));
            }
            sym_part(&(a.transpose() * checked_solve(&s, a, "A_sym")?))
        }
        NormSpec::Custom(m) => {
            if m.shape() != a.shape() {
                return Err(Error::dims(
                    "custom norm",
                    format!("{n}x{n}"),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            m.clone()
        }
    };
    ensure_spd(&m, spec.tag().expr())?;
    Ok(m)
}
