//! Pair recipes: short strings naming how to build a transfer pair.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use compatamg::linalg::sym_part;
use compatamg::transfer::{ideal_pair, ideal_z, p_ideal, r_ideal, Anchor};
use compatamg::{
    change_of_basis_pair, partition, CFPartition, Matrix, NormSpec, NormTag, QChoice,
    TransferPair,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Clone, Debug, PartialEq)]
pub enum Recipe {
    /// The four single-operator orthogonal pairs, numbered 1 to 4.
    Red(u8),
    /// A cell of the pair tables: table 1 anchors `P`, table 2 anchors `R`.
    Table { table: u8, norm: NormTag, q: QChoice },
    /// `R = R_ideal(A)`, `W = 0`.
    Air,
    /// `R = P = P_ideal(A)`.
    Galerkin,
    /// The change-of-basis form of the `A⁻ᵀ` ideal pair.
    ChangeOfBasis,
    /// Gaussian `Z` and `W`.
    Random(u64),
    /// `Z` and `W` read from matrix files.
    Zw(PathBuf, PathBuf),
}

/// A built pair plus the norm it is constructed to be orthogonal in, if any.
pub struct Built {
    pub pair: TransferPair,
    pub intended: Option<NormTag>,
}

impl Recipe {
    pub fn parse(s: &str) -> Result<Recipe> {
        let fields: Vec<&str> = s.split(':').collect();
        let bad = || anyhow!("pair: unknown recipe `{s}`");
        Ok(match fields.as_slice() {
            [red] if red.to_ascii_lowercase().starts_with("red") => {
                let k: u8 = red[3..].parse().map_err(|_| bad())?;
                if !(1..=4).contains(&k) {
                    bail!("pair: red-list items are red1..red4, got `{s}`");
                }
                Recipe::Red(k)
            }
            [t, norm, q] if matches!(t.to_ascii_lowercase().as_str(), "t1" | "t2") => {
                Recipe::Table {
                    table: if t.eq_ignore_ascii_case("t1") { 1 } else { 2 },
                    norm: norm.parse().map_err(|e| anyhow!("pair: {e} in `{s}`"))?,
                    q: q.parse().map_err(|e| anyhow!("pair: {e} in `{s}`"))?,
                }
            }
            ["air"] => Recipe::Air,
            ["galerkin"] => Recipe::Galerkin,
            ["cob"] => Recipe::ChangeOfBasis,
            ["random", seed] => Recipe::Random(seed.parse().map_err(|_| bad())?),
            ["zw", z, w] => Recipe::Zw(z.into(), w.into()),
            _ => return Err(bad()),
        })
    }

    pub fn build(&self, a: &Matrix, part: &CFPartition) -> Result<Built> {
        let ap = partition(a, part)?;
        let eye = Matrix::identity(a.nrows(), a.ncols());
        let combo = |qr: &Matrix, qp: &Matrix| -> Result<TransferPair> {
            let r = r_ideal(&partition(qr, part)?)?;
            let p = p_ideal(&partition(qp, part)?)?;
            Ok(TransferPair::from_full(part, r, p)?)
        };
        let zero_w = || Matrix::zeros(part.n_f(), part.n_c());
        let (pair, intended) = match self {
            Recipe::Red(1) => (combo(a, &eye)?, NormTag::Identity),
            Recipe::Red(2) => (combo(a, &sym_part(a))?, NormTag::Asym),
            Recipe::Red(3) => (combo(&eye, a)?, NormTag::AstarA),
            Recipe::Red(_) => (combo(&sym_part(a), a)?, NormTag::AstarAsymInvA),
            Recipe::Table { table, norm, q } => {
                let anchor = if *table == 1 {
                    Anchor::PfromQ(q.clone())
                } else {
                    Anchor::RfromQ(q.clone())
                };
                let spec = norm.spec().ok_or_else(|| anyhow!("pair: custom norm in table"))?;
                (ideal_pair(a, part, &spec, &anchor)?.pair, *norm)
            }
            Recipe::Air => (TransferPair::from_zw(part, &ideal_z(&ap)?, &zero_w())?, NormTag::Identity),
            Recipe::Galerkin => {
                let p = p_ideal(&ap)?;
                (TransferPair::from_full(part, p.clone(), p)?, NormTag::A)
            }
            Recipe::ChangeOfBasis => (change_of_basis_pair(a, part)?, NormTag::A),
            Recipe::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut draw =
                    || Matrix::from_fn(part.n_f(), part.n_c(), |_, _| StandardNormal.sample(&mut rng));
                let z = draw();
                let w = draw();
                return Ok(Built {
                    pair: TransferPair::from_zw(part, &z, &w)?,
                    intended: None,
                });
            }
            Recipe::Zw(zf, wf) => {
                let read = |p: &PathBuf| {
                    compatamg::io::read_matrix(p).with_context(|| format!("pair: {}", p.display()))
                };
                return Ok(Built {
                    pair: TransferPair::from_zw(part, &read(zf)?, &read(wf)?)?,
                    intended: None,
                });
            }
        };
        Ok(Built {
            pair,
            intended: Some(intended),
        })
    }
}

/// The norm spec for a tag, which always exists for built-in tags.
pub fn spec_of(tag: NormTag) -> NormSpec {
    tag.spec().expect("built-in norm tag")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_recipe_forms() {
        assert_eq!(Recipe::parse("red3").unwrap(), Recipe::Red(3));
        assert!(Recipe::parse("red5").is_err());
        assert_eq!(
            Recipe::parse("t1:I:A").unwrap(),
            Recipe::Table { table: 1, norm: NormTag::Identity, q: QChoice::Aop }
        );
        assert_eq!(
            Recipe::parse("t2:A*A:AA*").unwrap(),
            Recipe::Table { table: 2, norm: NormTag::AstarA, q: QChoice::AAstar }
        );
        assert_eq!(Recipe::parse("random:7").unwrap(), Recipe::Random(7));
        assert!(matches!(Recipe::parse("zw:z.json:w.mtx").unwrap(), Recipe::Zw(..)));
        for bad in ["", "t3:I:A", "random:x", "t1:B:A", "zw:onlyone"] {
            assert!(Recipe::parse(bad).is_err(), "{bad}");
        }
    }
}
