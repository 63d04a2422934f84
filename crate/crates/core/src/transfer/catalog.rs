use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ideal_pair_with_metric, Anchor, IdealPair, QChoice};
use crate::linalg::{realize_norm, CFPartition, Matrix, NormTag};
use crate::projection::{build_pi, pi_m_norm};

/// Which pair table a cell belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogTable {
    /// `P = P_ideal(Q)`; companion `A M⁻¹ Qᵀ` gives `R`.
    PIdeal,
    /// `R = R_ideal(Q)`; companion `Qᵀ A⁻ᵀ M` gives `P`.
    RIdeal,
}

/// Operator count of a cell: one operator for both `R` and `P`, a product of
/// two, or anything heavier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Highlight {
    Single,
    Product,
    Other,
}

const ROWS: [NormTag; 5] = [
    NormTag::Identity,
    NormTag::A,
    NormTag::Asym,
    NormTag::AstarA,
    NormTag::AstarAsymInvA,
];

// Simplified companion expressions, [row][column].
const P_EXPR: [[&str; 5]; 5] = [
    ["A", "AA*", "AA_sym", "AA*A", "A^2A*"],
    ["I", "A", "A", "A^2", "A^2"],
    ["AA_sym^-1", "AA_sym^-1A*", "A", "AA_sym^-1A*A", "AA_sym^-1AA*"],
    ["A^-*", "I", "A^-*A_sym", "A", "A^-*AA*"],
    ["A_symA^-*", "A_sym", "A_symA^-*A_sym", "A_symA", "A_symA^-*AA*"],
];

const R_EXPR: [[&str; 5]; 5] = [
    ["A^-*", "I", "A_symA^-*", "A*AA^-*", "A"],
    ["I", "A", "A", "A^2", "A^2"],
    ["A^-*A_sym", "A_sym", "A_symA^-*A_sym", "A*AA^-*A_sym", "AA_sym"],
    ["A", "A*A", "A_symA", "A*A^2", "AA*A"],
    ["A_sym^-1A", "A*A_sym^-1A", "A", "A*AA_sym^-1A", "AA*A_sym^-1A"],
];

use Highlight::{Other as O, Product as B, Single as S};

const P_HIGHLIGHT: [[Highlight; 5]; 5] = [
    [S, B, B, O, O],
    [S, S, S, B, B],
    [O, O, S, O, O],
    [O, S, O, S, O],
    [O, S, O, B, O],
];

const R_HIGHLIGHT: [[Highlight; 5]; 5] = [
    [O, S, O, O, S],
    [S, S, S, B, B],
    [O, S, O, O, B],
    [S, B, B, O, O],
    [O, O, S, O, O],
];

/// One cell of the pair tables, computed or skipped.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub table: CatalogTable,
    pub norm: NormTag,
    pub q: QChoice,
    pub anchor: Anchor,
    pub companion_expr: &'static str,
    pub highlight: Highlight,
    /// The constructed pair, or the reason the cell was skipped.
    pub outcome: Result<IdealPair, String>,
}

/// Serializable summary of a [`CatalogEntry`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub table: CatalogTable,
    pub norm: NormTag,
    pub q: String,
    pub anchor: String,
    pub companion_expr: String,
    pub highlight: Highlight,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub pi_norm: Option<f64>,
}

impl CatalogEntry {
    pub fn is_skipped(&self) -> bool {
        self.outcome.is_err()
    }

    /// Summarizes the cell, computing `‖Π‖_M` for computed cells.
    pub fn record(&self, a: &Matrix) -> CatalogRecord {
        let (skipped, reason, pi_norm) = match &self.outcome {
            Ok(ip) => match build_pi(a, &ip.pair).and_then(|(pi, _)| pi_m_norm(&pi, &ip.metric)) {
                Ok(v) => (false, None, Some(v)),
                Err(e) => (true, Some(e.to_string()), None),
            },
            Err(reason) => (true, Some(reason.clone()), None),
        };
        let anchor = match self.table {
            CatalogTable::PIdeal => "p_ideal",
            CatalogTable::RIdeal => "r_ideal",
        };
        CatalogRecord {
            table: self.table,
            norm: self.norm,
            q: self.q.expr().to_string(),
            anchor: anchor.to_string(),
            companion_expr: self.companion_expr.to_string(),
            highlight: self.highlight,
            skipped,
            reason,
            pi_norm,
        }
    }
}

/// Enumerates both pair tables (norm rows × `Q` columns), building every cell
/// whose prerequisites hold. Output order is table, then row, then column.
pub fn catalog_pairs(a: &Matrix, part: &CFPartition) -> Vec<CatalogEntry> {
    let metrics: Vec<Result<Matrix, String>> = ROWS
        .iter()
        .map(|tag| {
            let spec = tag.spec().expect("built-in norm");
            realize_norm(&spec, a).map_err(|e| format!("norm {} unavailable: {e}", tag.expr()))
        })
        .collect();

    let cells: Vec<(CatalogTable, usize, usize)> = [CatalogTable::PIdeal, CatalogTable::RIdeal]
        .into_iter()
        .flat_map(|t| (0..ROWS.len()).flat_map(move |i| (0..5).map(move |j| (t, i, j))))
        .collect();

    cells
        .into_par_iter()
        .map(|(table, i, j)| {
            let q = QChoice::TABLE_COLUMNS[j].clone();
            let (anchor, expr, highlight) = match table {
                CatalogTable::PIdeal => (Anchor::PfromQ(q.clone()), P_EXPR[i][j], P_HIGHLIGHT[i][j]),
                CatalogTable::RIdeal => (Anchor::RfromQ(q.clone()), R_EXPR[i][j], R_HIGHLIGHT[i][j]),
            };
            let outcome = match &metrics[i] {
                Ok(m) => ideal_pair_with_metric(a, part, m, &anchor).map_err(|e| e.to_string()),
                Err(reason) => Err(reason.clone()),
            };
            CatalogEntry {
                table,
                norm: ROWS[i],
                q,
                anchor,
                companion_expr: expr,
                highlight,
                outcome,
            }
        })
        .collect()
}
