//! The ten pairings of ideal operators that give orthogonal coarse-grid
//! corrections, grouped by the norm they are orthogonal in.

use serde::{Deserialize, Serialize};

use super::{p_ideal, r_ideal, QChoice, TransferPair};
use crate::error::Result;
use crate::linalg::{partition, realize_norm, CFPartition, Matrix, NormTag};

/// Line style of an edge, one per norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeStyle {
    /// `I`-orthogonal.
    Solid,
    /// `A`-orthogonal; needs SPD `A`.
    Dotted,
    /// `A*A`-orthogonal.
    Dashed,
}

impl EdgeStyle {
    pub fn norm(self) -> NormTag {
        match self {
            EdgeStyle::Solid => NormTag::Identity,
            EdgeStyle::Dotted => NormTag::A,
            EdgeStyle::Dashed => NormTag::AstarA,
        }
    }
}

/// `R = R_ideal(r)`, `P = P_ideal(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureEdge {
    pub style: EdgeStyle,
    pub r: QChoice,
    pub p: QChoice,
}

pub fn figure_edges() -> Vec<FigureEdge> {
    use EdgeStyle::*;
    use QChoice::*;
    let edge = |style, r, p| FigureEdge { style, r, p };
    vec![
        edge(Solid, Identity, AinvStar),
        edge(Solid, Aop, Identity),
        edge(Solid, AAstar, Aop),
        edge(Dotted, AinvStar, AinvStar),
        edge(Dotted, Identity, Identity),
        edge(Dotted, Aop, Aop),
        edge(Dotted, AAstar, AstarA),
        edge(Dashed, AinvStar, Identity),
        edge(Dashed, Identity, Aop),
        edge(Dashed, Aop, AstarA),
    ]
}

impl FigureEdge {
    /// The edge's pair and the realized norm it should be orthogonal in.
    pub fn build(&self, a: &Matrix, part: &CFPartition) -> Result<(TransferPair, Matrix)> {
        let m = realize_norm(&self.style.norm().spec().expect("built-in norm"), a)?;
        let r = r_ideal(&partition(&self.r.realize(a)?, part)?)?;
        let p = p_ideal(&partition(&self.p.realize(a)?, part)?)?;
        Ok((TransferPair::from_full(part, r, p)?, m))
    }

    pub fn label(&self) -> String {
        format!("R({}),P({})", self.r.expr(), self.p.expr())
    }
}
