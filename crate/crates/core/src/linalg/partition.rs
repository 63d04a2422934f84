use serde::{Deserialize, Serialize};

use super::{checked_solve, ensure_square, Matrix};
use crate::error::{Error, Result};

/// A split of `0..n` into F-points and C-points.
///
/// Block operations work in F-first order: the F-points (in the stored order)
/// followed by the C-points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct CFPartition {
    n: usize,
    fpoints: Vec<usize>,
    cpoints: Vec<usize>,
}

#[derive(Deserialize)]
struct RawPartition {
    n: usize,
    fpoints: Vec<usize>,
    cpoints: Vec<usize>,
}

impl TryFrom<RawPartition> for CFPartition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        CFPartition::new(raw.n, raw.fpoints, raw.cpoints)
    }
}

impl CFPartition {
    pub fn new(n: usize, fpoints: Vec<usize>, cpoints: Vec<usize>) -> Result<Self> {
        if fpoints.is_empty() || cpoints.is_empty() {
            return Err(Error::InvalidPartition(
                "both F and C sets must be nonempty".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &i in fpoints.iter().chain(&cpoints) {
            if i >= n {
                return Err(Error::InvalidPartition(format!("index {i} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(format!("index {i} listed twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {missing} not assigned")));
        }
        Ok(CFPartition {
            n,
            fpoints,
            cpoints,
        })
    }

    /// Builds a partition from its C-points; the F-points are the rest, ascending.
    pub fn from_cpoints(n: usize, cpoints: Vec<usize>) -> Result<Self> {
        let mut is_c = vec![false; n];
        for &c in &cpoints {
            if c < n {
                is_c[c] = true;
            }
        }
        let fpoints = (0..n).filter(|&i| !is_c[i]).collect();
        Self::new(n, fpoints, cpoints)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_f(&self) -> usize {
        self.fpoints.len()
    }

    pub fn n_c(&self) -> usize {
        self.cpoints.len()
    }

    pub fn fpoints(&self) -> &[usize] {
        &self.fpoints
    }

    pub fn cpoints(&self) -> &[usize] {
        &self.cpoints
    }

    /// F-first ordering: position `k` holds the original index of the k-th
    /// permuted unknown.
    pub fn permutation(&self) -> Vec<usize> {
        self.fpoints.iter().chain(&self.cpoints).copied().collect()
    }

    /// Places an F-row block and a C-row block back into original row order.
    pub fn stack(&self, fblock: &Matrix, cblock: &Matrix) -> Result<Matrix> {
        if fblock.nrows() != self.n_f()
            || cblock.nrows() != self.n_c()
            || fblock.ncols() != cblock.ncols()
        {
            return Err(Error::dims(
                "stack",
                format!("{} F rows and {} C rows, equal widths", self.n_f(), self.n_c()),
                format!(
                    "{}x{} and {}x{}",
                    fblock.nrows(),
                    fblock.ncols(),
                    cblock.nrows(),
                    cblock.ncols()
                ),
            ));
        }
        let mut out = Matrix::zeros(self.n, fblock.ncols());
        for (k, &i) in self.fpoints.iter().enumerate() {
            out.set_row(i, &fblock.row(k));
        }
        for (k, &i) in self.cpoints.iter().enumerate() {
            out.set_row(i, &cblock.row(k));
        }
        Ok(out)
    }

    /// Splits the rows of `x` into its F-block and C-block.
    pub fn split_rows(&self, x: &Matrix) -> Result<(Matrix, Matrix)> {
        if x.nrows() != self.n {
            return Err(Error::dims("split_rows", self.n.to_string(), x.nrows().to_string()));
        }
        Ok((x.select_rows(&self.fpoints), x.select_rows(&self.cpoints)))
    }
}

/// A square matrix viewed through a [`CFPartition`].
#[derive(Clone, Debug)]
pub struct PartitionedMatrix {
    base: Matrix,
    part: CFPartition,
    ff: Matrix,
    fc: Matrix,
    cf: Matrix,
    cc: Matrix,
}

impl PartitionedMatrix {
    pub fn base(&self) -> &Matrix {
        &self.base
    }

    pub fn part(&self) -> &CFPartition {
        &self.part
    }

    pub fn ff(&self) -> &Matrix {
        &self.ff
    }

    pub fn fc(&self) -> &Matrix {
        &self.fc
    }

    pub fn cf(&self) -> &Matrix {
        &self.cf
    }

    pub fn cc(&self) -> &Matrix {
        &self.cc
    }

    /// Reassembles the blocks in original ordering.
    pub fn reassemble(&self) -> Matrix {
        assemble(&self.part, &self.ff, &self.fc, &self.cf, &self.cc)
            .expect("blocks were cut from a matching partition")
    }

    pub fn transpose(&self) -> PartitionedMatrix {
        PartitionedMatrix {
            base: self.base.transpose(),
            part: self.part.clone(),
            ff: self.ff.transpose(),
            fc: self.cf.transpose(),
            cf: self.fc.transpose(),
            cc: self.cc.transpose(),
        }
    }
}

pub fn partition(a: &Matrix, part: &CFPartition) -> Result<PartitionedMatrix> {
    ensure_square(a, "A")?;
    if a.nrows() != part.n() {
        return Err(Error::dims(
            "partition",
            format!("{n}x{n}", n = part.n()),
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    let f = part.fpoints();
    let c = part.cpoints();
    let rows_f = a.select_rows(f);
    let rows_c = a.select_rows(c);
    Ok(PartitionedMatrix {
        base: a.clone(),
        part: part.clone(),
        ff: rows_f.select_columns(f),
        fc: rows_f.select_columns(c),
        cf: rows_c.select_columns(f),
        cc: rows_c.select_columns(c),
    })
}

/// Inverse of [`partition`]: writes the four blocks back in original ordering.
pub fn assemble(
    part: &CFPartition,
    ff: &Matrix,
    fc: &Matrix,
    cf: &Matrix,
    cc: &Matrix,
) -> Result<Matrix> {
    let (nf, nc) = (part.n_f(), part.n_c());
    let shapes = [ff.shape(), fc.shape(), cf.shape(), cc.shape()];
    if shapes != [(nf, nf), (nf, nc), (nc, nf), (nc, nc)] {
        return Err(Error::dims("assemble", format!("n_f={nf}, n_c={nc}"), format!("{shapes:?}")));
    }
    let mut out = Matrix::zeros(part.n(), part.n());
    let (f, c) = (part.fpoints(), part.cpoints());
    for (rows, blocks) in [(f, [ff, fc]), (c, [cf, cc])] {
        for (ri, &i) in rows.iter().enumerate() {
            for (cj, &j) in f.iter().enumerate() {
                out[(i, j)] = blocks[0][(ri, cj)];
            }
            for (cj, &j) in c.iter().enumerate() {
                out[(i, j)] = blocks[1][(ri, cj)];
            }
        }
    }
    Ok(out)
}

/// `Q_cc − Q_cf Q_ff⁻¹ Q_fc`.
pub fn schur_c(q: &PartitionedMatrix) -> Result<Matrix> {
    let x = checked_solve(q.ff(), q.fc(), "Q_ff")?;
    Ok(q.cc() - q.cf() * x)
}

/// `Q_ff − Q_fc Q_cc⁻¹ Q_cf`.
pub fn schur_f(q: &PartitionedMatrix) -> Result<Matrix> {
    let x = checked_solve(q.cc(), q.cf(), "Q_cc")?;
    Ok(q.ff() - q.fc() * x)
}
