//! Coefficient matrices: unfoldings of a state's amplitude tensor along a
//! row/column split of its qudits.

use crate::error::{Error, Result};
use crate::permutation::QuditPermutation;
use crate::radix;
use crate::scalar::{Scalar, ScalarKind};
use crate::state::PureState;

/// Dense row-major matrix of homogeneous scalars.
///
/// When built from a state, rows are indexed by the levels of `row_qudits`
/// and columns by the levels of `col_qudits`, both in lexicographic order
/// with the first listed qudit most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    kind: ScalarKind,
    entries: Vec<Scalar>,
    row_qudits: Vec<usize>,
    col_qudits: Vec<usize>,
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
}

impl CoefficientMatrix {
    /// A matrix with no qudit structure, promoted to a common kind.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::LengthMismatch {
                expected: n_cols,
                actual: rows.iter().map(Vec::len).find(|&l| l != n_cols).unwrap_or(0),
            });
        }
        let kind = rows
            .iter()
            .flatten()
            .fold(ScalarKind::Exact, |k, s| k.join(s.kind()));
        let entries = rows
            .into_iter()
            .flatten()
            .map(|s| s.to_kind(kind).expect("promotion to numeric"))
            .collect();
        Ok(CoefficientMatrix {
            rows: n_rows,
            cols: n_cols,
            kind,
            entries,
            row_qudits: Vec::new(),
            col_qudits: Vec::new(),
            row_dims: vec![n_rows],
            col_dims: vec![n_cols],
        })
    }

    /// Integer-valued exact matrix, convenient in tests.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.cols + col]
    }

    pub fn row_qudits(&self) -> &[usize] {
        &self.row_qudits
    }

    pub fn col_qudits(&self) -> &[usize] {
        &self.col_qudits
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.cols.max(1)).map(<[Scalar]>::to_vec).collect()
    }

    pub fn transpose(&self) -> CoefficientMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        CoefficientMatrix {
            rows: self.cols,
            cols: self.rows,
            kind: self.kind,
            entries,
            row_qudits: self.col_qudits.clone(),
            col_qudits: self.row_qudits.clone(),
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
        }
    }

    /// Same matrix with every entry converted to numeric kind.
    pub fn to_numeric(&self) -> CoefficientMatrix {
        let mut m = self.clone();
        m.kind = ScalarKind::Numeric;
        for e in &mut m.entries {
            *e = Scalar::Numeric(e.to_c64());
        }
        m
    }
}

/// Coefficient matrix whose rows are indexed by the first `l` permuted qudits
/// `perm.mapping()[..l]` and columns by the rest.
pub fn coefficient_matrix(
    state: &PureState,
    perm: &QuditPermutation,
    l: usize,
) -> Result<CoefficientMatrix> {
    let n = state.n();
    if perm.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: perm.n(),
        });
    }
    if l == 0 || l >= n {
        return Err(Error::BadL { n, l });
    }
    let (row_qudits, col_qudits) = perm.mapping().split_at(l);
    build(state, row_qudits.to_vec(), col_qudits.to_vec())
}

/// Coefficient matrix with rows indexed by `block` (in the given order) and
/// columns by the remaining qudits in ascending order.
pub fn block_matrix(state: &PureState, block: &[usize]) -> Result<CoefficientMatrix> {
    let n = state.n();
    let mut in_block = vec![false; n];
    for &q in block {
        if q >= n || std::mem::replace(&mut in_block[q], true) {
            return Err(Error::BadBlock {
                block: block.to_vec(),
                n,
            });
        }
    }
    if block.is_empty() || block.len() == n {
        return Err(Error::BadBlock {
            block: block.to_vec(),
            n,
        });
    }
    let rest = (0..n).filter(|&q| !in_block[q]).collect();
    build(state, block.to_vec(), rest)
}

fn build(state: &PureState, row_qudits: Vec<usize>, col_qudits: Vec<usize>) -> Result<CoefficientMatrix> {
    let dims = state.dims();
    let row_dims: Vec<usize> = row_qudits.iter().map(|&q| dims[q]).collect();
    let col_dims: Vec<usize> = col_qudits.iter().map(|&q| dims[q]).collect();
    let rows = radix::volume(&row_dims);
    let cols = radix::volume(&col_dims);
    let mut entries = vec![Scalar::zero(state.kind()); rows * cols];
    let mut row_digits = vec![0; row_qudits.len()];
    let mut col_digits = vec![0; col_qudits.len()];
    for (index, amp) in state.terms() {
        for (d, &q) in row_digits.iter_mut().zip(&row_qudits) {
            *d = index[q];
        }
        for (d, &q) in col_digits.iter_mut().zip(&col_qudits) {
            *d = index[q];
        }
        let r = radix::encode(&row_digits, &row_dims);
        let c = radix::encode(&col_digits, &col_dims);
        entries[r * cols + c] = amp.clone();
    }
    Ok(CoefficientMatrix {
        rows,
        cols,
        kind: state.kind(),
        entries,
        row_qudits,
        col_qudits,
        row_dims,
        col_dims,
    })
}
