//! Sparse matrices over the rationals with column-reduction based rank and
//! kernel computation. Entries are exact `BigRational`s throughout; Betti
//! numbers are integers and nothing here ever rounds.

use std::collections::HashMap;

use num::{BigRational, Zero};

pub type Q = BigRational;
/// A sparse column: `(row, coefficient)` pairs sorted by row, coefficients
/// nonzero.
pub type SparseCol = Vec<(usize, Q)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseQMatrix {
    pub rows: usize,
    pub cols: Vec<SparseCol>,
}

impl SparseQMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseQMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn rank(&self) -> usize {
        let mut red = ColumnReducer::new();
        for col in &self.cols {
            red.insert(col.clone());
        }
        red.rank()
    }

    /// Applies the matrix to a sparse vector over the column index space.
    pub fn apply(&self, v: &SparseCol) -> SparseCol {
        let mut acc: SparseCol = Vec::new();
        for (j, coef) in v {
            add_scaled(&mut acc, coef, &self.cols[*j]);
        }
        acc
    }
}

/// `dst += coef * src`, keeping `dst` sorted and free of zeros.
pub fn add_scaled(dst: &mut SparseCol, coef: &Q, src: &SparseCol) {
    if coef.is_zero() || src.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j == src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i == dst.len() || src[j].0 < dst[i].0 {
            out.push((src[j].0, coef * &src[j].1));
            j += 1;
        } else {
            let v = &dst[i].1 + coef * &src[j].1;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *dst = out;
}

/// Incremental column reduction: each inserted column is reduced against
/// the stored basis using the largest-row pivot; independent residues are
/// kept and claim their pivot row.
pub struct ColumnReducer {
    pivot_of_row: HashMap<usize, usize>,
    basis: Vec<SparseCol>,
}

impl ColumnReducer {
    pub fn new() -> Self {
        ColumnReducer {
            pivot_of_row: HashMap::new(),
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `col` against the basis; returns the residue without
    /// storing anything.
    pub fn residue(&self, mut col: SparseCol) -> SparseCol {
        loop {
            let Some(&(prow, ref pval)) = col.last() else {
                return col;
            };
            let Some(&b) = self.pivot_of_row.get(&prow) else {
                return col;
            };
            let basis_col = &self.basis[b];
            let coef = -(pval / &basis_col.last().expect("basis columns are nonzero").1);
            add_scaled(&mut col, &coef, basis_col);
        }
    }

    /// Reduces and, if independent, stores the residue. Returns `true`
    /// when the column was independent of the basis so far.
    pub fn insert(&mut self, col: SparseCol) -> bool {
        let residue = self.residue(col);
        match residue.last() {
            None => false,
            Some(&(prow, _)) => {
                self.pivot_of_row.insert(prow, self.basis.len());
                self.basis.push(residue);
                true
            }
        }
    }
}

impl Default for ColumnReducer {
    fn default() -> Self {
        Self::new()
    }
}

/// Rank of the matrix together with a basis of its kernel, expressed as
/// sparse vectors over the column index space.
pub fn rank_and_kernel(m: &SparseQMatrix) -> (usize, Vec<SparseCol>) {
    let mut pivot_of_row: HashMap<usize, usize> = HashMap::new();
    let mut basis: Vec<SparseCol> = Vec::new();
    let mut combos: Vec<SparseCol> = Vec::new();
    let mut kernel = Vec::new();
    for (j, col) in m.cols.iter().enumerate() {
        let mut col = col.clone();
        let mut combo: SparseCol = vec![(j, Q::from_integer(1.into()))];
        while let Some(&(prow, ref pval)) = col.last() {
            let Some(&b) = pivot_of_row.get(&prow) else {
                break;
            };
            let coef = -(pval / &basis[b].last().expect("nonzero").1);
            // Clone the basis combo to appease the borrow of `basis`.
            let bc = combos[b].clone();
            add_scaled(&mut col, &coef, &basis[b]);
            add_scaled(&mut combo, &coef, &bc);
        }
        if col.is_empty() {
            kernel.push(combo);
        } else {
            pivot_of_row.insert(col.last().unwrap().0, basis.len());
            basis.push(col);
            combos.push(combo);
        }
    }
    (basis.len(), kernel)
}

/// Rank of `[base | extra]` minus rank of `base`: the dimension the extra
/// columns add on top of the span of the base.
pub fn added_rank(base_cols: &[SparseCol], extra: &[SparseCol]) -> usize {
    let mut red = ColumnReducer::new();
    for col in base_cols {
        red.insert(col.clone());
    }
    let base_rank = red.rank();
    for col in extra {
        red.insert(col.clone());
    }
    red.rank() - base_rank
}

pub fn q_one() -> Q {
    Q::from_integer(1.into())
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(v.into())
}
