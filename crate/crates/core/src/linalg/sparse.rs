use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar};

/// A sparse vector: `(index, value)` pairs sorted by index, no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Sorts, merges duplicate indices and drops zeros.
pub fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a + c·b` for sorted sparse vectors.
pub fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let x = &a[i].1 + &(c * &b[j].1);
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Column-major sparse matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    field: FieldSpec,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        SparseMatrix {
            rows,
            field,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let one = field.one();
        SparseMatrix {
            rows: n,
            field,
            cols: (0..n).map(|i| vec![(i, one.clone())]).collect(),
        }
    }

    /// Builds a matrix from columns; entries are normalized.
    pub fn from_columns(rows: usize, field: FieldSpec, cols: Vec<Vec<(usize, Scalar)>>) -> Result<Self> {
        let cols: Vec<SparseVec> = cols.into_iter().map(normalize).collect();
        for c in &cols {
            if let Some((r, x)) = c.last() {
                if *r >= rows {
                    return Err(Error::Shape(format!("row index {r} out of range {rows}")));
                }
                if x.field() != field {
                    return Err(Error::FieldMismatch(x.field(), field));
                }
            }
        }
        Ok(SparseMatrix { rows, field, cols })
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut buckets = vec![Vec::new(); cols];
        for (r, c, x) in entries {
            if c >= cols {
                return Err(Error::Shape(format!("column index {c} out of range {cols}")));
            }
            buckets[c].push((r, x));
        }
        Self::from_columns(rows, field, buckets)
    }

    /// Dense integer rows, for tests and small fixtures.
    pub fn from_rows_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(move |(c, x)| (r, c, field.from_i64(*x)))
        });
        Self::from_triplets(rows.len(), ncols, field, entries).expect("dense rows are in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.cols[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.cols[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Iterates over nonzero entries as `(row, col, value)`, column by column.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, x) in self.triplets() {
            out[r].push((c, x.clone()));
        }
        // columns were visited in increasing order, so each bucket is sorted
        SparseMatrix {
            rows: self.cols(),
            field: self.field,
            cols: out,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols() != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols(),
                rhs.rows,
                rhs.cols()
            )));
        }
        let cols = rhs.cols.iter().map(|col| self.mul_sparse_vec(col)).collect();
        Ok(SparseMatrix {
            rows: self.rows,
            field: self.field,
            cols,
        })
    }

    /// `self · v` for a sparse vector `v` indexed by columns of `self`.
    pub fn mul_sparse_vec(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Vec::new();
        for (k, y) in v {
            for (r, x) in &self.cols[*k] {
                acc.push((*r, x * y));
            }
        }
        normalize(acc)
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(rhs)?;
        let one = self.field.one();
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| axpy(a, &one, b))
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            field: self.field,
            cols,
        })
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(rhs)?;
        let minus = -self.field.one();
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| axpy(a, &minus, b))
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            field: self.field,
            cols,
        })
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        let cols = if c.is_zero() {
            vec![Vec::new(); self.cols()]
        } else {
            self.cols
                .iter()
                .map(|col| col.iter().map(|(r, x)| (*r, x * c)).collect())
                .collect()
        };
        SparseMatrix {
            rows: self.rows,
            field: self.field,
            cols,
        }
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(rows: usize, field: FieldSpec, parts: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let mut cols = Vec::new();
        for p in parts {
            if p.rows != rows {
                return Err(Error::Shape(format!("hstack of {} rows with {rows}", p.rows)));
            }
            cols.extend(p.cols.iter().cloned());
        }
        Ok(SparseMatrix { rows, field, cols })
    }

    pub fn select_columns(&self, which: &[usize]) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            field: self.field,
            cols: which.iter().map(|&c| self.cols[c].clone()).collect(),
        }
    }

    /// Dense integer view (panics on non-integral rationals); for tests.
    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols()]; self.rows];
        for (r, c, x) in self.triplets() {
            out[r][c] = x.to_i64().expect("integral entry");
        }
        out
    }

    fn check_same_shape(&self, rhs: &SparseMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols() != rhs.cols() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows,
                self.cols(),
                rhs.rows,
                rhs.cols()
            )));
        }
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        Ok(())
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} over {} [", self.rows, self.cols(), self.field)?;
        for (i, (r, c, x)) in self.triplets().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if i == 32 {
                write!(f, "...")?;
                break;
            }
            write!(f, "({r},{c})={x}")?;
        }
        write!(f, "]")
    }
}
