//! Exact scalars, sparse matrices and chain complexes.
//!
//! Everything here is exact: characteristic-zero scalars are arbitrary
//! precision rationals and prime-field scalars are residues. Elimination is
//! deterministic, so ranks, kernel bases and homology dimensions are
//! reproducible bit for bit.

mod complex;
pub(crate) mod elim;
mod scalar;
mod sparse;

pub use complex::{induced_homology_rank, induces_identity, is_chain_map, ChainComplex};
pub use scalar::{parse_rational, FieldSpec, Scalar};
pub(crate) use scalar::{format_rational, rational_of};
pub use sparse::{axpy, normalize, SparseMatrix, SparseVec};

use crate::error::{Error, Result};
use elim::{lift_cols, lower_vec, rank_of, reduced_echelon, with_arith, Arith};

/// Rank over the matrix's field.
pub fn rank(m: &SparseMatrix) -> usize {
    with_arith!(m.field(), |ar| rank_of(ar, lift_cols(ar, m), m.rows()))
}

/// Basis of the kernel, one column per free variable of the reduced row
/// echelon form. Column `j` is the unit vector on its free coordinate plus a
/// combination of pivot coordinates, so the basis is the unique one whose
/// restriction to the free coordinates is the identity.
pub fn kernel_basis(m: &SparseMatrix) -> SparseMatrix {
    kernel_subspace(m).basis
}

/// The kernel as a [`Subspace`] whose pivot rows are the free coordinates.
pub fn kernel_subspace(m: &SparseMatrix) -> Subspace {
    let field = m.field();
    let n = m.cols();
    let (cols, free) = with_arith!(field, |ar| {
        let rows = reduced_echelon(ar, lift_cols(ar, &m.transpose()), n);
        let mut is_pivot = vec![false; n];
        for r in &rows {
            is_pivot[r[0].0] = true;
        }
        let mut slot = vec![usize::MAX; n];
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        for (j, &f) in free.iter().enumerate() {
            slot[f] = j;
        }
        let mut cols: Vec<Vec<(usize, Scalar)>> = free.iter().map(|&f| vec![(f, field.one())]).collect();
        for r in &rows {
            let p = r[0].0;
            for (f, x) in &r[1..] {
                cols[slot[*f]].push((p, ar.lower(&ar.neg(x))));
            }
        }
        (cols, free)
    });
    Subspace {
        basis: SparseMatrix::from_columns(n, field, cols).expect("kernel columns are in range"),
        pivots: free,
    }
}

/// `ambient_dim − rank(spanning_vectors)`.
pub fn quotient_dimension(ambient_dim: usize, spanning_vectors: &SparseMatrix) -> Result<usize> {
    if spanning_vectors.rows() != ambient_dim {
        return Err(Error::Shape(format!(
            "spanning vectors have {} rows, ambient dimension is {ambient_dim}",
            spanning_vectors.rows()
        )));
    }
    Ok(ambient_dim - rank(spanning_vectors))
}

/// A subspace given by a basis with distinguished pivot rows: basis column
/// `j` is 1 at row `pivots[j]` and every other column vanishes there.
/// Coordinates of a member vector are read off at the pivot rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: SparseMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The reduced basis of the column span of `m`.
    pub fn column_space(m: &SparseMatrix) -> Subspace {
        let field = m.field();
        let (cols, pivots) = with_arith!(field, |ar| {
            let red = reduced_echelon(ar, lift_cols(ar, m), m.rows());
            let pivots: Vec<usize> = red.iter().map(|v| v[0].0).collect();
            let cols: Vec<_> = red.iter().map(|v| lower_vec(ar, v)).collect();
            (cols, pivots)
        });
        Subspace {
            basis: SparseMatrix::from_columns(m.rows(), field, cols).expect("in range"),
            pivots,
        }
    }

    pub fn full(n: usize, field: FieldSpec) -> Subspace {
        Subspace {
            basis: SparseMatrix::identity(n, field),
            pivots: (0..n).collect(),
        }
    }

    /// Wraps a basis already known to have the pivot property.
    pub(crate) fn from_pivoted(basis: SparseMatrix, pivots: Vec<usize>) -> Subspace {
        debug_assert_eq!(basis.cols(), pivots.len());
        Subspace { basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &SparseMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in this basis, or `None` when `v` is not in the
    /// subspace. `pivot_slot` maps ambient rows to basis positions.
    pub fn coordinates_with(&self, v: &[(usize, Scalar)], pivot_slot: impl Fn(usize) -> Option<usize>) -> Option<SparseVec> {
        let mut coords: SparseVec = v
            .iter()
            .filter_map(|(r, x)| pivot_slot(*r).map(|j| (j, x.clone())))
            .collect();
        coords.sort_by_key(|(j, _)| *j);
        let back = self.basis.mul_sparse_vec(&coords);
        (back.as_slice() == v).then_some(coords)
    }

    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        let index = self.pivot_index();
        self.coordinates_with(v, |r| index.get(&r).copied())
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn pivot_index(&self) -> std::collections::HashMap<usize, usize> {
        self.pivots.iter().enumerate().map(|(j, &r)| (r, j)).collect()
    }
}

/// Basis of the intersection of the column spans of `bases`.
pub fn subspace_intersection(bases: &[SparseMatrix]) -> Result<SparseMatrix> {
    let Some(first) = bases.first() else {
        return Err(Error::Shape("intersection of no subspaces".into()));
    };
    let rows = first.rows();
    let field = first.field();
    let mut acc = Subspace::column_space(first).basis;
    for b in &bases[1..] {
        if b.rows() != rows {
            return Err(Error::Shape(format!("bases with {} and {rows} rows", b.rows())));
        }
        let k = acc.cols();
        let minus_b = b.scale(&-field.one());
        let stacked = SparseMatrix::hstack(rows, field, &[&acc, &minus_b])?;
        let kernel = kernel_basis(&stacked);
        // A·x = B·y for kernel vectors (x, y); keep A·x
        let xs: Vec<SparseVec> = kernel
            .columns()
            .iter()
            .map(|c| c.iter().filter(|(i, _)| *i < k).cloned().collect())
            .collect();
        let xs = SparseMatrix::from_columns(k, field, xs)?;
        acc = Subspace::column_space(&acc.mul(&xs)?).basis;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zeros(3, 3, q())), 0);
        assert_eq!(rank(&SparseMatrix::identity(5, q())), 5);
        assert_eq!(rank(&SparseMatrix::from_rows_i64(q(), &[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&SparseMatrix::identity(4, q())).cols(), 0);
        let k = kernel_basis(&SparseMatrix::zeros(3, 3, q()));
        assert_eq!(k, SparseMatrix::identity(3, q()));
        // multiplication of Q[x]/(x^2) as a map A⊗A → A, basis 1⊗1,1⊗x,x⊗1,x⊗x
        let mult = SparseMatrix::from_rows_i64(q(), &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let k = kernel_basis(&mult);
        assert_eq!(k.cols(), 2);
        assert!(mult.mul(&k).unwrap().is_zero());
        assert_eq!(k.to_dense_i64(), vec![vec![0, 0], vec![-1, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_dimension(4, &SparseMatrix::zeros(4, 0, q())).unwrap(), 4);
        assert_eq!(quotient_dimension(4, &SparseMatrix::identity(4, q())).unwrap(), 0);
        assert!(quotient_dimension(3, &SparseMatrix::identity(4, q())).is_err());
    }

    #[test]
    fn intersection_examples() {
        let e = |rows: &[Vec<i64>]| SparseMatrix::from_rows_i64(q(), rows);
        let line = e(&[vec![1], vec![2]]);
        let single = subspace_intersection(&[line.clone()]).unwrap();
        assert_eq!(rank(&single), 1);
        assert_eq!(rank(&SparseMatrix::hstack(2, q(), &[&single, &line]).unwrap()), 1);

        let other = e(&[vec![1], vec![-1]]);
        assert_eq!(subspace_intersection(&[line, other]).unwrap().cols(), 0);

        let e12 = e(&[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let e23 = e(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let i = subspace_intersection(&[e12, e23]).unwrap();
        assert_eq!(i.to_dense_i64(), vec![vec![0], vec![1], vec![0]]);
    }

    #[test]
    fn subspace_coordinates() {
        let span = SparseMatrix::from_rows_i64(q(), &[vec![1, 1], vec![1, 2], vec![1, 3]]);
        let s = Subspace::column_space(&span);
        assert_eq!(s.dim(), 2);
        let v = span.column(1).to_vec();
        let c = s.coordinates(&v).unwrap();
        assert_eq!(s.basis().mul_sparse_vec(&c), v);
        assert!(!s.contains(&[(0, q().one())]));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..3, c), r))
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in small_matrix(), p in prop::sample::select(vec![0u64, 2, 3, 5])) {
            let field = FieldSpec::from_characteristic(p).unwrap();
            let m = SparseMatrix::from_rows_i64(field, &rows);
            let r = rank(&m);
            let k = kernel_basis(&m);
            prop_assert!(r <= m.rows().min(m.cols()));
            prop_assert_eq!(r + k.cols(), m.cols());
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(rank(&m.transpose()), r);
            prop_assert_eq!(Subspace::column_space(&m).dim(), r);
        }
    }
}
