//! The cyclic bar complex of a linear category.
//!
//! Degree `k` is spanned by words `a_0 ⊗ a_1 ⊗ … ⊗ a_k` with
//! `a_i ∈ Hom(o_i, o_{i+1})` around a cycle of objects `o_0, …, o_k, o_0`.
//! With one object this is `A^{⊗(k+1)}`. The differential is
//!
//! ```text
//! b(a_0 ⊗ … ⊗ a_k) = Σ_{i<k} (−1)^i a_0 ⊗ … ⊗ a_i a_{i+1} ⊗ … ⊗ a_k
//!                  + (−1)^k a_k a_0 ⊗ a_1 ⊗ … ⊗ a_{k−1}
//! ```

use std::collections::HashMap;

use rayon::prelude::*;

use crate::coefficients::{mixed_radix, CategoryPresentation, ObjectId};
use crate::error::{Error, Result};
use crate::linalg::{normalize, ChainComplex, Scalar, SparseMatrix, SparseVec};

/// The basis of one degree of the bar complex.
#[derive(Clone, Debug)]
pub struct BarComplexSlice {
    degree: usize,
    cycles: Vec<Vec<ObjectId>>,
    offsets: Vec<usize>,
    index: HashMap<Vec<ObjectId>, usize>,
    dim: usize,
}

impl BarComplexSlice {
    pub fn new(c: &CategoryPresentation, degree: usize) -> BarComplexSlice {
        let mut cycles = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for cycle in mixed_radix(&vec![c.object_count(); degree + 1]) {
            let size = cycle_radices(c, &cycle).iter().product::<usize>();
            if size > 0 {
                cycles.push(cycle);
                offsets.push(dim);
                dim += size;
            }
        }
        let index = cycles.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        BarComplexSlice {
            degree,
            cycles,
            offsets,
            index,
            dim,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Object cycles with a nonzero tensor product of hom spaces.
    pub fn cycles(&self) -> &[Vec<ObjectId>] {
        &self.cycles
    }

    /// Position of the word `morphisms` on the object cycle `objects`.
    pub fn index(&self, c: &CategoryPresentation, objects: &[ObjectId], morphisms: &[usize]) -> Option<usize> {
        let i = *self.index.get(objects)?;
        let radices = cycle_radices(c, objects);
        let mut idx = 0;
        for (m, r) in morphisms.iter().zip(&radices) {
            if m >= r {
                return None;
            }
            idx = idx * r + m;
        }
        Some(self.offsets[i] + idx)
    }
}

fn cycle_radices(c: &CategoryPresentation, cycle: &[ObjectId]) -> Vec<usize> {
    let n = cycle.len();
    (0..n).map(|i| c.hom_dim(cycle[i], cycle[(i + 1) % n])).collect()
}

/// `b: degree k → degree k − 1`.
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::hochschild::bar_differential;
/// use blobcx::linalg::rank;
/// let a = builtin("matrix:2").unwrap();
/// assert_eq!(rank(&bar_differential(&a, 1).unwrap()), 3);
/// ```
pub fn bar_differential(c: &CategoryPresentation, k: usize) -> Result<SparseMatrix> {
    if k == 0 {
        return Err(Error::Shape("the bar differential starts in degree 1".into()));
    }
    let (src, tgt) = (BarComplexSlice::new(c, k), BarComplexSlice::new(c, k - 1));
    bar_differential_between(c, &src, &tgt)
}

fn bar_differential_between(c: &CategoryPresentation, src: &BarComplexSlice, tgt: &BarComplexSlice) -> Result<SparseMatrix> {
    let k = src.degree;
    let field = c.field();
    let cols: Vec<Vec<SparseVec>> = src
        .cycles
        .par_iter()
        .map(|objects| {
            let radices = cycle_radices(c, objects);
            mixed_radix(&radices)
                .map(|word| {
                    let mut out: Vec<(usize, Scalar)> = Vec::new();
                    for i in 0..=k {
                        // merge positions i and i + 1 (cyclically for i = k)
                        let j = (i + 1) % (k + 1);
                        let product = c.compose_basis(objects[i], objects[j], objects[(j + 1) % (k + 1)], word[i], word[j]);
                        let (new_objects, slot): (Vec<ObjectId>, usize) = if i < k {
                            let mut o = objects.clone();
                            o.remove(i + 1);
                            (o, i)
                        } else {
                            let mut o = objects[..k].to_vec();
                            o[0] = objects[k];
                            (o, 0)
                        };
                        let negative = i % 2 == 1;
                        for (m, x) in product {
                            let mut w: Vec<usize> = if i < k {
                                let mut w = word.clone();
                                w.remove(i + 1);
                                w
                            } else {
                                word[..k].to_vec()
                            };
                            w[slot] = *m;
                            let r = tgt.index(c, &new_objects, &w).expect("composites lie on a cycle of the lower degree");
                            out.push((r, if negative { -x.clone() } else { x.clone() }));
                        }
                    }
                    normalize(out)
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(tgt.dim, field, cols.into_iter().flatten().collect())
}

/// The bar complex in degrees `0..=top`, checked for `b∘b = 0`.
pub fn bar_complex(c: &CategoryPresentation, top: usize) -> Result<ChainComplex> {
    let slices: Vec<BarComplexSlice> = (0..=top).map(|k| BarComplexSlice::new(c, k)).collect();
    let differentials = (1..=top)
        .map(|k| bar_differential_between(c, &slices[k], &slices[k - 1]))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(c.field(), slices.iter().map(|s| s.dim).collect(), differentials, Vec::new())
}

/// Hochschild homology dimensions in degrees `0..=D`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HochschildDims {
    pub dims: Vec<usize>,
}

/// Builds the bar complex through degree `D + 1` and reports `0..=D`.
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::hochschild::hochschild_dims;
/// let a = builtin("trunc-poly:2").unwrap();
/// assert_eq!(hochschild_dims(&a, 1).unwrap().dims, [2, 1]);
/// ```
pub fn hochschild_dims(c: &CategoryPresentation, max_degree: usize) -> Result<HochschildDims> {
    let mut dims = bar_complex(c, max_degree + 1)?.homology_dimensions()?;
    dims.pop();
    Ok(HochschildDims { dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::builtin;
    use crate::linalg::rank;

    #[test]
    fn slice_dimensions() {
        let a = builtin("matrix:2").unwrap();
        assert_eq!((0..3).map(|k| BarComplexSlice::new(&a, k).dim()).collect::<Vec<_>>(), [4, 16, 64]);
        let two = crate::coefficients::tests::two_object();
        // cycles through b → a need Hom(b, a) = 0, so only constant cycles survive
        assert_eq!(BarComplexSlice::new(&two, 0).dim(), 2);
        assert_eq!(BarComplexSlice::new(&two, 2).dim(), 2);
        assert_eq!(BarComplexSlice::new(&two, 2).cycles(), [vec![0, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn b_squares_to_zero() {
        for name in ["ground", "trunc-poly:2", "trunc-poly:3", "group:Z/2", "group:Z/3", "matrix:2", "matrix:2@F3"] {
            bar_complex(&builtin(name).unwrap(), 4).unwrap();
        }
        bar_complex(&crate::coefficients::tests::two_object(), 4).unwrap();
    }

    #[test]
    fn ground_field() {
        let g = builtin("ground").unwrap();
        assert_eq!(hochschild_dims(&g, 3).unwrap().dims, [1, 0, 0, 0]);
        // alternating sums of k + 1 equal terms
        for k in 1..=4 {
            let b = bar_differential(&g, k).unwrap();
            assert_eq!(b.is_zero(), k % 2 == 1);
        }
    }

    #[test]
    fn small_algebras() {
        let t = builtin("trunc-poly:2").unwrap();
        let x = 1;
        let b1 = bar_differential(&t, 1).unwrap();
        assert!(b1.column(x * 2 + x).is_empty());
        assert_eq!(hochschild_dims(&t, 2).unwrap().dims, [2, 1, 1]);
        assert_eq!(hochschild_dims(&builtin("group:Z/2").unwrap(), 2).unwrap().dims, [2, 0, 0]);
        assert_eq!(hochschild_dims(&builtin("matrix:2").unwrap(), 1).unwrap().dims, [1, 0]);
        assert_eq!(rank(&bar_differential(&builtin("matrix:2").unwrap(), 1).unwrap()), 3);
        // in characteristic 2, F_2[Z/2] = F_2[x]/(x²)
        assert_eq!(hochschild_dims(&builtin("group:Z/2@F2").unwrap(), 1).unwrap().dims, [2, 2]);
    }

    #[test]
    fn zeroth_is_commutator_quotient() {
        for name in ["ground", "trunc-poly:2", "trunc-poly:3", "group:Z/2", "group:Z/3", "matrix:2", "matrix:3", "matrix:2@F3"] {
            let a = builtin(name).unwrap();
            assert_eq!(hochschild_dims(&a, 0).unwrap().dims[0], a.commutator_quotient_dim().unwrap(), "{name}");
        }
    }

    #[test]
    fn categories() {
        // the arrow category is Morita-trivial in positive degrees: HH = (2, 0)
        let two = crate::coefficients::tests::two_object();
        assert_eq!(hochschild_dims(&two, 2).unwrap().dims, [2, 0, 0]);
        assert!(bar_differential(&two, 0).is_err());
    }
}
