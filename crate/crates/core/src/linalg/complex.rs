use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, FieldSpec, SparseMatrix, SparseVec};

/// A bounded chain complex `C_K → … → C_1 → C_0` of finite-dimensional
/// spaces, with `d_k ∘ d_{k+1} = 0` checked on construction.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    field: FieldSpec,
    dims: Vec<usize>,
    /// `differentials[k - 1]` is `d_k: C_k → C_{k-1}`.
    differentials: Vec<SparseMatrix>,
    labels: Vec<Vec<String>>,
    validated: bool,
}

impl ChainComplex {
    /// Builds and validates a complex. `differentials` lists `d_1, …, d_K`;
    /// `labels` is either empty or one label list per degree.
    pub fn new(
        field: FieldSpec,
        dims: Vec<usize>,
        differentials: Vec<SparseMatrix>,
        labels: Vec<Vec<String>>,
    ) -> Result<Self> {
        let mut c = Self::unvalidated(field, dims, differentials, labels);
        c.validate()?;
        Ok(c)
    }

    /// Assembles a complex without checking it. Homology refuses to run on
    /// it until [`ChainComplex::validate`] succeeds.
    pub fn unvalidated(
        field: FieldSpec,
        dims: Vec<usize>,
        differentials: Vec<SparseMatrix>,
        labels: Vec<Vec<String>>,
    ) -> Self {
        ChainComplex {
            field,
            dims,
            differentials,
            labels,
            validated: false,
        }
    }

    pub fn validate(&mut self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Shape("a chain complex needs at least degree 0".into()));
        }
        if self.differentials.len() + 1 != self.dims.len() {
            return Err(Error::Shape(format!(
                "{} differentials for {} degrees",
                self.differentials.len(),
                self.dims.len()
            )));
        }
        if !self.labels.is_empty()
            && (self.labels.len() != self.dims.len() || self.labels.iter().zip(&self.dims).any(|(l, d)| l.len() != *d))
        {
            return Err(Error::Shape("label lists do not match dimensions".into()));
        }
        for (k, d) in self.differentials.iter().enumerate() {
            let k = k + 1;
            if d.rows() != self.dims[k - 1] || d.cols() != self.dims[k] {
                return Err(Error::Shape(format!(
                    "d_{k} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    self.dims[k - 1],
                    self.dims[k]
                )));
            }
            if d.field() != self.field {
                return Err(Error::FieldMismatch(d.field(), self.field));
            }
        }
        for k in 1..self.differentials.len() {
            let (lower, upper) = (&self.differentials[k - 1], &self.differentials[k]);
            let clean = upper
                .columns()
                .par_iter()
                .all(|col| lower.mul_sparse_vec(col).is_empty());
            if !clean {
                return Err(Error::NotAComplex { degree: k });
            }
        }
        self.validated = true;
        Ok(())
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Highest degree `K` present.
    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `d_k: C_k → C_{k-1}` for `1 ≤ k ≤ K`.
    pub fn differential(&self, k: usize) -> &SparseMatrix {
        assert!(k >= 1 && k <= self.max_degree(), "d_{k} is outside 1..={}", self.max_degree());
        &self.differentials[k - 1]
    }

    pub fn label(&self, k: usize, i: usize) -> Option<&str> {
        self.labels.get(k).and_then(|l| l.get(i)).map(String::as_str)
    }

    /// Ranks of `d_1, …, d_K`, computed in parallel.
    pub fn differential_ranks(&self) -> Vec<usize> {
        self.differentials.par_iter().map(rank).collect()
    }

    /// `dim H_k = dim ker d_k − rank d_{k+1}` for `k = 0..=K`, treating `d_0`
    /// and `d_{K+1}` as zero maps. The top degree is only meaningful when the
    /// complex genuinely stops there.
    pub fn homology_dimensions(&self) -> Result<Vec<usize>> {
        if !self.validated {
            return Err(Error::Unvalidated);
        }
        let ranks = self.differential_ranks();
        let r = |k: usize| if k == 0 || k > ranks.len() { 0 } else { ranks[k - 1] };
        Ok((0..self.dims.len()).map(|k| self.dims[k] - r(k) - r(k + 1)).collect())
    }

    /// The tensor product complex through degree `min(K_a, K_b)`, where
    /// every summand `A_i ⊗ B_j` with `i + j = k` is present. Degree `k`
    /// lists the blocks `i = 0, 1, …, k`, and inside a block the element
    /// `a ⊗ b` sits at `a · dim B_j + b`. The differential is
    /// `d(a ⊗ b) = da ⊗ b + (−1)^{|a|} a ⊗ db`.
    pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(a.field, b.field));
        }
        let field = a.field;
        let top = a.max_degree().min(b.max_degree());
        let offsets: Vec<Vec<usize>> = (0..=top)
            .map(|k| {
                let mut off = Vec::with_capacity(k + 2);
                let mut acc = 0;
                for i in 0..=k {
                    off.push(acc);
                    acc += a.dim(i) * b.dim(k - i);
                }
                off.push(acc);
                off
            })
            .collect();
        let dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
        let mut diffs = Vec::with_capacity(top);
        for k in 1..=top {
            let mut cols: Vec<SparseVec> = Vec::with_capacity(dims[k]);
            for i in 0..=k {
                let j = k - i;
                let sign = if i % 2 == 0 { field.one() } else { -field.one() };
                for x in 0..a.dim(i) {
                    for y in 0..b.dim(j) {
                        let mut col = Vec::new();
                        if i >= 1 {
                            for (r, v) in a.differential(i).column(x) {
                                col.push((offsets[k - 1][i - 1] + r * b.dim(j) + y, v.clone()));
                            }
                        }
                        if j >= 1 {
                            for (r, v) in b.differential(j).column(y) {
                                col.push((offsets[k - 1][i] + x * b.dim(j - 1) + r, &sign * v));
                            }
                        }
                        cols.push(col);
                    }
                }
            }
            diffs.push(SparseMatrix::from_columns(dims[k - 1], field, cols)?);
        }
        ChainComplex::new(field, dims, diffs, Vec::new())
    }
}

/// Checks `tgt.d_k ∘ f_k = f_{k−1} ∘ src.d_k` for every degree where both
/// sides are defined; `maps[k]` is `f_k: src_k → tgt_k`.
pub fn is_chain_map(src: &ChainComplex, tgt: &ChainComplex, maps: &[SparseMatrix]) -> Result<bool> {
    for (k, f) in maps.iter().enumerate() {
        if f.cols() != src.dim(k) || f.rows() != tgt.dim(k) {
            return Err(Error::Shape(format!("chain map component {k} has the wrong shape")));
        }
    }
    let top = (maps.len().saturating_sub(1)).min(src.max_degree()).min(tgt.max_degree());
    for k in 1..=top {
        let left = tgt.differential(k).mul(&maps[k])?;
        let right = maps[k - 1].mul(src.differential(k))?;
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cycles(c: &ChainComplex, k: usize) -> SparseMatrix {
    if k == 0 {
        SparseMatrix::identity(c.dim(0), c.field())
    } else {
        kernel_basis(c.differential(k))
    }
}

fn boundaries(c: &ChainComplex, k: usize) -> SparseMatrix {
    if k < c.max_degree() {
        c.differential(k + 1).clone()
    } else {
        SparseMatrix::zeros(c.dim(k), 0, c.field())
    }
}

/// Rank of the map `H_k(src) → H_k(tgt)` induced by `f_k`.
pub fn induced_homology_rank(src: &ChainComplex, tgt: &ChainComplex, f_k: &SparseMatrix, k: usize) -> Result<usize> {
    let image = f_k.mul(&cycles(src, k))?;
    let b = boundaries(tgt, k);
    let stacked = SparseMatrix::hstack(tgt.dim(k), tgt.field(), &[&b, &image])?;
    Ok(rank(&stacked) - rank(&b))
}

/// Whether the endomorphism `f_k` induces the identity on `H_k(c)`.
pub fn induces_identity(c: &ChainComplex, f_k: &SparseMatrix, k: usize) -> Result<bool> {
    let id = SparseMatrix::identity(c.dim(k), c.field());
    let diff = f_k.sub(&id)?.mul(&cycles(c, k))?;
    let b = boundaries(c, k);
    let stacked = SparseMatrix::hstack(c.dim(k), c.field(), &[&b, &diff])?;
    Ok(rank(&stacked) == rank(&b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn exact_sequence_has_no_homology() {
        let c = ChainComplex::new(q(), vec![1, 1], vec![SparseMatrix::identity(1, q())], vec![]).unwrap();
        assert_eq!(c.homology_dimensions().unwrap(), vec![0, 0]);
    }

    #[test]
    fn zero_differentials_give_component_dims() {
        let c = ChainComplex::new(
            q(),
            vec![2, 3, 1],
            vec![SparseMatrix::zeros(2, 3, q()), SparseMatrix::zeros(3, 1, q())],
            vec![],
        )
        .unwrap();
        assert_eq!(c.homology_dimensions().unwrap(), vec![2, 3, 1]);
    }

    #[test]
    fn rejects_non_complexes_and_unvalidated_input() {
        let one = SparseMatrix::identity(1, q());
        let err = ChainComplex::new(q(), vec![1, 1, 1], vec![one.clone(), one.clone()], vec![]).unwrap_err();
        assert_eq!(err, Error::NotAComplex { degree: 1 });
        let raw = ChainComplex::unvalidated(q(), vec![1, 1], vec![one], vec![]);
        assert_eq!(raw.homology_dimensions(), Err(Error::Unvalidated));
        let bad_shape = ChainComplex::new(q(), vec![2, 1], vec![SparseMatrix::identity(1, q())], vec![]);
        assert!(matches!(bad_shape, Err(Error::Shape(_))));
    }

    #[test]
    fn tensor_of_circles() {
        // simplicial circle with two vertices and two edges: H = (1, 1)
        let d = SparseMatrix::from_rows_i64(q(), &[vec![-1, 1], vec![1, -1]]);
        let s1 = ChainComplex::new(q(), vec![2, 2], vec![d], vec![]).unwrap();
        let mut torus = ChainComplex::tensor(&s1, &s1).unwrap();
        assert_eq!(torus.dims(), &[4, 8]);
        assert_eq!(torus.homology_dimensions().unwrap()[0], 1);
        // extend the factors by an empty degree 2 to see the full torus
        let d1 = SparseMatrix::from_rows_i64(q(), &[vec![-1, 1], vec![1, -1]]);
        let s1 = ChainComplex::new(q(), vec![2, 2, 0], vec![d1, SparseMatrix::zeros(2, 0, q())], vec![]).unwrap();
        torus = ChainComplex::tensor(&s1, &s1).unwrap();
        assert_eq!(torus.homology_dimensions().unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn induced_maps() {
        let d = SparseMatrix::from_rows_i64(q(), &[vec![-1, 1], vec![1, -1]]);
        let s1 = ChainComplex::new(q(), vec![2, 2], vec![d], vec![]).unwrap();
        // swapping both vertices and both edges is a chain map (it commutes
        // with d) and is the identity on H_0
        let swap = SparseMatrix::from_rows_i64(q(), &[vec![0, 1], vec![1, 0]]);
        assert!(is_chain_map(&s1, &s1, &[swap.clone(), swap.clone()]).unwrap());
        assert!(induces_identity(&s1, &swap, 0).unwrap());
        assert_eq!(induced_homology_rank(&s1, &s1, &swap, 0).unwrap(), 1);
        let zero = SparseMatrix::zeros(2, 2, q());
        assert_eq!(induced_homology_rank(&s1, &s1, &zero, 0).unwrap(), 0);
    }
}
