//! Colimit and homotopy colimit of ψ over the decomposition poset.
//!
//! The homotopy colimit is realized on strict chains `x_0 < x_1 < … < x_m`
//! (finest first). Degree `m` is `⊕ ψ(x_0)` over chains of length `m`, and
//!
//! ```text
//! ∂(x̄, a) = (d_0 x̄, g(a)) + Σ_{i=1}^{m} (−1)^i (d_i x̄, a)
//! ```
//!
//! where `d_i` drops `x_i` and `g: ψ(x_0) → ψ(x_1)` is the refinement map.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::blobcomplex::build_blob_complex;
use crate::coefficients::CategoryPresentation;
use crate::error::{Error, Result};
use crate::fields::{psi_value, refinement_map, BoundaryCondition, PsiSpace};
use crate::linalg::{ChainComplex, SparseMatrix, SparseVec, Subspace};
use crate::manifold::{Chain, DecompositionPoset, OneManifold};

/// The skein module `colim ψ` with the projections `π_x: ψ(x) → colim`.
#[derive(Clone, Debug)]
pub struct ColimitResult {
    pub dimension: usize,
    /// Indexed like [`DecompositionPoset::objects`].
    pub projections: Vec<SparseMatrix>,
}

struct PsiTable {
    poset: DecompositionPoset,
    spaces: Vec<PsiSpace>,
}

impl PsiTable {
    fn new(w: &OneManifold, c: &CategoryPresentation, boundary: &BoundaryCondition) -> Result<PsiTable> {
        let poset = DecompositionPoset::new(w);
        let spaces = poset
            .objects()
            .par_iter()
            .map(|x| psi_value(w, x, c, boundary))
            .collect::<Result<Vec<_>>>()?;
        Ok(PsiTable { poset, spaces })
    }

    fn maps(&self, pairs: &[(usize, usize)], c: &CategoryPresentation) -> Result<HashMap<(usize, usize), SparseMatrix>> {
        pairs
            .par_iter()
            .map(|&(x, y)| Ok(((x, y), refinement_map(&self.spaces[x], &self.spaces[y], c)?)))
            .collect()
    }
}

/// `(⊕_x ψ(x)) / span{ι_x(a) − ι_y(g(a))}` over covering pairs `x < y`.
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::fields::BoundaryCondition;
/// use blobcx::hocolim::ordinary_colimit;
/// let w = "circle:3".parse().unwrap();
/// let a = builtin("matrix:2").unwrap();
/// assert_eq!(ordinary_colimit(&w, &a, &BoundaryCondition::free()).unwrap().dimension, 1);
/// ```
pub fn ordinary_colimit(w: &OneManifold, c: &CategoryPresentation, boundary: &BoundaryCondition) -> Result<ColimitResult> {
    let table = PsiTable::new(w, c, boundary)?;
    let field = c.field();
    let mut offsets = Vec::with_capacity(table.spaces.len() + 1);
    offsets.push(0);
    for s in &table.spaces {
        offsets.push(offsets.last().unwrap() + s.dim());
    }
    let ambient = *offsets.last().unwrap();
    let pairs = table.poset.covering_pairs();
    let maps = table.maps(&pairs, c)?;
    let minus = -field.one();
    let mut relations = Vec::new();
    for (x, y) in &pairs {
        let g = &maps[&(*x, *y)];
        for a in 0..g.cols() {
            let mut v: Vec<_> = g.column(a).iter().map(|(r, s)| (offsets[*y] + r, s * &minus)).collect();
            v.push((offsets[*x] + a, field.one()));
            relations.push(crate::linalg::normalize(v));
        }
    }
    let span = Subspace::column_space(&SparseMatrix::from_columns(ambient, field, relations)?);
    let mut slot = vec![None; ambient];
    let mut is_pivot = vec![false; ambient];
    for &p in span.pivots() {
        is_pivot[p] = true;
    }
    let mut dimension = 0;
    for (r, s) in slot.iter_mut().enumerate() {
        if !is_pivot[r] {
            *s = Some(dimension);
            dimension += 1;
        }
    }
    // reduce ι_x(a) against the relation basis; what is left sits on free rows
    let projections = (0..table.spaces.len())
        .into_par_iter()
        .map(|x| {
            let cols: Vec<SparseVec> = (0..table.spaces[x].dim())
                .map(|a| {
                    let row = offsets[x] + a;
                    let mut v: SparseVec = vec![(row, field.one())];
                    if is_pivot[row] {
                        let j = span.pivots().iter().position(|&p| p == row).unwrap();
                        v = crate::linalg::axpy(&v, &minus, span.basis().column(j));
                    }
                    v.into_iter().filter_map(|(r, s)| slot[r].map(|i| (i, s))).collect()
                })
                .collect();
            SparseMatrix::from_columns(dimension, field, cols)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ColimitResult { dimension, projections })
}

/// The chain-level homotopy colimit built through degree `K`.
#[derive(Clone, Debug)]
pub struct HocolimComplex {
    poset: DecompositionPoset,
    chains: Vec<Vec<Chain>>,
    /// `offsets[m][j]`: first basis index of chain `j` in degree `m`.
    offsets: Vec<Vec<usize>>,
    complex: ChainComplex,
}

impl HocolimComplex {
    pub fn poset(&self) -> &DecompositionPoset {
        &self.poset
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn chains(&self, m: usize) -> &[Chain] {
        &self.chains[m]
    }

    /// The chain and ψ(x_0) basis index of basis element `i` in degree `m`.
    pub fn generator(&self, m: usize, i: usize) -> (&Chain, usize) {
        let offs = &self.offsets[m];
        let j = offs.partition_point(|&o| o <= i) - 1;
        (&self.chains[m][j], i - offs[j])
    }

    /// Homology in degrees `0..K`.
    pub fn homology(&self) -> Result<Vec<usize>> {
        let mut h = self.complex.homology_dimensions()?;
        h.pop();
        Ok(h)
    }
}

/// Chain counts times `dim ψ(x_0)`, per degree, without building anything.
pub fn estimate_hocolim_size(w: &OneManifold, c: &CategoryPresentation, max_degree: usize, boundary: &BoundaryCondition) -> Result<Vec<usize>> {
    let table = PsiTable::new(w, c, boundary)?;
    // chains starting at x with m further elements
    let n = table.poset.len();
    let mut from = vec![1usize; n];
    let mut out = Vec::with_capacity(max_degree + 1);
    for _ in 0..=max_degree {
        out.push((0..n).map(|x| from[x].saturating_mul(table.spaces[x].dim())).fold(0usize, usize::saturating_add));
        from = (0..n)
            .map(|x| table.poset.strictly_coarser(x).iter().map(|&y| from[y]).fold(0usize, usize::saturating_add))
            .collect();
    }
    Ok(out)
}

/// Builds the homotopy colimit complex in degrees `0..=K` and checks
/// `∂∘∂ = 0`.
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::fields::BoundaryCondition;
/// use blobcx::hocolim::hocolim_complex;
/// let w = "circle:3".parse().unwrap();
/// let h = hocolim_complex(&w, &builtin("ground").unwrap(), 2, &BoundaryCondition::free()).unwrap();
/// assert_eq!(h.homology().unwrap(), [1, 0]);
/// ```
pub fn hocolim_complex(w: &OneManifold, c: &CategoryPresentation, max_degree: usize, boundary: &BoundaryCondition) -> Result<HocolimComplex> {
    let table = PsiTable::new(w, c, boundary)?;
    let field = c.field();
    let chains: Vec<Vec<Chain>> = (0..=max_degree).map(|m| table.poset.chains_of_length(m)).collect();
    let offsets: Vec<Vec<usize>> = chains
        .iter()
        .map(|cs| {
            let mut acc = 0;
            cs.iter()
                .map(|ch| {
                    let o = acc;
                    acc += table.spaces[ch[0]].dim();
                    o
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = chains
        .iter()
        .zip(&offsets)
        .map(|(cs, os)| cs.last().map_or(0, |ch| os.last().unwrap() + table.spaces[ch[0]].dim()))
        .collect();
    let mut pairs: Vec<(usize, usize)> = chains.iter().skip(1).flatten().map(|ch| (ch[0], ch[1])).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let maps = table.maps(&pairs, c)?;
    let mut differentials = Vec::with_capacity(max_degree);
    for m in 1..=max_degree {
        let lower: HashMap<&[usize], usize> = chains[m - 1].iter().zip(&offsets[m - 1]).map(|(ch, &o)| (ch.as_slice(), o)).collect();
        let cols: Vec<Vec<SparseVec>> = chains[m]
            .par_iter()
            .map(|ch| {
                let g = &maps[&(ch[0], ch[1])];
                let head = lower[&ch[1..]];
                let faces: Vec<(usize, bool)> = (1..=m)
                    .map(|i| {
                        let mut face = ch.clone();
                        face.remove(i);
                        (lower[face.as_slice()], i % 2 == 1)
                    })
                    .collect();
                (0..table.spaces[ch[0]].dim())
                    .map(|a| {
                        let mut v: Vec<_> = g.column(a).iter().map(|(r, s)| (head + r, s.clone())).collect();
                        for &(o, negative) in &faces {
                            v.push((o + a, if negative { -field.one() } else { field.one() }));
                        }
                        crate::linalg::normalize(v)
                    })
                    .collect()
            })
            .collect();
        differentials.push(SparseMatrix::from_columns(dims[m - 1], field, cols.into_iter().flatten().collect())?);
    }
    let complex = ChainComplex::new(field, dims, differentials, Vec::new())?;
    Ok(HocolimComplex {
        poset: table.poset,
        chains,
        offsets,
        complex,
    })
}

/// Which chain-level model to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Blob,
    Hocolim,
}

/// Homology dimensions in degrees `0..=K` for one model, building through
/// degree `K + 1`.
pub fn model_homology(model: Model, w: &OneManifold, c: &CategoryPresentation, max_degree: usize, boundary: &BoundaryCondition) -> Result<Vec<usize>> {
    match model {
        Model::Blob => build_blob_complex(w, c, max_degree + 1, boundary)?.homology(),
        Model::Hocolim => hocolim_complex(w, c, max_degree + 1, boundary)?.homology(),
    }
}

/// Blob and hocolim homology side by side.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModelComparison {
    pub blob: Vec<usize>,
    pub hocolim: Vec<usize>,
    pub equal: Vec<bool>,
}

impl ModelComparison {
    pub fn all_equal(&self) -> bool {
        self.equal.iter().all(|&e| e)
    }
}

/// Homology of both models in degrees `0..=K`.
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::hocolim::compare_models;
/// let w = "circle:3".parse().unwrap();
/// let r = compare_models(&w, &builtin("trunc-poly:2").unwrap(), 0).unwrap();
/// assert_eq!((r.blob[0], r.hocolim[0]), (2, 2));
/// ```
pub fn compare_models(w: &OneManifold, c: &CategoryPresentation, max_degree: usize) -> Result<ModelComparison> {
    let free = BoundaryCondition::free();
    let blob = model_homology(Model::Blob, w, c, max_degree, &free)?;
    let hocolim = model_homology(Model::Hocolim, w, c, max_degree, &free)?;
    let equal = blob.iter().zip(&hocolim).map(|(a, b)| a == b).collect();
    Ok(ModelComparison { blob, hocolim, equal })
}

/// Homology of `circle:N` for each `N` of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SweepRow {
    pub points: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SweepTable {
    pub model: Model,
    pub rows: Vec<SweepRow>,
    /// Per degree: the two largest `N` agree.
    pub converged: Vec<bool>,
    /// Per degree: the value at the largest `N`.
    pub last: Vec<usize>,
    /// Per degree: the column never increases, or never decreases.
    pub monotone: Vec<bool>,
}

/// Computes homology of `circle:N` in degrees `0..=K` for every `N` in
/// `points` and flags, per degree, whether the last two rows agree.
pub fn stabilization_sweep(points: &[usize], c: &CategoryPresentation, max_degree: usize, model: Model) -> Result<SweepTable> {
    if points.is_empty() || points.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Manifold("sweep needs a nonempty ascending range of point counts".into()));
    }
    let free = BoundaryCondition::free();
    let rows = points
        .iter()
        .map(|&n| {
            let w = OneManifold::circle(n)?;
            Ok(SweepRow {
                points: n,
                dims: model_homology(model, &w, c, max_degree, &free)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let column = |k: usize| rows.iter().map(move |r| r.dims[k]);
    let converged = (0..=max_degree)
        .map(|k| {
            let col: Vec<usize> = column(k).collect();
            col.len() >= 2 && col[col.len() - 1] == col[col.len() - 2]
        })
        .collect();
    let monotone = (0..=max_degree)
        .map(|k| {
            let col: Vec<usize> = column(k).collect();
            col.windows(2).all(|p| p[0] <= p[1]) || col.windows(2).all(|p| p[0] >= p[1])
        })
        .collect();
    let last = rows.last().unwrap().dims.clone();
    Ok(SweepTable {
        model,
        rows,
        converged,
        last,
        monotone,
    })
}
