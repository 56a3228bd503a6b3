//! The blob complex `B_*(W; C)` on a finite carrier.
//!
//! Degree `k` is spanned by `k`-blob diagrams: a configuration of `k`
//! pairwise nested-or-disjoint arcs together with a field whose restriction
//! to every innermost arc is null. For each configuration the admissible
//! fields form a subspace of the field space; it is a tensor product over
//! the segments cut out by the innermost arcs, with a null space on each
//! innermost arc and all words elsewhere. The differential forgets one blob
//! at a time with alternating signs in canonical arc order.
//!
//! Arcs covering a single point have a zero null space, so configurations
//! containing them are left out.

mod maps;

use std::collections::HashMap;

use rayon::prelude::*;

pub use maps::{
    contracting_homotopy, disjoint_union_iso, gluing_chain_map, homeomorphism_action, verify_homotopy, Gluing, Homotopy,
};

use crate::coefficients::{mixed_radix, BallSpace, CategoryPresentation, ObjectId};
use crate::error::{Error, Result};
use crate::fields::{field_space, kron_components, BoundaryCondition, ComponentLabel, FieldSpace};
use crate::linalg::{ChainComplex, FieldSpec, Scalar, SparseMatrix, SparseVec, Subspace};
use crate::manifold::{arcs, configs_from_arcs, Arc, BlobConfig, CircleArcs, ComponentKind, OneManifold};

/// The fields allowed on one blob configuration.
#[derive(Clone, Debug)]
pub struct GeneratorBlock {
    pub config: BlobConfig,
    /// Basis over the field space, with pivot rows.
    pub space: Subspace,
    /// Position of the first basis element in its degree.
    pub offset: usize,
    pivot_slots: HashMap<usize, usize>,
}

impl GeneratorBlock {
    fn new(config: BlobConfig, space: Subspace) -> GeneratorBlock {
        let pivot_slots = space.pivot_index();
        GeneratorBlock {
            config,
            space,
            offset: 0,
            pivot_slots,
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Coordinates of a field vector in this block's basis.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        self.space.coordinates_with(v, |r| self.pivot_slots.get(&r).copied())
    }
}

#[derive(Clone, Debug, Default)]
struct Degree {
    blocks: Vec<GeneratorBlock>,
    index: HashMap<BlobConfig, usize>,
    dim: usize,
}

/// A blob complex built through degree `K`.
#[derive(Clone, Debug)]
pub struct BlobComplex {
    manifold: OneManifold,
    coeff: CategoryPresentation,
    boundary: BoundaryCondition,
    fields: FieldSpace,
    degrees: Vec<Degree>,
    complex: ChainComplex,
}

impl BlobComplex {
    pub fn manifold(&self) -> &OneManifold {
        &self.manifold
    }

    pub fn coefficients(&self) -> &CategoryPresentation {
        &self.coeff
    }

    pub fn boundary(&self) -> &BoundaryCondition {
        &self.boundary
    }

    pub fn fields(&self) -> &FieldSpace {
        &self.fields
    }

    pub fn field(&self) -> FieldSpec {
        self.coeff.field()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn blocks(&self, k: usize) -> &[GeneratorBlock] {
        &self.degrees[k].blocks
    }

    pub fn block(&self, k: usize, config: &BlobConfig) -> Option<&GeneratorBlock> {
        let d = self.degrees.get(k)?;
        d.index.get(config).map(|&i| &d.blocks[i])
    }

    /// The configuration and block column of basis element `i` in degree `k`.
    pub fn generator(&self, k: usize, i: usize) -> (&BlobConfig, usize) {
        let blocks = &self.degrees[k].blocks;
        let b = blocks.partition_point(|b| b.offset <= i) - 1;
        let mut b = b;
        while blocks[b].dim() == 0 || i - blocks[b].offset >= blocks[b].dim() {
            b += 1;
        }
        (&blocks[b].config, i - blocks[b].offset)
    }

    /// Coordinates, in the degree-`k` basis, of the field vector `v` on
    /// `config`. `None` when `v` is not an admissible field there.
    pub fn coordinates(&self, k: usize, config: &BlobConfig, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        let b = self.block(k, config)?;
        let c = b.coordinates(v)?;
        Some(c.into_iter().map(|(j, x)| (j + b.offset, x)).collect())
    }

    /// Homology in degrees `0..K`. Degree `K` is left out because `d_{K+1}`
    /// was not built.
    pub fn homology(&self) -> Result<Vec<usize>> {
        let mut h = self.complex.homology_dimensions()?;
        h.pop();
        Ok(h)
    }
}

/// Number of configurations times the field-space dimension, per degree:
/// an upper bound on the size of each chain group.
pub fn estimate_blob_size(w: &OneManifold, c: &CategoryPresentation, max_degree: usize, boundary: &BoundaryCondition) -> Result<Vec<usize>> {
    let fields = field_space(w, c, boundary)?;
    let candidates = arcs(w, CircleArcs::Wrapping, 2);
    Ok((0..=max_degree)
        .map(|k| configs_from_arcs(w, &candidates, k).len().saturating_mul(fields.dim()))
        .collect())
}

struct Builder<'a> {
    w: &'a OneManifold,
    c: &'a CategoryPresentation,
    boundary: &'a BoundaryCondition,
    fields: &'a FieldSpace,
    balls: HashMap<(ObjectId, ObjectId, usize), BallSpace>,
}

impl Builder<'_> {
    fn ball(&self, src: ObjectId, tgt: ObjectId, len: usize) -> &BallSpace {
        &self.balls[&(src, tgt, len)]
    }

    /// Basis and pivots of the admissible fields on one component.
    fn component_space(&self, comp: usize, inner: &[Arc]) -> (Vec<SparseVec>, Vec<usize>) {
        let space = self.fields.component(comp);
        let field = self.c.field();
        if inner.is_empty() {
            let cols = (0..space.dim()).map(|i| vec![(i, field.one())]).collect();
            return (cols, (0..space.dim()).collect());
        }
        let cw = self.w.component(comp);
        let n = cw.points;
        let mut ends: Vec<usize> = inner.iter().flat_map(|a| [a.start, a.end_gap(self.w)]).collect();
        if cw.kind == ComponentKind::Interval {
            ends.extend([0, n]);
        }
        ends.sort_unstable();
        ends.dedup();
        let segments: Vec<(usize, usize, bool)> = match cw.kind {
            ComponentKind::Interval => ends.windows(2).map(|p| (p[0], p[1] - p[0])).collect::<Vec<_>>(),
            ComponentKind::Circle => (0..ends.len())
                .map(|i| {
                    let (s, t) = (ends[i], ends[(i + 1) % ends.len()]);
                    (s, if t > s { t - s } else { t + n - s })
                })
                .collect(),
        }
        .into_iter()
        .map(|(s, len)| (s, len, inner.iter().any(|a| a.start == s && a.len == len)))
        .collect();
        let fixed = self.boundary.get(comp);
        let mut cols = Vec::new();
        let mut pivots = Vec::new();
        for labels in mixed_radix(&vec![self.c.object_count(); ends.len()]) {
            let label_at = |g: usize| labels[ends.iter().position(|&e| e == g % cw.gaps()).unwrap()];
            if let Some((a, b)) = fixed {
                if label_at(0) != a || label_at(n) != b {
                    continue;
                }
            }
            // per segment: (words, basis vectors over words, pivot word per vector)
            let mut factors: Vec<(&BallSpace, Vec<(SparseVec, usize)>)> = Vec::with_capacity(segments.len());
            for &(s, len, is_blob) in &segments {
                let ball = self.ball(label_at(s), label_at(s + len), len);
                let vecs: Vec<(SparseVec, usize)> = if is_blob {
                    ball.null
                        .basis()
                        .columns()
                        .iter()
                        .cloned()
                        .zip(ball.null.pivots().iter().copied())
                        .collect()
                } else {
                    (0..ball.words.len()).map(|i| (vec![(i, field.one())], i)).collect()
                };
                factors.push((ball, vecs));
            }
            if factors.iter().any(|(_, v)| v.is_empty()) {
                continue;
            }
            let radices: Vec<usize> = factors.iter().map(|(_, v)| v.len()).collect();
            for pick in mixed_radix(&radices) {
                let template = ComponentLabel {
                    objects: vec![usize::MAX; space.gaps().len()],
                    morphisms: vec![usize::MAX; space.pieces()],
                };
                let place = |t: &mut ComponentLabel, seg: usize, word: usize| {
                    let (s, len, _) = segments[seg];
                    let bw = &factors[seg].0.words[word];
                    for i in 0..=len {
                        t.objects[(s + i) % cw.gaps()] = bw.objects[i];
                    }
                    for i in 0..len {
                        t.morphisms[(s + i) % n] = bw.morphisms[i];
                    }
                };
                let mut pivot_label = template.clone();
                for (seg, &p) in pick.iter().enumerate() {
                    place(&mut pivot_label, seg, factors[seg].1[p].1);
                }
                // expand the tensor product of the chosen segment vectors
                let mut terms: Vec<(ComponentLabel, Scalar)> = vec![(template.clone(), field.one())];
                for (seg, &p) in pick.iter().enumerate() {
                    let v = &factors[seg].1[p].0;
                    let mut next = Vec::with_capacity(terms.len() * v.len());
                    for (t, x) in &terms {
                        for (word, y) in v {
                            let mut t = t.clone();
                            place(&mut t, seg, *word);
                            next.push((t, x * y));
                        }
                    }
                    terms = next;
                }
                let col: Vec<(usize, Scalar)> = terms
                    .into_iter()
                    .map(|(t, x)| (space.index(&t).expect("segment words are in nonzero sectors"), x))
                    .collect();
                cols.push(crate::linalg::normalize(col));
                pivots.push(space.index(&pivot_label).expect("pivot words are in nonzero sectors"));
            }
        }
        (cols, pivots)
    }

    fn generator_space(&self, config: &BlobConfig) -> Subspace {
        let inner = config.innermost(self.w);
        let field = self.c.field();
        let per: Vec<(Vec<SparseVec>, Vec<usize>)> = (0..self.w.components().len())
            .map(|comp| {
                let mine: Vec<Arc> = inner.iter().filter(|a| a.component == comp).copied().collect();
                self.component_space(comp, &mine)
            })
            .collect();
        let radices: Vec<usize> = per.iter().map(|(c, _)| c.len()).collect();
        let mut cols = Vec::new();
        let mut pivots = Vec::new();
        for pick in mixed_radix(&radices) {
            let parts: Vec<SparseVec> = pick.iter().enumerate().map(|(i, &j)| per[i].0[j].clone()).collect();
            cols.push(kron_components(self.fields, &parts, field));
            let pivot: Vec<usize> = pick.iter().enumerate().map(|(i, &j)| per[i].1[j]).collect();
            pivots.push(self.fields.combine(&pivot));
        }
        let basis = SparseMatrix::from_columns(self.fields.dim(), field, cols).expect("generator columns lie in the field space");
        Subspace::from_pivoted(basis, pivots)
    }
}

/// Builds `B_*(W; C)` in degrees `0..=max_degree`.
///
/// ```
/// use blobcx::blobcomplex::build_blob_complex;
/// use blobcx::coefficients::builtin;
/// use blobcx::fields::BoundaryCondition;
/// use blobcx::manifold::OneManifold;
/// let w = OneManifold::circle(3).unwrap();
/// let a = builtin("trunc-poly:2").unwrap();
/// let b = build_blob_complex(&w, &a, 2, &BoundaryCondition::free()).unwrap();
/// assert_eq!(b.homology().unwrap(), vec![2, 1]);
/// ```
pub fn build_blob_complex(w: &OneManifold, c: &CategoryPresentation, max_degree: usize, boundary: &BoundaryCondition) -> Result<BlobComplex> {
    let fields = field_space(w, c, boundary)?;
    let max_points = w.components().iter().map(|c| c.points).max().unwrap_or(0);
    let n = c.object_count();
    let keys: Vec<(ObjectId, ObjectId, usize)> = (1..=max_points)
        .flat_map(|len| (0..n).flat_map(move |s| (0..n).map(move |t| (s, t, len))))
        .collect();
    let balls: HashMap<_, _> = keys.par_iter().map(|&(s, t, len)| ((s, t, len), c.ball_space(s, t, len))).collect();
    let builder = Builder {
        w,
        c,
        boundary,
        fields: &fields,
        balls,
    };
    let candidates = arcs(w, CircleArcs::Wrapping, 2);
    let mut degrees = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        let configs = configs_from_arcs(w, &candidates, k);
        let mut blocks: Vec<GeneratorBlock> = configs
            .into_par_iter()
            .map(|cfg| {
                let space = builder.generator_space(&cfg);
                GeneratorBlock::new(cfg, space)
            })
            .collect();
        let mut offset = 0;
        for b in &mut blocks {
            b.offset = offset;
            offset += b.dim();
        }
        let index = blocks.iter().enumerate().map(|(i, b)| (b.config.clone(), i)).collect();
        degrees.push(Degree { blocks, index, dim: offset });
    }
    let field = c.field();
    let mut differentials = Vec::with_capacity(max_degree);
    for k in 1..=max_degree {
        let (src, tgt) = (&degrees[k], &degrees[k - 1]);
        let cols: Vec<Vec<SparseVec>> = src
            .blocks
            .par_iter()
            .map(|b| {
                let targets: Vec<&GeneratorBlock> = (0..k)
                    .map(|i| {
                        let forgotten = b.config.forget(i);
                        tgt.index
                            .get(&forgotten)
                            .map(|&j| &tgt.blocks[j])
                            .ok_or_else(|| Error::Internal(format!("{forgotten} missing from degree {}", k - 1)))
                    })
                    .collect::<Result<_>>()?;
                b.space
                    .basis()
                    .columns()
                    .iter()
                    .map(|v| {
                        let mut col = Vec::new();
                        for (i, t) in targets.iter().enumerate() {
                            let coords = t.coordinates(v).ok_or_else(|| {
                                Error::Internal(format!("forgetting blob {i} of {} leaves the generators of {}", b.config, t.config))
                            })?;
                            let neg = i % 2 == 1;
                            col.extend(coords.into_iter().map(|(j, x)| (t.offset + j, if neg { -x } else { x })));
                        }
                        Ok(col)
                    })
                    .collect::<Result<Vec<SparseVec>>>()
            })
            .collect::<Result<_>>()?;
        differentials.push(SparseMatrix::from_columns(tgt.dim, field, cols.into_iter().flatten().collect())?);
    }
    let dims = degrees.iter().map(|d| d.dim).collect();
    let complex = ChainComplex::new(field, dims, differentials, Vec::new())?;
    Ok(BlobComplex {
        manifold: w.clone(),
        coeff: c.clone(),
        boundary: boundary.clone(),
        fields,
        degrees,
        complex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::builtin;
    use crate::fields::is_null_on_arc;

    fn m(s: &str) -> OneManifold {
        s.parse().unwrap()
    }

    fn build(lit: &str, name: &str, k: usize) -> BlobComplex {
        build_blob_complex(&m(lit), &builtin(name).unwrap(), k, &BoundaryCondition::free()).unwrap()
    }

    #[test]
    fn ground_is_trivial() {
        let b = build("circle:3", "ground", 3);
        assert_eq!(b.complex().dims(), [1, 0, 0, 0]);
        assert_eq!(b.homology().unwrap(), [1, 0, 0]);
    }

    #[test]
    fn generators_are_null_on_innermost_arcs() {
        for (lit, name) in [("circle:3", "trunc-poly:2"), ("interval:3", "matrix:2"), ("circle:2+interval:2", "group:Z/2")] {
            let b = build(lit, name, 2);
            let w = b.manifold().clone();
            for k in 0..=2 {
                for blk in b.blocks(k) {
                    for v in blk.space.basis().columns() {
                        for a in blk.config.innermost(&w) {
                            assert!(is_null_on_arc(b.fields(), b.coefficients(), v, &a));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generator_dimensions_match_a_direct_kernel() {
        // oracle: admissible fields as the intersection of the kernels of the
        // evaluation maps on the innermost arcs, computed on the full field space
        let a = builtin("trunc-poly:2").unwrap();
        let w = m("circle:4");
        let b = build_blob_complex(&w, &a, 2, &BoundaryCondition::free()).unwrap();
        for k in 0..=2 {
            for blk in b.blocks(k) {
                let fs = b.fields();
                let mut rows: Vec<SparseVec> = Vec::new();
                for arc in blk.config.innermost(&w) {
                    let mut by_outside: HashMap<Vec<ComponentLabel>, usize> = HashMap::new();
                    let mut entries: Vec<Vec<(usize, Scalar)>> = Vec::new();
                    for i in 0..fs.dim() {
                        for e in crate::fields::evaluate_on_arc(fs, &a, &[(i, a.field().one())], &arc) {
                            for (kk, x) in e.value {
                                let key = by_outside.len();
                                let r = *by_outside.entry(e.outside.clone()).or_insert(key);
                                let row = r * 2 + kk;
                                if entries.len() <= row {
                                    entries.resize(row + 1, Vec::new());
                                }
                                entries[row].push((i, x));
                            }
                        }
                    }
                    rows.extend(entries);
                }
                let ev = SparseMatrix::from_columns(fs.dim(), a.field(), rows).unwrap().transpose();
                let expected = fs.dim() - crate::linalg::rank(&ev);
                assert_eq!(blk.dim(), expected, "{}", blk.config);
            }
        }
    }

    #[test]
    fn squares_to_zero_for_builtins() {
        for name in ["ground", "trunc-poly:2", "group:Z/2", "matrix:2", "matrix:2@F3"] {
            for lit in ["interval:3", "circle:3"] {
                build(lit, name, 3);
            }
        }
    }

    #[test]
    fn interval_and_circle_homology() {
        assert_eq!(build("interval:3", "trunc-poly:2", 3).homology().unwrap(), [2, 0, 0]);
        assert_eq!(build("interval:2", "matrix:2", 2).homology().unwrap(), [4, 0]);
        assert_eq!(build("circle:3", "matrix:2", 2).homology().unwrap(), [1, 0]);
        assert_eq!(build("circle:3", "group:Z/2", 2).homology().unwrap(), [2, 0]);
        assert_eq!(build("circle:2", "trunc-poly:2", 2).homology().unwrap(), [2, 2]);
    }

    #[test]
    fn multi_object_interval() {
        let two = crate::coefficients::tests::two_object();
        let b = build_blob_complex(&m("interval:3"), &two, 2, &BoundaryCondition::free()).unwrap();
        assert_eq!(b.homology().unwrap(), [3, 0]);
        let fixed = BoundaryCondition::free().fix(0, 0, 1);
        let b = build_blob_complex(&m("interval:3"), &two, 2, &fixed).unwrap();
        assert_eq!(b.homology().unwrap(), [1, 0]);
        let b = build_blob_complex(&m("circle:3"), &two, 2, &BoundaryCondition::free()).unwrap();
        assert_eq!(b.homology().unwrap(), [2, 0]);
    }

    #[test]
    fn generator_lookup() {
        let b = build("circle:3", "trunc-poly:2", 2);
        for k in 0..=2 {
            for i in 0..b.complex().dim(k) {
                let (cfg, j) = b.generator(k, i);
                let blk = b.block(k, cfg).unwrap();
                assert_eq!(blk.offset + j, i);
            }
        }
    }
}
