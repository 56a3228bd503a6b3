//! Fields (string diagrams) on a carrier and the functor ψ on decompositions.
//!
//! A decomposition cuts each component at some gaps. A basis element of
//! ψ(x) labels every cut gap by an object (on an interval also the two
//! boundary gaps) and every piece by a basis morphism from the object at its
//! start to the object at its end. Fields are ψ of the finest decomposition:
//! every gap is labelled and every marked point carries a morphism.
//!
//! Bases are enumerated component by component. Within a component the
//! order is by gap labelling (lexicographic, zero-dimensional labellings
//! skipped), then by morphism word with the last piece varying fastest.
//! Across components the first component is most significant.

use std::collections::{BTreeMap, HashMap};

use crate::coefficients::{mixed_radix, CategoryPresentation, ObjectId};
use crate::error::{Error, Result};
use crate::linalg::{normalize, FieldSpec, Scalar, SparseMatrix, SparseVec};
use crate::manifold::{Arc, ComponentKind, Decomposition, OneManifold};

/// Fixed objects at the two ends of interval components. `None` leaves
/// both ends free (summed over).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BoundaryCondition {
    fixed: Vec<Option<(ObjectId, ObjectId)>>,
}

impl BoundaryCondition {
    pub fn free() -> BoundaryCondition {
        BoundaryCondition::default()
    }

    /// Fixes the start and end objects of interval component `component`.
    pub fn fix(mut self, component: usize, start: ObjectId, end: ObjectId) -> BoundaryCondition {
        if self.fixed.len() <= component {
            self.fixed.resize(component + 1, None);
        }
        self.fixed[component] = Some((start, end));
        self
    }

    pub fn get(&self, component: usize) -> Option<(ObjectId, ObjectId)> {
        self.fixed.get(component).copied().flatten()
    }

    pub fn is_free(&self) -> bool {
        self.fixed.iter().all(Option::is_none)
    }

    pub(crate) fn check(&self, w: &OneManifold, c: &CategoryPresentation) -> Result<()> {
        for (i, f) in self.fixed.iter().enumerate() {
            if let Some((a, b)) = f {
                match w.components().get(i) {
                    Some(comp) if comp.kind == ComponentKind::Interval => {}
                    _ => return Err(Error::Manifold(format!("boundary condition on component {i}, which is not an interval"))),
                }
                if *a >= c.object_count() || *b >= c.object_count() {
                    return Err(Error::InvalidPath("boundary object out of range".into()));
                }
            }
        }
        Ok(())
    }
}

/// Labels on one component: objects at the cut gaps and one morphism per piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentLabel {
    pub objects: Vec<ObjectId>,
    pub morphisms: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Sector {
    objects: Vec<ObjectId>,
    radices: Vec<usize>,
    offset: usize,
}

/// The labelled pieces of one component.
#[derive(Clone, Debug)]
pub struct ComponentSpace {
    cyclic: bool,
    /// The gaps carrying object labels, in order along the component.
    gaps: Vec<usize>,
    sectors: Vec<Sector>,
    sector_index: HashMap<Vec<ObjectId>, usize>,
    dim: usize,
}

impl ComponentSpace {
    fn new(c: &CategoryPresentation, cyclic: bool, gaps: Vec<usize>, fixed: Option<(ObjectId, ObjectId)>) -> ComponentSpace {
        let k = gaps.len();
        let pieces = if cyclic { k } else { k - 1 };
        let mut sectors = Vec::new();
        let mut offset = 0;
        for objects in mixed_radix(&vec![c.object_count(); k]) {
            if let Some((a, b)) = fixed {
                if objects[0] != a || objects[k - 1] != b {
                    continue;
                }
            }
            let radices: Vec<usize> = (0..pieces).map(|i| c.hom_dim(objects[i], objects[(i + 1) % k])).collect();
            let dim: usize = radices.iter().product();
            if dim == 0 {
                continue;
            }
            sectors.push(Sector { objects, radices, offset });
            offset += dim;
        }
        let sector_index = sectors.iter().enumerate().map(|(i, s)| (s.objects.clone(), i)).collect();
        ComponentSpace {
            cyclic,
            gaps,
            sectors,
            sector_index,
            dim: offset,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn pieces(&self) -> usize {
        if self.cyclic {
            self.gaps.len()
        } else {
            self.gaps.len() - 1
        }
    }

    /// Labels at the ends of piece `i`, as positions in [`Self::gaps`].
    pub fn piece_ends(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.gaps.len())
    }

    pub fn index(&self, label: &ComponentLabel) -> Option<usize> {
        let s = &self.sectors[*self.sector_index.get(&label.objects)?];
        let mut idx = 0;
        for (m, r) in label.morphisms.iter().zip(&s.radices) {
            if m >= r {
                return None;
            }
            idx = idx * r + m;
        }
        Some(s.offset + idx)
    }

    pub fn label(&self, index: usize) -> ComponentLabel {
        let si = self.sectors.partition_point(|s| s.offset <= index) - 1;
        let s = &self.sectors[si];
        let mut rest = index - s.offset;
        let mut morphisms = vec![0; s.radices.len()];
        for i in (0..s.radices.len()).rev() {
            morphisms[i] = rest % s.radices[i];
            rest /= s.radices[i];
        }
        ComponentLabel {
            objects: s.objects.clone(),
            morphisms,
        }
    }

    /// Object labellings with nonzero dimension, in basis order.
    pub fn sectors(&self) -> impl Iterator<Item = &[ObjectId]> {
        self.sectors.iter().map(|s| s.objects.as_slice())
    }
}

/// ψ(x) for a decomposition `x`, or the field space when `x` is finest.
#[derive(Clone, Debug)]
pub struct PsiSpace {
    manifold: OneManifold,
    decomposition: Decomposition,
    components: Vec<ComponentSpace>,
    strides: Vec<usize>,
    dim: usize,
}

/// Fields on the carrier: ψ of the finest decomposition.
pub type FieldSpace = PsiSpace;

/// A basis element of a [`PsiSpace`], one label per component.
pub type FieldBasisElement = Vec<ComponentLabel>;

impl PsiSpace {
    pub fn manifold(&self) -> &OneManifold {
        &self.manifold
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, i: usize) -> &ComponentSpace {
        &self.components[i]
    }

    pub fn components(&self) -> &[ComponentSpace] {
        &self.components
    }

    /// Index of the element built from per-component indices.
    pub fn combine(&self, per_component: &[usize]) -> usize {
        per_component.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn split(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.components.len()];
        for (i, s) in self.strides.iter().enumerate() {
            out[i] = index / s;
            index %= s;
        }
        out
    }

    pub fn index(&self, e: &[ComponentLabel]) -> Option<usize> {
        let mut idx = 0;
        for ((c, l), s) in self.components.iter().zip(e).zip(&self.strides) {
            idx += c.index(l)? * s;
        }
        Some(idx)
    }

    pub fn element(&self, index: usize) -> FieldBasisElement {
        self.split(index)
            .into_iter()
            .zip(&self.components)
            .map(|(i, c)| c.label(i))
            .collect()
    }
}

fn labelled_gaps(w: &OneManifold, x: &Decomposition, comp: usize) -> Vec<usize> {
    let c = w.component(comp);
    let mut gaps = x.cut_gaps(comp);
    if c.kind == ComponentKind::Interval {
        gaps.insert(0, 0);
        gaps.push(c.points);
    }
    gaps
}

/// ψ(x).
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::fields::{psi_value, BoundaryCondition};
/// use blobcx::manifold::{Decomposition, OneManifold};
/// let w = OneManifold::circle(4).unwrap();
/// let x = Decomposition::from_gaps(&w, &[&[0, 2]]).unwrap();
/// let a = builtin("trunc-poly:2").unwrap();
/// assert_eq!(psi_value(&w, &x, &a, &BoundaryCondition::free()).unwrap().dim(), 4);
/// ```
pub fn psi_value(w: &OneManifold, x: &Decomposition, c: &CategoryPresentation, boundary: &BoundaryCondition) -> Result<PsiSpace> {
    if x.masks().len() != w.components().len() {
        return Err(Error::ManifoldMismatch);
    }
    Decomposition::new(w, x.masks().to_vec())?;
    boundary.check(w, c)?;
    let components: Vec<ComponentSpace> = (0..w.components().len())
        .map(|i| ComponentSpace::new(c, w.component(i).is_circle(), labelled_gaps(w, x, i), boundary.get(i)))
        .collect();
    let mut strides = vec![1; components.len()];
    for i in (0..components.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * components[i + 1].dim;
    }
    let dim = components.iter().map(|c| c.dim).product();
    Ok(PsiSpace {
        manifold: w.clone(),
        decomposition: x.clone(),
        components,
        strides,
        dim,
    })
}

/// The decomposition cutting every cuttable gap.
pub fn finest(w: &OneManifold) -> Decomposition {
    let cuts = w
        .components()
        .iter()
        .map(|c| (0..c.gaps()).filter(|&g| c.cuttable(g)).fold(0u64, |m, g| m | 1 << g))
        .collect();
    Decomposition::new(w, cuts).expect("all cuttable gaps form a decomposition")
}

/// Linear combinations of fields on the carrier of `w`.
///
/// ```
/// use blobcx::coefficients::builtin;
/// use blobcx::fields::{field_space, BoundaryCondition};
/// use blobcx::manifold::OneManifold;
/// let w = OneManifold::circle(3).unwrap();
/// let a = builtin("matrix:2").unwrap();
/// assert_eq!(field_space(&w, &a, &BoundaryCondition::free()).unwrap().dim(), 64);
/// ```
pub fn field_space(w: &OneManifold, c: &CategoryPresentation, boundary: &BoundaryCondition) -> Result<FieldSpace> {
    psi_value(w, &finest(w), c, boundary)
}

/// Combines per-component sparse vectors into one vector by Kronecker product.
pub(crate) fn kron_components(space: &PsiSpace, parts: &[SparseVec], field: FieldSpec) -> SparseVec {
    let mut acc: Vec<(usize, Scalar)> = vec![(0, field.one())];
    for (i, part) in parts.iter().enumerate() {
        let stride = space.strides[i];
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (a, x) in &acc {
            for (b, y) in part {
                next.push((a + b * stride, x * y));
            }
        }
        acc = next;
    }
    normalize(acc)
}

/// The map ψ(x) → ψ(y) for a refinement `x ≤ y`: morphisms on the pieces of
/// `x` inside each piece of `y` are composed.
pub fn refinement_map(psi_x: &PsiSpace, psi_y: &PsiSpace, c: &CategoryPresentation) -> Result<SparseMatrix> {
    let (x, y) = (&psi_x.decomposition, &psi_y.decomposition);
    if psi_x.manifold != psi_y.manifold {
        return Err(Error::ManifoldMismatch);
    }
    if !crate::manifold::is_refinement(x, y)? {
        return Err(Error::NotRefinement(x.to_string(), y.to_string()));
    }
    let field = c.field();
    // per component, where each y-label sits among the x-labels
    let plans: Vec<Vec<usize>> = psi_x
        .components
        .iter()
        .zip(&psi_y.components)
        .map(|(cx, cy)| {
            cy.gaps
                .iter()
                .map(|g| cx.gaps.iter().position(|h| h == g).expect("refinement keeps cuts"))
                .collect()
        })
        .collect();
    let images: Vec<Vec<SparseVec>> = psi_x
        .components
        .iter()
        .zip(&psi_y.components)
        .zip(&plans)
        .map(|((cx, cy), plan)| (0..cx.dim).map(|i| compose_pieces(c, cx, cy, plan, &cx.label(i))).collect())
        .collect();
    let cols: Vec<SparseVec> = (0..psi_x.dim)
        .map(|idx| {
            let parts: Vec<SparseVec> = psi_x
                .split(idx)
                .iter()
                .enumerate()
                .map(|(i, &j)| images[i][j].clone())
                .collect();
            kron_components(psi_y, &parts, field)
        })
        .collect();
    SparseMatrix::from_columns(psi_y.dim, field, cols)
}

fn compose_pieces(c: &CategoryPresentation, cx: &ComponentSpace, cy: &ComponentSpace, plan: &[usize], lx: &ComponentLabel) -> SparseVec {
    let objects: Vec<ObjectId> = plan.iter().map(|&p| lx.objects[p]).collect();
    let kx = cx.gaps.len();
    let mut acc: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), c.field().one())];
    for piece in 0..cy.pieces() {
        let (s, _) = cy.piece_ends(piece);
        let from = plan[s];
        let to = if cy.cyclic { plan[(s + 1) % plan.len()] } else { plan[s + 1] };
        // x-pieces from position `from` up to `to`, cyclically
        let mut count = (to + kx - from) % kx;
        if count == 0 {
            count = if cx.cyclic { kx } else { 0 };
        }
        let path: Vec<ObjectId> = (0..=count).map(|t| lx.objects[(from + t) % kx]).collect();
        let word: Vec<usize> = (0..count).map(|t| lx.morphisms[(from + t) % kx]).collect();
        let v = c.compose_word(&path, &word);
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for (m, x) in &acc {
            for (k, y) in &v {
                let mut m = m.clone();
                m.push(*k);
                next.push((m, x * y));
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    let out = acc
        .into_iter()
        .map(|(morphisms, x)| {
            let label = ComponentLabel {
                objects: objects.clone(),
                morphisms,
            };
            (cy.index(&label).expect("composites stay in their sector"), x)
        })
        .collect();
    normalize(out)
}

/// The part of a field inside an arc, evaluated in the coefficients, for one
/// labelling of everything outside the arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcEvaluation {
    /// The field element with the inside of the arc erased: interior gap
    /// labels and the morphisms on covered points are replaced by `usize::MAX`.
    pub outside: FieldBasisElement,
    pub source: ObjectId,
    pub target: ObjectId,
    /// Composite of the inside, in `Hom(source, target)`.
    pub value: SparseVec,
}

/// Splits `v` into (outside labelling) × (inside composite) for the arc `b`.
pub fn evaluate_on_arc(space: &FieldSpace, c: &CategoryPresentation, v: &[(usize, Scalar)], b: &Arc) -> Vec<ArcEvaluation> {
    let w = &space.manifold;
    let comp = w.component(b.component);
    let n = comp.points;
    let mut groups: BTreeMap<FieldBasisElement, (ObjectId, ObjectId, SparseVec)> = BTreeMap::new();
    for (idx, x) in v {
        let mut e = space.element(*idx);
        let label = &mut e[b.component];
        let gap = |g: usize| g % comp.gaps();
        let start = gap(b.start);
        let end = gap(b.end_gap(w));
        let path: Vec<ObjectId> = (0..=b.len).map(|t| label.objects[gap(b.start + t)]).collect();
        let word: Vec<usize> = (0..b.len).map(|t| label.morphisms[(b.start + t) % n]).collect();
        let (src, tgt) = (label.objects[start], label.objects[end]);
        for t in 1..b.len {
            label.objects[gap(b.start + t)] = usize::MAX;
        }
        for t in 0..b.len {
            label.morphisms[(b.start + t) % n] = usize::MAX;
        }
        let value = c.compose_word(&path, &word);
        let entry = groups.entry(e).or_insert_with(|| (src, tgt, Vec::new()));
        let scaled: SparseVec = value.iter().map(|(k, y)| (*k, x * y)).collect();
        entry.2 = crate::linalg::axpy(&entry.2, &c.field().one(), &scaled);
    }
    groups
        .into_iter()
        .map(|(outside, (source, target, value))| ArcEvaluation {
            outside,
            source,
            target,
            value,
        })
        .collect()
}

/// Whether `v` restricted to `b` is null in every outside labelling.
pub fn is_null_on_arc(space: &FieldSpace, c: &CategoryPresentation, v: &[(usize, Scalar)], b: &Arc) -> bool {
    evaluate_on_arc(space, c, v, b).iter().all(|e| e.value.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::builtin;
    use crate::manifold::{enumerate_decompositions, DecompositionPoset};

    fn m(s: &str) -> OneManifold {
        s.parse().unwrap()
    }

    fn free() -> BoundaryCondition {
        BoundaryCondition::free()
    }

    fn two_object() -> CategoryPresentation {
        crate::coefficients::tests::two_object()
    }

    #[test]
    fn field_space_dimensions() {
        for (name, d) in [("ground", 1usize), ("trunc-poly:2", 2), ("matrix:2", 4)] {
            let a = builtin(name).unwrap();
            for n in 1..5 {
                assert_eq!(field_space(&m(&format!("circle:{n}")), &a, &free()).unwrap().dim(), d.pow(n as u32));
                assert_eq!(field_space(&m(&format!("interval:{n}")), &a, &free()).unwrap().dim(), d.pow(n as u32));
            }
        }
        let two = two_object();
        let fs = field_space(&m("circle:2"), &two, &free()).unwrap();
        assert_eq!(fs.dim(), 2);
        // interval with 1 point: Hom(a,a) ⊕ Hom(a,b) ⊕ Hom(b,b)
        assert_eq!(field_space(&m("interval:1"), &two, &free()).unwrap().dim(), 3);
        let fixed = BoundaryCondition::free().fix(0, 0, 1);
        assert_eq!(field_space(&m("interval:2"), &two, &fixed).unwrap().dim(), 2);
        assert!(field_space(&m("circle:2"), &two, &fixed).is_err());
    }

    #[test]
    fn index_round_trip() {
        let two = two_object();
        let fs = field_space(&m("interval:3+circle:2"), &two, &free()).unwrap();
        for i in 0..fs.dim() {
            assert_eq!(fs.index(&fs.element(i)), Some(i));
        }
    }

    #[test]
    fn psi_dimensions() {
        let a = builtin("trunc-poly:2").unwrap();
        let w = m("circle:4");
        for x in enumerate_decompositions(&w) {
            assert_eq!(psi_value(&w, &x, &a, &free()).unwrap().dim(), 1 << x.total_cuts());
        }
        let i = m("interval:3");
        let top = Decomposition::from_gaps(&i, &[&[]]).unwrap();
        assert_eq!(psi_value(&i, &top, &a, &free()).unwrap().dim(), 2);
        let g = builtin("ground").unwrap();
        assert_eq!(psi_value(&i, &top, &g, &free()).unwrap().dim(), 1);
        let u = m("interval:2+circle:2");
        for x in enumerate_decompositions(&u) {
            let whole = psi_value(&u, &x, &a, &free()).unwrap().dim();
            let p1 = psi_value(&m("interval:2"), &Decomposition::new(&m("interval:2"), vec![x.cut_mask(0)]).unwrap(), &a, &free()).unwrap();
            let p2 = psi_value(&m("circle:2"), &Decomposition::new(&m("circle:2"), vec![x.cut_mask(1)]).unwrap(), &a, &free()).unwrap();
            assert_eq!(whole, p1.dim() * p2.dim());
        }
    }

    #[test]
    fn refinement_examples() {
        let a = builtin("matrix:2").unwrap();
        let w = m("circle:3");
        let d = |g: &[usize]| Decomposition::from_gaps(&w, &[g]).unwrap();
        let psi = |x: &Decomposition| psi_value(&w, x, &a, &free()).unwrap();
        let (p01, p0) = (psi(&d(&[0, 1])), psi(&d(&[0])));
        assert_eq!(refinement_map(&p0, &p0, &a).unwrap(), SparseMatrix::identity(4, a.field()));
        assert_eq!(refinement_map(&p01, &p0, &a).unwrap(), a.composition_map(&[0, 0, 0]).unwrap());
        assert!(refinement_map(&p0, &p01, &a).is_err());
        let p012 = psi(&d(&[0, 1, 2]));
        let direct = refinement_map(&p012, &p0, &a).unwrap();
        let steps = refinement_map(&p01, &p0, &a).unwrap().mul(&refinement_map(&p012, &p01, &a).unwrap()).unwrap();
        assert_eq!(direct, steps);
    }

    #[test]
    fn refinement_is_functorial() {
        for (lit, name) in [("circle:3", "matrix:2"), ("interval:3", "trunc-poly:2"), ("circle:2+interval:2", "group:Z/2")] {
            let w = m(lit);
            let a = builtin(name).unwrap();
            let p = DecompositionPoset::new(&w);
            let psis: Vec<PsiSpace> = p.objects().iter().map(|x| psi_value(&w, x, &a, &free()).unwrap()).collect();
            for chain in p.chains_of_length(2) {
                let (x, y, z) = (&psis[chain[0]], &psis[chain[1]], &psis[chain[2]]);
                let direct = refinement_map(x, z, &a).unwrap();
                let via = refinement_map(y, z, &a).unwrap().mul(&refinement_map(x, y, &a).unwrap()).unwrap();
                assert_eq!(direct, via, "{lit} {chain:?}");
            }
        }
        let two = two_object();
        let w = m("circle:3");
        let p = DecompositionPoset::new(&w);
        let psis: Vec<PsiSpace> = p.objects().iter().map(|x| psi_value(&w, x, &two, &free()).unwrap()).collect();
        for chain in p.chains_of_length(2) {
            let (x, y, z) = (&psis[chain[0]], &psis[chain[1]], &psis[chain[2]]);
            let via = refinement_map(y, z, &two).unwrap().mul(&refinement_map(x, y, &two).unwrap()).unwrap();
            assert_eq!(refinement_map(x, z, &two).unwrap(), via);
        }
    }

    #[test]
    fn arc_evaluation_examples() {
        let a = builtin("trunc-poly:2").unwrap();
        let w = m("circle:3");
        let fs = field_space(&w, &a, &free()).unwrap();
        let one = a.field().one();
        // points labelled (x, x, 1)
        let e = vec![ComponentLabel {
            objects: vec![0, 0, 0],
            morphisms: vec![1, 1, 0],
        }];
        let v = vec![(fs.index(&e).unwrap(), one.clone())];
        let single = evaluate_on_arc(&fs, &a, &v, &Arc::new(0, 0, 1));
        assert_eq!(single[0].value, vec![(1, one.clone())]);
        assert!(is_null_on_arc(&fs, &a, &v, &Arc::new(0, 0, 2)));
        assert!(!is_null_on_arc(&fs, &a, &v, &Arc::new(0, 1, 2)));
        let g = builtin("ground").unwrap();
        let gs = field_space(&w, &g, &free()).unwrap();
        let ev = evaluate_on_arc(&gs, &g, &[(0, g.field().one())], &Arc::new(0, 2, 3));
        assert_eq!(ev[0].value, vec![(0, g.field().one())]);
    }

    #[test]
    fn null_on_inner_arc_implies_null_on_outer() {
        for name in ["trunc-poly:2", "group:Z/2"] {
            let a = builtin(name).unwrap();
            for lit in ["circle:3", "interval:3"] {
                let w = m(lit);
                let fs = field_space(&w, &a, &free()).unwrap();
                let arcs = crate::manifold::arcs(&w, crate::manifold::CircleArcs::Wrapping, 1);
                for inner in &arcs {
                    for outer in arcs.iter().filter(|o| inner.inside(o, &w)) {
                        // null vectors on `inner`: each basis field minus the field
                        // with the inner composite moved to its first point
                        for i in 0..fs.dim() {
                            for j in 0..fs.dim() {
                                let v = normalize(vec![(i, a.field().one()), (j, -a.field().one())]);
                                if is_null_on_arc(&fs, &a, &v, inner) {
                                    assert!(is_null_on_arc(&fs, &a, &v, outer), "{name} {lit} {inner} {outer}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
