use rayon::prelude::*;

use crate::blobcomplex::BlobComplex;
use crate::coefficients::CategoryPresentation;
use crate::error::{Error, Result};
use crate::fields::{ComponentLabel, FieldSpace};
use crate::linalg::{ChainComplex, Scalar, SparseMatrix, SparseVec};
use crate::manifold::{Arc, BlobConfig, Component, ComponentKind, Homeomorphism, OneManifold};

/// Maps every generator of `src` in degree `k` to `tgt`: the configuration
/// through `config_map` (with a sign), the field through `field_map`
/// (basis elements sent to `None` vanish).
fn induced(
    src: &BlobComplex,
    tgt: &BlobComplex,
    k: usize,
    config_map: &(dyn Fn(&BlobConfig) -> Result<(BlobConfig, i8)> + Sync),
    field_map: &[Option<usize>],
) -> Result<SparseMatrix> {
    let cols: Vec<Vec<SparseVec>> = src
        .blocks(k)
        .par_iter()
        .map(|b| {
            let (cfg, sign) = config_map(&b.config)?;
            let target = tgt
                .block(k, &cfg)
                .ok_or_else(|| Error::Internal(format!("{cfg} is not a configuration of the target")))?;
            b.space
                .basis()
                .columns()
                .iter()
                .map(|v| {
                    let mapped: Vec<(usize, Scalar)> = v.iter().filter_map(|(i, x)| field_map[*i].map(|j| (j, x.clone()))).collect();
                    let mapped = crate::linalg::normalize(mapped);
                    let coords = target
                        .coordinates(&mapped)
                        .ok_or_else(|| Error::Internal(format!("image of a generator on {} is not admissible on {cfg}", b.config)))?;
                    Ok(coords
                        .into_iter()
                        .map(|(j, x)| (target.offset + j, if sign < 0 { -x } else { x }))
                        .collect())
                })
                .collect::<Result<Vec<SparseVec>>>()
        })
        .collect::<Result<_>>()?;
    SparseMatrix::from_columns(tgt.complex().dim(k), src.field(), cols.into_iter().flatten().collect())
}

fn field_table(src: &FieldSpace, tgt: &FieldSpace, f: impl Fn(&[ComponentLabel]) -> Option<Vec<ComponentLabel>> + Sync) -> Vec<Option<usize>> {
    (0..src.dim())
        .into_par_iter()
        .map(|i| f(&src.element(i)).and_then(|e| tgt.index(&e)))
        .collect()
}

/// The contracting homotopy of an interval complex.
#[derive(Clone, Debug)]
pub struct Homotopy {
    /// `h[k]: B_k → B_{k+1}` for `k = 0..K`.
    pub h: Vec<SparseMatrix>,
    /// `ι ∘ s ∘ π` on `B_0`: evaluate a field and re-embed the result as
    /// `φ ⊗ id ⊗ … ⊗ id`.
    pub projection: SparseMatrix,
}

/// Adds the whole interval as an outermost blob. In degree 0 the field
/// first has its splitting `s(ev(x))` subtracted so that it becomes null.
pub fn contracting_homotopy(r: &BlobComplex) -> Result<Homotopy> {
    let w = r.manifold();
    if w.components().len() != 1 || w.component(0).kind != ComponentKind::Interval {
        return Err(Error::NotAnInterval(w.to_string()));
    }
    let c = r.coefficients();
    let field = c.field();
    let n = w.component(0).points;
    let fs = r.fields();
    let whole = Arc::new(0, 0, n);
    let projection = {
        let cols: Vec<SparseVec> = (0..fs.dim())
            .map(|i| {
                let e = &fs.element(i)[0];
                let (a, b) = (e.objects[0], e.objects[n]);
                let value = c.compose_word(&e.objects, &e.morphisms);
                let mut col = Vec::new();
                for (phi, x) in value {
                    let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(vec![phi], x)];
                    for _ in 1..n {
                        terms = terms
                            .into_iter()
                            .flat_map(|(m, x)| {
                                c.identity(b).iter().map(move |(k, y)| {
                                    let mut m = m.clone();
                                    m.push(*k);
                                    (m, &x * y)
                                })
                            })
                            .collect();
                    }
                    let mut objects = vec![b; n + 1];
                    objects[0] = a;
                    for (morphisms, x) in terms {
                        let label = ComponentLabel {
                            objects: objects.clone(),
                            morphisms,
                        };
                        col.push((fs.index(&[label]).expect("split fields lie in a nonzero sector"), x));
                    }
                }
                crate::linalg::normalize(col)
            })
            .collect();
        SparseMatrix::from_columns(fs.dim(), field, cols)?
    };
    let k_max = r.max_degree();
    let mut h = Vec::with_capacity(k_max);
    let whole_cfg = BlobConfig::canonicalize(w, vec![whole])?.0;
    for k in 0..k_max {
        let rows = r.complex().dim(k + 1);
        let cols: Vec<SparseVec> = if k == 0 {
            let id = SparseMatrix::identity(fs.dim(), field);
            let null = id.sub(&projection)?;
            null.columns()
                .iter()
                .map(|v| {
                    if v.is_empty() {
                        return Ok(Vec::new());
                    }
                    r.coordinates(1, &whole_cfg, v)
                        .ok_or_else(|| Error::Internal("x − s(ev x) is not null on the whole interval".into()))
                })
                .collect::<Result<_>>()?
        } else {
            let mut cols = Vec::with_capacity(r.complex().dim(k));
            for b in r.blocks(k) {
                if b.config.arcs().contains(&whole) {
                    cols.extend(std::iter::repeat_n(Vec::new(), b.dim()));
                    continue;
                }
                let mut arcs = vec![whole];
                arcs.extend_from_slice(b.config.arcs());
                let (cfg, sign) = BlobConfig::canonicalize(w, arcs)?;
                debug_assert_eq!(sign, 1);
                for v in b.space.basis().columns() {
                    cols.push(
                        r.coordinates(k + 1, &cfg, v)
                            .ok_or_else(|| Error::Internal(format!("{cfg} does not admit the generators of {}", b.config)))?,
                    );
                }
            }
            cols
        };
        h.push(SparseMatrix::from_columns(rows, field, cols)?);
    }
    Ok(Homotopy { h, projection })
}

/// Checks `d h + h d = id − ι s π` in degree 0 and `= id` above, for every
/// degree `k` with `k + 1 ≤ K`. Returns one flag per degree.
pub fn verify_homotopy(r: &BlobComplex, hom: &Homotopy) -> Result<Vec<bool>> {
    let cx = r.complex();
    let field = r.field();
    let mut out = Vec::new();
    for k in 0..hom.h.len() {
        let n = cx.dim(k);
        let mut lhs = cx.differential(k + 1).mul(&hom.h[k])?;
        if k >= 1 {
            lhs = lhs.add(&hom.h[k - 1].mul(cx.differential(k))?)?;
        }
        let mut rhs = SparseMatrix::identity(n, field);
        if k == 0 {
            rhs = rhs.sub(&hom.projection)?;
        }
        out.push(lhs == rhs);
    }
    Ok(out)
}

/// The degree-wise isomorphism `B(X₁ ⊔ X₂) → B(X₁) ⊗ B(X₂)`, where the
/// tensor product is [`ChainComplex::tensor`] of the two factors. A
/// configuration on the union splits into its arcs on `X₁` (listed first)
/// and on `X₂`; forgetting a blob of the second factor passes the first
/// factor's blobs, which is the Koszul sign of the tensor differential.
pub fn disjoint_union_iso(union: &BlobComplex, r1: &BlobComplex, r2: &BlobComplex) -> Result<(ChainComplex, Vec<SparseMatrix>)> {
    if r1.coefficients() != r2.coefficients() || union.coefficients() != r1.coefficients() {
        return Err(Error::CoefficientMismatch);
    }
    if *union.manifold() != r1.manifold().disjoint_union(r2.manifold()) {
        return Err(Error::ManifoldMismatch);
    }
    let tensor = ChainComplex::tensor(r1.complex(), r2.complex())?;
    let top = tensor.max_degree().min(union.max_degree());
    let n1 = r1.manifold().components().len();
    let dim2 = r2.fields().dim();
    let field = union.field();
    let mut maps = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut offsets = vec![0usize; k + 2];
        for i in 0..=k {
            offsets[i + 1] = offsets[i] + r1.complex().dim(i) * r2.complex().dim(k - i);
        }
        let cols: Vec<Vec<SparseVec>> = union
            .blocks(k)
            .par_iter()
            .map(|b| {
                let (first, second): (Vec<Arc>, Vec<Arc>) = b.config.arcs().iter().partition(|a| a.component < n1);
                let second: Vec<Arc> = second.iter().map(|a| Arc::new(a.component - n1, a.start, a.len)).collect();
                let (i, j) = (first.len(), second.len());
                let b1 = r1.block(i, &BlobConfig::canonicalize(r1.manifold(), first)?.0).ok_or_else(|| Error::Internal("missing factor block".into()))?;
                let b2 = r2.block(j, &BlobConfig::canonicalize(r2.manifold(), second)?.0).ok_or_else(|| Error::Internal("missing factor block".into()))?;
                let d2j = r2.complex().dim(j);
                let (p1, p2) = (b1.space.pivots(), b2.space.pivots());
                b.space
                    .basis()
                    .columns()
                    .iter()
                    .map(|v| {
                        // read coordinates at the product pivots, then verify
                        let lookup: std::collections::HashMap<usize, &Scalar> = v.iter().map(|(r, x)| (*r, x)).collect();
                        let mut coords = Vec::new();
                        for (a, &pa) in p1.iter().enumerate() {
                            for (bb, &pb) in p2.iter().enumerate() {
                                if let Some(x) = lookup.get(&(pa * dim2 + pb)) {
                                    coords.push((a, bb, (*x).clone()));
                                }
                            }
                        }
                        let mut back = Vec::new();
                        for (a, bb, x) in &coords {
                            for (r1i, y1) in b1.space.basis().column(*a) {
                                for (r2i, y2) in b2.space.basis().column(*bb) {
                                    back.push((r1i * dim2 + r2i, &(x * y1) * y2));
                                }
                            }
                        }
                        if crate::linalg::normalize(back) != *v {
                            return Err(Error::Internal(format!("{} does not split as a tensor product", b.config)));
                        }
                        Ok(coords
                            .into_iter()
                            .map(|(a, bb, x)| (offsets[i] + (b1.offset + a) * d2j + b2.offset + bb, x))
                            .collect())
                    })
                    .collect::<Result<Vec<SparseVec>>>()
            })
            .collect::<Result<_>>()?;
        maps.push(SparseMatrix::from_columns(tensor.dim(k), field, cols.into_iter().flatten().collect())?);
    }
    Ok((tensor, maps))
}

/// Identification of interval endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gluing {
    /// The end of interval `component` glued to its own start: a circle.
    Close { component: usize },
    /// The end of interval `first` glued to the start of interval `second`.
    /// The result replaces `first`; `second` is removed.
    Concatenate { first: usize, second: usize },
}

impl Gluing {
    fn check(&self, w: &OneManifold) -> Result<()> {
        let interval = |i: usize| matches!(w.components().get(i), Some(c) if c.kind == ComponentKind::Interval);
        let ok = match *self {
            Gluing::Close { component } => interval(component),
            Gluing::Concatenate { first, second } => first != second && interval(first) && interval(second),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Gluing(format!("{self:?} does not glue interval ends of {w}")))
        }
    }

    /// The glued manifold.
    pub fn apply(&self, w: &OneManifold) -> Result<OneManifold> {
        self.check(w)?;
        let mut comps: Vec<Component> = w.components().to_vec();
        match *self {
            Gluing::Close { component } => comps[component] = Component::circle(comps[component].points),
            Gluing::Concatenate { first, second } => {
                comps[first] = Component::interval(comps[first].points + comps[second].points);
                comps.remove(second);
            }
        }
        OneManifold::new(comps)
    }

    fn new_index(&self, comp: usize) -> usize {
        match *self {
            Gluing::Close { .. } => comp,
            Gluing::Concatenate { second, .. } => comp - usize::from(comp > second),
        }
    }

    fn map_arc(&self, w: &OneManifold, a: &Arc) -> Arc {
        match *self {
            Gluing::Concatenate { first, second } if a.component == second => {
                Arc::new(self.new_index(first), a.start + w.component(first).points, a.len)
            }
            _ => Arc::new(self.new_index(a.component), a.start, a.len),
        }
    }

    fn map_field(&self, e: &[ComponentLabel]) -> Option<Vec<ComponentLabel>> {
        match *self {
            Gluing::Close { component } => {
                let mut out = e.to_vec();
                let l = &mut out[component];
                if l.objects.first() != l.objects.last() {
                    return None;
                }
                l.objects.pop();
                Some(out)
            }
            Gluing::Concatenate { first, second } => {
                let (a, b) = (&e[first], &e[second]);
                if a.objects.last() != b.objects.first() {
                    return None;
                }
                let mut joined = a.clone();
                joined.objects.extend_from_slice(&b.objects[1..]);
                joined.morphisms.extend_from_slice(&b.morphisms);
                let mut out = Vec::with_capacity(e.len() - 1);
                for (i, l) in e.iter().enumerate() {
                    if i == first {
                        out.push(joined.clone());
                    } else if i != second {
                        out.push(l.clone());
                    }
                }
                Some(out)
            }
        }
    }
}

/// The chain map `B(X) → B(X glued)`: fields whose boundary objects disagree
/// at the glued ends go to zero; blobs are carried over unchanged. `tgt`
/// must be built on the glued manifold through the same degree.
pub fn gluing_chain_map(src: &BlobComplex, tgt: &BlobComplex, gluing: Gluing) -> Result<Vec<SparseMatrix>> {
    if src.coefficients() != tgt.coefficients() {
        return Err(Error::CoefficientMismatch);
    }
    let w = src.manifold();
    if gluing.apply(w)? != *tgt.manifold() {
        return Err(Error::ManifoldMismatch);
    }
    let glued = tgt.manifold();
    let table = field_table(src.fields(), tgt.fields(), |e| gluing.map_field(e));
    let config_map = |c: &BlobConfig| BlobConfig::canonicalize(glued, c.arcs().iter().map(|a| gluing.map_arc(w, a)).collect());
    let top = src.max_degree().min(tgt.max_degree());
    (0..=top).map(|k| induced(src, tgt, k, &config_map, &table)).collect()
}

fn check_reflection(c: &CategoryPresentation, h: &Homeomorphism) -> Result<()> {
    if h.reverses_orientation() && !c.is_commutative_algebra() {
        return Err(Error::Homeomorphism(
            "orientation reversal needs an anti-involution of the coefficients; only commutative one-object coefficients are supported".into(),
        ));
    }
    Ok(())
}

/// The chain automorphism induced by a homeomorphism: fields and blobs are
/// moved along, and blobs are re-sorted with the sign of the permutation.
pub fn homeomorphism_action(r: &BlobComplex, h: &Homeomorphism) -> Result<Vec<SparseMatrix>> {
    let w = r.manifold();
    if h.manifold() != w {
        return Err(Error::ManifoldMismatch);
    }
    check_reflection(r.coefficients(), h)?;
    let fs = r.fields();
    let table = field_table(fs, fs, |e| {
        let mut out: Vec<ComponentLabel> = e.to_vec();
        for (comp, l) in e.iter().enumerate() {
            let (target, _) = h.map_point(comp, 0);
            let mut objects = l.objects.clone();
            let mut morphisms = l.morphisms.clone();
            for (g, &o) in l.objects.iter().enumerate() {
                objects[h.map_gap(comp, g).1] = o;
            }
            for (p, &m) in l.morphisms.iter().enumerate() {
                morphisms[h.map_point(comp, p).1] = m;
            }
            out[target] = ComponentLabel { objects, morphisms };
        }
        Some(out)
    });
    let config_map = |c: &BlobConfig| Ok(h.apply_config(c));
    (0..=r.max_degree()).map(|k| induced(r, r, k, &config_map, &table)).collect()
}
