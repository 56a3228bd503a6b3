use crate::error::{Error, Result};
use crate::manifold::{Arc, BlobConfig, ComponentKind, Decomposition, OneManifold};

/// The map of one component onto its image: point `p` goes to
/// `±p + shift` (mod `N`), with `−` when `reflect` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transform {
    pub reflect: bool,
    pub shift: usize,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { reflect: false, shift: 0 };

    fn compose(self, inner: Transform, n: usize) -> Transform {
        // p ↦ σ1(σ2 p + t2) + t1
        let t2 = if self.reflect { (n - inner.shift % n) % n } else { inner.shift };
        Transform {
            reflect: self.reflect != inner.reflect,
            shift: (t2 + self.shift) % n,
        }
    }

    fn inverse(self, n: usize) -> Transform {
        // q = σ(p − t)
        let shift = if self.reflect { self.shift % n } else { (n - self.shift % n) % n };
        Transform {
            reflect: self.reflect,
            shift,
        }
    }
}

/// A homeomorphism of `W` onto itself preserving the carrier: component `i`
/// goes to component `perm[i]` by `transforms[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homeomorphism {
    manifold: OneManifold,
    perm: Vec<usize>,
    transforms: Vec<Transform>,
}

impl Homeomorphism {
    pub fn new(w: &OneManifold, perm: Vec<usize>, transforms: Vec<Transform>) -> Result<Homeomorphism> {
        let n = w.components().len();
        if perm.len() != n || transforms.len() != n {
            return Err(Error::Homeomorphism(format!("expected data for {n} components")));
        }
        let mut seen = vec![false; n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::Homeomorphism(format!("{perm:?} is not a permutation")));
            }
            if w.component(i) != w.component(j) {
                return Err(Error::Homeomorphism(format!(
                    "component {i} ({}) cannot map to component {j} ({})",
                    w.component(i),
                    w.component(j)
                )));
            }
            let c = w.component(i);
            let t = transforms[i];
            let ok = match c.kind {
                ComponentKind::Circle => t.shift < c.points,
                ComponentKind::Interval => t == Transform::IDENTITY || (t.reflect && t.shift == c.points - 1),
            };
            if !ok {
                return Err(Error::Homeomorphism(format!("{t:?} is not a symmetry of {c}")));
            }
        }
        Ok(Homeomorphism {
            manifold: w.clone(),
            perm,
            transforms,
        })
    }

    pub fn identity(w: &OneManifold) -> Homeomorphism {
        let n = w.components().len();
        Homeomorphism {
            manifold: w.clone(),
            perm: (0..n).collect(),
            transforms: vec![Transform::IDENTITY; n],
        }
    }

    /// Rotation of circle component `component` by `r` steps.
    pub fn rotation(w: &OneManifold, component: usize, r: usize) -> Result<Homeomorphism> {
        let c = *w
            .components()
            .get(component)
            .ok_or_else(|| Error::Homeomorphism(format!("no component {component}")))?;
        if !c.is_circle() {
            return Err(Error::Homeomorphism(format!("only circles rotate, not {c}")));
        }
        let mut h = Self::identity(w);
        h.transforms[component].shift = r % c.points;
        Ok(h)
    }

    /// Orientation reversal of one component.
    pub fn reflection(w: &OneManifold, component: usize) -> Result<Homeomorphism> {
        let c = *w
            .components()
            .get(component)
            .ok_or_else(|| Error::Homeomorphism(format!("no component {component}")))?;
        let mut h = Self::identity(w);
        h.transforms[component] = Transform {
            reflect: true,
            shift: c.points - 1,
        };
        Ok(h)
    }

    /// Permutes like components without moving points.
    pub fn permutation(w: &OneManifold, perm: Vec<usize>) -> Result<Homeomorphism> {
        let n = perm.len();
        Self::new(w, perm, vec![Transform::IDENTITY; n])
    }

    pub fn manifold(&self) -> &OneManifold {
        &self.manifold
    }

    pub fn target_component(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn transform(&self, i: usize) -> Transform {
        self.transforms[i]
    }

    pub fn reverses_orientation(&self) -> bool {
        self.transforms.iter().any(|t| t.reflect)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Homeomorphism) -> Result<Homeomorphism> {
        if self.manifold != inner.manifold {
            return Err(Error::ManifoldMismatch);
        }
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut transforms = vec![Transform::IDENTITY; n];
        for i in 0..n {
            let j = inner.perm[i];
            perm[i] = self.perm[j];
            transforms[i] = self.transforms[j].compose(inner.transforms[i], self.manifold.component(i).points);
        }
        Ok(Homeomorphism {
            manifold: self.manifold.clone(),
            perm,
            transforms,
        })
    }

    pub fn inverse(&self) -> Homeomorphism {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut transforms = vec![Transform::IDENTITY; n];
        for i in 0..n {
            let j = self.perm[i];
            perm[j] = i;
            transforms[j] = self.transforms[i].inverse(self.manifold.component(i).points);
        }
        Homeomorphism {
            manifold: self.manifold.clone(),
            perm,
            transforms,
        }
    }

    /// Image of point `p` on component `comp`, as `(component, point)`.
    pub fn map_point(&self, comp: usize, p: usize) -> (usize, usize) {
        let n = self.manifold.component(comp).points;
        let t = self.transforms[comp];
        let q = if t.reflect { (t.shift + n - p % n) % n } else { (p + t.shift) % n };
        (self.perm[comp], q)
    }

    /// Image of gap `g` on component `comp`.
    pub fn map_gap(&self, comp: usize, g: usize) -> (usize, usize) {
        let c = self.manifold.component(comp);
        let t = self.transforms[comp];
        let n = c.points;
        let h = match (c.kind, t.reflect) {
            (ComponentKind::Interval, false) => g,
            (ComponentKind::Interval, true) => n - g,
            (ComponentKind::Circle, false) => (g + t.shift) % n,
            (ComponentKind::Circle, true) => (t.shift + 1 + n - g % n) % n,
        };
        (self.perm[comp], h)
    }

    pub fn apply_arc(&self, a: &Arc) -> Arc {
        let (comp, _) = self.map_point(a.component, a.start);
        let t = self.transforms[a.component];
        let start = if t.reflect {
            // the image runs backwards from the image of the first point
            let (_, last) = self.map_point(a.component, (a.start + a.len - 1) % self.manifold.component(a.component).points);
            last
        } else {
            self.map_point(a.component, a.start).1
        };
        Arc::new(comp, start, a.len)
    }

    /// Image of a configuration together with the sign of the permutation
    /// that restores canonical order.
    pub fn apply_config(&self, c: &BlobConfig) -> (BlobConfig, i8) {
        let arcs = c.arcs().iter().map(|a| self.apply_arc(a)).collect();
        BlobConfig::canonicalize(&self.manifold, arcs).expect("homeomorphisms preserve compatibility")
    }

    pub fn apply_decomposition(&self, x: &Decomposition) -> Decomposition {
        let mut cuts = vec![0u64; x.masks().len()];
        for comp in 0..cuts.len() {
            for g in x.cut_gaps(comp) {
                let (c, h) = self.map_gap(comp, g);
                cuts[c] |= 1 << h;
            }
        }
        Decomposition::new(&self.manifold, cuts).expect("homeomorphisms preserve cuttable gaps")
    }

    pub fn apply_chain(&self, chain: &[Decomposition]) -> Vec<Decomposition> {
        chain.iter().map(|x| self.apply_decomposition(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{enumerate_blob_configs, enumerate_decompositions, is_refinement, CircleArcs};

    fn m(s: &str) -> OneManifold {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_examples() {
        let w = m("circle:3");
        let r = Homeomorphism::rotation(&w, 0, 1).unwrap();
        assert_eq!(r.apply_arc(&Arc::new(0, 0, 1)), Arc::new(0, 1, 1));
        let id = Homeomorphism::identity(&w);
        assert_eq!(r.compose(&r.inverse()).unwrap(), id);
        assert_eq!(id.apply_arc(&Arc::new(0, 2, 2)), Arc::new(0, 2, 2));
        let r3 = r.compose(&r).unwrap().compose(&r).unwrap();
        assert_eq!(r3, id);
        assert!(Homeomorphism::rotation(&m("interval:3"), 0, 1).is_err());
        assert!(Homeomorphism::permutation(&m("circle:3+interval:3"), vec![1, 0]).is_err());
    }

    #[test]
    fn reflection_of_arcs() {
        let w = m("interval:4");
        let f = Homeomorphism::reflection(&w, 0).unwrap();
        // points {0,1} go to {3,2}
        assert_eq!(f.apply_arc(&Arc::new(0, 0, 2)), Arc::new(0, 2, 2));
        assert_eq!(f.map_gap(0, 0), (0, 4));
        let c = m("circle:4");
        let f = Homeomorphism::reflection(&c, 0).unwrap();
        assert_eq!(f.apply_arc(&Arc::new(0, 0, 4)).start, f.map_gap(0, 0).1);
        assert_eq!(f.compose(&f).unwrap(), Homeomorphism::identity(&c));
    }

    fn all_homeos(w: &OneManifold) -> Vec<Homeomorphism> {
        let mut out = Vec::new();
        let n = w.components().len();
        let perms: Vec<Vec<usize>> = if n == 1 { vec![vec![0]] } else { vec![vec![0, 1], vec![1, 0]] };
        for perm in perms {
            let options: Vec<Vec<Transform>> = w
                .components()
                .iter()
                .map(|c| {
                    let shifts: Vec<usize> = if c.is_circle() { (0..c.points).collect() } else { vec![0] };
                    let mut ts: Vec<Transform> = shifts.iter().map(|&s| Transform { reflect: false, shift: s }).collect();
                    if c.is_circle() {
                        ts.extend(shifts.iter().map(|&s| Transform { reflect: true, shift: s }));
                    } else {
                        ts.push(Transform { reflect: true, shift: c.points - 1 });
                    }
                    ts
                })
                .collect();
            let mut combos = vec![vec![]];
            for opts in &options {
                combos = combos
                    .into_iter()
                    .flat_map(|p: Vec<Transform>| opts.iter().map(move |t| [p.clone(), vec![*t]].concat()))
                    .collect();
            }
            for ts in combos {
                if let Ok(h) = Homeomorphism::new(w, perm.clone(), ts) {
                    out.push(h);
                }
            }
        }
        out
    }

    #[test]
    fn homeomorphisms_preserve_structure() {
        for lit in ["circle:3", "interval:3", "circle:2+circle:2", "interval:2+interval:2"] {
            let w = m(lit);
            let decs = enumerate_decompositions(&w);
            let configs: Vec<BlobConfig> = (0..3).flat_map(|k| enumerate_blob_configs(&w, k, CircleArcs::Wrapping)).collect();
            for h in all_homeos(&w) {
                for x in &decs {
                    for y in &decs {
                        let (hx, hy) = (h.apply_decomposition(x), h.apply_decomposition(y));
                        assert_eq!(is_refinement(x, y).unwrap(), is_refinement(&hx, &hy).unwrap());
                    }
                }
                for c in &configs {
                    let (hc, _) = h.apply_config(c);
                    let back = h.inverse().apply_config(&hc).0;
                    assert_eq!(&back, c, "{lit} {h:?}");
                    for a in c.arcs() {
                        for b in c.arcs() {
                            assert_eq!(a.inside(b, &w), h.apply_arc(a).inside(&h.apply_arc(b), &w));
                        }
                        let pts: Vec<(usize, usize)> = a.points(&w).iter().map(|&p| h.map_point(a.component, p)).collect();
                        let ha = h.apply_arc(a);
                        let mut want: Vec<usize> = ha.points(&w);
                        let mut got: Vec<usize> = pts.iter().map(|p| p.1).collect();
                        want.sort();
                        got.sort();
                        assert_eq!(got, want);
                    }
                }
                for g in &all_homeos(&w) {
                    let hg = h.compose(g).unwrap();
                    for c in &configs {
                        let (gc, s1) = g.apply_config(c);
                        let (hgc, s2) = h.apply_config(&gc);
                        assert_eq!(hg.apply_config(c), (hgc, s1 * s2));
                    }
                }
            }
        }
    }
}
