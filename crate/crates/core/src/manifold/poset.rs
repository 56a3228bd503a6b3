use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::manifold::{ComponentKind, OneManifold};

/// A permissible decomposition: per component, a bitmask of cut gaps.
/// Circles always carry at least one cut, so every piece is an arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    cuts: Vec<u64>,
}

impl Decomposition {
    pub fn new(w: &OneManifold, cuts: Vec<u64>) -> Result<Decomposition> {
        if cuts.len() != w.components().len() {
            return Err(Error::ManifoldMismatch);
        }
        for (c, &mask) in w.components().iter().zip(&cuts) {
            let allowed: u64 = (0..c.gaps()).filter(|&g| c.cuttable(g)).map(|g| 1u64 << g).sum();
            if mask & !allowed != 0 {
                return Err(Error::Manifold(format!("cut set {mask:#b} is not on the cuttable gaps of {c}")));
            }
            if c.is_circle() && mask == 0 {
                return Err(Error::Manifold(format!("{c} needs at least one cut")));
            }
        }
        Ok(Decomposition { cuts })
    }

    /// Builds from explicit gap lists per component.
    pub fn from_gaps(w: &OneManifold, gaps: &[&[usize]]) -> Result<Decomposition> {
        let cuts = gaps
            .iter()
            .map(|gs| gs.iter().fold(0u64, |m, &g| if g < 64 { m | (1 << g) } else { u64::MAX }))
            .collect();
        Self::new(w, cuts)
    }

    pub fn cut_mask(&self, component: usize) -> u64 {
        self.cuts[component]
    }

    pub fn masks(&self) -> &[u64] {
        &self.cuts
    }

    /// Cut gaps of one component in increasing order.
    pub fn cut_gaps(&self, component: usize) -> Vec<usize> {
        bits(self.cuts[component])
    }

    pub fn total_cuts(&self) -> usize {
        self.cuts.iter().map(|m| m.count_ones() as usize).sum()
    }
}

pub(crate) fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &m) in self.cuts.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let gaps: Vec<String> = bits(m).iter().map(|g| g.to_string()).collect();
            write!(f, "{{{}}}", gaps.join(","))?;
        }
        Ok(())
    }
}

/// All permissible decompositions, ordered lexicographically by the
/// per-component masks.
///
/// ```
/// use blobcx::manifold::{enumerate_decompositions, OneManifold};
/// assert_eq!(enumerate_decompositions(&OneManifold::circle(3).unwrap()).len(), 7);
/// ```
pub fn enumerate_decompositions(w: &OneManifold) -> Vec<Decomposition> {
    let per: Vec<Vec<u64>> = w
        .components()
        .iter()
        .map(|c| {
            let gaps: Vec<usize> = (0..c.gaps()).filter(|&g| c.cuttable(g)).collect();
            let lo = match c.kind {
                ComponentKind::Interval => 0,
                ComponentKind::Circle => 1,
            };
            (lo..1u64 << gaps.len())
                .map(|s| bits(s).iter().fold(0u64, |m, &b| m | 1 << gaps[b]))
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for choices in per {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                choices.iter().map(move |&m| {
                    let mut p = prefix.clone();
                    p.push(m);
                    p
                })
            })
            .collect();
    }
    let mut out: Vec<Decomposition> = out.into_iter().map(|cuts| Decomposition { cuts }).collect();
    out.sort();
    out
}

/// `x` refines `y` when every cut of `y` is also a cut of `x`.
pub fn is_refinement(x: &Decomposition, y: &Decomposition) -> Result<bool> {
    if x.cuts.len() != y.cuts.len() {
        return Err(Error::ManifoldMismatch);
    }
    Ok(x.cuts.iter().zip(&y.cuts).all(|(a, b)| a & b == *b))
}

/// The finite poset of decompositions of `W` on its carrier.
#[derive(Clone, Debug)]
pub struct DecompositionPoset {
    manifold: OneManifold,
    objects: Vec<Decomposition>,
    index: HashMap<Decomposition, usize>,
    /// `coarser[x]`: objects strictly coarser than `x`, increasing.
    coarser: Vec<Vec<usize>>,
}

/// A strictly increasing chain `x_0 < … < x_j` of object indices, from the
/// finest decomposition to the coarsest.
pub type Chain = Vec<usize>;

impl DecompositionPoset {
    pub fn new(w: &OneManifold) -> DecompositionPoset {
        let objects = enumerate_decompositions(w);
        let index = objects.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        let coarser = objects
            .iter()
            .map(|x| {
                (0..objects.len())
                    .filter(|&j| objects[j] != *x && is_refinement(x, &objects[j]).unwrap())
                    .collect()
            })
            .collect();
        DecompositionPoset {
            manifold: w.clone(),
            objects,
            index,
            coarser,
        }
    }

    pub fn manifold(&self) -> &OneManifold {
        &self.manifold
    }

    pub fn objects(&self) -> &[Decomposition] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn index_of(&self, x: &Decomposition) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `x ≤ y` in the poset: `x` refines `y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.coarser[x].binary_search(&y).is_ok()
    }

    pub fn strictly_coarser(&self, x: usize) -> &[usize] {
        &self.coarser[x]
    }

    /// Pairs `x < y` with nothing strictly between them.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for &y in &self.coarser[x] {
                if !self.coarser[x].iter().any(|&z| z != y && self.leq(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// All strict chains with exactly `length + 1` elements, in
    /// lexicographic order of their index sequences.
    pub fn chains_of_length(&self, length: usize) -> Vec<Chain> {
        let mut out: Vec<Chain> = (0..self.len()).map(|x| vec![x]).collect();
        for _ in 0..length {
            out = out
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    self.coarser[last].iter().map(move |&y| {
                        let mut c = c.clone();
                        c.push(y);
                        c
                    })
                })
                .collect();
        }
        out
    }
}

/// All strict chains of at most `max_length + 1` elements, grouped by length.
pub fn poset_chains(p: &DecompositionPoset, max_length: usize) -> Vec<Vec<Chain>> {
    (0..=max_length).map(|j| p.chains_of_length(j)).collect()
}
