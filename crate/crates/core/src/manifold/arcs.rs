use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::manifold::{ComponentKind, Decomposition, OneManifold};

/// A blob: the points `start, start + 1, …, start + len − 1` of one
/// component, bounded by gap `start` and the gap after its last point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub component: usize,
    pub start: usize,
    pub len: usize,
}

impl Arc {
    pub fn new(component: usize, start: usize, len: usize) -> Arc {
        Arc { component, start, len }
    }

    /// Canonical order: component, then start gap, then decreasing length.
    pub fn canonical_cmp(&self, other: &Arc) -> Ordering {
        (self.component, self.start, std::cmp::Reverse(self.len)).cmp(&(other.component, other.start, std::cmp::Reverse(other.len)))
    }

    /// Points covered, as a bitmask over the component's points.
    pub fn point_mask(&self, w: &OneManifold) -> u64 {
        let n = w.component(self.component).points;
        (0..self.len).fold(0u64, |m, t| m | 1 << ((self.start + t) % n))
    }

    /// Points covered, in order along the arc.
    pub fn points(&self, w: &OneManifold) -> Vec<usize> {
        let n = w.component(self.component).points;
        (0..self.len).map(|t| (self.start + t) % n).collect()
    }

    pub fn end_gap(&self, w: &OneManifold) -> usize {
        w.component(self.component).gap_after(self.start, self.len)
    }

    /// `self` lies strictly inside `other`.
    pub fn inside(&self, other: &Arc, w: &OneManifold) -> bool {
        if self.component != other.component || self == other {
            return false;
        }
        let c = w.component(self.component);
        match c.kind {
            ComponentKind::Interval => other.start <= self.start && self.start + self.len <= other.start + other.len,
            ComponentKind::Circle => (self.start + c.points - other.start) % c.points + self.len <= other.len,
        }
    }

    /// No common point.
    pub fn disjoint(&self, other: &Arc, w: &OneManifold) -> bool {
        self.component != other.component || self.point_mask(w) & other.point_mask(w) == 0
    }

    /// Nested or disjoint, and not identical.
    pub fn compatible(&self, other: &Arc, w: &OneManifold) -> bool {
        self != other && (self.inside(other, w) || other.inside(self, w) || self.disjoint(other, w))
    }

    fn check(&self, w: &OneManifold) -> Result<()> {
        let bad = || Error::BlobConfig(format!("{self} does not fit {w}"));
        let c = *w.components().get(self.component).ok_or_else(bad)?;
        let fits = match c.kind {
            ComponentKind::Interval => self.len >= 1 && self.start + self.len <= c.points,
            ComponentKind::Circle => self.len >= 1 && self.start < c.points && self.len <= c.points,
        };
        if fits {
            Ok(())
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}[{}+{}]", self.component, self.start, self.len)
    }
}

/// Which arcs may be blobs on a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CircleArcs {
    /// Arcs with distinct endpoints, covering at most `N − 1` points.
    Proper,
    /// Also the `N` whole-cycle arcs, each covering every point and
    /// starting and ending at the same gap. The blob complex uses these.
    Wrapping,
}

/// Every arc of `w` covering at least `min_len` points, in canonical order.
pub fn arcs(w: &OneManifold, policy: CircleArcs, min_len: usize) -> Vec<Arc> {
    let mut out = Vec::new();
    for (ci, c) in w.components().iter().enumerate() {
        let n = c.points;
        for s in 0..n {
            let max = match (c.kind, policy) {
                (ComponentKind::Interval, _) => n - s,
                (ComponentKind::Circle, CircleArcs::Proper) => n - 1,
                (ComponentKind::Circle, CircleArcs::Wrapping) => n,
            };
            for len in (min_len.max(1)..=max).rev() {
                out.push(Arc::new(ci, s, len));
            }
        }
    }
    out
}

/// A set of pairwise compatible blobs in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlobConfig {
    arcs: Vec<Arc>,
}

impl BlobConfig {
    pub fn empty() -> BlobConfig {
        BlobConfig { arcs: Vec::new() }
    }

    /// Validates compatibility and sorts into canonical order. Returns the
    /// configuration and the sign of the sorting permutation.
    pub fn canonicalize(w: &OneManifold, mut arcs: Vec<Arc>) -> Result<(BlobConfig, i8)> {
        for a in &arcs {
            a.check(w)?;
        }
        for i in 0..arcs.len() {
            for j in i + 1..arcs.len() {
                if !arcs[i].compatible(&arcs[j], w) {
                    return Err(Error::BlobConfig(format!("{} and {} are neither nested nor disjoint", arcs[i], arcs[j])));
                }
            }
        }
        // insertion sort, counting transpositions
        let mut sign = 1i8;
        for i in 1..arcs.len() {
            let mut j = i;
            while j > 0 && arcs[j - 1].canonical_cmp(&arcs[j]) == Ordering::Greater {
                arcs.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        Ok((BlobConfig { arcs }, sign))
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// The configuration with arc `i` (0-based, canonical position) removed.
    pub fn forget(&self, i: usize) -> BlobConfig {
        let mut arcs = self.arcs.clone();
        arcs.remove(i);
        BlobConfig { arcs }
    }

    /// Arcs containing no other arc of the configuration.
    pub fn innermost(&self, w: &OneManifold) -> Vec<Arc> {
        self.arcs
            .iter()
            .filter(|a| !self.arcs.iter().any(|b| b.inside(a, w)))
            .copied()
            .collect()
    }

    /// A permissible decomposition in which every arc is a union of pieces:
    /// cuts at all interior arc endpoints, plus gap 0 on circles that would
    /// otherwise be uncut.
    pub fn completion(&self, w: &OneManifold) -> Decomposition {
        let mut cuts: Vec<u64> = vec![0; w.components().len()];
        for a in &self.arcs {
            let c = w.component(a.component);
            for g in [a.start, a.end_gap(w)] {
                if c.cuttable(g) {
                    cuts[a.component] |= 1 << g;
                }
            }
        }
        for (ci, c) in w.components().iter().enumerate() {
            if c.is_circle() && cuts[ci] == 0 {
                cuts[ci] = 1;
            }
        }
        Decomposition::new(w, cuts).expect("arc endpoints are cuttable gaps")
    }
}

impl fmt::Display for BlobConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All `k`-element subsets of `candidates` (given in canonical order) whose
/// members are pairwise compatible, in lexicographic order of positions.
pub fn configs_from_arcs(w: &OneManifold, candidates: &[Arc], k: usize) -> Vec<BlobConfig> {
    let n = candidates.len();
    let compat: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| candidates[i].compatible(&candidates[j], w)).collect())
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(k);
    fn rec(start: usize, k: usize, n: usize, compat: &[Vec<bool>], stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == k {
            out.push(stack.clone());
            return;
        }
        for i in start..n {
            if stack.iter().all(|&j| compat[j][i]) {
                stack.push(i);
                rec(i + 1, k, n, compat, stack, out);
                stack.pop();
            }
        }
    }
    let mut picks = Vec::new();
    rec(0, k, n, &compat, &mut stack, &mut picks);
    for p in picks {
        out.push(BlobConfig {
            arcs: p.iter().map(|&i| candidates[i]).collect(),
        });
    }
    out
}

/// All `k`-blob configurations on `w`.
///
/// ```
/// use blobcx::manifold::{enumerate_blob_configs, CircleArcs, OneManifold};
/// let w = OneManifold::circle(3).unwrap();
/// assert_eq!(enumerate_blob_configs(&w, 1, CircleArcs::Proper).len(), 6);
/// assert_eq!(enumerate_blob_configs(&w, 1, CircleArcs::Wrapping).len(), 9);
/// ```
pub fn enumerate_blob_configs(w: &OneManifold, k: usize, policy: CircleArcs) -> Vec<BlobConfig> {
    configs_from_arcs(w, &arcs(w, policy, 1), k)
}
