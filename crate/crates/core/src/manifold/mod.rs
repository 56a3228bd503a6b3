//! Combinatorial 1-manifolds with a finite carrier of marked points.
//!
//! Each component carries `N` marked points. Between and around them sit
//! *gaps* (cut slots). On an interval there are `N + 1` gaps: gap `0` and gap
//! `N` are the boundary, and point `i` lies between gap `i` and gap `i + 1`.
//! On a circle there are `N` gaps and point `i` runs from gap `i` to gap
//! `i + 1 mod N`.

mod arcs;
mod homeo;
mod poset;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use arcs::{arcs, configs_from_arcs, enumerate_blob_configs, Arc, BlobConfig, CircleArcs};
pub use homeo::{Homeomorphism, Transform};
pub use poset::{enumerate_decompositions, is_refinement, poset_chains, Chain, Decomposition, DecompositionPoset};

use crate::error::{Error, Result};

/// Largest carrier supported per component; cut sets are stored as bitmasks.
pub const MAX_POINTS: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Interval,
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub points: usize,
}

impl Component {
    pub fn interval(points: usize) -> Component {
        Component {
            kind: ComponentKind::Interval,
            points,
        }
    }

    pub fn circle(points: usize) -> Component {
        Component {
            kind: ComponentKind::Circle,
            points,
        }
    }

    pub fn is_circle(&self) -> bool {
        self.kind == ComponentKind::Circle
    }

    /// Number of gaps: `N + 1` on an interval, `N` on a circle.
    pub fn gaps(&self) -> usize {
        match self.kind {
            ComponentKind::Interval => self.points + 1,
            ComponentKind::Circle => self.points,
        }
    }

    /// The gap after `len` points starting at gap `start`.
    pub fn gap_after(&self, start: usize, len: usize) -> usize {
        match self.kind {
            ComponentKind::Interval => start + len,
            ComponentKind::Circle => (start + len) % self.points,
        }
    }

    /// Gaps at which a decomposition may cut: interior gaps of an interval,
    /// every gap of a circle.
    pub fn cuttable(&self, gap: usize) -> bool {
        match self.kind {
            ComponentKind::Interval => gap >= 1 && gap < self.points,
            ComponentKind::Circle => gap < self.points,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ComponentKind::Interval => write!(f, "interval:{}", self.points),
            ComponentKind::Circle => write!(f, "circle:{}", self.points),
        }
    }
}

/// An ordered disjoint union of intervals and circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneManifold {
    components: Vec<Component>,
}

impl OneManifold {
    pub fn new(components: Vec<Component>) -> Result<OneManifold> {
        if components.is_empty() {
            return Err(Error::Manifold("a manifold needs at least one component".into()));
        }
        for c in &components {
            if c.points == 0 || c.points > MAX_POINTS {
                return Err(Error::Manifold(format!("{c}: carriers need between 1 and {MAX_POINTS} points")));
            }
        }
        Ok(OneManifold { components })
    }

    pub fn interval(points: usize) -> Result<OneManifold> {
        Self::new(vec![Component::interval(points)])
    }

    pub fn circle(points: usize) -> Result<OneManifold> {
        Self::new(vec![Component::circle(points)])
    }

    /// `self ⊔ other`, with the components of `self` first.
    pub fn disjoint_union(&self, other: &OneManifold) -> OneManifold {
        let mut components = self.components.clone();
        components.extend(other.components.iter().copied());
        OneManifold { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, i: usize) -> Component {
        self.components[i]
    }

    /// Parses `interval:N`, `circle:N` and `+`-joined unions. A component
    /// without `:N` takes `default_points`.
    pub fn parse_with_points(literal: &str, default_points: Option<usize>) -> Result<OneManifold> {
        let mut components = Vec::new();
        for part in literal.split('+') {
            let part = part.trim();
            let (kind, n) = match part.split_once(':') {
                Some((k, n)) => (
                    k,
                    n.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Manifold(format!("bad point count in {part:?}")))?,
                ),
                None => (
                    part,
                    default_points.ok_or_else(|| Error::Manifold(format!("{part:?} needs a point count")))?,
                ),
            };
            components.push(match kind {
                "interval" | "I" => Component::interval(n),
                "circle" | "S1" => Component::circle(n),
                _ => return Err(Error::Manifold(format!("unknown component type {kind:?}"))),
            });
        }
        OneManifold::new(components)
    }
}

impl FromStr for OneManifold {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_points(s, None)
    }
}

impl fmt::Display for OneManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
