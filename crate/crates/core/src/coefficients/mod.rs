//! Finite-dimensional linear 1-categories given by structure constants.
//!
//! A presentation lists objects, a basis for every hom space and the
//! structure constants of composition. Composition is written left to
//! right: for `a ∈ Hom(o, o′)` and `b ∈ Hom(o′, o″)` the product `ab` lies in
//! `Hom(o, o″)`. A one-object presentation is a unital associative algebra
//! whose multiplication is `a · b = ab`.

mod builtin;
mod format;

use std::collections::BTreeMap;
use std::fmt;

pub use builtin::builtin;
pub use format::{from_json, to_json};

use crate::error::{Error, Result};
use crate::linalg::{self, normalize, FieldSpec, Scalar, SparseMatrix, SparseVec, Subspace};

pub type ObjectId = usize;

/// Structure constants for one composable triple of objects:
/// `table[i][j]` is the product of basis element `i` of `Hom(o, o′)` with
/// basis element `j` of `Hom(o′, o″)`, as a vector in `Hom(o, o″)`.
type ComposeTable = Vec<Vec<SparseVec>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryPresentation {
    name: String,
    field: FieldSpec,
    objects: Vec<String>,
    /// `hom[o][o′]` holds basis names.
    hom: Vec<Vec<Vec<String>>>,
    compose: BTreeMap<(ObjectId, ObjectId, ObjectId), ComposeTable>,
    identities: Vec<SparseVec>,
}

/// A failed identity found by [`CategoryPresentation::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(ab)c ≠ a(bc)` for basis elements along `objects[0] → … → objects[3]`.
    Associativity { objects: [ObjectId; 4], basis: [usize; 3] },
    /// `id_o · a ≠ a` for basis element `basis` of `Hom(source, target)`.
    LeftUnit { source: ObjectId, target: ObjectId, basis: usize },
    /// `a · id_o′ ≠ a`.
    RightUnit { source: ObjectId, target: ObjectId, basis: usize },
}

/// Result of a failed validation: the first few violations and a count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub total: usize,
}

/// How many violations a report lists explicitly.
pub const REPORTED_VIOLATIONS: usize = 10;

impl CategoryPresentation {
    /// Assembles a presentation from raw data. `entries` are
    /// `((o, o′, o″), i, j, k, value)` structure constants; missing entries
    /// are zero. Nothing is validated beyond index ranges.
    pub fn new(
        name: impl Into<String>,
        field: FieldSpec,
        objects: Vec<String>,
        hom: Vec<Vec<Vec<String>>>,
        entries: impl IntoIterator<Item = ((ObjectId, ObjectId, ObjectId), usize, usize, usize, Scalar)>,
        identities: Vec<SparseVec>,
    ) -> Result<Self> {
        let n = objects.len();
        if n == 0 {
            return Err(Error::Presentation("no objects".into()));
        }
        if hom.len() != n || hom.iter().any(|row| row.len() != n) {
            return Err(Error::Presentation("hom table is not square in the objects".into()));
        }
        if identities.len() != n {
            return Err(Error::Presentation("one identity per object is required".into()));
        }
        let mut compose: BTreeMap<_, ComposeTable> = BTreeMap::new();
        for ((a, b, c), i, j, k, x) in entries {
            if a >= n || b >= n || c >= n {
                return Err(Error::Presentation(format!("object index out of range in ({a},{b},{c})")));
            }
            let (da, db, dc) = (hom[a][b].len(), hom[b][c].len(), hom[a][c].len());
            if i >= da || j >= db || k >= dc {
                return Err(Error::Presentation(format!(
                    "basis index out of range in ({a},{b},{c}) entry [{i},{j},{k}]"
                )));
            }
            if x.field() != field {
                return Err(Error::FieldMismatch(x.field(), field));
            }
            let table = compose
                .entry((a, b, c))
                .or_insert_with(|| vec![vec![Vec::new(); db]; da]);
            table[i][j].push((k, x));
        }
        for table in compose.values_mut() {
            for row in table.iter_mut() {
                for v in row.iter_mut() {
                    *v = normalize(std::mem::take(v));
                }
            }
        }
        let identities: Vec<SparseVec> = identities.into_iter().map(normalize).collect();
        for (o, id) in identities.iter().enumerate() {
            if id.iter().any(|(k, _)| *k >= hom[o][o].len()) {
                return Err(Error::Presentation(format!("identity of object {o} is out of range")));
            }
        }
        Ok(CategoryPresentation {
            name: name.into(),
            field,
            objects,
            hom,
            compose,
            identities,
        })
    }

    /// A one-object presentation (a unital algebra) from a multiplication
    /// rule on basis indices.
    pub fn algebra(
        name: impl Into<String>,
        field: FieldSpec,
        basis: Vec<String>,
        unit: SparseVec,
        mult: impl Fn(usize, usize) -> SparseVec,
    ) -> Result<Self> {
        let d = basis.len();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, x) in mult(i, j) {
                    entries.push(((0, 0, 0), i, j, k, x));
                }
            }
        }
        Self::new(name, field, vec!["*".into()], vec![vec![basis]], entries, vec![unit])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn hom_basis(&self, from: ObjectId, to: ObjectId) -> &[String] {
        &self.hom[from][to]
    }

    pub fn hom_dim(&self, from: ObjectId, to: ObjectId) -> usize {
        self.hom[from][to].len()
    }

    pub fn identity(&self, o: ObjectId) -> &[(usize, Scalar)] {
        &self.identities[o]
    }

    /// Dimension of the algebra for one-object presentations.
    pub fn algebra_dim(&self) -> Result<usize> {
        self.require_one_object()?;
        Ok(self.hom_dim(0, 0))
    }

    fn require_one_object(&self) -> Result<()> {
        match self.objects.len() {
            1 => Ok(()),
            n => Err(Error::NotOneObject(n)),
        }
    }

    /// Product of two basis elements `i ∈ Hom(a, b)`, `j ∈ Hom(b, c)`.
    pub fn compose_basis(&self, a: ObjectId, b: ObjectId, c: ObjectId, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.compose
            .get(&(a, b, c))
            .map(|t| t[i][j].as_slice())
            .unwrap_or(&[])
    }

    /// Product of vectors `u ∈ Hom(a, b)` and `v ∈ Hom(b, c)`.
    pub fn compose_vectors(&self, a: ObjectId, b: ObjectId, c: ObjectId, u: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Vec::new();
        for (i, x) in u {
            for (j, y) in v {
                let xy = x * y;
                for (k, z) in self.compose_basis(a, b, c, *i, *j) {
                    acc.push((*k, &xy * z));
                }
            }
        }
        normalize(acc)
    }

    /// Left-to-right product of a word of basis elements along `path`
    /// (`word[t] ∈ Hom(path[t], path[t+1])`). The empty word on a single
    /// object evaluates to its identity.
    pub fn compose_word(&self, path: &[ObjectId], word: &[usize]) -> SparseVec {
        debug_assert_eq!(path.len(), word.len() + 1);
        if word.is_empty() {
            return self.identities[path[0]].clone();
        }
        let mut acc: SparseVec = vec![(word[0], self.field.one())];
        for t in 1..word.len() {
            acc = self.compose_vectors(path[0], path[t], path[t + 1], &acc, &[(word[t], self.field.one())]);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Checks associativity on every composable basis triple and both unit
    /// laws on every basis element.
    pub fn validate(&self) -> std::result::Result<(), ValidationReport> {
        let n = self.objects.len();
        let mut violations = Vec::new();
        let mut total = 0;
        let mut record = |v: Violation, violations: &mut Vec<Violation>| {
            total += 1;
            if violations.len() < REPORTED_VIOLATIONS {
                violations.push(v);
            }
        };
        for o0 in 0..n {
            for o1 in 0..n {
                for o2 in 0..n {
                    for o3 in 0..n {
                        let (d1, d2, d3) = (self.hom_dim(o0, o1), self.hom_dim(o1, o2), self.hom_dim(o2, o3));
                        for a in 0..d1 {
                            for b in 0..d2 {
                                let ab = self.compose_basis(o0, o1, o2, a, b);
                                for c in 0..d3 {
                                    let left = self.compose_vectors(o0, o2, o3, ab, &[(c, self.field.one())]);
                                    let bc = self.compose_basis(o1, o2, o3, b, c);
                                    let right = self.compose_vectors(o0, o1, o3, &[(a, self.field.one())], bc);
                                    if left != right {
                                        record(
                                            Violation::Associativity {
                                                objects: [o0, o1, o2, o3],
                                                basis: [a, b, c],
                                            },
                                            &mut violations,
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for s in 0..n {
            for t in 0..n {
                for a in 0..self.hom_dim(s, t) {
                    let e: SparseVec = vec![(a, self.field.one())];
                    if self.compose_vectors(s, s, t, &self.identities[s], &e) != e {
                        record(Violation::LeftUnit { source: s, target: t, basis: a }, &mut violations);
                    }
                    if self.compose_vectors(s, t, t, &e, &self.identities[t]) != e {
                        record(Violation::RightUnit { source: s, target: t, basis: a }, &mut violations);
                    }
                }
            }
        }
        if total == 0 {
            Ok(())
        } else {
            Err(ValidationReport { violations, total })
        }
    }

    /// Human-readable description of a violation using object and basis names.
    pub fn describe(&self, v: &Violation) -> String {
        match v {
            Violation::Associativity { objects: o, basis: b } => format!(
                "associativity fails for ({}, {}, {}) along {} -> {} -> {} -> {} (basis indices {}, {}, {})",
                self.hom[o[0]][o[1]][b[0]],
                self.hom[o[1]][o[2]][b[1]],
                self.hom[o[2]][o[3]][b[2]],
                self.objects[o[0]],
                self.objects[o[1]],
                self.objects[o[2]],
                self.objects[o[3]],
                b[0],
                b[1],
                b[2]
            ),
            Violation::LeftUnit { source, target, basis } => format!(
                "left unit law fails for {} in Hom({}, {}) (basis index {basis})",
                self.hom[*source][*target][*basis], self.objects[*source], self.objects[*target]
            ),
            Violation::RightUnit { source, target, basis } => format!(
                "right unit law fails for {} in Hom({}, {}) (basis index {basis})",
                self.hom[*source][*target][*basis], self.objects[*source], self.objects[*target]
            ),
        }
    }

    /// Whether this is a one-object presentation with `ab = ba` for all
    /// basis pairs.
    pub fn is_commutative_algebra(&self) -> bool {
        if self.objects.len() != 1 {
            return false;
        }
        let d = self.hom_dim(0, 0);
        (0..d).all(|i| (0..d).all(|j| self.compose_basis(0, 0, 0, i, j) == self.compose_basis(0, 0, 0, j, i)))
    }

    fn check_path(&self, path: &[ObjectId]) -> Result<()> {
        if path.is_empty() {
            return Err(Error::InvalidPath("empty object path".into()));
        }
        if let Some(o) = path.iter().find(|&&o| o >= self.objects.len()) {
            return Err(Error::InvalidPath(format!("object index {o} out of range")));
        }
        Ok(())
    }

    /// Dimension of `Hom(o_0,o_1) ⊗ … ⊗ Hom(o_{m−1},o_m)`.
    pub fn path_tensor_dim(&self, path: &[ObjectId]) -> usize {
        path.windows(2).map(|w| self.hom_dim(w[0], w[1])).product()
    }

    /// The iterated composition `Hom(o_0,o_1) ⊗ … ⊗ Hom(o_{m−1},o_m) →
    /// Hom(o_0,o_m)`. Words are indexed in mixed radix with the last factor
    /// varying fastest. For `m = 0` this is the column `id_{o_0}`.
    pub fn composition_map(&self, path: &[ObjectId]) -> Result<SparseMatrix> {
        self.check_path(path)?;
        let (first, last) = (path[0], *path.last().unwrap());
        let target = self.hom_dim(first, last);
        let radices: Vec<usize> = path.windows(2).map(|w| self.hom_dim(w[0], w[1])).collect();
        let cols: Vec<SparseVec> = mixed_radix(&radices)
            .map(|word| self.compose_word(path, &word))
            .collect();
        SparseMatrix::from_columns(target, self.field, cols)
    }

    /// Words along `path` whose composite vanishes.
    pub fn null_subspace(&self, path: &[ObjectId]) -> Result<NullSubspace> {
        if path.len() < 2 {
            return Err(Error::InvalidPath("null subspaces need a word of length at least 1".into()));
        }
        let basis = linalg::kernel_basis(&self.composition_map(path)?);
        Ok(NullSubspace {
            path: path.to_vec(),
            basis,
        })
    }

    /// All words of length `m ≥ 1` from `source` to `target` through any
    /// interior objects, together with the null space of their composite.
    /// This is the space of null fields on a ball with fixed boundary objects.
    pub fn ball_space(&self, source: ObjectId, target: ObjectId, m: usize) -> BallSpace {
        assert!(m >= 1, "a ball carries at least one marked point");
        let n = self.objects.len();
        let mut words = Vec::new();
        let mut cols = Vec::new();
        for interior in mixed_radix(&vec![n; m - 1]) {
            let mut path = Vec::with_capacity(m + 1);
            path.push(source);
            path.extend(interior.iter().copied());
            path.push(target);
            let radices: Vec<usize> = path.windows(2).map(|w| self.hom_dim(w[0], w[1])).collect();
            for word in mixed_radix(&radices) {
                cols.push(self.compose_word(&path, &word));
                words.push(BallWord {
                    objects: path.clone(),
                    morphisms: word,
                });
            }
        }
        let eval = SparseMatrix::from_columns(self.hom_dim(source, target), self.field, cols)
            .expect("composites lie in Hom(source, target)");
        let null = linalg::kernel_subspace(&eval);
        BallSpace { words, eval, null }
    }

    /// `dim A − rank span{ab − ba}` for a one-object presentation.
    pub fn commutator_quotient_dim(&self) -> Result<usize> {
        let d = self.algebra_dim()?;
        let minus = -self.field.one();
        let mut cols = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                cols.push(linalg::axpy(
                    self.compose_basis(0, 0, 0, i, j),
                    &minus,
                    self.compose_basis(0, 0, 0, j, i),
                ));
            }
        }
        let span = SparseMatrix::from_columns(d, self.field, cols)?;
        linalg::quotient_dimension(d, &span)
    }
}

impl fmt::Display for CategoryPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.name, self.field)
    }
}

/// Kernel of the composition map along a fixed object path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullSubspace {
    pub path: Vec<ObjectId>,
    /// Columns index words along `path` in the order of
    /// [`CategoryPresentation::composition_map`].
    pub basis: SparseMatrix,
}

impl NullSubspace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// One word in a [`BallSpace`]: a path of objects and a basis element per step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallWord {
    pub objects: Vec<ObjectId>,
    pub morphisms: Vec<usize>,
}

/// Words on a ball with fixed boundary objects, their evaluation, and the
/// null subspace.
#[derive(Clone, Debug)]
pub struct BallSpace {
    pub words: Vec<BallWord>,
    /// Evaluation map from words to `Hom(source, target)`.
    pub eval: SparseMatrix,
    /// Null fields, with pivot rows on free word coordinates.
    pub null: Subspace,
}

/// Iterates over all tuples `t` with `t[i] < radices[i]`, last entry fastest.
pub(crate) fn mixed_radix(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radices.iter().product();
    (0..total).map(move |mut idx| {
        let mut t = vec![0; radices.len()];
        for i in (0..radices.len()).rev() {
            t[i] = idx % radices[i];
            idx /= radices[i];
        }
        t
    })
}
