//! JSON coefficient files.
//!
//! ```json
//! {
//!   "name": "trunc-poly:2",
//!   "field": {"char": 0},
//!   "objects": ["*"],
//!   "hom": [{"from": "*", "to": "*", "basis": ["1", "x"]}],
//!   "compose": [[["*", "*", "*"], 0, 0, 0, "1"],
//!               [["*", "*", "*"], 0, 1, 1, "1"],
//!               [["*", "*", "*"], 1, 0, 1, "1"]],
//!   "identities": {"*": [["1", "1"]]}
//! }
//! ```
//!
//! A `compose` entry `[[o, o′, o″], i, j, k, c]` says that basis element `i`
//! of `Hom(o, o′)` composed with basis element `j` of `Hom(o′, o″)` has
//! coefficient `c` on basis element `k` of `Hom(o, o″)`. Objects may be given
//! by name or index, basis elements likewise. Hom spaces that are not listed
//! are zero and omitted structure constants vanish. Scalars are strings
//! `"num/den"` or `"num"` in lowest terms.

use std::collections::{BTreeMap, HashSet};

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coefficients::{CategoryPresentation, ObjectId};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, rational_of, FieldSpec, Scalar};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    name: String,
    field: FieldRepr,
    objects: Vec<String>,
    hom: Vec<HomRepr>,
    #[serde(default)]
    compose: Vec<ComposeRepr>,
    identities: BTreeMap<String, Vec<(Ref, Lit)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldRepr {
    char: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomRepr {
    from: Ref,
    to: Ref,
    basis: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ComposeRepr([Ref; 3], Ref, Ref, Ref, Lit);

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Ref {
    Index(usize),
    Name(String),
}

struct Lit(BigRational);

impl<'de> Deserialize<'de> for Lit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Lit).map_err(|_| {
            serde::de::Error::custom(format!(
                "scalar {s:?} is not a decimal fraction \"num/den\" in lowest terms with nonzero denominator"
            ))
        })
    }
}

impl Serialize for Lit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

fn semantic(message: impl Into<String>) -> Error {
    Error::Parse {
        message: message.into(),
        line: None,
        column: None,
    }
}

fn resolve(names: &[String], r: &Ref, what: &str) -> Result<usize> {
    match r {
        Ref::Index(i) if *i < names.len() => Ok(*i),
        Ref::Index(i) => Err(semantic(format!("{what} index {i} out of range ({} available)", names.len()))),
        Ref::Name(n) => names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| semantic(format!("unknown {what} {n:?}"))),
    }
}

/// Reads a coefficient file. Syntax errors and malformed scalars carry the
/// line and column; inconsistent references do not. The result is not
/// validated.
pub fn from_json(text: &str) -> Result<CategoryPresentation> {
    let repr: FileRepr = serde_json::from_str(text).map_err(|e| Error::Parse {
        message: strip_location(&e.to_string()),
        line: Some(e.line()),
        column: Some(e.column()),
    })?;
    let field = FieldSpec::from_characteristic(repr.field.char)
        .map_err(|_| semantic(format!("characteristic {} is neither 0 nor a prime below 2^32", repr.field.char)))?;
    let objects = repr.objects;
    if objects.is_empty() {
        return Err(semantic("no objects"));
    }
    let distinct: HashSet<&String> = objects.iter().collect();
    if distinct.len() != objects.len() {
        return Err(semantic("duplicate object names"));
    }
    let n = objects.len();
    let mut hom = vec![vec![Vec::new(); n]; n];
    let mut declared = vec![vec![false; n]; n];
    for h in repr.hom {
        let (a, b) = (resolve(&objects, &h.from, "object")?, resolve(&objects, &h.to, "object")?);
        if declared[a][b] {
            return Err(semantic(format!("Hom({}, {}) declared twice", objects[a], objects[b])));
        }
        declared[a][b] = true;
        let distinct: HashSet<&String> = h.basis.iter().collect();
        if distinct.len() != h.basis.len() {
            return Err(semantic(format!("duplicate basis names in Hom({}, {})", objects[a], objects[b])));
        }
        hom[a][b] = h.basis;
    }
    let scalar = |q: &BigRational| -> Result<Scalar> {
        field
            .from_rational(q)
            .map_err(|_| semantic(format!("scalar {} has a denominator divisible by {}", format_rational(q), field.characteristic())))
    };
    let mut entries = Vec::with_capacity(repr.compose.len());
    let mut seen = HashSet::new();
    for ComposeRepr(triple, i, j, k, c) in &repr.compose {
        let o: Vec<ObjectId> = triple
            .iter()
            .map(|r| resolve(&objects, r, "object"))
            .collect::<Result<_>>()?;
        let (i, j, k) = (
            resolve(&hom[o[0]][o[1]], i, "basis element")?,
            resolve(&hom[o[1]][o[2]], j, "basis element")?,
            resolve(&hom[o[0]][o[2]], k, "basis element")?,
        );
        if !seen.insert((o[0], o[1], o[2], i, j, k)) {
            return Err(semantic(format!(
                "structure constant [{}, {}, {}] {i} {j} {k} given twice",
                objects[o[0]], objects[o[1]], objects[o[2]]
            )));
        }
        entries.push(((o[0], o[1], o[2]), i, j, k, scalar(&c.0)?));
    }
    let mut identities = vec![None; n];
    for (name, terms) in &repr.identities {
        let o = resolve(&objects, &Ref::Name(name.clone()), "object")?;
        let mut v = Vec::new();
        for (b, c) in terms {
            v.push((resolve(&hom[o][o], b, "basis element")?, scalar(&c.0)?));
        }
        identities[o] = Some(v);
    }
    let identities = identities
        .into_iter()
        .enumerate()
        .map(|(o, v)| v.ok_or_else(|| semantic(format!("object {:?} has no identity", objects[o]))))
        .collect::<Result<Vec<_>>>()?;
    CategoryPresentation::new(repr.name, field, objects, hom, entries, identities)
}

/// Writes a presentation in the file format read by [`from_json`]. Output is
/// deterministic: objects by name, basis elements by index.
pub fn to_json(c: &CategoryPresentation) -> String {
    let n = c.object_count();
    let name = |o: usize| Ref::Name(c.objects()[o].clone());
    let lit = |x: &Scalar| Lit(rational_of(x));
    let mut hom = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if c.hom_dim(a, b) > 0 {
                hom.push(HomRepr {
                    from: name(a),
                    to: name(b),
                    basis: c.hom_basis(a, b).to_vec(),
                });
            }
        }
    }
    let mut compose = Vec::new();
    for (&(a, b, d), table) in &c.compose {
        for (i, row) in table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, x) in v {
                    compose.push(ComposeRepr([name(a), name(b), name(d)], Ref::Index(i), Ref::Index(j), Ref::Index(*k), lit(x)));
                }
            }
        }
    }
    let identities = (0..n)
        .map(|o| {
            let terms = c.identity(o).iter().map(|(k, x)| (Ref::Name(c.hom_basis(o, o)[*k].clone()), lit(x))).collect();
            (c.objects()[o].clone(), terms)
        })
        .collect();
    let repr = FileRepr {
        name: c.name().to_string(),
        field: FieldRepr {
            char: c.field().characteristic(),
        },
        objects: c.objects().to_vec(),
        hom,
        compose,
        identities,
    };
    serde_json::to_string_pretty(&repr).expect("presentations serialize")
}

fn strip_location(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::builtin;

    #[test]
    fn builtins_round_trip() {
        for name in ["ground", "trunc-poly:3", "group:Z/2", "matrix:2", "group:Z/3@F3"] {
            let c = builtin(name).unwrap();
            let back = from_json(&to_json(&c)).unwrap();
            assert_eq!(back, c, "{name}");
        }
        let two = crate::coefficients::tests::two_object();
        assert_eq!(from_json(&to_json(&two)).unwrap(), two);
    }

    #[test]
    fn module_example_parses() {
        let text = r#"{
          "name": "trunc-poly:2",
          "field": {"char": 0},
          "objects": ["*"],
          "hom": [{"from": "*", "to": "*", "basis": ["1", "x"]}],
          "compose": [[["*", "*", "*"], 0, 0, 0, "1"],
                      [["*", "*", "*"], 0, 1, 1, "1"],
                      [["*", "*", "*"], 1, 0, 1, "1"]],
          "identities": {"*": [["1", "1"]]}
        }"#;
        assert_eq!(from_json(text).unwrap().hom_basis(0, 0), builtin("trunc-poly:2").unwrap().hom_basis(0, 0));
    }

    #[test]
    fn malformed_scalar_has_location() {
        let text = "{\"name\": \"a\", \"field\": {\"char\": 0}, \"objects\": [\"*\"],\n \"hom\": [{\"from\": 0, \"to\": 0, \"basis\": [\"1\"]}],\n \"compose\": [[[0,0,0], 0, 0, 0, \"1/0\"]],\n \"identities\": {\"*\": [[0, \"1\"]]}}";
        match from_json(text) {
            Err(Error::Parse { line: Some(3), column: Some(_), message }) => assert!(message.contains("1/0")),
            other => panic!("{other:?}"),
        }
        let not_lowest = text.replace("1/0", "2/4");
        assert!(matches!(from_json(&not_lowest), Err(Error::Parse { line: Some(3), .. })));
    }

    #[test]
    fn semantic_errors() {
        let base = builtin("trunc-poly:2").unwrap();
        let text = to_json(&base);
        let unknown = text.replacen("\"from\": \"*\"", "\"from\": \"y\"", 1);
        assert!(matches!(from_json(&unknown), Err(Error::Parse { line: None, .. })));
        let f2 = text.replace("\"char\": 0", "\"char\": 4");
        assert!(from_json(&f2).is_err());
        let half = text.replacen("\"1\"\n", "\"1/2\"\n", 1);
        let in_f2 = half.replace("\"char\": 0", "\"char\": 2");
        assert!(from_json(&in_f2).is_err());
    }
}
