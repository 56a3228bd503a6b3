use crate::coefficients::CategoryPresentation;
use crate::error::{Error, Result};
use crate::linalg::FieldSpec;

/// Built-in one-object coefficients:
///
/// * `ground`: the field itself
/// * `trunc-poly:k`: `F[x]/(x^k)`, basis `1, x, …, x^{k−1}`
/// * `group:Z/n`: the group algebra of the cyclic group, basis `g^0 … g^{n−1}`
/// * `matrix:n`: `n×n` matrices, basis `E_ij` in row-major order
///
/// An optional suffix `@Q` or `@F<p>` selects the field; the default is ℚ.
///
/// ```
/// let a = blobcx::coefficients::builtin("trunc-poly:3@F5").unwrap();
/// assert_eq!(a.algebra_dim().unwrap(), 3);
/// assert_eq!(a.field().characteristic(), 5);
/// ```
pub fn builtin(name: &str) -> Result<CategoryPresentation> {
    let unknown = || Error::UnknownBuiltin(name.to_string());
    let (base, field) = match name.split_once('@') {
        Some((b, f)) => (b, f.parse::<FieldSpec>().map_err(|_| unknown())?),
        None => (name, FieldSpec::Rationals),
    };
    let (kind, param) = match base.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (base, None),
    };
    let one = field.one();
    let positive = |p: Option<&str>| -> Result<usize> {
        p.and_then(|s| s.parse::<usize>().ok())
            .filter(|&n| n >= 1 && n <= 64)
            .ok_or_else(unknown)
    };
    match (kind, param) {
        ("ground", None) => CategoryPresentation::algebra(base, field, vec!["1".into()], vec![(0, one.clone())], |_, _| {
            vec![(0, one.clone())]
        }),
        ("trunc-poly", p) => {
            let k = positive(p)?;
            let basis = (0..k).map(monomial).collect();
            CategoryPresentation::algebra(base, field, basis, vec![(0, one.clone())], |i, j| {
                if i + j < k {
                    vec![(i + j, one.clone())]
                } else {
                    vec![]
                }
            })
        }
        ("group", Some(p)) => {
            let n = positive(p.strip_prefix("Z/"))?;
            let basis = (0..n).map(|i| format!("g^{i}")).collect();
            CategoryPresentation::algebra(base, field, basis, vec![(0, one.clone())], |i, j| {
                vec![((i + j) % n, one.clone())]
            })
        }
        ("matrix", p) => {
            let n = positive(p)?;
            let basis = (0..n * n).map(|e| format!("E{}{}", e / n + 1, e % n + 1)).collect();
            let unit = (0..n).map(|i| (i * n + i, one.clone())).collect();
            CategoryPresentation::algebra(base, field, basis, unit, |a, b| {
                let ((i, j), (k, l)) = ((a / n, a % n), (b / n, b % n));
                if j == k {
                    vec![(i * n + l, one.clone())]
                } else {
                    vec![]
                }
            })
        }
        _ => Err(unknown()),
    }
}

fn monomial(i: usize) -> String {
    match i {
        0 => "1".into(),
        1 => "x".into(),
        _ => format!("x^{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        let tp = builtin("trunc-poly:2").unwrap();
        assert_eq!(tp.hom_basis(0, 0), ["1", "x"]);
        assert!(tp.compose_basis(0, 0, 0, 1, 1).is_empty());
        let m = builtin("matrix:2").unwrap();
        assert_eq!(m.algebra_dim().unwrap(), 4);
        // E12 · E21 = E11
        assert_eq!(m.compose_basis(0, 0, 0, 1, 2), [(0, m.field().one())]);
        assert!(m.compose_basis(0, 0, 0, 2, 2).is_empty());
        assert_eq!(builtin("group:Z/3@F2").unwrap().field(), FieldSpec::Prime(2));
        for bad in ["nope", "trunc-poly", "trunc-poly:0", "group:3", "matrix:x", "ground:1", "ground@F4", "ground@"] {
            assert!(matches!(builtin(bad), Err(Error::UnknownBuiltin(_))), "{bad}");
        }
    }

    #[test]
    fn commutativity() {
        assert!(builtin("trunc-poly:3").unwrap().is_commutative_algebra());
        assert!(builtin("group:Z/4").unwrap().is_commutative_algebra());
        assert!(!builtin("matrix:2").unwrap().is_commutative_algebra());
    }
}
