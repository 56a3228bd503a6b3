//! Exact Gaussian elimination on sparse vectors.
//!
//! The kernels are generic over a small arithmetic trait so the prime-field
//! path runs on plain `u64` residues instead of going through [`Scalar`].
//! Every routine is deterministic: vectors are processed in a fixed order
//! and the pivot of a vector is its entry with the lowest index.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::scalar::{inv_mod, mul_mod};
use crate::linalg::{Scalar, SparseMatrix};
#[cfg(test)]
use crate::linalg::FieldSpec;

pub(crate) type Vect<E> = Vec<(usize, E)>;

pub(crate) trait Arith: Sync {
    type E: Clone + Send + Sync;
    fn lift(&self, s: &Scalar) -> Self::E;
    fn lower(&self, e: &Self::E) -> Scalar;
    fn is_zero(&self, e: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - c·b`
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

pub(crate) struct ModP(pub u64);

impl Arith for ModP {
    type E = u64;
    fn lift(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Modular { value, .. } => *value,
            Scalar::Rational(_) => unreachable!("rational scalar in a prime-field elimination"),
        }
    }
    fn lower(&self, e: &u64) -> Scalar {
        Scalar::Modular {
            value: *e,
            modulus: self.0,
        }
    }
    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        let p = self.0;
        (a + p - mul_mod(*c, *b, p)) % p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
}

pub(crate) struct Rat;

impl Arith for Rat {
    type E = BigRational;
    fn lift(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(q) => q.clone(),
            Scalar::Modular { .. } => unreachable!("modular scalar in a rational elimination"),
        }
    }
    fn lower(&self, e: &BigRational) -> Scalar {
        Scalar::Rational(e.clone())
    }
    fn is_zero(&self, e: &BigRational) -> bool {
        e.is_zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        a * b
    }
    fn sub_mul(&self, a: &BigRational, c: &BigRational, b: &BigRational) -> BigRational {
        a - self.mul(c, b)
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// Runs `f` with the arithmetic matching `field`.
macro_rules! with_arith {
    ($field:expr, |$ar:ident| $body:expr) => {
        match $field {
            $crate::linalg::FieldSpec::Rationals => {
                let $ar = &$crate::linalg::elim::Rat;
                $body
            }
            $crate::linalg::FieldSpec::Prime(p) => {
                let $ar = &$crate::linalg::elim::ModP(p);
                $body
            }
        }
    };
}
pub(crate) use with_arith;

pub(crate) fn lift_cols<A: Arith>(ar: &A, m: &SparseMatrix) -> Vec<Vect<A::E>> {
    m.columns()
        .iter()
        .map(|c| c.iter().map(|(i, x)| (*i, ar.lift(x))).collect())
        .collect()
}

pub(crate) fn lower_vec<A: Arith>(ar: &A, v: &[(usize, A::E)]) -> Vec<(usize, Scalar)> {
    v.iter().map(|(i, x)| (*i, ar.lower(x))).collect()
}

/// `a - c·b` on sorted sparse vectors.
fn sub_scaled<A: Arith>(ar: &A, a: &[(usize, A::E)], c: &A::E, b: &[(usize, A::E)]) -> Vect<A::E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, ar.neg(&ar.mul(c, &b[j].1))));
            j += 1;
        } else {
            let x = ar.sub_mul(&a[i].1, c, &b[j].1);
            if !ar.is_zero(&x) {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalized<A: Arith>(ar: &A, mut v: Vect<A::E>) -> Vect<A::E> {
    let inv = ar.inv(&v[0].1);
    for e in &mut v {
        e.1 = ar.mul(&e.1, &inv);
    }
    v
}

/// Forward elimination. Returns the pivot vectors (normalized, leading
/// coefficient one) in insertion order together with an index from leading
/// position to pivot.
pub(crate) fn echelon<A: Arith>(ar: &A, vecs: Vec<Vect<A::E>>, dim: usize) -> (Vec<Vect<A::E>>, Vec<u32>) {
    const NONE: u32 = u32::MAX;
    let mut lead_to_pivot = vec![NONE; dim];
    let mut pivots: Vec<Vect<A::E>> = Vec::new();
    let mut order: Vec<usize> = (0..vecs.len()).collect();
    // sparse vectors first keeps fill-in down; the sort is stable
    order.sort_by_key(|&i| vecs[i].len());
    let mut vecs: Vec<Option<Vect<A::E>>> = vecs.into_iter().map(Some).collect();
    for i in order {
        let mut v = vecs[i].take().unwrap_or_default();
        while let Some((lead, coeff)) = v.first() {
            let p = lead_to_pivot[*lead];
            if p == NONE {
                break;
            }
            let coeff = coeff.clone();
            v = sub_scaled(ar, &v, &coeff, &pivots[p as usize]);
        }
        if !v.is_empty() {
            lead_to_pivot[v[0].0] = pivots.len() as u32;
            pivots.push(normalized(ar, v));
        }
    }
    (pivots, lead_to_pivot)
}

pub(crate) fn rank_of<A: Arith>(ar: &A, vecs: Vec<Vect<A::E>>, dim: usize) -> usize {
    echelon(ar, vecs, dim).0.len()
}

/// Fully reduced echelon form: pivot vectors sorted by leading index, each
/// with a unit leading coefficient and zeros at every other pivot position.
pub(crate) fn reduced_echelon<A: Arith>(ar: &A, vecs: Vec<Vect<A::E>>, dim: usize) -> Vec<Vect<A::E>> {
    let (mut pivots, lead_to_pivot) = echelon(ar, vecs, dim);
    let mut by_lead: Vec<usize> = (0..pivots.len()).collect();
    by_lead.sort_by_key(|&p| pivots[p][0].0);
    // back substitution from the last pivot column down to the first
    for &p in by_lead.iter().rev() {
        let mut v = std::mem::take(&mut pivots[p]);
        let mut pos = 1;
        while pos < v.len() {
            let (col, coeff) = (v[pos].0, v[pos].1.clone());
            let q = lead_to_pivot[col];
            if q != u32::MAX {
                v = sub_scaled(ar, &v, &coeff, &pivots[q as usize]);
                // entries before `col` are untouched; `col` itself vanished
                pos = v.partition_point(|(i, _)| *i < col);
            } else {
                pos += 1;
            }
        }
        pivots[p] = v;
    }
    by_lead.into_iter().map(|p| std::mem::take(&mut pivots[p])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_echelon_is_fully_reduced() {
        let q = FieldSpec::Rationals;
        let m = SparseMatrix::from_rows_i64(q, &[vec![1, 2, 3], vec![2, 4, 7], vec![1, 0, 1]]);
        let rows = lift_cols(&Rat, &m.transpose());
        let r = reduced_echelon(&Rat, rows, 3);
        assert_eq!(r.len(), 3);
        for (k, row) in r.iter().enumerate() {
            assert_eq!(row.len(), 1, "row {k} of an invertible matrix reduces to a unit vector");
            assert_eq!(row[0].0, k);
        }
    }

    #[test]
    fn modular_rank_can_drop() {
        let m = SparseMatrix::from_rows_i64(FieldSpec::Prime(3), &[vec![1, 1], vec![1, 4]]);
        assert_eq!(rank_of(&ModP(3), lift_cols(&ModP(3), &m), 2), 1);
        let m = SparseMatrix::from_rows_i64(FieldSpec::Rationals, &[vec![1, 1], vec![1, 4]]);
        assert_eq!(rank_of(&Rat, lift_cols(&Rat, &m), 2), 2);
    }
}
