use blobcx::blobcomplex::{build_blob_complex, disjoint_union_iso, gluing_chain_map, homeomorphism_action, BlobComplex, Gluing};
use blobcx::coefficients::builtin;
use blobcx::fields::BoundaryCondition;
use blobcx::linalg::{Scalar, SparseMatrix};
use blobcx::manifold::{Component, ComponentKind, Homeomorphism, OneManifold, Transform};

const DEGREE: usize = 2;

fn build(w: &OneManifold) -> BlobComplex {
    build_blob_complex(w, &builtin("trunc-poly:2").unwrap(), DEGREE, &BoundaryCondition::free()).unwrap()
}

/// Every carrier-preserving self-map of a single component.
fn transforms(c: &Component) -> Vec<Transform> {
    let w = OneManifold::new(vec![*c]).unwrap();
    match c.kind {
        ComponentKind::Interval => vec![Transform::IDENTITY, Homeomorphism::reflection(&w, 0).unwrap().transform(0)],
        ComponentKind::Circle => (0..c.points)
            .flat_map(|shift| [false, true].map(|reflect| Transform { reflect, shift }))
            .collect(),
    }
}

fn product(w: &OneManifold, parts: &[Transform]) -> Homeomorphism {
    Homeomorphism::new(w, (0..parts.len()).collect(), parts.to_vec()).unwrap()
}

/// `f ⊗ g` on the tensor complex, block by block.
fn tensor_map(r1: &BlobComplex, r2: &BlobComplex, f: &[SparseMatrix], g: &[SparseMatrix], k: usize) -> SparseMatrix {
    let field = r1.field();
    let mut offset = 0;
    let mut cols = Vec::new();
    let dim: usize = (0..=k).map(|i| r1.complex().dim(i) * r2.complex().dim(k - i)).sum();
    for i in 0..=k {
        let (fi, gj) = (&f[i], &g[k - i]);
        let d2 = r2.complex().dim(k - i);
        for a in 0..fi.cols() {
            for b in 0..gj.cols() {
                let mut col: Vec<(usize, Scalar)> = Vec::new();
                for (ra, x) in fi.column(a) {
                    for (rb, y) in gj.column(b) {
                        col.push((offset + ra * d2 + rb, x * y));
                    }
                }
                col.sort_by_key(|(r, _)| *r);
                cols.push(col);
            }
        }
        offset += fi.rows() * d2;
    }
    SparseMatrix::from_columns(dim, field, cols).unwrap()
}

#[test]
fn disjoint_union_is_natural() {
    for (l1, l2) in [("interval:2", "circle:2"), ("circle:3", "interval:1"), ("circle:2", "circle:3")] {
        let (w1, w2): (OneManifold, OneManifold) = (l1.parse().unwrap(), l2.parse().unwrap());
        let w = w1.disjoint_union(&w2);
        let (r1, r2, u) = (build(&w1), build(&w2), build(&w));
        let (_, iso) = disjoint_union_iso(&u, &r1, &r2).unwrap();
        for t1 in transforms(&w1.component(0)) {
            for t2 in transforms(&w2.component(0)) {
                let f = homeomorphism_action(&r1, &product(&w1, &[t1])).unwrap();
                let g = homeomorphism_action(&r2, &product(&w2, &[t2])).unwrap();
                let fg = homeomorphism_action(&u, &product(&w, &[t1, t2])).unwrap();
                for k in 0..=DEGREE {
                    let lhs = iso[k].mul(&fg[k]).unwrap();
                    let rhs = tensor_map(&r1, &r2, &f, &g, k).mul(&iso[k]).unwrap();
                    assert_eq!(lhs, rhs, "{l1}+{l2} {t1:?} {t2:?} degree {k}");
                }
            }
        }
    }
}

#[test]
fn closing_is_natural() {
    for n in 1..=3 {
        for extra in [None, Some(2)] {
            let mut src = vec![Component::interval(n)];
            let mut tgt = vec![Component::circle(n)];
            if let Some(m) = extra {
                src.push(Component::circle(m));
                tgt.push(Component::circle(m));
            }
            let (ws, wt) = (OneManifold::new(src).unwrap(), OneManifold::new(tgt).unwrap());
            let (rs, rt) = (build(&ws), build(&wt));
            let close = gluing_chain_map(&rs, &rt, Gluing::Close { component: 0 }).unwrap();
            let circle_of = OneManifold::circle(n).unwrap();
            let others: Vec<Transform> = extra.map_or(vec![Transform::IDENTITY], |_| transforms(&ws.component(1)));
            for t in transforms(&ws.component(0)) {
                // the interval's reflection closes up to the circle's reflection
                let closed = if t.reflect { Homeomorphism::reflection(&circle_of, 0).unwrap().transform(0) } else { t };
                for &o in &others {
                    let (hs, ht) = if extra.is_some() {
                        (product(&ws, &[t, o]), product(&wt, &[closed, o]))
                    } else {
                        (product(&ws, &[t]), product(&wt, &[closed]))
                    };
                    let (fs, ft) = (homeomorphism_action(&rs, &hs).unwrap(), homeomorphism_action(&rt, &ht).unwrap());
                    for k in 0..=DEGREE {
                        assert_eq!(close[k].mul(&fs[k]).unwrap(), ft[k].mul(&close[k]).unwrap(), "n={n} {t:?} {o:?} degree {k}");
                    }
                }
            }
        }
    }
}
