//! Acceptance criteria 1–9, one line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use blobcx::blobcomplex::{
    build_blob_complex, contracting_homotopy, disjoint_union_iso, gluing_chain_map, homeomorphism_action, verify_homotopy, BlobComplex, Gluing,
};
use blobcx::coefficients::{builtin, CategoryPresentation};
use blobcx::fields::BoundaryCondition;
use blobcx::hocolim::{compare_models, hocolim_complex, ordinary_colimit, stabilization_sweep, Model};
use blobcx::hochschild::{bar_complex, hochschild_dims};
use blobcx::linalg::{induced_homology_rank, induces_identity, is_chain_map, rank, SparseMatrix};
use blobcx::manifold::{Homeomorphism, OneManifold};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const BUILTINS: [&str; 5] = ["ground", "trunc-poly:2", "group:Z/2", "matrix:2", "matrix:2@F3"];
const SEMISIMPLE: [&str; 3] = ["ground", "group:Z/2", "matrix:2"];

fn m(s: &str) -> OneManifold {
    s.parse().unwrap()
}

fn coeff(name: &str) -> CategoryPresentation {
    builtin(name).unwrap()
}

fn blob(lit: &str, c: &CategoryPresentation, k: usize) -> Result<BlobComplex, String> {
    build_blob_complex(&m(lit), c, k, &BoundaryCondition::free()).map_err(|e| format!("{lit}: {e}"))
}

/// dim A/[A, A], spanned directly from the structure constants.
fn commutator_quotient(c: &CategoryPresentation) -> usize {
    let d = c.hom_dim(0, 0);
    let field = c.field();
    let mut cols = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut v: Vec<(usize, _)> = c.compose_basis(0, 0, 0, i, j).to_vec();
            v.extend(c.compose_basis(0, 0, 0, j, i).iter().map(|(k, x)| (*k, -x.clone())));
            cols.push(blobcx::linalg::normalize(v));
        }
    }
    d - rank(&SparseMatrix::from_columns(d, field, cols).unwrap())
}

/// Σ dim Hom(a, b): fields on an interval with no cuts.
fn uncut_interval_dim(c: &CategoryPresentation) -> usize {
    let n = c.object_count();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| c.hom_dim(a, b)).sum()
}

fn differential_validity() -> Check {
    let free = BoundaryCondition::free();
    let mut count = 0;
    for name in BUILTINS {
        let c = coeff(name);
        for n in 1..=4 {
            for lit in [format!("interval:{n}"), format!("circle:{n}")] {
                blob(&lit, &c, 3)?;
                hocolim_complex(&m(&lit), &c, 3, &free).map_err(|e| format!("hocolim {lit} {name}: {e}"))?;
                count += 2;
            }
        }
        bar_complex(&c, 3).map_err(|e| format!("bar {name}: {e}"))?;
        count += 1;
    }
    Ok(format!("{count} complexes built with ∂∘∂ = 0"))
}

fn contractibility() -> Check {
    for name in BUILTINS {
        let c = coeff(name);
        let d = uncut_interval_dim(&c);
        for n in 1..=4 {
            let lit = format!("interval:{n}");
            let r = blob(&lit, &c, 3)?;
            let h = r.homology().map_err(|e| e.to_string())?;
            ensure!(h == [d, 0, 0], "{name} {lit}: homology {h:?}, expected [{d}, 0, 0]");
            let hom = contracting_homotopy(&r).map_err(|e| e.to_string())?;
            let ok = verify_homotopy(&r, &hom).map_err(|e| e.to_string())?;
            ensure!(ok.iter().all(|&x| x), "{name} {lit}: d h + h d fails in degrees {ok:?}");
        }
    }
    Ok("H = (d, 0, 0) and d h + h d = id − ι s on interval:1..4".into())
}

fn skein_modules() -> Check {
    let free = BoundaryCondition::free();
    let mut seen = Vec::new();
    for (name, expected) in [("ground", 1), ("trunc-poly:2", 2), ("group:Z/2", 2), ("matrix:2", 1)] {
        let c = coeff(name);
        let oracle = commutator_quotient(&c);
        ensure!(oracle == expected, "{name}: commutator quotient {oracle}, expected {expected}");
        for n in [3, 4] {
            let lit = format!("circle:{n}");
            let h0 = blob(&lit, &c, 1)?.homology().map_err(|e| e.to_string())?[0];
            let colim = ordinary_colimit(&m(&lit), &c, &free).map_err(|e| e.to_string())?.dimension;
            ensure!(h0 == oracle && colim == oracle, "{name} {lit}: H_0 {h0}, colimit {colim}, oracle {oracle}");
        }
        seen.push(format!("{name}→{expected}"));
    }
    Ok(seen.join(" "))
}

fn hochschild_comparison() -> Check {
    let points = [2, 3, 4, 5];
    let mut notes = Vec::new();
    for model in [Model::Hocolim, Model::Blob] {
        for name in BUILTINS {
            let c = coeff(name);
            let oracle = hochschild_dims(&c, 1).map_err(|e| e.to_string())?.dims;
            let t = stabilization_sweep(&points, &c, 1, model).map_err(|e| e.to_string())?;
            for row in t.rows.iter().filter(|r| r.points >= 3) {
                ensure!(row.dims[0] == oracle[0], "{model:?} {name} N={}: degree 0 is {}, oracle {}", row.points, row.dims[0], oracle[0]);
            }
            if SEMISIMPLE.contains(&name) {
                ensure!(t.converged[1] && t.last[1] == 0, "{model:?} {name}: degree 1 column {:?}", t.rows.iter().map(|r| r.dims[1]).collect::<Vec<_>>());
            }
            if name == "trunc-poly:2" {
                let column: Vec<usize> = t.rows.iter().map(|r| r.dims[1]).collect();
                if t.converged[1] && t.last[1] == oracle[1] {
                    notes.push(format!("{model:?} trunc-poly:2 degree 1 {column:?} → {}", oracle[1]));
                } else {
                    ensure!(t.monotone[1] && !t.converged[1], "{model:?} trunc-poly:2 degree 1 {column:?} neither converged nor flagged");
                    notes.push(format!("{model:?} trunc-poly:2 degree 1 {column:?} not converged (flagged)"));
                }
            }
        }
    }
    Ok(notes.join("; "))
}

fn model_equivalence() -> Check {
    for name in BUILTINS {
        let c = coeff(name);
        for n in 1..=4 {
            let r = compare_models(&m(&format!("circle:{n}")), &c, 1).map_err(|e| e.to_string())?;
            ensure!(r.all_equal(), "{name} circle:{n}: blob {:?} vs hocolim {:?}", r.blob, r.hocolim);
        }
    }
    Ok("blob = hocolim in degrees 0, 1 on circle:1..4".into())
}

fn disjoint_union() -> Check {
    let c = coeff("trunc-poly:2");
    for (l1, l2) in [("interval:2", "interval:2"), ("interval:2", "circle:2")] {
        let (r1, r2) = (blob(l1, &c, 2)?, blob(l2, &c, 2)?);
        let u = blob(&format!("{l1}+{l2}"), &c, 2)?;
        let (tensor, iso) = disjoint_union_iso(&u, &r1, &r2).map_err(|e| e.to_string())?;
        for k in 0..=2 {
            let product: usize = (0..=k).map(|i| r1.complex().dim(i) * r2.complex().dim(k - i)).sum();
            ensure!(u.complex().dim(k) == product, "{l1}+{l2} degree {k}: {} vs {product}", u.complex().dim(k));
            ensure!(rank(&iso[k]) == product, "{l1}+{l2} degree {k}: map is not invertible");
        }
        ensure!(is_chain_map(u.complex(), &tensor, &iso).unwrap(), "{l1}+{l2}: iso does not commute with d");
    }
    Ok("isomorphisms onto B(X₁) ⊗ B(X₂) commute with d".into())
}

fn gluing() -> Check {
    for name in BUILTINS {
        let c = coeff(name);
        let (i, s) = (blob("interval:3", &c, 2)?, blob("circle:3", &c, 2)?);
        let f = gluing_chain_map(&i, &s, Gluing::Close { component: 0 }).map_err(|e| e.to_string())?;
        ensure!(is_chain_map(i.complex(), s.complex(), &f).unwrap(), "{name}: closing is not a chain map");
        let h0 = s.homology().unwrap()[0];
        let image = induced_homology_rank(i.complex(), s.complex(), &f[0], 0).unwrap();
        ensure!(image == h0 && h0 == commutator_quotient(&c), "{name}: H_0 image {image}, target {h0}");
    }
    // I₁ = interval:1, I₂ = interval:2 glued end-to-start both ways round, then closed
    let c = coeff("trunc-poly:2");
    let pair = blob("interval:1+interval:2", &c, 2)?;
    let joined = blob("interval:3", &c, 2)?;
    let circle = blob("circle:3", &c, 2)?;
    let cat = |first, second| gluing_chain_map(&pair, &joined, Gluing::Concatenate { first, second }).unwrap();
    let close = gluing_chain_map(&joined, &circle, Gluing::Close { component: 0 }).unwrap();
    let rot = homeomorphism_action(&circle, &Homeomorphism::rotation(circle.manifold(), 0, 1).unwrap()).unwrap();
    let (a, b) = (cat(0, 1), cat(1, 0));
    for k in 0..=2 {
        let lhs = close[k].mul(&a[k]).unwrap();
        let rhs = rot[k].mul(&close[k].mul(&b[k]).unwrap()).unwrap();
        ensure!(lhs == rhs, "associativity fails in degree {k}");
    }
    let triple = blob("interval:1+interval:1+interval:1", &c, 2)?;
    let (left_mid, right_mid) = (blob("interval:2+interval:1", &c, 2)?, blob("interval:1+interval:2", &c, 2)?);
    let glue = |s: &BlobComplex, t: &BlobComplex, first, second| gluing_chain_map(s, t, Gluing::Concatenate { first, second }).unwrap();
    let (l1, l2) = (glue(&triple, &left_mid, 0, 1), glue(&left_mid, &joined, 0, 1));
    let (r1, r2) = (glue(&triple, &right_mid, 1, 2), glue(&right_mid, &joined, 0, 1));
    for k in 0..=2 {
        ensure!(l2[k].mul(&l1[k]).unwrap() == r2[k].mul(&r1[k]).unwrap(), "triple gluing differs in degree {k}");
    }
    Ok("closing is a chain map onto H_0; iterated gluings agree".into())
}

fn functoriality() -> Check {
    for name in ["trunc-poly:2", "matrix:2"] {
        let c = coeff(name);
        let r = blob("circle:4", &c, 2)?;
        let w = r.manifold().clone();
        let rotation = |k| Homeomorphism::rotation(&w, 0, k).unwrap();
        let act = |h: &Homeomorphism| homeomorphism_action(&r, h).unwrap();
        let r1 = act(&rotation(1));
        ensure!(is_chain_map(r.complex(), r.complex(), &r1).unwrap(), "{name}: rotation is not a chain map");
        for k in 0..=2 {
            let id = SparseMatrix::identity(r.complex().dim(k), r.field());
            let fourth = r1[k].mul(&r1[k]).unwrap().mul(&r1[k]).unwrap().mul(&r1[k]).unwrap();
            ensure!(fourth == id, "{name}: r⁴ ≠ id in degree {k}");
        }
        ensure!(induces_identity(r.complex(), &r1[0], 0).unwrap(), "{name}: rotation moves H_0");
        for (a, b) in [(1, 2), (3, 3), (2, 1)] {
            let composite = act(&rotation(a).compose(&rotation(b)).unwrap());
            let (fa, fb) = (act(&rotation(a)), act(&rotation(b)));
            for k in 0..=2 {
                ensure!(composite[k] == fa[k].mul(&fb[k]).unwrap(), "{name}: action(r{a}∘r{b}) differs in degree {k}");
            }
        }
    }
    Ok("r⁴ = id, H_0 fixed, action respects composition".into())
}

fn oracle_consistency() -> Check {
    for name in BUILTINS {
        let c = coeff(name);
        bar_complex(&c, 4).map_err(|e| format!("{name}: {e}"))?;
        let h0 = hochschild_dims(&c, 0).unwrap().dims[0];
        ensure!(h0 == commutator_quotient(&c), "{name}: HH_0 {h0}");
    }
    let t = hochschild_dims(&coeff("trunc-poly:2"), 1).unwrap().dims;
    ensure!(t == [2, 1], "trunc-poly:2: {t:?}");
    Ok("b∘b = 0, HH_0 = A/[A, A], HH(trunc-poly:2) = (2, 1)".into())
}

fn main() {
    let criteria: [(usize, &str, fn() -> Check); 9] = [
        (1, "differential validity", differential_validity),
        (2, "contractibility", contractibility),
        (3, "skein modules", skein_modules),
        (4, "hochschild comparison", hochschild_comparison),
        (5, "model equivalence", model_equivalence),
        (6, "disjoint union", disjoint_union),
        (7, "gluing", gluing),
        (8, "functoriality", functoriality),
        (9, "oracle self-consistency", oracle_consistency),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, check) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
