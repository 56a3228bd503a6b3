use blobcx::blobcomplex::estimate_blob_size;
use blobcx::coefficients::CategoryPresentation;
use blobcx::fields::BoundaryCondition;
use blobcx::hocolim::{estimate_hocolim_size, Model};
use blobcx::manifold::{ComponentKind, OneManifold};

use crate::Exit;

/// Beyond these the exact estimate itself is too expensive, so a crude
/// upper bound is used instead.
const EXACT_FIELD_LIMIT: f64 = 1e8;
const EXACT_CONFIG_LIMIT: f64 = 2e6;
const EXACT_POSET_LIMIT: f64 = 4096.0;

fn binomial(n: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0))
}

/// Per-degree sizes through `degree`, and whether they are exact.
pub fn estimate(model: Model, w: &OneManifold, c: &CategoryPresentation, degree: usize, boundary: &BoundaryCondition) -> Result<(Vec<f64>, bool), Exit> {
    let gaps: usize = w.components().iter().map(|c| c.gaps()).sum();
    let points: usize = w.components().iter().map(|c| c.points).sum();
    let objects = c.object_count() as f64;
    let hom = (0..c.object_count())
        .flat_map(|a| (0..c.object_count()).map(move |b| (a, b)))
        .map(|(a, b)| c.hom_dim(a, b))
        .max()
        .unwrap_or(0) as f64;
    let fields = objects.powi(gaps as i32) * hom.powi(points as i32);
    match model {
        Model::Blob => {
            let arcs: f64 = w
                .components()
                .iter()
                .map(|c| {
                    let n = c.points as f64;
                    match c.kind {
                        ComponentKind::Circle => n * (n - 1.0),
                        ComponentKind::Interval => n * (n - 1.0) / 2.0,
                    }
                })
                .sum();
            let configs: Vec<f64> = (0..=degree).map(|k| binomial(arcs, k)).collect();
            if fields <= EXACT_FIELD_LIMIT && configs.iter().all(|&x| x <= EXACT_CONFIG_LIMIT) {
                let exact = estimate_blob_size(w, c, degree, boundary)?;
                return Ok((exact.into_iter().map(|x| x as f64).collect(), true));
            }
            Ok((configs.into_iter().map(|x| x * fields).collect(), false))
        }
        Model::Hocolim => {
            let poset = 2f64.powi(gaps as i32);
            if fields <= EXACT_FIELD_LIMIT && poset <= EXACT_POSET_LIMIT {
                let exact = estimate_hocolim_size(w, c, degree, boundary)?;
                return Ok((exact.into_iter().map(|x| x as f64).collect(), true));
            }
            Ok(((0..=degree).map(|k| fields * poset.powi(k as i32 + 1)).collect(), false))
        }
    }
}

/// Refuses, with exit status 4, when some degree through `degree` would
/// exceed `cap` basis elements.
pub fn check(model: Model, w: &OneManifold, c: &CategoryPresentation, degree: usize, boundary: &BoundaryCondition, cap: usize) -> Result<(), Exit> {
    let (sizes, exact) = estimate(model, w, c, degree, boundary)?;
    if let Some((k, &size)) = sizes.iter().enumerate().find(|(_, &s)| s > cap as f64) {
        return Err(Exit {
            code: 4,
            message: format!(
                "{model:?} complex on {w} needs {}{size:.0} basis elements in degree {k}, over the cap of {cap} (raise it with --max-cells)",
                if exact { "" } else { "up to " }
            ),
        });
    }
    Ok(())
}
