use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Instant;

use blobcx::coefficients::{to_json, CategoryPresentation};
use blobcx::manifold::OneManifold;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Wall-clock milliseconds per stage.
#[derive(Default, Serialize)]
pub struct Timings(BTreeMap<String, f64>);

impl Timings {
    pub fn record(&mut self, stage: &str, since: Instant) {
        self.0.insert(stage.to_string(), since.elapsed().as_secs_f64() * 1e3);
    }
}

#[derive(Serialize)]
pub struct Verdict {
    pub oracle: usize,
    pub last: usize,
    pub converged: bool,
    pub monotone: bool,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub coeff: String,
    pub coeff_name: String,
    pub coeff_sha256: String,
    pub field: String,
    pub manifold: Option<String>,
    pub points: Option<usize>,
    pub model: Option<String>,
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<BTreeMap<usize, bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal: Option<BTreeMap<usize, bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<BTreeMap<usize, Verdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_violations: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diff: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub timings_ms: Timings,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, coeff: &str, c: &CategoryPresentation, w: Option<&OneManifold>, points: Option<usize>, max_degree: usize) -> Report {
        Report {
            command: command.into(),
            coeff: coeff.into(),
            coeff_name: c.name().into(),
            coeff_sha256: hex::encode(Sha256::digest(to_json(c).as_bytes())),
            field: c.field().to_string(),
            manifold: w.map(|w| w.to_string()),
            points,
            model: None,
            max_degree: Some(max_degree),
            betti: None,
            converged: None,
            equal: None,
            verdict: None,
            valid: None,
            violations: Vec::new(),
            total_violations: None,
            diff: Vec::new(),
            warnings: Vec::new(),
            timings_ms: Timings::default(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} over {}", self.command, self.coeff, self.field);
        if let Some(m) = &self.manifold {
            let _ = writeln!(s, "manifold  {m}");
        }
        if let Some(m) = &self.model {
            let _ = writeln!(s, "model     {m}");
        }
        if let Some(valid) = self.valid {
            let _ = writeln!(s, "valid     {valid}");
            for v in &self.violations {
                let _ = writeln!(s, "  {v}");
            }
        }
        if let Some(b) = &self.betti {
            match b.as_object() {
                Some(rows) if rows.values().all(|v| v.is_object()) => {
                    for (name, row) in rows {
                        let _ = writeln!(s, "{name:>10}  {}", dims_line(row));
                    }
                }
                _ => {
                    let _ = writeln!(s, "{:>10}  {}", "betti", dims_line(b));
                }
            }
        }
        for (name, flags) in [("converged", &self.converged), ("equal", &self.equal)] {
            if let Some(f) = flags {
                let line: Vec<String> = f.iter().map(|(k, v)| format!("{k}:{}", if *v { "yes" } else { "no" })).collect();
                let _ = writeln!(s, "{name:>10}  {}", line.join(" "));
            }
        }
        if let Some(v) = &self.verdict {
            for (k, v) in v {
                let _ = writeln!(
                    s,
                    "degree {k}: last {} oracle {} {}",
                    v.last,
                    v.oracle,
                    if v.agrees { "agrees" } else { "differs" }
                );
            }
        }
        s
    }
}

fn dims_line(v: &serde_json::Value) -> String {
    v.as_object()
        .map(|m| m.iter().map(|(k, d)| format!("{k}:{d}")).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}
