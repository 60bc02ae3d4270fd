//! Stored ratio fixtures for regression checks.
//!
//! A fixture file is a JSON object mapping `label/theorem/step` keys to
//! decimal ratios. Files are created on first use and then kept.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audit::ChainReport;
use crate::error::Result;

/// Relative tolerance for ratio regressions.
pub const TOLERANCE: f64 = 0.10;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fixtures {
    pub ratios: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Breach {
    pub key: String,
    pub stored: String,
    pub observed: String,
}

pub fn key(label: &str, theorem: &str, step: &str) -> String {
    format!("{label}/{theorem}/{step}")
}

/// `(key, ratio)` for every REPORT_ONLY step and the final ratio of a chain.
pub fn chain_entries(label: &str, report: &ChainReport) -> Vec<(String, String)> {
    report
        .ratios()
        .into_iter()
        .map(|(step, r)| (key(label, report.theorem.label(), &step), r))
        .collect()
}

fn parse(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

impl Fixtures {
    pub fn load(path: impl AsRef<Path>) -> Result<Option<Fixtures>> {
        match std::fs::read_to_string(path) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn insert(&mut self, entries: impl IntoIterator<Item = (String, String)>) {
        self.ratios.extend(entries);
    }

    /// Entries that moved by more than [`TOLERANCE`] in either direction,
    /// or are missing from the fixture.
    pub fn drift(&self, observed: &[(String, String)]) -> Vec<Breach> {
        observed
            .iter()
            .filter_map(|(k, v)| {
                let ok = self.ratios.get(k).is_some_and(|s| {
                    let (s, o) = (parse(s), parse(v));
                    s > 0.0 && ((o / s) - 1.0).abs() <= TOLERANCE
                });
                (!ok).then(|| Breach {
                    key: k.clone(),
                    stored: self.ratios.get(k).cloned().unwrap_or_else(|| "missing".into()),
                    observed: v.clone(),
                })
            })
            .collect()
    }

    /// Entries exceeding their stored value by [`TOLERANCE`] or more.
    /// Keys absent from the fixture are ignored.
    pub fn exceeded(&self, observed: &[(String, String)]) -> Vec<Breach> {
        observed
            .iter()
            .filter_map(|(k, v)| {
                let s = self.ratios.get(k)?;
                (parse(v) >= parse(s) * (1.0 + TOLERANCE)).then(|| Breach {
                    key: k.clone(),
                    stored: s.clone(),
                    observed: v.clone(),
                })
            })
            .collect()
    }
}
