use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiclass::{ClassScore, Metrics};

/// Summary of one train or eval command, written as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Every setting that shaped the run, as `key -> value`.
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub accuracy: f64,
    pub f_macro: f64,
    pub f_micro: f64,
    pub labels: Vec<String>,
    /// Rows are true classes, columns predictions.
    pub confusion: Vec<Vec<usize>>,
    pub per_class: Vec<ClassScore>,
    /// Feature width `o`.
    pub features: usize,
    /// Clauses per class bank `m`.
    pub clauses: usize,
    pub wall_time_secs: f64,
}

impl RunReport {
    pub fn new(
        config: BTreeMap<String, String>,
        seed: u64,
        metrics: &Metrics,
        features: usize,
        clauses: usize,
        wall_time_secs: f64,
    ) -> Self {
        Self {
            config,
            seed,
            accuracy: metrics.accuracy,
            f_macro: metrics.f_macro,
            f_micro: metrics.f_micro,
            labels: metrics.labels.clone(),
            confusion: metrics.confusion.clone(),
            per_class: metrics.per_class.clone(),
            features,
            clauses,
            wall_time_secs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("report: {e}")))?;
        if !(0.0..=1.0).contains(&r.accuracy) {
            return Err(Error::Config(format!("report accuracy {} outside [0, 1]", r.accuracy)));
        }
        Ok(r)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
