//! Experiment reports and the checks that fill them.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::registry::Anchor;

/// Bumped whenever a field is added, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: Anchor,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A precondition of the requested computation does not hold.
    Refused,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub example: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub spectra: BTreeMap<String, Vec<f64>>,
    pub dimensions: BTreeMap<String, usize>,
    pub notes: Vec<String>,
    pub status: Status,
    pub pass: bool,
    /// Per-step rows (iteration, F, residual, step) of a gradient flow.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trajectory: Vec<[f64; 4]>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, cfg: &ExperimentConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            example: cfg.example.to_string(),
            seed: cfg.seed,
            checks: Vec::new(),
            spectra: BTreeMap::new(),
            dimensions: BTreeMap::new(),
            notes: Vec::new(),
            status: Status::Pass,
            pass: true,
            trajectory: Vec::new(),
        }
    }

    pub fn refused(experiment: &str, cfg: &ExperimentConfig, reason: String) -> Self {
        let mut r = Self::new(experiment, cfg);
        r.notes.push(reason);
        r.status = Status::Refused;
        r.pass = false;
        r
    }

    /// Recomputes the verdict as the conjunction of all checks.
    pub fn finish(&mut self) {
        if self.status == Status::Refused {
            self.pass = false;
            return;
        }
        self.pass = self.checks.iter().all(|c| c.pass);
        self.status = if self.pass { Status::Pass } else { Status::Fail };
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check, for terminals.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} (seed {})\n", self.experiment, self.example, self.seed);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<40} {:>11.3e} <= {:<9.1e} {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.defect,
                c.tolerance,
                c.note.as_deref().unwrap_or("")
            ));
        }
        for (k, v) in &self.dimensions {
            out.push_str(&format!("dim  {k} = {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note {n}\n"));
        }
        out.push_str(&format!("{}\n", match self.status {
            Status::Pass => "all checks passed",
            Status::Fail => "some checks failed",
            Status::Refused => "refused: preconditions not met",
        }));
        out
    }
}

/// What a check task produces.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub defect: f64,
    pub note: Option<String>,
    pub spectra: Vec<(String, Vec<f64>)>,
    pub dimensions: Vec<(String, usize)>,
}

impl Outcome {
    pub fn defect(defect: f64) -> Self {
        Self { defect, ..Self::default() }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn spectrum(mut self, name: &str, values: Vec<f64>) -> Self {
        self.spectra.push((name.to_string(), values));
        self
    }

    pub fn dimension(mut self, name: &str, value: usize) -> Self {
        self.dimensions.push((name.to_string(), value));
        self
    }
}

type TaskFn<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Outcome, momap_core::Error> + Send + Sync + 'a>;

/// A named, independently seeded check.
pub struct Task<'a> {
    pub name: String,
    pub anchor: Anchor,
    pub tolerance: f64,
    run: TaskFn<'a>,
}

impl<'a> Task<'a> {
    pub fn new(
        cfg: &ExperimentConfig,
        name: &str,
        anchor: Anchor,
        default_tolerance: f64,
        run: impl Fn(&mut ChaCha8Rng) -> Result<Outcome, momap_core::Error> + Send + Sync + 'a,
    ) -> Self {
        Self { name: name.to_string(), anchor, tolerance: cfg.tolerance(name, default_tolerance), run: Box::new(run) }
    }
}

/// Stable per-check seed: FNV-1a of the name mixed with the experiment seed.
pub fn check_seed(seed: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Runs tasks on the worker pool and merges them in registry order (ties keep
/// submission order). Each task owns an RNG seeded from its name, so results do
/// not depend on scheduling.
pub fn run_tasks(report: &mut ExperimentReport, seed: u64, tasks: Vec<Task<'_>>) {
    let mut results: Vec<(usize, usize, CheckRecord, Outcome)> = tasks
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| {
            let mut rng = ChaCha8Rng::seed_from_u64(check_seed(seed, &t.name));
            let (record, outcome) = match (t.run)(&mut rng) {
                Ok(o) => {
                    let pass = o.defect <= t.tolerance;
                    (CheckRecord { name: t.name, anchor: t.anchor, defect: o.defect, tolerance: t.tolerance, pass, note: o.note.clone() }, o)
                }
                Err(e) => (
                    CheckRecord {
                        name: t.name,
                        anchor: t.anchor,
                        defect: f64::INFINITY,
                        tolerance: t.tolerance,
                        pass: false,
                        note: Some(e.to_string()),
                    },
                    Outcome::default(),
                ),
            };
            (t.anchor.index(), i, record, outcome)
        })
        .collect();
    results.sort_by_key(|(a, i, _, _)| (*a, *i));
    for (_, _, record, outcome) in results {
        for (k, v) in outcome.spectra {
            report.spectra.insert(k, v);
        }
        for (k, v) in outcome.dimensions {
            report.dimensions.insert(k, v);
        }
        report.checks.push(record);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn merge_order_and_verdict() {
        let cfg = ExperimentConfig::default();
        let mut report = ExperimentReport::new("verify", &cfg);
        let tasks = vec![
            Task::new(&cfg, "b", Anchor::HessianFormula, 1.0, |_| Ok(Outcome::defect(0.5))),
            Task::new(&cfg, "a", Anchor::Jacobi, 1.0, |r| Ok(Outcome::defect(r.gen::<f64>() * 0.0 + 2.0))),
            Task::new(&cfg, "c", Anchor::Jacobi, 1.0, |_| Err(momap_core::Error::Numerical("x".into()))),
        ];
        run_tasks(&mut report, 3, tasks);
        report.finish();
        let names: Vec<_> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["a", "c", "b"]);
        assert!(!report.pass);
        assert_eq!(report.failures().count(), 2);
        assert!(report.to_json().contains("\"anchor\": \"Jacobi identity of the structure constants\""));
    }

    #[test]
    fn seeds_differ_by_name() {
        assert_ne!(check_seed(1, "a"), check_seed(1, "b"));
        assert_eq!(check_seed(1, "a"), check_seed(1, "a"));
    }
}
