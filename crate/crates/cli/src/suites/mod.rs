//! Check suites per example.

pub mod common;
pub mod galilean;
pub mod heisenberg;
pub mod siegel;
pub mod unitary;
pub mod user;
pub mod virasoro;

use momap_core::decompose::{eigendecompose_stabilizer, DecompositionMode};
use momap_core::{HamiltonianAction, Tolerances, Vector};

use crate::config::ExperimentConfig;
use crate::registry::Anchor;
use crate::report::{Outcome, Task};

/// Groups of checks; `verify` runs all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Structure,
    Cocycle,
    Operators,
    Decompose,
    Hessian,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Structure, Suite::Cocycle, Suite::Operators, Suite::Decompose, Suite::Hessian];
}

/// Eigendecomposition of i·ad_{J(m)} on (g_C)_m with its internal consistency defects.
pub fn decomposition_task<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, m: &Vector, tag: &str) -> Task<'a> {
    let m = m.clone();
    let key = common::name("stabilizer", tag);
    Task::new(cfg, &common::name("decompose.consistency", tag), Anchor::StabilizerSpectrum, 1e-8, move |_| {
        let mu = spec.momentum(&m);
        let d = eigendecompose_stabilizer(spec, &m, &mu, DecompositionMode::Hermitian, &Tolerances::default())?;
        let g = &d.diagnostics;
        let scale = 1.0 + d.spectral_radius;
        let defect = [g.ad_preservation, g.hermitian, g.orthogonality, g.membership]
            .into_iter()
            .fold(0.0, f64::max)
            / scale;
        let mult: Vec<String> = d.multiplicities().iter().map(|(v, k)| format!("{v:.6}×{k}")).collect();
        let mut o = Outcome::defect(defect)
            .note(format!("clusters [{}]", mult.join(", ")))
            .spectrum(&format!("{key}.eigenvalues"), d.eigenvalues.clone())
            .dimension(&format!("{key}.clusters"), d.clusters.len());
        for (i, c) in d.clusters.iter().enumerate() {
            o = o.dimension(&format!("{key}.cluster{i}"), c.dim());
        }
        Ok(o)
    })
}
