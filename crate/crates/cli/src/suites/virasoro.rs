//! Diff(S¹) on the Fourier-truncated affine model of Diff(S¹)/S¹-classes.
//!
//! The Galerkin truncation is only a Lie algebra on low modes, so Jacobi and the
//! momentum identity are sampled on band-limited inputs.

use std::f64::consts::PI;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use momap_core::action::sigma_two_cocycle;
use momap_core::examples::virasoro::{
    bott_thurston, bott_thurston_affine, bott_thurston_identity_defect, build_virasoro, gelfand_fuchs, schwarzian_defect, CircleDiffeo, VirasoroModel,
};
use momap_core::{HamiltonianAction, Vector};

use super::common::{self, Sampler};
use super::Suite;
use crate::config::{ExperimentConfig, VirasoroConfig};
use crate::registry::Anchor;
use crate::report::{Outcome, Task};
use crate::CliError;

/// Scale of band-limited sample classes.
const CLASS_SCALE: f64 = 0.5;

pub struct Ctx {
    pub model: VirasoroModel,
    pub params: VirasoroConfig,
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let v = &cfg.virasoro;
        let model = build_virasoro(v.modes, v.grid).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self { model, params: v.clone() })
    }

    /// The class [0], where J vanishes.
    pub fn default_point(&self) -> Vector {
        Vector::zeros(self.model.spec.point_dim())
    }

    pub fn sampler(&self) -> Sampler<'_> {
        let (model, k) = (&self.model, self.params.max_mode);
        Arc::new(move |rng: &mut ChaCha8Rng| model.sample_band_limited(rng, k, CLASS_SCALE).to_vector())
    }

    pub fn tasks<'a>(&'a self, cfg: &ExperimentConfig, suites: &[Suite], point: &Vector) -> Vec<Task<'a>> {
        let spec = &self.model.spec;
        let mut t = Vec::new();
        for s in suites {
            match s {
                Suite::Structure => t.extend(self.structure(cfg)),
                Suite::Cocycle => t.extend(self.cocycle(cfg)),
                Suite::Operators => t.extend(common::operator_tasks(cfg, spec, point, "", false)),
                // the spectrum is reported, but no multiplicities are asserted
                Suite::Decompose => t.push(super::decomposition_task(cfg, spec, point, "")),
                Suite::Hessian => t.extend(common::hessian_tasks(cfg, spec, point, "", false)),
            }
        }
        t
    }

    fn structure<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        let model = &self.model;
        let spec = &model.spec;
        let sampler = self.sampler();
        let mut t = vec![common::pairing_task(cfg, spec.algebra(), ""), common::acs_task(cfg, spec, sampler.clone(), "")];
        t.extend(common::momentum_tasks(cfg, spec, sampler.clone(), ""));
        let (triples, k) = (cfg.sampling.triples, self.params.max_mode);
        t.push(Task::new(cfg, "algebra.jacobi_band_limited", Anchor::Jacobi, 1e-10, move |rng| {
            let alg = spec.algebra();
            let mut worst = 0.0f64;
            for _ in 0..triples {
                let (x, y, z) = (model.sample_field(rng, k), model.sample_field(rng, k), model.sample_field(rng, k));
                let j = alg.bracket(&x, &alg.bracket(&y, &z)) + alg.bracket(&y, &alg.bracket(&z, &x)) + alg.bracket(&z, &alg.bracket(&x, &y));
                worst = worst.max(j.amax() / (1.0 + x.norm() * y.norm() * z.norm()));
            }
            Ok(Outcome::defect(worst).note(format!("{triples} triples with modes ≤ {k}")))
        }));
        t.push(common::critical_point_task(cfg, spec, "critical.origin", self.default_point(), 1e-12));
        t
    }

    fn cocycle<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        let model = &self.model;
        let spec = &model.spec;
        let p = self.params.clone();
        let sampler = self.sampler();
        let pairs = cfg.sampling.pairs.min(50);
        let mut t = Vec::new();
        t.push(Task::new(cfg, "cocycle.gelfand_fuchs", Anchor::GelfandFuchs, 1e-8, move |rng| {
            let d = spec.algebra().dim();
            let (mut sin, mut cos) = (Vector::zeros(d), Vector::zeros(d));
            sin[2] = 1.0;
            cos[1] = 1.0;
            let expected = -4.0 * PI.powi(3);
            let mut worst = (gelfand_fuchs(&sin, &cos, p.grid) - expected).abs();
            let m = sampler(rng);
            worst = worst.max((sigma_two_cocycle(spec, &sin, &cos, &m) - expected).abs());
            for _ in 0..pairs {
                let (x, y) = (model.sample_field(rng, p.max_mode), model.sample_field(rng, p.max_mode));
                let gf = gelfand_fuchs(&x, &y, p.grid);
                let closed = spec.sigma_closed_form(&x, &y);
                worst = worst.max((gf - closed).abs());
            }
            Ok(Outcome::defect(worst).note(format!("Σ(sin∂, cos∂) = −4π³ and {pairs} random pairs against ω(τ′ξ, τ′η), absolute")))
        }));
        let q = self.params.clone();
        t.push(Task::new(cfg, "cocycle.bott_thurston", Anchor::BottThurston, 1e-6, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..q.diffeos {
                let g: Vec<CircleDiffeo> = (0..3)
                    .map(|_| CircleDiffeo::random_small(rng, q.bott_thurston_grid, q.max_mode, q.slope))
                    .collect::<Result<_, _>>()?;
                worst = worst.max(bott_thurston_identity_defect(&g[0], &g[1], &g[2])?);
                let (a, b) = (bott_thurston(&g[0], &g[1])?, bott_thurston_affine(&g[0], &g[1])?);
                worst = worst.max((a - b).abs());
            }
            Ok(Outcome::defect(worst).note(format!("{} triples on a {}-point grid; identity and affine form", q.diffeos, q.bott_thurston_grid)))
        }));
        let q = self.params.clone();
        t.push(Task::new(cfg, "cocycle.schwarzian", Anchor::Schwarzian, 1e-6, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..q.diffeos {
                let phi = CircleDiffeo::random_small(rng, q.schwarzian_grid, q.max_mode, q.slope)?;
                worst = worst.max(schwarzian_defect(&phi)?);
            }
            Ok(Outcome::defect(worst).note(format!("{} diffeomorphisms, L² on {} points", q.diffeos, q.schwarzian_grid)))
        }));
        t
    }
}
