//! U(n) on ℂⁿ, the equivariant example.

use momap_core::action::{sigma_kappa_map, sigma_one_cocycle};
use momap_core::decompose::equivariant_refinement;
use momap_core::examples::unitary::{build_unitary_linear, UnitaryGroup, UnitarySpec};
use momap_core::linalg::op_norm;
use momap_core::{GroupLaw, HamiltonianAction, Tolerances, Vector};

use super::common::{self, Sampler};
use super::{decomposition_task, Suite};
use crate::config::ExperimentConfig;
use crate::registry::Anchor;
use crate::report::{Outcome, Task};
use crate::CliError;

pub struct Ctx {
    pub spec: UnitarySpec,
    pub group: UnitaryGroup,
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let spec = build_unitary_linear(cfg.unitary.n, cfg.unitary.level).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self { group: UnitaryGroup::new(spec.clone()), spec })
    }

    /// √t·e₁ on the level sphere ‖v‖² = t.
    pub fn default_point(&self) -> Vector {
        self.spec.critical_point()
    }

    pub fn sampler(&self) -> Sampler<'_> {
        common::default_sampler(&self.spec)
    }

    pub fn tasks<'a>(&'a self, cfg: &ExperimentConfig, suites: &[Suite], point: &Vector) -> Vec<Task<'a>> {
        let spec = &self.spec;
        let mut t = Vec::new();
        for s in suites {
            match s {
                Suite::Structure => t.extend(self.structure(cfg)),
                Suite::Cocycle => {
                    let group = &self.group;
                    let (samples, sampler) = (cfg.sampling.pairs, self.sampler());
                    t.push(Task::new(cfg, "sigma.one_cocycle_zero", Anchor::OneCocycle, 1e-10, move |rng| {
                        let mut worst = 0.0f64;
                        for _ in 0..samples {
                            let g = group.sample(rng);
                            worst = worst.max(sigma_one_cocycle(group, &g, &sampler(rng)).amax());
                        }
                        Ok(Outcome::defect(worst).note(format!("{samples} group elements")))
                    }));
                }
                Suite::Operators => t.extend(common::operator_tasks(cfg, spec, point, "", true)),
                Suite::Decompose => {
                    t.push(decomposition_task(cfg, spec, point, ""));
                    let m = point.clone();
                    t.push(Task::new(cfg, "decompose.refinement", Anchor::Refinement, 1e-8, move |_| {
                        let r = equivariant_refinement(spec, &m, &Tolerances::default())?;
                        Ok(Outcome::defect(r.max_eigenvalue.max(0.0))
                            .note(format!("max eigenvalue {:.3e}, zero cluster vs (g_m)_C angle {:.3e}", r.max_eigenvalue, r.zero_cluster_angle))
                            .dimension("stabilizer.real", r.real_stabilizer_dim))
                    }));
                    let m = point.clone();
                    t.push(Task::new(cfg, "decompose.zero_cluster", Anchor::Refinement, 1e-6, move |_| {
                        Ok(Outcome::defect(equivariant_refinement(spec, &m, &Tolerances::default())?.zero_cluster_angle))
                    }));
                }
                Suite::Hessian => t.extend(common::hessian_tasks(cfg, spec, point, "", true)),
            }
        }
        t
    }

    fn structure<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        let spec = &self.spec;
        let sampler = self.sampler();
        let mut t = vec![common::jacobi_task(cfg, spec.algebra(), ""), common::pairing_task(cfg, spec.algebra(), ""), common::acs_task(cfg, spec, sampler.clone(), "")];
        t.extend(common::momentum_tasks(cfg, spec, sampler.clone(), ""));
        t.extend(common::sigma_tasks(cfg, spec, sampler.clone(), ""));
        t.extend(common::one_cocycle_tasks(cfg, &self.group, sampler.clone(), ""));
        t.push(Task::new(cfg, "sigma.kappa_zero", Anchor::SigmaConstant, 1e-12, move |rng| {
            Ok(Outcome::defect(op_norm(&sigma_kappa_map(spec, &sampler(rng)))))
        }));
        t.push(Task::new(cfg, "algebra.kappa_invariant", Anchor::PairingSymmetry, 1e-12, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..10 {
                worst = worst.max(spec.algebra().invariance_defect(&spec.sample_algebra(rng)));
            }
            Ok(Outcome::defect(worst))
        }));
        t.push(common::critical_point_task(cfg, spec, "critical.level_sphere", self.default_point(), 1e-12));
        t.push(common::critical_point_task(cfg, spec, "critical.origin", Vector::zeros(spec.point_dim()), 0.0));
        t
    }
}
