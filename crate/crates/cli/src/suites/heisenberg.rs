//! A symplectic vector space translating itself.

use momap_core::action::sigma_kappa_map;
use momap_core::affine::{affine_group_defects, cocycle_identity_defect_real, group_cocycle_c};
use momap_core::examples::heisenberg::{build_heisenberg, Translations};
use momap_core::{build_operators, AffineActionSpec, CompatibleStructure, ContractionSpec, GroupAction, GroupLaw, HamiltonianAction, Mat, NormSquared, StraightLine, SymplecticSpace, Vector};

use super::common::{self, Sampler};
use super::{decomposition_task, Suite};
use crate::config::ExperimentConfig;
use crate::registry::Anchor;
use crate::report::{Outcome, Task};
use crate::CliError;

pub struct Ctx {
    pub spec: AffineActionSpec,
    pub group: Translations,
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let build = || -> momap_core::Result<AffineActionSpec> {
            let space = SymplecticSpace::standard(cfg.heisenberg.n)?;
            let j = CompatibleStructure::standard(&space)?;
            build_heisenberg(&space, &j)
        };
        let spec = build().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self { group: Translations::new(spec.clone()), spec })
    }

    /// The origin, the unique critical point.
    pub fn default_point(&self) -> Vector {
        Vector::zeros(self.spec.point_dim())
    }

    pub fn sampler(&self) -> Sampler<'_> {
        common::default_sampler(&self.spec)
    }

    pub fn tasks<'a>(&'a self, cfg: &ExperimentConfig, suites: &[Suite], point: &Vector) -> Vec<Task<'a>> {
        let mut t = Vec::new();
        for s in suites {
            match s {
                Suite::Structure => t.extend(self.structure(cfg)),
                Suite::Cocycle => t.extend(self.cocycle(cfg)),
                Suite::Operators => {
                    t.extend(common::operator_tasks(cfg, &self.spec, point, "", false));
                    let spec = &self.spec;
                    let m = point.clone();
                    t.push(Task::new(cfg, "operators.l_minus_identity", Anchor::LichnerowiczSymmetric, 1e-12, move |_| {
                        let ops = build_operators(spec, &m)?;
                        let n = ops.l.nrows();
                        Ok(Outcome::defect((ops.l + Mat::identity(n, n)).amax()))
                    }));
                }
                Suite::Decompose => t.push(decomposition_task(cfg, &self.spec, point, "")),
                Suite::Hessian => t.extend(common::hessian_tasks(cfg, &self.spec, point, "", false)),
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
        let s2 = sampler.clone();
        t.push(Task::new(cfg, "sigma.kappa_is_j", Anchor::SigmaClosedForm, 1e-12, move |rng| {
            Ok(Outcome::defect((sigma_kappa_map(spec, &s2(rng)) - spec.structure().matrix()).amax()))
        }));
        t.push(common::critical_point_task(cfg, spec, "critical.origin", self.default_point(), 0.0));
        let points = cfg.sampling.points;
        t.push(Task::new(cfg, "critical.norm_squared_is_metric", Anchor::Critical, 1e-12, move |rng| {
            // ‖J‖² = g(v, v), so the origin is the only critical point.
            let f = NormSquared::new(spec);
            let mut worst = 0.0f64;
            for _ in 0..points {
                let v = sampler(rng);
                let g = v.dot(&(spec.structure().metric() * &v));
                worst = worst.max((f.value(&v) - g).abs() / (1.0 + g));
            }
            Ok(Outcome::defect(worst))
        }));
        t
    }

    fn cocycle<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        let (pairs, triples) = (cfg.sampling.pairs, cfg.sampling.triples);
        let group = &self.group;
        let contraction = ContractionSpec::new(StraightLine).with_nodes(cfg.quadrature.nodes);
        vec![
            Task::new(cfg, "cocycle.half_omega", Anchor::GroupCocycle, 1e-12, move |rng| {
                let space = group.action().space();
                let mut worst = 0.0f64;
                let mut sample = Vec::new();
                for _ in 0..pairs {
                    let (a, b) = (group.sample(rng), group.sample(rng));
                    worst = worst.max((group_cocycle_c(group, &a, &b) - 0.5 * space.form(&a, &b)).abs());
                    sample.push((a, b));
                }
                let (sym, law) = affine_group_defects(group, &sample);
                Ok(Outcome::defect(worst.max(sym).max(law)).note(format!("{pairs} pairs")))
            }),
            Task::new(cfg, "cocycle.triangle_vs_closed_form", Anchor::TriangleCocycle, 1e-6, move |rng| {
                let m0 = Vector::zeros(group.action().point_dim());
                let mut worst = 0.0f64;
                for _ in 0..pairs.min(20) {
                    let (a, b) = (group.sample(rng), group.sample(rng));
                    worst = worst.max((contraction.triangle_cocycle(group, &a, &b, &m0)? - group_cocycle_c(group, &a, &b)).abs());
                }
                Ok(Outcome::defect(worst))
            }),
            Task::new(cfg, "cocycle.identity", Anchor::CocycleIdentity, 1e-9, move |rng| {
                let c = |a: &Vector, b: &Vector| group_cocycle_c(group, a, b);
                let mut worst = 0.0f64;
                for _ in 0..triples {
                    let (a, b, d) = (group.sample(rng), group.sample(rng), group.sample(rng));
                    worst = worst.max(cocycle_identity_defect_real(group, c, &a, &b, &d));
                }
                Ok(Outcome::defect(worst).note(format!("{triples} triples")))
            }),
        ]
    }
}
