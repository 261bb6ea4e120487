//! Sp(V, ω) on the compatible complex structures, one block of checks per dimension.

use momap_core::action::sigma_one_cocycle;
use momap_core::examples::siegel::{build_siegel, cayley_pairing, CayleyContraction, SiegelSpec, SymplecticGroup};
use momap_core::linalg::{flatten, unflatten};
use momap_core::{CompatibleStructure, ContractionSpec, GroupAction, GroupLaw, HamiltonianAction, SymplecticSpace, Vector};

use super::common::{self, Sampler};
use super::{decomposition_task, Suite};
use crate::config::ExperimentConfig;
use crate::registry::Anchor;
use crate::report::{Outcome, Task};
use crate::CliError;

pub struct Block {
    /// Half the real dimension of V.
    pub n: usize,
    pub spec: SiegelSpec,
    pub group: SymplecticGroup,
}

impl Block {
    fn tag(&self) -> String {
        format!("n{}", self.n)
    }

    fn contraction(&self, cfg: &ExperimentConfig) -> ContractionSpec<CayleyContraction> {
        ContractionSpec::new(CayleyContraction { dim: 2 * self.n }).with_nodes(cfg.quadrature.nodes)
    }
}

pub struct Ctx {
    pub blocks: Vec<Block>,
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let mut blocks = Vec::new();
        for &n in &cfg.siegel.dims {
            let build = || -> momap_core::Result<SiegelSpec> {
                let space = SymplecticSpace::standard(n)?;
                let j0 = CompatibleStructure::standard(&space)?;
                let mut s = build_siegel(&space, &j0)?;
                s.sample_scale = cfg.siegel.scale;
                Ok(s)
            };
            let spec = build().map_err(|e| CliError::Config(e.to_string()))?;
            blocks.push(Block { n, group: SymplecticGroup::new(spec.clone()), spec });
        }
        Ok(Self { blocks })
    }

    /// j₀ of the first block, the critical point J = 0.
    pub fn default_point(&self) -> Vector {
        self.blocks[0].spec.base()
    }

    /// The first block's spec, used by point-wise commands.
    pub fn primary(&self) -> &SiegelSpec {
        &self.blocks[0].spec
    }

    /// A point given on the command line applies to the block of matching dimension; the others use j₀.
    pub fn tasks<'a>(&'a self, cfg: &ExperimentConfig, suites: &[Suite], point: &Vector) -> Vec<Task<'a>> {
        let mut t = Vec::new();
        for b in &self.blocks {
            let m = if point.len() == b.spec.point_dim() { point.clone() } else { b.spec.base() };
            let tag = b.tag();
            for s in suites {
                match s {
                    Suite::Structure => t.extend(structure(cfg, b)),
                    Suite::Cocycle => t.extend(cocycle(cfg, b)),
                    Suite::Operators => t.extend(common::operator_tasks(cfg, &b.spec, &m, &tag, true)),
                    Suite::Decompose => t.push(decomposition_task(cfg, &b.spec, &m, &tag)),
                    Suite::Hessian => t.extend(common::hessian_tasks(cfg, &b.spec, &m, &tag, true)),
                }
            }
        }
        t
    }
}

fn structure<'a>(cfg: &ExperimentConfig, b: &'a Block) -> Vec<Task<'a>> {
    let spec = &b.spec;
    let tag = b.tag();
    let sampler: Sampler<'a> = common::default_sampler(spec);
    let mut t = vec![
        common::jacobi_task(cfg, spec.algebra(), &tag),
        common::pairing_task(cfg, spec.algebra(), &tag),
        common::acs_task(cfg, spec, sampler.clone(), &tag),
    ];
    t.extend(common::momentum_tasks(cfg, spec, sampler.clone(), &tag));
    t.extend(common::sigma_tasks(cfg, spec, sampler.clone(), &tag));
    t.push(common::critical_point_task(cfg, spec, &common::name("critical.base", &tag), spec.base(), 1e-12));

    let structures = cfg.siegel.structures;
    let scale = cfg.siegel.scale;
    let c = b.contraction(cfg);
    t.push(Task::new(cfg, &common::name("contraction.momentum", &tag), Anchor::ContractionMomentum, 1e-6, move |rng| {
        let m0 = spec.base();
        let mut worst = 0.0f64;
        for _ in 0..structures {
            let m = flatten(&spec.random_structure(rng, scale));
            let q = c.momentum_vector(spec, &m0, &m);
            let exact = spec.momentum(&m);
            worst = worst.max((&q - &exact).amax() / (1.0 + exact.amax()));
        }
        Ok(Outcome::defect(worst).note(format!("{structures} structures, J(j) = j − j₀")))
    }));
    let c = b.contraction(cfg);
    let (nodes, d) = (cfg.quadrature.nodes, 2 * b.n);
    t.push(Task::new(cfg, &common::name("contraction.cayley", &tag), Anchor::CayleyLemma, 1e-7, move |rng| {
        let m0 = spec.base();
        let mut worst = 0.0f64;
        for _ in 0..structures {
            let j = spec.random_structure(rng, scale);
            let m = flatten(&j);
            worst = worst.max(c.endpoint_defect(&m0, &m, 0.5));
            let a = spec.sample_tangent(&m, rng);
            let first = c.pullback_integral(spec, &m0, &m, Some(&a), None, nodes);
            worst = worst.max((first - cayley_pairing(spec.j0(), &j, &unflatten(&a, d))?).abs());
            let a0 = spec.sample_tangent(&m0, rng);
            let second = c.pullback_integral(spec, &m0, &m, None, Some(&a0), nodes);
            worst = worst.max((second - cayley_pairing(spec.j0(), &j, &unflatten(&a0, d))?).abs());
        }
        Ok(Outcome::defect(worst).note(format!("{structures} structures, both integrals and endpoints")))
    }));
    t
}

fn cocycle<'a>(cfg: &ExperimentConfig, b: &'a Block) -> Vec<Task<'a>> {
    let (spec, group) = (&b.spec, &b.group);
    let tag = b.tag();
    let sampler = common::default_sampler(spec);
    let mut t = common::one_cocycle_tasks(cfg, group, sampler.clone(), &tag);
    let samples = cfg.sampling.points;
    t.push(Task::new(cfg, &common::name("sigma.one_cocycle_closed_form", &tag), Anchor::OneCocycle, 1e-9, move |rng| {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let g = group.sample(rng);
            let expected = spec.momentum(&group.act(&g, &spec.base()));
            worst = worst.max((sigma_one_cocycle(group, &g, &sampler(rng)) - &expected).amax() / (1.0 + expected.amax()));
        }
        Ok(Outcome::defect(worst).note("σ(g) = J(g·j₀)"))
    }));
    let c = b.contraction(cfg);
    t.push(Task::new(cfg, &common::name("cocycle.six_term", &tag), Anchor::TriangleCocycle, 1e-6, move |rng| {
        let m0 = spec.base();
        let mut worst = 0.0f64;
        for _ in 0..3 {
            let (g1, g2, g3) = (group.sample(rng), group.sample(rng), group.sample(rng));
            worst = worst.max(c.six_term_defect(group, &g1, &g2, &g3, &m0)?);
        }
        Ok(Outcome::defect(worst).note("3 triples"))
    }));
    t
}
