//! Galilean group on the spin particle ℝ³×ℝ³×S², and on the affine factor ℝ⁶.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use momap_core::action::unit_gaussian;
use momap_core::affine::{cocycle_identity_defect, cocycle_identity_defect_real, extension_multiply, group_cocycle_c, circle_distance};
use momap_core::decompose::complex_stabilizer;
use momap_core::examples::galilean::*;
use momap_core::normsq::criticality_residual;
use momap_core::{eigendecompose_stabilizer, ContractionSpec, DecompositionMode, GroupLaw, HamiltonianAction, StraightLine, Tolerances, Vector};

use super::common::{self, Sampler};
use super::{decomposition_task, Suite};
use crate::config::ExperimentConfig;
use crate::registry::Anchor;
use crate::report::{Outcome, Task};
use crate::CliError;

pub struct Ctx {
    pub params: GalileanParams,
    pub second: GalileanParams,
    pub spec: GalileanSpec,
    pub group: GalileanGroup,
    pub affine: GalileanAffineGroup,
}

fn params(mass: f64, spin: f64) -> Result<GalileanParams, CliError> {
    GalileanParams::new(mass, spin).map_err(|e| CliError::Config(e.to_string()))
}

/// A unit vector orthogonal to x.
fn orthogonal(x: [f64; 3]) -> [f64; 3] {
    let a = if x[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
    let v = [a[0] - d * x[0], a[1] - d * x[1], a[2] - d * x[2]];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v = unit_gaussian(rng, 3);
    [v[0], v[1], v[2]]
}

/// A random vector orthogonal to x.
fn random_perp(rng: &mut ChaCha8Rng, x: [f64; 3]) -> [f64; 3] {
    let v = random_unit(rng);
    let d = v[0] * x[0] + v[1] * x[1] + v[2] * x[2];
    [v[0] - d * x[0], v[1] - d * x[1], v[2] - d * x[2]]
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let g = &cfg.galilean;
        let p = params(g.mass, g.spin)?;
        Ok(Self {
            params: p,
            second: params(g.second_mass, g.second_spin)?,
            spec: GalileanSpec::new(p),
            group: GalileanGroup::new(p),
            affine: GalileanAffineGroup::new(p).map_err(|e| CliError::Config(e.to_string()))?,
        })
    }

    /// (0, 0, e₃), on the first critical family.
    pub fn default_point(&self) -> Vector {
        GalileanSpec::first_family_point([0.0, 0.0, 1.0])
    }

    pub fn tasks<'a>(&'a self, cfg: &ExperimentConfig, suites: &[Suite], point: &Vector) -> Vec<Task<'a>> {
        let mut t = Vec::new();
        for s in suites {
            match s {
                Suite::Structure => t.extend(self.structure(cfg)),
                Suite::Cocycle => t.extend(self.cocycle(cfg)),
                Suite::Operators => t.extend(common::operator_tasks(cfg, &self.spec, point, "", false)),
                Suite::Decompose => t.extend(self.decompose(cfg, point)),
                Suite::Hessian => t.extend(common::hessian_tasks(cfg, &self.spec, point, "", false)),
            }
        }
        t
    }

    fn structure<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        let spec = &self.spec;
        let sampler = common::default_sampler(spec);
        let mut t = vec![common::jacobi_task(cfg, spec.algebra(), ""), common::pairing_task(cfg, spec.algebra(), ""), common::acs_task(cfg, spec, sampler.clone(), "")];
        t.extend(common::momentum_tasks(cfg, spec, sampler.clone(), ""));
        t.extend(common::sigma_tasks(cfg, spec, sampler.clone(), ""));
        t.extend(common::one_cocycle_tasks(cfg, &self.group, sampler.clone(), ""));

        let s = self.params.spin;
        t.push(Task::new(cfg, "momentum.closed_form", Anchor::MomentumClosedForm, 1e-12, move |rng| {
            // J(0,0,x) = (−(s/2)x, 0, 0, 0)
            let x = random_unit(rng);
            let j = spec.momentum(&GalileanSpec::first_family_point(x));
            let mut expected = Vector::zeros(10);
            for i in 0..3 {
                expected[i] = -s / 2.0 * x[i];
            }
            Ok(Outcome::defect((j - expected).amax()))
        }));
        let affine = self.affine.clone();
        let s2 = sampler.clone();
        t.push(Task::new(cfg, "sigma.closed_form", Anchor::SigmaClosedForm, 1e-9, move |rng| {
            use momap_core::action::sigma_two_cocycle;
            let aff = momap_core::GroupAction::action(&affine);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let (xi, eta) = (spec.sample_algebra(rng), spec.sample_algebra(rng));
                let a = sigma_two_cocycle(spec, &xi, &eta, &s2(rng));
                worst = worst.max((a - aff.sigma_closed_form(&xi, &eta)).abs() / (1.0 + a.abs()));
            }
            Ok(Outcome::defect(worst))
        }));

        let samples = cfg.galilean.first_family_samples;
        t.push(Task::new(cfg, "critical.first_family", Anchor::Critical, 1e-12, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..samples {
                worst = worst.max(criticality_residual(spec, &GalileanSpec::first_family_point(random_unit(rng))));
            }
            Ok(Outcome::defect(worst).note(format!("{samples} random unit x")))
        }));
        let second = self.second;
        t.push(Task::new(cfg, "critical.second_family", Anchor::CriticalFamily, 1e-8, move |rng| {
            let spec2 = GalileanSpec::new(second);
            let x = random_unit(rng);
            let m = galilean_second_critical_family(second, orthogonal(x), x)?;
            Ok(Outcome::defect(criticality_residual(&spec2, &m))
                .note(format!("m = {}, s = {}, ‖p‖² = {:.12}", second.mass, second.spin, second_family_p_squared(second))))
        }));
        t.push(Task::new(cfg, "critical.second_family_momentum", Anchor::CriticalFamily, 1e-12, move |rng| {
            let spec2 = GalileanSpec::new(second);
            let x = random_unit(rng);
            let m = galilean_second_critical_family(second, orthogonal(x), x)?;
            let p = [m[3], m[4], m[5]];
            let j = spec2.momentum(&m);
            Ok(Outcome::defect((&j - second_family_momentum(second, p, x)).amax() / (1.0 + j.amax())))
        }));
        t
    }

    fn cocycle<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        let (pairs, triples) = (cfg.sampling.pairs, cfg.sampling.triples);
        let params = self.params;
        let affine = &self.affine;
        let contraction = ContractionSpec::new(StraightLine).with_nodes(cfg.quadrature.nodes);
        let mut t = Vec::new();
        t.push(Task::new(cfg, "cocycle.closed_form_vs_bargmann", Anchor::Bargmann, 1e-6, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..pairs {
                let (g1, g2) = (affine.sample(rng), affine.sample(rng));
                worst = worst.max((group_cocycle_c(affine, &g1, &g2) - bargmann_cocycle(params, &g1, &g2)).abs());
            }
            Ok(Outcome::defect(worst).note(format!("{pairs} pairs")))
        }));
        let c1 = contraction.clone();
        t.push(Task::new(cfg, "cocycle.triangle_vs_closed_form", Anchor::TriangleCocycle, 1e-6, move |rng| {
            let m0 = Vector::zeros(6);
            let mut worst = 0.0f64;
            for _ in 0..pairs {
                let (g1, g2) = (affine.sample(rng), affine.sample(rng));
                let q = c1.triangle_cocycle(affine, &g1, &g2, &m0)?;
                worst = worst.max((q - group_cocycle_c(affine, &g1, &g2)).abs());
            }
            Ok(Outcome::defect(worst).note(format!("{pairs} pairs, straight-line contraction")))
        }));
        let c2 = contraction;
        t.push(Task::new(cfg, "cocycle.triangle_vs_bargmann", Anchor::Bargmann, 1e-6, move |rng| {
            let m0 = Vector::zeros(6);
            let mut worst = 0.0f64;
            for _ in 0..pairs {
                let (g1, g2) = (affine.sample(rng), affine.sample(rng));
                let q = c2.triangle_cocycle(affine, &g1, &g2, &m0)?;
                worst = worst.max((q - bargmann_cocycle(params, &g1, &g2)).abs());
            }
            Ok(Outcome::defect(worst).note(format!("{pairs} pairs")))
        }));
        t.push(Task::new(cfg, "cocycle.identity", Anchor::CocycleIdentity, 1e-9, move |rng| {
            let mut worst = 0.0f64;
            let c = |a: &GalileanElement, b: &GalileanElement| bargmann_cocycle(params, a, b);
            for _ in 0..triples {
                let (g1, g2, g3) = (affine.sample(rng), affine.sample(rng), affine.sample(rng));
                worst = worst.max(cocycle_identity_defect_real(affine, c, &g1, &g2, &g3));
            }
            Ok(Outcome::defect(worst).note(format!("{triples} triples")))
        }));
        t.push(Task::new(cfg, "cocycle.extension", Anchor::ExtensionLaw, 1e-9, move |rng| {
            let c = |a: &GalileanElement, b: &GalileanElement| bargmann_cocycle(params, a, b);
            let mut worst = 0.0f64;
            for _ in 0..triples {
                let mut el = || (affine.sample(rng), rand::Rng::gen::<f64>(rng));
                let (a, b, d) = (el(), el(), el());
                let left = extension_multiply(affine, c, &extension_multiply(affine, c, &a, &b), &d);
                let right = extension_multiply(affine, c, &a, &extension_multiply(affine, c, &b, &d));
                let g = (&left.0 .0 - &right.0 .0).amax();
                worst = worst.max(g).max(circle_distance(left.1, right.1));
                worst = worst.max(cocycle_identity_defect(affine, c, &a.0, &b.0, &d.0));
            }
            Ok(Outcome::defect(worst).note(format!("{triples} triples in G×U(1)")))
        }));
        t
    }

    fn decompose<'a>(&'a self, cfg: &ExperimentConfig, point: &Vector) -> Vec<Task<'a>> {
        let spec = &self.spec;
        let mut t = vec![decomposition_task(cfg, spec, point, "")];
        // The closed-form checks apply on the first family (0, 0, x).
        if point.rows(0, 6).amax() != 0.0 {
            return t;
        }
        let x = [point[6], point[7], point[8]];
        let (params, s) = (self.params, self.params.spin);
        let m = point.clone();
        t.push(Task::new(cfg, "decompose.dimension", Anchor::StabilizerDimension, 0.0, move |_| {
            let st = complex_stabilizer(spec, &m, &Tolerances::default())?;
            let defect = (st.dim() as f64 - 6.0).abs() + (st.upsilon_real_dim as f64 - 12.0).abs();
            Ok(Outcome::defect(defect)
                .note(format!("complex {}, real {}", st.dim(), st.upsilon_real_dim))
                .dimension("stabilizer.complex", st.dim())
                .dimension("stabilizer.upsilon_real", st.upsilon_real_dim))
        }));
        let m = point.clone();
        let decomp = Arc::new(move || {
            let mu = spec.momentum(&m);
            eigendecompose_stabilizer(spec, &m, &mu, DecompositionMode::Hermitian, &Tolerances::default())
        });
        let d1 = decomp.clone();
        t.push(Task::new(cfg, "decompose.eigenvalues", Anchor::StabilizerSpectrum, 1e-8, move |_| {
            let d = d1()?;
            let expected = [-s / 2.0, -s / 2.0, 0.0, 0.0, 0.0, s / 2.0];
            let mut sorted = expected;
            sorted.sort_by(f64::total_cmp);
            let defect = if d.eigenvalues.len() == 6 {
                d.eigenvalues.iter().zip(sorted.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            let mult: Vec<String> = d.multiplicities().iter().map(|(v, k)| format!("{v:.9}×{k}")).collect();
            Ok(Outcome::defect(defect).note(format!("[{}]", mult.join(", "))))
        }));
        let d2 = decomp.clone();
        t.push(Task::new(cfg, "decompose.embedding", Anchor::StabilizerEmbedding, 1e-8, move |rng| {
            let d = d2()?;
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let g = momap_core::action::gaussian(rng, 6);
                let center = stabilizer_center_element(params, x, (g[0], g[1]), (g[2], g[3]), (g[4], g[5]));
                let plus = stabilizer_plus_element(params, x, random_perp(rng, x), random_perp(rng, x));
                let minus = stabilizer_minus_element(params, x, random_perp(rng, x));
                worst = worst
                    .max(d.distance_to(d.zero_cluster(), &center.to_complex()) / center.to_complex().norm())
                    .max(d.distance_to(d.cluster_near(-s / 2.0), &plus.to_complex()) / plus.to_complex().norm())
                    .max(d.distance_to(d.cluster_near(s / 2.0), &minus.to_complex()) / minus.to_complex().norm());
            }
            Ok(Outcome::defect(worst).note("relative κ_C-distance to the eigenclusters, 10 samples"))
        }));
        t.push(Task::new(cfg, "decompose.not_subalgebra", Anchor::NotSubalgebra, 1e-12, move |rng| {
            let d = decomp()?;
            let g = momap_core::action::gaussian(rng, 12);
            let (b1, t1) = ((g[2], g[3]), (g[4], g[5]));
            let (b2, t2) = ((g[8], g[9]), (g[10], g[11]));
            let z1 = stabilizer_center_element(params, x, (g[0], g[1]), b1, t1);
            let z2 = stabilizer_center_element(params, x, (g[6], g[7]), b2, t2);
            let br = spec.algebra().complexify().bracket(&z1, &z2);
            // third slot of the bracket: (θ₂b₁ − θ₁b₂)x
            let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
            let (p, q) = (mul(t2, b1), mul(t1, b2));
            let k = (p.0 - q.0, p.1 - q.1);
            let mut err = 0.0f64;
            for i in 0..3 {
                err = err.max((br.re[6 + i] - k.0 * x[i]).abs()).max((br.im[6 + i] - k.1 * x[i]).abs());
            }
            let outside = d.distance_to(None, &br.to_complex());
            let size = k.0.hypot(k.1);
            // The check is meaningless unless the bracket is visibly outside (g_C)_m.
            let defect = if outside > 1e-6 * (1.0 + size) { err } else { f64::INFINITY };
            Ok(Outcome::defect(defect).note(format!("third slot |θ₂b₁ − θ₁b₂| = {size:.3e}, distance from stabilizer {outside:.3e}")))
        }));
        t
    }

    pub fn sampler(&self) -> Sampler<'_> {
        common::default_sampler(&self.spec)
    }
}
