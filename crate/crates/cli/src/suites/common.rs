//! Checks shared by every example.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use momap_core::action::{acs_defects, gaussian, kappa_skew_defect, momentum_defect, sigma_kappa_map, sigma_matrix, sigma_one_cocycle};
use momap_core::decompose::complex_stabilizer;
use momap_core::linalg::op_norm;
use momap_core::normsq::{criticality_residual, hessian_fd, hessian_fd_bilinear, hessian_matrix, hessian_quadratic, upsilon, ComplexOrbitHessian};
use momap_core::{build_operators, ComplexVector, Derivative, Error, GroupAction, HamiltonianAction, LieAlgebraSpec, OperatorBundle, Tolerances, Vector};

use crate::config::ExperimentConfig;
use crate::registry::Anchor;
use crate::report::{Outcome, Task};

/// Draws a point of M.
pub type Sampler<'a> = Arc<dyn Fn(&mut ChaCha8Rng) -> Vector + Send + Sync + 'a>;

pub fn default_sampler<'a, S: HamiltonianAction + ?Sized>(spec: &'a S) -> Sampler<'a> {
    Arc::new(move |rng: &mut ChaCha8Rng| spec.sample_point(rng))
}

/// `base.tag`, or `base` when the tag is empty.
pub fn name(base: &str, tag: &str) -> String {
    if tag.is_empty() {
        base.to_string()
    } else {
        format!("{base}.{tag}")
    }
}

/// |a − b| / max(|a|, |b|), zero when both vanish.
pub fn relative(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    let s = a.abs().max(b.abs());
    if d == 0.0 {
        0.0
    } else {
        d / s
    }
}

pub fn jacobi_task<'a>(cfg: &ExperimentConfig, alg: &'a LieAlgebraSpec, tag: &str) -> Task<'a> {
    Task::new(cfg, &name("algebra.jacobi", tag), Anchor::Jacobi, 1e-10, move |_| {
        let r = alg.jacobi_defect();
        let mut o = Outcome::defect(r.max_defect);
        if let Some((i, j, k)) = r.triple {
            let l = alg.labels();
            let label = |a: usize| l.get(a).cloned().unwrap_or_else(|| format!("e{a}"));
            if r.max_defect > 0.0 {
                o = o.note(format!("worst triple ({}, {}, {})", label(i), label(j), label(k)));
            }
        }
        Ok(o)
    })
}

pub fn pairing_task<'a>(cfg: &ExperimentConfig, alg: &'a LieAlgebraSpec, tag: &str) -> Task<'a> {
    Task::new(cfg, &name("algebra.pairing", tag), Anchor::PairingSymmetry, 1e-12, move |_| {
        let k = alg.gram();
        let sym = op_norm(&(k - k.transpose()));
        let cond = k.clone().svd(false, false).singular_values;
        let min = cond.min();
        let defect = if min > 1e-12 * cond.max() { sym } else { f64::INFINITY };
        Ok(Outcome::defect(defect).note(format!("smallest singular value {min:.3e}")))
    })
}

pub fn acs_task<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, sampler: Sampler<'a>, tag: &str) -> Task<'a> {
    let points = cfg.sampling.points;
    Task::new(cfg, &name("acs.compatible", tag), Anchor::AcsCompatible, 1e-10, move |rng| {
        let mut worst = 0.0f64;
        let mut min_g = f64::INFINITY;
        for _ in 0..points {
            let m = sampler(rng);
            let (sq, compat, pos) = acs_defects(spec, &m, 10, rng);
            worst = worst.max(sq).max(compat);
            min_g = min_g.min(pos);
        }
        let defect = if min_g > 0.0 { worst } else { f64::INFINITY };
        Ok(Outcome::defect(defect).note(format!("min g(X, X) = {min_g:.3e}")))
    })
}

/// Momentum identity with finite-difference and, when available, analytic T_mJ.
pub fn momentum_tasks<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, sampler: Sampler<'a>, tag: &str) -> Vec<Task<'a>> {
    let (points, dirs) = (cfg.sampling.points, cfg.sampling.directions);
    let scan = move |derivative: Derivative, sampler: Sampler<'a>| {
        move |rng: &mut ChaCha8Rng| -> Result<Outcome, Error> {
            let mut worst = 0.0f64;
            for _ in 0..points {
                let m = sampler(rng);
                worst = worst.max(momentum_defect(spec, &m, dirs, derivative, rng)?);
            }
            Ok(Outcome::defect(worst).note(format!("{points} points × {dirs} directions")))
        }
    };
    let mut tasks = vec![Task::new(
        cfg,
        &name("momentum.fd", tag),
        Anchor::MomentumIdentity,
        1e-5,
        scan(Derivative::FiniteDifference(1e-5), sampler.clone()),
    )];
    if spec.has_analytic_tangent() {
        tasks.push(Task::new(cfg, &name("momentum.analytic", tag), Anchor::MomentumIdentity, 1e-9, scan(Derivative::Native, sampler)));
    }
    tasks
}

/// Σ is the same matrix at every sampled point, and Σ_κ is κ-skew.
pub fn sigma_tasks<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, sampler: Sampler<'a>, tag: &str) -> Vec<Task<'a>> {
    let points = cfg.sampling.points;
    let s2 = sampler.clone();
    vec![
        Task::new(cfg, &name("sigma.constant", tag), Anchor::SigmaConstant, 1e-9, move |rng| {
            let s0 = sigma_matrix(spec, &sampler(rng));
            let scale = 1.0 + op_norm(&s0);
            let mut worst = 0.0f64;
            for _ in 1..points {
                worst = worst.max(op_norm(&(sigma_matrix(spec, &sampler(rng)) - &s0)) / scale);
            }
            Ok(Outcome::defect(worst).note(format!("relative to ‖Σ‖ = {:.3e}", scale - 1.0)))
        }),
        Task::new(cfg, &name("sigma.kappa_skew", tag), Anchor::SigmaKappaSkew, 1e-9, move |rng| {
            let sk = sigma_kappa_map(spec, &s2(rng));
            Ok(Outcome::defect(kappa_skew_defect(spec.algebra(), &sk) / (1.0 + op_norm(&sk))))
        }),
    ]
}

/// σ(g) does not depend on the point, and satisfies the one-cocycle law.
pub fn one_cocycle_tasks<'a, G: GroupAction>(cfg: &ExperimentConfig, group: &'a G, sampler: Sampler<'a>, tag: &str) -> Vec<Task<'a>> {
    let samples = cfg.sampling.points;
    let s2 = sampler.clone();
    vec![
        Task::new(cfg, &name("sigma.one_cocycle_constant", tag), Anchor::OneCocycle, 1e-9, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let g = group.sample(rng);
                let a = sigma_one_cocycle(group, &g, &sampler(rng));
                let b = sigma_one_cocycle(group, &g, &sampler(rng));
                worst = worst.max((&a - &b).amax() / (1.0 + a.amax()));
            }
            Ok(Outcome::defect(worst))
        }),
        Task::new(cfg, &name("sigma.one_cocycle_law", tag), Anchor::OneCocycleLaw, 1e-9, move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let (g, h) = (group.sample(rng), group.sample(rng));
                let m = s2(rng);
                let lhs = sigma_one_cocycle(group, &group.compose(&g, &h), &m);
                let rhs = sigma_one_cocycle(group, &g, &m) + group.coadjoint_inverse(&g) * sigma_one_cocycle(group, &h, &m);
                worst = worst.max((&lhs - &rhs).amax() / (1.0 + lhs.amax()));
            }
            Ok(Outcome::defect(worst))
        }),
    ]
}

pub fn critical_point_task<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, check: &str, m: Vector, tol: f64) -> Task<'a> {
    Task::new(cfg, check, Anchor::Critical, tol, move |_| Ok(Outcome::defect(criticality_residual(spec, &m))))
}

pub fn kappa_positive(alg: &LieAlgebraSpec) -> bool {
    alg.gram().clone().symmetric_eigen().eigenvalues.min() > 0.0
}

fn shared_bundle<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Arc<Result<OperatorBundle, Error>> {
    Arc::new(build_operators(spec, m))
}

fn with_bundle(b: &Arc<Result<OperatorBundle, Error>>) -> Result<&OperatorBundle, Error> {
    b.as_ref().as_ref().map_err(Clone::clone)
}

/// The Lichnerowicz/Calabi operator identities at m.
pub fn operator_tasks<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, m: &Vector, tag: &str, equivariant: bool) -> Vec<Task<'a>> {
    let bundle = shared_bundle(spec, m);
    let mut tasks = Vec::new();
    let diag = |field: fn(&OperatorBundle) -> f64| {
        let b = bundle.clone();
        move |_: &mut ChaCha8Rng| -> Result<Outcome, Error> { Ok(Outcome::defect(field(with_bundle(&b)?))) }
    };
    tasks.push(Task::new(cfg, &name("operators.l_symmetric", tag), Anchor::LichnerowiczSymmetric, 1e-9, diag(|b| b.diagnostics.l_symmetry)));
    tasks.push(Task::new(cfg, &name("operators.z_skew", tag), Anchor::ZSkew, 1e-9, diag(|b| b.diagnostics.z_skew)));
    tasks.push(Task::new(cfg, &name("operators.z_crosscheck", tag), Anchor::ZCrossCheck, 1e-8, diag(|b| b.diagnostics.z_crosscheck)));
    tasks.push(Task::new(cfg, &name("operators.cplus_hermitian", tag), Anchor::CalabiHermitian, 1e-9, diag(|b| b.diagnostics.cplus_hermitian)));
    tasks.push(Task::new(cfg, &name("operators.cminus_hermitian", tag), Anchor::CalabiHermitian, 1e-9, diag(|b| b.diagnostics.cminus_hermitian)));
    // Negativity of C⁺ is a statement about κ-self-adjoint operators with κ > 0; for
    // indefinite κ only the factorization C⁺ = −Υ*Υ is meaningful.
    if kappa_positive(spec.algebra()) {
        let b = bundle.clone();
        tasks.push(Task::new(cfg, &name("operators.cplus_negative", tag), Anchor::CalabiNegative, 1e-9, move |_| {
            let b = with_bundle(&b)?;
            match b.diagnostics.cplus_max_eigenvalue {
                Some(e) => Ok(Outcome::defect(e.max(0.0)).note(format!("max eigenvalue {e:.3e}"))),
                None => Err(Error::precondition("κ is not positive definite", 1.0, 0.0)),
            }
        }));
    }
    let b = bundle.clone();
    tasks.push(Task::new(cfg, &name("operators.factorization", tag), Anchor::CalabiFactorization, 1e-8, move |_| {
        Ok(Outcome::defect(with_bundle(&b)?.factorization_defect(spec)))
    }));
    let b = bundle.clone();
    tasks.push(Task::new(cfg, &name("operators.imaginary_part", tag), Anchor::CalabiImaginary, 1e-8, move |_| {
        Ok(Outcome::defect(with_bundle(&b)?.imaginary_part_defect(spec)))
    }));
    let mk = m.clone();
    let dim_key = name("stabilizer", tag);
    tasks.push(Task::new(cfg, &name("operators.kernel_angle", tag), Anchor::CalabiKernel, 1e-6, move |_| {
        let st = complex_stabilizer(spec, &mk, &Tolerances::default())?;
        let defect = if st.upsilon_real_dim == 2 * st.cplus_dim { st.angle } else { f64::INFINITY };
        Ok(Outcome::defect(defect)
            .note(format!("dim_C ker C+ = {}, dim_R ker Υ = {}", st.cplus_dim, st.upsilon_real_dim))
            .dimension(&format!("{dim_key}.complex"), st.cplus_dim)
            .dimension(&format!("{dim_key}.upsilon_real"), st.upsilon_real_dim))
    }));
    if equivariant {
        let b = bundle;
        tasks.push(Task::new(cfg, &name("operators.commutator", tag), Anchor::CalabiCommute, 1e-8, move |_| {
            Ok(Outcome::defect(with_bundle(&b)?.commutator_norm()))
        }));
    }
    tasks
}

fn random_complex(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector { re: gaussian(rng, d), im: gaussian(rng, d) }
}

/// Curve step for Hessian finite differences. F is polynomial along straight lines
/// for linear and affine actions, so Richardson extrapolation is nearly exact there
/// and a wide step keeps cancellation error small.
const FD_STEP: f64 = 1e-2;

/// Hessian formula against curve second derivatives, and the complex-orbit form.
pub fn hessian_tasks<'a, S: HamiltonianAction + ?Sized>(cfg: &ExperimentConfig, spec: &'a S, m: &Vector, tag: &str, equivariant: bool) -> Vec<Task<'a>> {
    let dirs = cfg.sampling.hessian_directions;
    let mut tasks = Vec::new();
    let mk = m.clone();
    let key = name("hessian", tag);
    tasks.push(Task::new(cfg, &name("hessian.formula", tag), Anchor::HessianFormula, 1e-4, move |rng| {
        let h = hessian_matrix(spec, &mk)?;
        let mut eig: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let (mut worst, mut at) = (0.0f64, (0.0, 0.0));
        for _ in 0..dirs {
            let x = spec.sample_tangent(&mk, rng);
            let exact = hessian_quadratic(spec, &mk, &x)?;
            let fd = hessian_fd(spec, &mk, &x, FD_STEP);
            let r = relative(exact, fd);
            if r >= worst {
                (worst, at) = (r, (exact, fd));
            }
        }
        Ok(Outcome::defect(worst)
            .note(format!("{dirs} directions, relative; worst {:.6e} vs {:.6e}", at.0, at.1))
            .spectrum(&format!("{key}.tangent"), eig))
    }));
    let bundle = shared_bundle(spec, m);
    let orbit = {
        let b = bundle.clone();
        Arc::new(move || -> Result<ComplexOrbitHessian, Error> { ComplexOrbitHessian::new(spec, with_bundle(&b)?, &Tolerances::default()) })
    };
    let mk = m.clone();
    let o = orbit.clone();
    tasks.push(Task::new(cfg, &name("hessian.orbit", tag), Anchor::HessianOrbit, 1e-4, move |rng| {
        let h = o()?;
        let d = spec.algebra().dim();
        let mut worst = 0.0f64;
        for _ in 0..dirs {
            let (z, g) = (random_complex(rng, d), random_complex(rng, d));
            let exact = h.eval(&z, &g);
            let fd = 0.5 * hessian_fd_bilinear(spec, &mk, &upsilon(spec, &mk, &z), &upsilon(spec, &mk, &g), FD_STEP);
            worst = worst.max(relative(exact, fd));
        }
        Ok(Outcome::defect(worst).note(format!("{dirs} pairs (ζ, γ), relative")))
    }));
    let o = orbit.clone();
    tasks.push(Task::new(cfg, &name("hessian.orbit_symmetric", tag), Anchor::HessianOrbit, 1e-8, move |_| {
        let h = o()?;
        let norm = op_norm(&h.form_matrix());
        Ok(Outcome::defect(h.symmetry_defect() / (1.0 + norm)).note(format!("relative to 1 + ‖B‖ = {:.3e}", 1.0 + norm)))
    }));
    if equivariant && kappa_positive(spec.algebra()) {
        let key = name("hessian", tag);
        tasks.push(Task::new(cfg, &name("hessian.orbit_positive", tag), Anchor::HessianPositive, 1e-8, move |_| {
            let h = orbit()?;
            let spec = h.spectrum().ok_or_else(|| Error::precondition("κ is not positive definite", 1.0, 0.0))?;
            let min = spec.first().copied().unwrap_or(0.0);
            Ok(Outcome::defect((-min).max(0.0)).note(format!("min eigenvalue {min:.3e}")).spectrum(&format!("{key}.orbit"), spec))
        }));
    }
    tasks
}
