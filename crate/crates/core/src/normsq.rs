//! The norm-squared momentum map ‖J‖²_κ: gradient, criticality, the Lichnerowicz and
//! Calabi operators, and the Hessian.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{metric_at, sigma_kappa_map, HamiltonianAction};
use crate::error::{check_len, Error, Result};
use crate::linalg::{
    block_diag, op_norm, op_norm_c, symmetrize, BlockOperator, CMat, ComplexVector, Mat, Tolerances, Vector,
};

/// F(m) = κ(J(m), J(m)) with its g_m-gradient.
pub struct NormSquared<'a, S: ?Sized> {
    spec: &'a S,
    sign: OnceLock<f64>,
}

impl<'a, S: HamiltonianAction + ?Sized> NormSquared<'a, S> {
    pub fn new(spec: &'a S) -> Self {
        Self { spec, sign: OnceLock::new() }
    }

    pub fn value(&self, m: &Vector) -> f64 {
        let j = self.spec.momentum(m);
        self.spec.algebra().kappa(&j, &j)
    }

    /// Coefficient c in G = c · j_m(J(m)·m), fixed by comparing with a
    /// finite-difference directional derivative. Theory gives c = −2.
    pub fn calibration(&self) -> f64 {
        *self.sign.get_or_init(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..32 {
                let m = self.spec.sample_point(&mut rng);
                let x = self.spec.sample_tangent(&m, &mut rng);
                let v = self.spec.inf_action(&self.spec.momentum(&m), &m);
                let predicted = -2.0 * self.spec.omega_at(&m, &v, &x);
                if predicted.abs() < 1e-6 {
                    continue;
                }
                let h = 1e-5 * m.norm().max(1.0);
                let fd = (self.value(&self.spec.retract(&m, &(&x * h)))
                    - self.value(&self.spec.retract(&m, &(&x * -h))))
                    / (2.0 * h);
                return if fd / predicted < 0.0 { 2.0 } else { -2.0 };
            }
            -2.0
        })
    }

    /// (F(m), G) with g_m(G, X) = dF_m(X) = −2 ω_m(J(m)·m, X).
    pub fn value_and_gradient(&self, m: &Vector) -> Result<(f64, Vector)> {
        let j = self.spec.momentum(m);
        let f = self.spec.algebra().kappa(&j, &j);
        let v = self.spec.inf_action(&j, m);
        let g = self.spec.acs_at(m, &v) * self.calibration();
        if !f.is_finite() || g.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("non-finite norm-squared or gradient".into()));
        }
        Ok((f, g))
    }
}

/// Options for [`descend`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentOptions {
    /// Stop once the criticality residual falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub initial_step: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Halvings allowed per line search.
    pub max_halvings: usize,
    /// Sufficient decrease is measured against the largest of the last `memory`
    /// values of F (Grippo–Lampariello–Lucidi); 1 gives a monotone search.
    pub memory: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 20_000, initial_step: 0.1, armijo: 1e-4, max_halvings: 60, memory: 10 }
    }
}

/// One accepted iterate of the flow.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentStep {
    pub iteration: usize,
    pub value: f64,
    pub residual: f64,
    pub step: f64,
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub point: Vector,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trajectory: Vec<DescentStep>,
}

/// Discrete Kirwan flow: steepest descent on ‖J‖² along −G with a step-halving
/// non-monotone Armijo line search started from a Barzilai–Borwein step,
/// retracting back onto M after every step.
pub fn descend<S: HamiltonianAction + ?Sized>(spec: &S, start: &Vector, opts: &DescentOptions) -> Result<DescentResult> {
    if !(opts.tolerance > 0.0) || !(opts.initial_step > 0.0) || opts.memory == 0 {
        return Err(Error::Invalid("descent tolerance, step and memory must be positive".into()));
    }
    check_len(spec.point_dim(), start.len())?;
    let f = NormSquared::new(spec);
    let mut m = start.clone();
    let mut step = opts.initial_step;
    let mut trajectory = Vec::new();
    let (mut value, mut grad) = f.value_and_gradient(&m)?;
    for iteration in 0..=opts.max_iterations {
        let residual = criticality_residual(spec, &m);
        trajectory.push(DescentStep { iteration, value, residual, step });
        if residual <= opts.tolerance || iteration == opts.max_iterations {
            return Ok(DescentResult { point: m, value, residual, iterations: iteration, converged: residual <= opts.tolerance, trajectory });
        }
        let slope = metric_at(spec, &m, &grad, &grad);
        let start = trajectory.len().saturating_sub(opts.memory);
        let reference = trajectory[start..].iter().map(|s| s.value).fold(value, f64::max);
        let mut accepted = None;
        let mut t = step;
        for _ in 0..opts.max_halvings {
            let trial = spec.retract(&m, &(&grad * -t));
            let v = f.value(&trial);
            let sufficient = v <= reference - opts.armijo * t * slope;
            // Inside the round-off band of F the Armijo test cannot see progress;
            // accept instead if the gradient shrinks.
            let flat = (v - value).abs() <= 64.0 * f64::EPSILON * (1.0 + value.abs())
                && criticality_residual(spec, &trial) < residual;
            if v.is_finite() && (sufficient || flat) {
                accepted = Some((trial, v));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((next, _)) => {
                let (v, g) = f.value_and_gradient(&next)?;
                // Barzilai–Borwein trial step for the next search.
                let s_k = &next - &m;
                let y_k = &g - &grad;
                let sy = s_k.dot(&y_k);
                step = if sy > 0.0 { (s_k.norm_squared() / sy).min(1e3 * opts.initial_step) } else { t };
                m = next;
                value = v;
                grad = g;
            }
            None => {
                // No decrease at any step size: F is flat to round-off here.
                return Ok(DescentResult { point: m, value, residual, iterations: iteration, converged: residual <= opts.tolerance, trajectory });
            }
        }
    }
    unreachable!()
}

/// ‖J(m)·m‖ in the metric g_m.
pub fn criticality_residual<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> f64 {
    let v = spec.inf_action(&spec.momentum(m), m);
    metric_at(spec, m, &v, &v).abs().sqrt()
}

/// Criticality threshold used as the Hessian precondition.
pub fn critical_tolerance<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> f64 {
    1e-7 * (1.0 + spec.algebra().kappa_norm(&spec.momentum(m)))
}

/// Υ_m(ξ₁ + iξ₂) = ξ₁·m + j_m(ξ₂·m).
pub fn upsilon<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, zeta: &ComplexVector) -> Vector {
    spec.inf_action(&zeta.re, m) + spec.acs_at(m, &spec.inf_action(&zeta.im, m))
}

/// Matrix of Υ_m on stacked (ξ₁, ξ₂) coordinates, in ambient point coordinates.
pub fn upsilon_matrix<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Mat {
    let alg = spec.algebra();
    let d = alg.dim();
    let orbit: Vec<Vector> = (0..d).map(|a| spec.inf_action(&alg.basis_vector(a), m)).collect();
    let mut cols = orbit.clone();
    cols.extend(orbit.iter().map(|v| spec.acs_at(m, v)));
    Mat::from_columns(&cols)
}

/// Defects of the operator identities at a point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorDiagnostics {
    /// ‖L* − L‖.
    pub l_symmetry: f64,
    /// ‖Z* + Z‖.
    pub z_skew: f64,
    /// ‖Z − (Σ_κ − ad*_(·) J(m))‖.
    pub z_crosscheck: f64,
    /// ‖(C^±)* − C^±‖, κ_C-adjoint.
    pub cplus_hermitian: f64,
    pub cminus_hermitian: f64,
    /// Largest eigenvalue of the Hermitian form κ_C(C⁺ζ, ζ) relative to κ_C; None when κ is indefinite.
    pub cplus_max_eigenvalue: Option<f64>,
    /// Operator norm of C⁺, the natural scale for the defects above.
    pub scale: f64,
}

impl OperatorDiagnostics {
    /// Names and values of every defect above `tol` relative to the operator scale.
    pub fn violations(&self, tol: f64) -> Vec<(String, f64)> {
        let limit = tol * (1.0 + self.scale);
        let mut out = Vec::new();
        for (name, v) in [
            ("L symmetry", self.l_symmetry),
            ("Z skewness", self.z_skew),
            ("Z cross-check", self.z_crosscheck),
            ("C+ hermiticity", self.cplus_hermitian),
            ("C- hermiticity", self.cminus_hermitian),
        ] {
            if !(v <= limit) {
                out.push((name.to_string(), v));
            }
        }
        if let Some(e) = self.cplus_max_eigenvalue {
            if e > limit {
                out.push(("C+ negativity".to_string(), e));
            }
        }
        out
    }
}

/// L, Z, C^± and R at a point.
#[derive(Clone, Debug)]
pub struct OperatorBundle {
    pub m: Vector,
    /// J(m).
    pub jm: Vector,
    pub l: Mat,
    pub z: Mat,
    pub cplus: BlockOperator,
    pub cminus: BlockOperator,
    pub r: BlockOperator,
    pub sigma_kappa: Mat,
    pub diagnostics: OperatorDiagnostics,
}

/// Eigenvalues, ascending, of the symmetric form `a` relative to the SPD form `k`; None if `k` is not SPD.
pub fn relative_eigenvalues(a: &Mat, k: &Mat) -> Option<Vec<f64>> {
    let chol = k.clone().cholesky()?;
    let linv = chol.l().try_inverse()?;
    let s = &linv * symmetrize(a) * linv.transpose();
    let mut v: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Some(v)
}

/// Largest eigenvalue of the symmetric form `a` relative to the SPD form `k`; None if `k` is not SPD.
pub fn max_relative_eigenvalue(a: &Mat, k: &Mat) -> Option<f64> {
    relative_eigenvalues(a, k)?.last().copied()
}

/// Smallest eigenvalue of the symmetric form `a` relative to the SPD form `k`.
pub fn min_relative_eigenvalue(a: &Mat, k: &Mat) -> Option<f64> {
    max_relative_eigenvalue(&-a, k).map(|v| -v)
}

pub fn build_operators<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Result<OperatorBundle> {
    let alg = spec.algebra();
    let d = alg.dim();
    let jm = spec.momentum(m);
    let mut lcols = Vec::with_capacity(d);
    let mut zcols = Vec::with_capacity(d);
    for a in 0..d {
        let v = spec.inf_action(&alg.basis_vector(a), m);
        zcols.push(spec.momentum_tangent(m, &v));
        lcols.push(spec.momentum_tangent(m, &spec.acs_at(m, &v)));
    }
    let l = Mat::from_columns(&lcols);
    let z = Mat::from_columns(&zcols);
    if l.iter().chain(z.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite operator entries".into()));
    }
    let sigma_kappa = sigma_kappa_map(spec, m);
    let alt_z = Mat::from_columns(
        &(0..d)
            .map(|a| sigma_kappa.column(a) - alg.ad_star_matrix(&alg.basis_vector(a)) * &jm)
            .collect::<Vec<_>>(),
    );
    let cplus = BlockOperator::from_complex_parts(&l, &z);
    let cminus = BlockOperator::from_complex_parts(&l, &-&z);
    let ad_j = alg.ad_matrix(&jm);
    let r = BlockOperator::new(Mat::zeros(d, d), -&ad_j, &ad_j + &z, l.clone())?;

    let kinv = alg.gram_inv();
    let herm = |c: &BlockOperator| op_norm(&(c.kappa_adjoint(alg.gram(), kinv).sub(c)).to_real());
    let kb = block_diag(alg.gram());
    let form = &kb * cplus.to_real();
    let diagnostics = OperatorDiagnostics {
        l_symmetry: op_norm(&(alg.kappa_adjoint(&l) - &l)),
        z_skew: op_norm(&(alg.kappa_adjoint(&z) + &z)),
        z_crosscheck: op_norm(&(&z - alt_z)),
        cplus_hermitian: herm(&cplus),
        cminus_hermitian: herm(&cminus),
        cplus_max_eigenvalue: max_relative_eigenvalue(&form, &kb),
        scale: op_norm(&cplus.to_real()),
    };
    Ok(OperatorBundle { m: m.clone(), jm, l, z, cplus, cminus, r, sigma_kappa, diagnostics })
}

impl OperatorBundle {
    /// C⁺ as a complex matrix L + iZ.
    pub fn cplus_complex(&self) -> CMat {
        self.cplus.to_complex_matrix()
    }

    /// ‖[C⁺, C⁻]‖.
    pub fn commutator_norm(&self) -> f64 {
        let a = self.cplus.to_real();
        let b = self.cminus.to_real();
        op_norm(&(&a * &b - &b * &a))
    }

    /// ‖[L, ad_μ]‖ and ‖[Z, ad_μ]‖.
    pub fn commutes_with<S: HamiltonianAction + ?Sized>(&self, spec: &S, mu: &Vector) -> (f64, f64) {
        let ad = spec.algebra().ad_matrix(mu);
        (
            op_norm(&(&self.l * &ad - &ad * &self.l)),
            op_norm(&(&self.z * &ad - &ad * &self.z)),
        )
    }

    /// ‖C⁺ + Υ*Υ‖ with Υ* the adjoint for κ_C and h = g − iω.
    pub fn factorization_defect<S: HamiltonianAction + ?Sized>(&self, spec: &S) -> f64 {
        let alg = spec.algebra();
        let d = alg.dim();
        let m = &self.m;
        let orbit: Vec<Vector> = (0..d).map(|a| spec.inf_action(&alg.basis_vector(a), m)).collect();
        let h = |x: &Vector, y: &Vector| Complex64::new(metric_at(spec, m, x, y), -spec.omega_at(m, x, y));
        // M_{ba} = h(Υ e_a, Υ e_b); Υ*Υ = K⁻¹ M
        let mm = CMat::from_fn(d, d, |b, a| h(&orbit[a], &orbit[b]));
        let kinv = alg.gram_inv().map(|x| Complex64::new(x, 0.0));
        let ustar_u = kinv * mm;
        op_norm_c(&(self.cplus_complex() + ustar_u))
    }

    /// max over basis vectors of ‖Im C⁺ζ − T_mJ(Υζ)‖, for ζ = e_a and ζ = i e_a.
    pub fn imaginary_part_defect<S: HamiltonianAction + ?Sized>(&self, spec: &S) -> f64 {
        let alg = spec.algebra();
        let d = alg.dim();
        let mut worst = 0.0f64;
        for a in 0..2 * d {
            let e = alg.basis_vector(a % d);
            let zeta = if a < d { ComplexVector::real(e) } else { ComplexVector::imaginary(e) };
            let lhs = self.cplus.apply_unchecked(&zeta).im;
            let rhs = spec.momentum_tangent(&self.m, &upsilon(spec, &self.m, &zeta));
            worst = worst.max((lhs - rhs).amax());
        }
        worst
    }
}

/// max over tangent basis X of ‖τ_mσ*(j X) − j τ_mσ*(X)‖.
pub fn j_invariance_defect<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, sigma: &Vector) -> f64 {
    let basis = spec.tangent_basis(m);
    let mut worst = 0.0f64;
    for c in 0..basis.ncols() {
        let x = basis.column(c).into_owned();
        let a = spec.linearize_isotropy(sigma, m, &spec.acs_at(m, &x));
        let b = spec.acs_at(m, &spec.linearize_isotropy(sigma, m, &x));
        worst = worst.max((a - b).norm());
    }
    worst
}

/// κ(Ĵ(X), σ) = ½ ω_m(X, τ_mσ*(X)) for σ in the stabilizer of m.
pub fn isotropy_momentum<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, sigma: &Vector, x: &Vector, tol: f64) -> Result<f64> {
    let residual = spec.inf_action(sigma, m).norm();
    if residual > tol * (1.0 + sigma.norm()) {
        return Err(Error::precondition("σ is not in the stabilizer of m", residual, tol));
    }
    Ok(0.5 * spec.omega_at(m, x, &spec.linearize_isotropy(sigma, m, x)))
}

fn require_critical<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Result<()> {
    let res = criticality_residual(spec, m);
    let tol = critical_tolerance(spec, m);
    if res > tol {
        return Err(Error::precondition("point is not critical for ‖J‖²", res, tol));
    }
    Ok(())
}

/// Hess_m F(X) = 2(‖T_mJ(X)‖²_κ + ω_m(X, τ_m(J(m)*)X)) at a critical point.
pub fn hessian_quadratic<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, x: &Vector) -> Result<f64> {
    require_critical(spec, m)?;
    let alg = spec.algebra();
    let dj = spec.momentum_tangent(m, x);
    let jm = spec.momentum(m);
    let iso = spec.omega_at(m, x, &spec.linearize_isotropy(&jm, m, x));
    Ok(2.0 * (alg.kappa(&dj, &dj) + iso))
}

/// d²/dt² F(retract(m, tX)) at t = 0, by Richardson-extrapolated central differences.
pub fn hessian_fd<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, x: &Vector, step: f64) -> f64 {
    let f = NormSquared::new(spec);
    let norm = x.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let f0 = f.value(m);
    let second = |h: f64| {
        let hp = f.value(&spec.retract(m, &(x * h)));
        let hm = f.value(&spec.retract(m, &(x * -h)));
        (hp - 2.0 * f0 + hm) / (h * h)
    };
    let h = step / norm;
    let a = second(h);
    let b = second(h / 2.0);
    (4.0 * b - a) / 3.0
}

/// Polarised curve-based Hessian: ¼(Hess(X+Y) − Hess(X−Y)).
pub fn hessian_fd_bilinear<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, x: &Vector, y: &Vector, step: f64) -> f64 {
    0.25 * (hessian_fd(spec, m, &(x + y), step) - hessian_fd(spec, m, &(x - y), step))
}

/// The complex-orbit form ½Hess(ζ·m, γ·m) = Re κ_C(ζ, C⁺Rγ), with its preconditions checked once.
#[derive(Clone, Debug)]
pub struct ComplexOrbitHessian {
    /// C⁺R as blocks.
    pub product: BlockOperator,
    gram: Mat,
}

impl ComplexOrbitHessian {
    /// Requires m critical, κ invariant under J(m) and j_m invariant under J(m).
    pub fn new<S: HamiltonianAction + ?Sized>(spec: &S, bundle: &OperatorBundle, tol: &Tolerances) -> Result<Self> {
        let m = &bundle.m;
        require_critical(spec, m)?;
        let alg = spec.algebra();
        let scale = 1.0 + alg.kappa_norm(&bundle.jm);
        let inv = alg.invariance_defect(&bundle.jm);
        let limit = 1e-8 * scale;
        if inv > limit {
            return Err(Error::precondition("κ is not invariant under J(m)", inv, limit));
        }
        let jinv = j_invariance_defect(spec, m, &bundle.jm);
        let limit_j = tol.fd_step.max(1e-6) * scale;
        if jinv > limit_j {
            return Err(Error::precondition("j_m is not invariant under J(m)", jinv, limit_j));
        }
        Ok(Self { product: bundle.cplus.compose(&bundle.r), gram: alg.gram().clone() })
    }

    pub fn eval(&self, zeta: &ComplexVector, gamma: &ComplexVector) -> f64 {
        crate::linalg::kappa_c_unchecked(&self.gram, zeta, &self.product.apply_unchecked(gamma)).re
    }

    /// The real bilinear form on stacked coordinates.
    pub fn form_matrix(&self) -> Mat {
        block_diag(&self.gram) * self.product.to_real()
    }

    /// ‖B − Bᵀ‖ for the form above.
    pub fn symmetry_defect(&self) -> f64 {
        let b = self.form_matrix();
        op_norm(&(&b - b.transpose()))
    }

    /// Smallest eigenvalue of the symmetrised form, relative to diag(K, K).
    pub fn min_eigenvalue(&self) -> Option<f64> {
        let kb = block_diag(&self.gram);
        min_relative_eigenvalue(&self.form_matrix(), &kb)
    }

    /// All eigenvalues of the symmetrised form relative to diag(K, K), ascending.
    pub fn spectrum(&self) -> Option<Vec<f64>> {
        relative_eigenvalues(&self.form_matrix(), &block_diag(&self.gram))
    }
}

/// Re κ_C(ζ, C⁺Rγ).
pub fn hessian_complex_orbit<S: HamiltonianAction + ?Sized>(
    spec: &S,
    bundle: &OperatorBundle,
    zeta: &ComplexVector,
    gamma: &ComplexVector,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(ComplexOrbitHessian::new(spec, bundle, tol)?.eval(zeta, gamma))
}

/// Matrix of the Hessian quadratic form in the tangent basis at a critical point, by polarisation.
pub fn hessian_matrix<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Result<Mat> {
    let basis = spec.tangent_basis(m);
    let k = basis.ncols();
    let cols: Vec<Vector> = (0..k).map(|i| basis.column(i).into_owned()).collect();
    let mut h = Mat::zeros(k, k);
    for i in 0..k {
        h[(i, i)] = hessian_quadratic(spec, m, &cols[i])?;
        for j in 0..i {
            let v = 0.25 * (hessian_quadratic(spec, m, &(&cols[i] + &cols[j]))? - hessian_quadratic(spec, m, &(&cols[i] - &cols[j]))?);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::metric_at;
    use crate::examples::heisenberg::build_heisenberg;
    use crate::examples::unitary::build_unitary_linear;
    use crate::linalg::{CompatibleStructure, SymplecticSpace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_complex(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
        ComplexVector { re: crate::action::gaussian(rng, d), im: crate::action::gaussian(rng, d) }
    }

    #[test]
    fn gradient_is_metric_dual_of_the_differential() {
        let spec = build_unitary_linear(2, 1.0).unwrap();
        let f = NormSquared::new(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = spec.sample_point(&mut rng);
        let (_, g) = f.value_and_gradient(&m).unwrap();
        for _ in 0..5 {
            let x = spec.sample_tangent(&m, &mut rng);
            let h = 1e-5;
            let fd = (f.value(&(&m + &x * h)) - f.value(&(&m - &x * h))) / (2.0 * h);
            let exact = metric_at(&spec, &m, &g, &x);
            assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()), "{fd} vs {exact}");
        }
    }

    #[test]
    fn descent_converges_with_and_without_memory() {
        let spec = build_unitary_linear(2, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let start = spec.sample_point(&mut rng);
        for memory in [1, 10] {
            let opts = DescentOptions { memory, ..DescentOptions::default() };
            let r = descend(&spec, &start, &opts).unwrap();
            assert!(r.converged, "memory {memory}");
            assert!(r.residual <= opts.tolerance);
            assert!((criticality_residual(&spec, &r.point) - r.residual).abs() < 1e-14);
            for w in r.trajectory.windows(2) {
                assert!(w[1].iteration == w[0].iteration + 1);
            }
            if memory == 1 {
                assert!(r.trajectory.windows(2).all(|w| w[1].value <= w[0].value));
            }
        }
        let bad = DescentOptions { memory: 0, ..DescentOptions::default() };
        assert!(descend(&spec, &start, &bad).is_err());
        assert!(descend(&spec, &Vector::zeros(3), &DescentOptions::default()).is_err());
    }

    #[test]
    fn hessian_refuses_off_the_critical_set() {
        let spec = build_unitary_linear(2, 1.0).unwrap();
        let m = Vector::from_vec(vec![0.3, 0.1, -0.2, 0.4]);
        assert!(criticality_residual(&spec, &m) > critical_tolerance(&spec, &m));
        let e = hessian_quadratic(&spec, &m, &m).unwrap_err();
        assert!(e.is_refusal());
    }

    #[test]
    fn hessian_matches_curves_at_a_critical_point() {
        let spec = build_unitary_linear(3, 1.0).unwrap();
        let m = spec.critical_point();
        let h = hessian_matrix(&spec, &m).unwrap();
        assert!((&h - h.transpose()).amax() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let x = spec.sample_tangent(&m, &mut rng);
            let exact = hessian_quadratic(&spec, &m, &x).unwrap();
            let fd = hessian_fd(&spec, &m, &x, 1e-2);
            assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(fd.abs()), "{exact} vs {fd}");
        }
    }

    #[test]
    fn complex_orbit_form_is_positive_for_the_equivariant_action() {
        let spec = build_unitary_linear(2, 1.0).unwrap();
        let m = spec.critical_point();
        let ops = build_operators(&spec, &m).unwrap();
        assert!(ops.factorization_defect(&spec) < 1e-10);
        assert!(ops.imaginary_part_defect(&spec) < 1e-10);
        assert!(ops.commutator_norm() < 1e-10);
        let form = ComplexOrbitHessian::new(&spec, &ops, &Tolerances::default()).unwrap();
        assert!(form.symmetry_defect() < 1e-10);
        assert!(form.min_eigenvalue().unwrap() > -1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = spec.algebra().dim();
        for _ in 0..5 {
            let (z, g) = (random_complex(&mut rng, d), random_complex(&mut rng, d));
            let exact = form.eval(&z, &g);
            let fd = 0.5 * hessian_fd_bilinear(&spec, &m, &upsilon(&spec, &m, &z), &upsilon(&spec, &m, &g), 1e-2);
            assert!((exact - fd).abs() <= 1e-6 * (1.0 + exact.abs()), "{exact} vs {fd}");
        }
    }

    #[test]
    fn cplus_is_minus_upsilon_star_upsilon_for_affine_actions() {
        let space = SymplecticSpace::standard(2).unwrap();
        let j = CompatibleStructure::standard(&space).unwrap();
        let spec = build_heisenberg(&space, &j).unwrap();
        let m = Vector::from_vec(vec![0.5, -0.2, 1.0, 0.3]);
        let ops = build_operators(&spec, &m).unwrap();
        assert!(ops.factorization_defect(&spec) < 1e-12);
        assert!(ops.diagnostics.violations(1e-9).is_empty(), "{:?}", ops.diagnostics.violations(1e-9));
    }
}
