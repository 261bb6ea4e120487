//! Hamiltonian actions, the momentum-map identity and the non-equivariance cocycles.

use rand::RngCore;

use crate::error::{check_len, Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{op_norm, range, Mat, Vector};

/// Standard normal vector.
pub fn gaussian(rng: &mut dyn RngCore, n: usize) -> Vector {
    use rand_distr::{Distribution, StandardNormal};
    Vector::from_fn(n, |_, _| StandardNormal.sample(&mut *rng))
}

/// Gaussian direction normalised to unit length (zero stays zero).
pub fn unit_gaussian(rng: &mut dyn RngCore, n: usize) -> Vector {
    let v = gaussian(rng, n);
    let norm = v.norm();
    if norm > 0.0 {
        v / norm
    } else {
        v
    }
}

/// A Lie algebra action on a manifold of coordinate vectors with a momentum map.
///
/// Points live in ℝ^`point_dim`; constrained manifolds override `project_tangent`
/// and `retract`. All methods are pure.
pub trait HamiltonianAction: Sync {
    fn algebra(&self) -> &LieAlgebraSpec;

    fn point_dim(&self) -> usize;

    /// Fundamental vector field ξ·m.
    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector;

    fn momentum(&self, m: &Vector) -> Vector;

    fn omega_at(&self, m: &Vector, x: &Vector, y: &Vector) -> f64;

    /// Almost complex structure j_m on tangent vectors.
    fn acs_at(&self, m: &Vector, x: &Vector) -> Vector;

    /// The point where the momentum map is normalised to vanish, if any.
    fn base_point(&self) -> Option<Vector> {
        None
    }

    fn has_analytic_tangent(&self) -> bool {
        false
    }

    /// T_mJ(X); central differences unless overridden.
    fn momentum_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        fd_momentum_tangent(self, m, x, self.fd_step())
    }

    fn project_tangent(&self, _m: &Vector, x: &Vector) -> Vector {
        x.clone()
    }

    fn retract(&self, m: &Vector, x: &Vector) -> Vector {
        m + x
    }

    /// τ_mσ*(X) for σ in the stabilizer of m; central differences of σ* unless overridden.
    fn linearize_isotropy(&self, sigma: &Vector, m: &Vector, x: &Vector) -> Vector {
        let h = scaled_step(self.fd_step(), m) / x.norm().max(1e-300);
        let plus = self.inf_action(sigma, &self.retract(m, &(x * h)));
        let minus = self.inf_action(sigma, &self.retract(m, &(x * -h)));
        self.project_tangent(m, &((plus - minus) / (2.0 * h)))
    }

    /// Orthonormal basis (Euclidean in coordinates) of T_mM.
    fn tangent_basis(&self, m: &Vector) -> Mat {
        let n = self.point_dim();
        let cols: Vec<Vector> = (0..n)
            .map(|i| {
                let mut e = Vector::zeros(n);
                e[i] = 1.0;
                self.project_tangent(m, &e)
            })
            .collect();
        range(&Mat::from_columns(&cols), 1e-10)
    }

    fn fd_step(&self) -> f64 {
        1e-5
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector;

    fn sample_tangent(&self, m: &Vector, rng: &mut dyn RngCore) -> Vector {
        let v = self.project_tangent(m, &gaussian(rng, self.point_dim()));
        let norm = v.norm();
        if norm > 0.0 {
            v / norm
        } else {
            v
        }
    }

    fn sample_algebra(&self, rng: &mut dyn RngCore) -> Vector {
        unit_gaussian(rng, self.algebra().dim())
    }
}

/// A group law on example-specific element records.
pub trait GroupLaw: Sync {
    type Element: Clone + std::fmt::Debug + Send + Sync;

    fn identity(&self) -> Self::Element;
    fn compose(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn inverse(&self, g: &Self::Element) -> Self::Element;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Element;
}

/// A group acting on the points of a Hamiltonian action.
pub trait GroupAction: GroupLaw {
    type Action: HamiltonianAction + ?Sized;

    fn action(&self) -> &Self::Action;
    fn act(&self, g: &Self::Element, m: &Vector) -> Vector;
    /// Matrix of Ad_g on the algebra.
    fn adjoint(&self, g: &Self::Element) -> Mat;
    /// exp(ξ) in the group.
    fn exp(&self, xi: &Vector) -> Self::Element;

    /// κ-adjoint of Ad_{g⁻¹}, i.e. the coadjoint action transported to g by κ.
    fn coadjoint_inverse(&self, g: &Self::Element) -> Mat {
        let ad = self.adjoint(&self.inverse(g));
        self.action().algebra().kappa_adjoint(&ad)
    }
}

pub(crate) fn scaled_step(step: f64, m: &Vector) -> f64 {
    step * m.norm().max(1.0)
}

/// T_mJ(X) by central differences along the retraction.
pub fn fd_momentum_tangent<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, x: &Vector, step: f64) -> Vector {
    let norm = x.norm();
    if norm == 0.0 {
        return Vector::zeros(spec.algebra().dim());
    }
    let h = scaled_step(step, m) / norm;
    let plus = spec.momentum(&spec.retract(m, &(x * h)));
    let minus = spec.momentum(&spec.retract(m, &(x * -h)));
    (plus - minus) / (2.0 * h)
}

/// How T_mJ is evaluated in a defect scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Derivative {
    /// Use `momentum_tangent` (analytic where the example provides it).
    Native,
    /// Central differences with the given base step.
    FiniteDifference(f64),
}

/// max |κ(dJ(X), ξ) + ω_m(ξ·m, X)| over sampled unit ξ and unit tangent X.
pub fn momentum_defect<S: HamiltonianAction + ?Sized>(
    spec: &S,
    m: &Vector,
    samples: usize,
    derivative: Derivative,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    check_len(spec.point_dim(), m.len())?;
    if let Derivative::FiniteDifference(step) = derivative {
        if !(step > 0.0) {
            return Err(Error::Invalid("finite-difference step must be positive".into()));
        }
    }
    let alg = spec.algebra();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let xi = spec.sample_algebra(rng);
        let x = spec.sample_tangent(m, rng);
        let dj = match derivative {
            Derivative::Native => spec.momentum_tangent(m, &x),
            Derivative::FiniteDifference(step) => fd_momentum_tangent(spec, m, &x, step),
        };
        let v = alg.kappa(&dj, &xi) + spec.omega_at(m, &spec.inf_action(&xi, m), &x);
        if !v.is_finite() {
            return Err(Error::Numerical("non-finite momentum defect; invalid point or step".into()));
        }
        worst = worst.max(v.abs());
    }
    Ok(worst)
}

/// σ(g) = J(g·m) − Ad*_{g⁻¹} J(m).
pub fn sigma_one_cocycle<G: GroupAction>(group: &G, g: &G::Element, m: &Vector) -> Vector {
    let spec = group.action();
    spec.momentum(&group.act(g, m)) - group.coadjoint_inverse(g) * spec.momentum(m)
}

/// Σ(ξ, η) = κ(J(m), [ξ, η]) + ω_m(ξ·m, η·m).
pub fn sigma_two_cocycle<S: HamiltonianAction + ?Sized>(spec: &S, xi: &Vector, eta: &Vector, m: &Vector) -> f64 {
    let alg = spec.algebra();
    alg.kappa(&spec.momentum(m), &alg.bracket(xi, eta))
        + spec.omega_at(m, &spec.inf_action(xi, m), &spec.inf_action(eta, m))
}

/// Matrix of Σ on basis pairs.
pub fn sigma_matrix<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Mat {
    let alg = spec.algebra();
    let d = alg.dim();
    let j = spec.momentum(m);
    let orbit: Vec<Vector> = (0..d).map(|a| spec.inf_action(&alg.basis_vector(a), m)).collect();
    Mat::from_fn(d, d, |a, b| {
        let br = alg.bracket(&alg.basis_vector(a), &alg.basis_vector(b));
        alg.kappa(&j, &br) + spec.omega_at(m, &orbit[a], &orbit[b])
    })
}

/// Σ_κ with κ(Σ_κ ξ, η) = Σ(ξ, η).
pub fn sigma_kappa_map<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector) -> Mat {
    let alg = spec.algebra();
    alg.gram_inv() * sigma_matrix(spec, m).transpose()
}

/// ‖S* + S‖ for the κ-adjoint S*.
pub fn kappa_skew_defect(alg: &LieAlgebraSpec, s: &Mat) -> f64 {
    op_norm(&(alg.kappa_adjoint(s) + s))
}

/// max over sampled tangents of ‖j²X + X‖ and |ω(jX, jY) − ω(X, Y)|, and min g(X, X).
pub fn acs_defects<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, samples: usize, rng: &mut dyn RngCore) -> (f64, f64, f64) {
    let (mut sq, mut compat, mut pos) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..samples {
        let x = spec.sample_tangent(m, rng);
        let y = spec.sample_tangent(m, rng);
        let jx = spec.acs_at(m, &x);
        let jy = spec.acs_at(m, &y);
        sq = sq.max((spec.acs_at(m, &jx) + &x).norm());
        compat = compat.max((spec.omega_at(m, &jx, &jy) - spec.omega_at(m, &x, &y)).abs());
        pos = pos.min(spec.omega_at(m, &x, &jx));
    }
    (sq, compat, pos)
}

/// Metric g_m(X, Y) = ω_m(X, j_m Y).
pub fn metric_at<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, x: &Vector, y: &Vector) -> f64 {
    spec.omega_at(m, x, &spec.acs_at(m, y))
}
