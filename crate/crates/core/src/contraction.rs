//! Momentum maps and extension cocycles from an equivariant contraction Λ,
//! evaluated by Gauss–Legendre quadrature.

use rand::RngCore;

use crate::action::{scaled_step, GroupAction, HamiltonianAction};
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{Mat, Vector};

/// Λ(m₀, m, t) with Λ(m₀, m, 0) = m₀, Λ(m₀, m, 1) = m and Λ(m₀, m₀, t) = m₀.
pub trait Contraction: Sync {
    fn lambda(&self, m0: &Vector, m: &Vector, t: f64) -> Vector;
}

/// Λ(x₀, x, t) = x₀ + t(x − x₀).
#[derive(Clone, Copy, Debug, Default)]
pub struct StraightLine;

impl Contraction for StraightLine {
    fn lambda(&self, m0: &Vector, m: &Vector, t: f64) -> Vector {
        m0 + (m - m0) * t
    }
}

/// Gauss–Legendre nodes and weights on [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        pairwise_sum(&self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).collect::<Vec<_>>())
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// A contraction together with its discretisation parameters.
#[derive(Clone, Debug)]
pub struct ContractionSpec<C> {
    pub contraction: C,
    pub nodes: usize,
    /// Step for ∂_t.
    pub t_step: f64,
    /// Base step for derivatives in the point slots, scaled by the point norm.
    pub m_step: f64,
    /// Relative change allowed when the node count doubles.
    pub convergence: f64,
}

impl<C: Contraction> ContractionSpec<C> {
    pub fn new(contraction: C) -> Self {
        Self { contraction, nodes: 32, t_step: 1e-5, m_step: 1e-5, convergence: 1e-8 }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    fn dt(&self, m0: &Vector, m: &Vector, t: f64) -> Vector {
        let h = self.t_step;
        (self.contraction.lambda(m0, m, t + h) - self.contraction.lambda(m0, m, t - h)) / (2.0 * h)
    }

    /// D_mΛ(m₀, ·, t)[v].
    fn dm<S: HamiltonianAction + ?Sized>(&self, spec: &S, m0: &Vector, m: &Vector, t: f64, v: &Vector) -> Vector {
        let norm = v.norm();
        if norm == 0.0 {
            return Vector::zeros(m.len());
        }
        let h = scaled_step(self.m_step, m) / norm;
        let plus = self.contraction.lambda(m0, &spec.retract(m, &(v * h)), t);
        let minus = self.contraction.lambda(m0, &spec.retract(m, &(v * -h)), t);
        (plus - minus) / (2.0 * h)
    }

    /// D_{m₀}Λ(·, m, t)[v].
    fn dm0<S: HamiltonianAction + ?Sized>(&self, spec: &S, m0: &Vector, m: &Vector, t: f64, v: &Vector) -> Vector {
        let norm = v.norm();
        if norm == 0.0 {
            return Vector::zeros(m.len());
        }
        let h = scaled_step(self.m_step, m0) / norm;
        let plus = self.contraction.lambda(&spec.retract(m0, &(v * h)), m, t);
        let minus = self.contraction.lambda(&spec.retract(m0, &(v * -h)), m, t);
        (plus - minus) / (2.0 * h)
    }

    /// ∫₀¹ [(Λ*_{m₀}ω)(∂_t, V) + (Λ̄*_mω)(∂_t, W)] dt with V ∈ T_mM, W ∈ T_{m₀}M.
    pub fn pullback_integral<S: HamiltonianAction + ?Sized>(
        &self,
        spec: &S,
        m0: &Vector,
        m: &Vector,
        v: Option<&Vector>,
        w: Option<&Vector>,
        nodes: usize,
    ) -> f64 {
        let rule = GaussLegendre::new(nodes);
        rule.integrate(|t| {
            let p = self.contraction.lambda(m0, m, t);
            let dt = self.dt(m0, m, t);
            let mut s = 0.0;
            if let Some(v) = v {
                s += spec.omega_at(&p, &dt, &self.dm(spec, m0, m, t, v));
            }
            if let Some(w) = w {
                s += spec.omega_at(&p, &dt, &self.dm0(spec, m0, m, t, w));
            }
            s
        })
    }

    fn momentum_raw<S: HamiltonianAction + ?Sized>(&self, spec: &S, m0: &Vector, m: &Vector, xi: &Vector, nodes: usize) -> f64 {
        let v = spec.inf_action(xi, m);
        let w = spec.inf_action(xi, m0);
        self.pullback_integral(spec, m0, m, Some(&v), Some(&w), nodes)
    }

    /// κ(J(m), ξ) for the momentum map normalised by J(m₀) = 0.
    pub fn momentum_via_quadrature<S: HamiltonianAction + ?Sized>(&self, spec: &S, m0: &Vector, m: &Vector, xi: &Vector) -> Result<f64> {
        let coarse = self.momentum_raw(spec, m0, m, xi, self.nodes);
        let fine = self.momentum_raw(spec, m0, m, xi, 2 * self.nodes);
        check_converged(coarse, fine, self.convergence)?;
        Ok(fine)
    }

    /// The full momentum vector J(m) ∈ g.
    pub fn momentum_vector<S: HamiltonianAction + ?Sized>(&self, spec: &S, m0: &Vector, m: &Vector) -> Vector {
        let alg = spec.algebra();
        let f = Vector::from_fn(alg.dim(), |a, _| self.momentum_raw(spec, m0, m, &alg.basis_vector(a), self.nodes));
        alg.gram_inv() * f
    }

    /// Max ‖Λ(g·m₀, g·m, t) − g·Λ(m₀, m, t)‖ over the given samples.
    pub fn equivariance_defect<G: GroupAction>(&self, group: &G, samples: &[(G::Element, Vector, Vector, f64)]) -> f64 {
        samples
            .iter()
            .map(|(g, m0, m, t)| {
                let a = self.contraction.lambda(&group.act(g, m0), &group.act(g, m), *t);
                let b = group.act(g, &self.contraction.lambda(m0, m, *t));
                (a - b).amax()
            })
            .fold(0.0, f64::max)
    }

    /// Max endpoint violation |Λ(m₀,m,0) − m₀|, |Λ(m₀,m,1) − m|, |Λ(m₀,m₀,t) − m₀|.
    pub fn endpoint_defect(&self, m0: &Vector, m: &Vector, t: f64) -> f64 {
        let a = (self.contraction.lambda(m0, m, 0.0) - m0).amax();
        let b = (self.contraction.lambda(m0, m, 1.0) - m).amax();
        let c = (self.contraction.lambda(m0, m0, t) - m0).amax();
        a.max(b).max(c)
    }

    fn triangle_raw<G: GroupAction>(&self, group: &G, h: &G::Element, g2: &G::Element, m0: &Vector, nodes: usize) -> f64 {
        let spec = group.action();
        let a = group.act(&group.inverse(h), m0);
        let b = group.act(&group.inverse(g2), m0);
        let rule = GaussLegendre::new(nodes);
        let hs = self.t_step;
        let chi = |s: f64, t: f64| {
            let inner = self.contraction.lambda(&b, m0, s);
            self.contraction.lambda(&a, &inner, t)
        };
        rule.integrate(|s| {
            rule.integrate(|t| {
                let p = chi(s, t);
                let dt = (chi(s, t + hs) - chi(s, t - hs)) / (2.0 * hs);
                let ds = (chi(s + hs, t) - chi(s - hs, t)) / (2.0 * hs);
                spec.omega_at(&p, &dt, &ds)
            })
        })
    }

    /// ν_{g₁,g₂} = ∫∫ (χ*ω)(∂_t, ∂_s) ds dt with χ(s,t) = Λ((g₁g₂)⁻¹m₀, Λ(g₂⁻¹m₀, m₀, s), t).
    pub fn triangle_area<G: GroupAction>(&self, group: &G, g1: &G::Element, g2: &G::Element, m0: &Vector) -> Result<f64> {
        let h = group.compose(g1, g2);
        let coarse = self.triangle_raw(group, &h, g2, m0, self.nodes);
        let fine = self.triangle_raw(group, &h, g2, m0, 2 * self.nodes);
        check_converged(coarse, fine, self.convergence)?;
        Ok(fine)
    }

    /// Group 2-cocycle c(g₁, g₂) = ν_{g₁,g₂} − ν_{e,g₂}.
    ///
    /// With this orientation c agrees with ½ω(τ(g₁), τ(g₁g₂)) on affine actions and
    /// its antisymmetrised second derivative at the identity is Σ.
    pub fn triangle_cocycle<G: GroupAction>(&self, group: &G, g1: &G::Element, g2: &G::Element, m0: &Vector) -> Result<f64> {
        let a = self.triangle_area(group, g1, g2, m0)?;
        let b = self.triangle_area(group, &group.identity(), g2, m0)?;
        Ok(a - b)
    }

    /// ν_{g₁,g₂} + ν_{g₁g₂,g₃} + ν_{e,g₂g₃} − ν_{g₂,g₃} − ν_{g₁,g₂g₃} − ν_{e,g₂}.
    pub fn six_term_defect<G: GroupAction>(&self, group: &G, g1: &G::Element, g2: &G::Element, g3: &G::Element, m0: &Vector) -> Result<f64> {
        let e = group.identity();
        let g12 = group.compose(g1, g2);
        let g23 = group.compose(g2, g3);
        let nu = |a: &G::Element, b: &G::Element| self.triangle_area(group, a, b, m0);
        let lhs = nu(g1, g2)? + nu(&g12, g3)? + nu(&e, &g23)?;
        let rhs = nu(g2, g3)? + nu(g1, &g23)? + nu(&e, g2)?;
        Ok((lhs - rhs).abs())
    }
}

fn check_converged(coarse: f64, fine: f64, rel: f64) -> Result<()> {
    let tol = rel * fine.abs().max(1.0);
    if (coarse - fine).abs() > tol || !fine.is_finite() {
        return Err(Error::Numerical(format!(
            "quadrature did not converge: {coarse:.12e} vs {fine:.12e} after doubling nodes"
        )));
    }
    Ok(())
}

/// A Hamiltonian action whose momentum map is recomputed by contraction quadrature.
pub struct QuadratureMomentum<'a, S: ?Sized, C> {
    pub spec: &'a S,
    pub contraction: &'a ContractionSpec<C>,
    pub m0: Vector,
}

impl<'a, S: HamiltonianAction + ?Sized, C: Contraction> HamiltonianAction for QuadratureMomentum<'a, S, C> {
    fn algebra(&self) -> &LieAlgebraSpec {
        self.spec.algebra()
    }
    fn point_dim(&self) -> usize {
        self.spec.point_dim()
    }
    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector {
        self.spec.inf_action(xi, m)
    }
    fn momentum(&self, m: &Vector) -> Vector {
        self.contraction.momentum_vector(self.spec, &self.m0, m)
    }
    fn omega_at(&self, m: &Vector, x: &Vector, y: &Vector) -> f64 {
        self.spec.omega_at(m, x, y)
    }
    fn acs_at(&self, m: &Vector, x: &Vector) -> Vector {
        self.spec.acs_at(m, x)
    }
    fn base_point(&self) -> Option<Vector> {
        Some(self.m0.clone())
    }
    fn project_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        self.spec.project_tangent(m, x)
    }
    fn retract(&self, m: &Vector, x: &Vector) -> Vector {
        self.spec.retract(m, x)
    }
    fn tangent_basis(&self, m: &Vector) -> Mat {
        self.spec.tangent_basis(m)
    }
    fn fd_step(&self) -> f64 {
        1e-4
    }
    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        self.spec.sample_point(rng)
    }
    fn sample_tangent(&self, m: &Vector, rng: &mut dyn RngCore) -> Vector {
        self.spec.sample_tangent(m, rng)
    }
    fn sample_algebra(&self, rng: &mut dyn RngCore) -> Vector {
        self.spec.sample_algebra(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = GaussLegendre::new(5);
        // exact up to degree 9
        let v = rule.integrate(|t| t.powi(9));
        assert!((v - 0.1).abs() < 1e-15);
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let rule = GaussLegendre::new(32);
        assert!((rule.integrate(|t| (3.0 * t).exp()) - ((3.0f64).exp() - 1.0) / 3.0).abs() < 1e-12);
        assert_eq!(GaussLegendre::new(1).nodes, vec![0.5]);
    }

    #[test]
    fn straight_line_endpoints() {
        let c = ContractionSpec::new(StraightLine);
        let a = Vector::from_vec(vec![1.0, 2.0]);
        let b = Vector::from_vec(vec![-3.0, 0.5]);
        assert_eq!(c.endpoint_defect(&a, &b, 0.3), 0.0);
    }
}
